/*
 * Copyright 2026 The vdattack Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <array>
#include <sstream>

#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::lexsub {

namespace {

constexpr std::array<std::pair<PosTag, std::string_view>, 9> kTagNames{{
    {PosTag::kNoun, "NOUN"},
    {PosTag::kVerb, "VERB"},
    {PosTag::kAdj, "ADJ"},
    {PosTag::kAdv, "ADV"},
    {PosTag::kNum, "NUM"},
    {PosTag::kPron, "PRON"},
    {PosTag::kDet, "DET"},
    {PosTag::kAdp, "ADP"},
    {PosTag::kOther, "OTHER"},
}};

struct SuffixRule {
    std::string_view suffix;
    PosTag tag;
};

// Checked in order; first match wins. Only applied to words of 5+ characters.
constexpr std::array<SuffixRule, 21> kSuffixRules{{
    {"ly", PosTag::kAdv},      {"ing", PosTag::kVerb},   {"ed", PosTag::kVerb},    {"ize", PosTag::kVerb},
    {"ise", PosTag::kVerb},    {"ous", PosTag::kAdj},    {"ful", PosTag::kAdj},    {"able", PosTag::kAdj},
    {"ible", PosTag::kAdj},    {"ive", PosTag::kAdj},    {"less", PosTag::kAdj},   {"ish", PosTag::kAdj},
    {"ic", PosTag::kAdj},      {"al", PosTag::kAdj},     {"est", PosTag::kAdj},    {"tion", PosTag::kNoun},
    {"sion", PosTag::kNoun},   {"ment", PosTag::kNoun},  {"ness", PosTag::kNoun},  {"ity", PosTag::kNoun},
    {"er", PosTag::kNoun},
}};

bool ends_with(std::string_view s, std::string_view suffix) {
    return s.size() >= suffix.size() && s.substr(s.size() - suffix.size()) == suffix;
}

}  // namespace

std::string_view pos_name(PosTag tag) {
    for (const auto& [t, name] : kTagNames) {
        if (t == tag) {
            return name;
        }
    }
    return "OTHER";
}

std::optional<PosTag> parse_pos(std::string_view name) {
    for (const auto& [t, n] : kTagNames) {
        if (n == name) {
            return t;
        }
    }
    return std::nullopt;
}

PosTag PosTagger::tag_word(std::string_view word) const {
    std::vector<Token> tokens = tokenize(word);
    if (tokens.empty()) {
        return PosTag::kOther;
    }
    tag(tokens);
    return tokens.front().pos;
}

LexiconTagger LexiconTagger::load(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::unordered_map<std::string, PosTag> lexicon;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string word;
        std::string tag;
        if (!(fields >> word)) {
            continue;
        }
        if (!(fields >> tag)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": missing tag");
        }
        const auto parsed = parse_pos(tag);
        if (!parsed) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": unknown tag '" + tag + "'");
        }
        // First entry wins: the file lists the most frequent reading first.
        lexicon.emplace(to_lower(word), *parsed);
    }
    return LexiconTagger(std::move(lexicon));
}

const LexiconTagger& LexiconTagger::bundled() {
    static const LexiconTagger instance = load(data_file("pos_lexicon.tsv"));
    return instance;
}

bool LexiconTagger::in_lexicon(std::string_view word) const { return lexicon_.contains(to_lower(word)); }

PosTag LexiconTagger::tag_word(std::string_view word) const {
    if (is_punctuation(word)) {
        return PosTag::kOther;
    }
    if (is_numeral(word)) {
        return PosTag::kNum;
    }
    const std::string lower = to_lower(word);
    if (auto it = lexicon_.find(lower); it != lexicon_.end()) {
        return it->second;
    }
    if (lower.size() >= 5) {
        for (const SuffixRule& rule : kSuffixRules) {
            if (ends_with(lower, rule.suffix)) {
                return rule.tag;
            }
        }
    }
    // Plural or third-person form of a known word.
    if (lower.size() > 3 && ends_with(lower, "s")) {
        if (auto it = lexicon_.find(lower.substr(0, lower.size() - 1)); it != lexicon_.end()) {
            if (it->second == PosTag::kNoun || it->second == PosTag::kVerb) {
                return it->second;
            }
        }
    }
    return PosTag::kNoun;
}

void LexiconTagger::tag(std::span<Token> tokens) const {
    for (Token& t : tokens) {
        t.pos = tag_word(t.surface);
    }
}

}  // namespace vdattack::lexsub
