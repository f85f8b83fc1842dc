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

#include "vdattack/attack_type.hpp"

#include <algorithm>
#include <array>
#include <sstream>

#include "vdattack/error.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::runner {

namespace {

struct Irregular {
    std::string_view base;
    std::string_view form;
};

constexpr std::array<Irregular, 22> kIrregularPlurals{{
    {"man", "men"},        {"woman", "women"},   {"child", "children"}, {"person", "people"},
    {"foot", "feet"},      {"tooth", "teeth"},   {"mouse", "mice"},     {"goose", "geese"},
    {"ox", "oxen"},        {"die", "dice"},      {"leaf", "leaves"},    {"knife", "knives"},
    {"wife", "wives"},     {"life", "lives"},    {"shelf", "shelves"},  {"loaf", "loaves"},
    {"cactus", "cacti"},   {"sheep", "sheep"},   {"fish", "fish"},      {"deer", "deer"},
    {"photo", "photos"},   {"potato", "potatoes"},
}};

constexpr std::array<Irregular, 11> kIrregularDegrees{{
    {"good", "better"},
    {"good", "best"},
    {"well", "better"},
    {"bad", "worse"},
    {"bad", "worst"},
    {"far", "farther"},
    {"far", "farthest"},
    {"far", "further"},
    {"little", "less"},
    {"little", "least"},
    {"many", "more"},
}};

bool is_vowel(char c) { return c == 'a' || c == 'e' || c == 'i' || c == 'o' || c == 'u'; }

bool has(const std::vector<std::string>& v, std::string_view w) { return std::find(v.begin(), v.end(), w) != v.end(); }

// Candidate base forms for an inflected degree word.
std::vector<std::string> degree_bases(std::string_view w) {
    std::vector<std::string> bases{std::string(w)};
    for (std::string_view suffix : {std::string_view("est"), std::string_view("er")}) {
        if (w.size() <= suffix.size() + 1 || !w.ends_with(suffix)) {
            continue;
        }
        std::string stem(w.substr(0, w.size() - suffix.size()));
        bases.push_back(stem);
        bases.push_back(stem + "e");
        if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
            bases.push_back(stem.substr(0, stem.size() - 1));
        }
        if (stem.ends_with('i')) {
            bases.push_back(stem.substr(0, stem.size() - 1) + "y");
        }
    }
    for (const Irregular& irr : kIrregularDegrees) {
        if (irr.form == w) {
            bases.emplace_back(irr.base);
        }
    }
    if (w == "most") {
        bases.emplace_back("many");
    }
    return bases;
}

}  // namespace

std::string_view attack_type_name(AttackType type) {
    switch (type) {
        case AttackType::kBritishAmerican:
            return "british_american";
        case AttackType::kSynonym:
            return "synonym";
        case AttackType::kSingularPlural:
            return "singular_plural";
        case AttackType::kComparativeSuperlative:
            return "comparative_superlative";
        case AttackType::kOther:
            return "other";
    }
    return "other";
}

AttackType parse_attack_type(std::string_view name) {
    for (AttackType t : {AttackType::kBritishAmerican, AttackType::kSynonym, AttackType::kSingularPlural,
                         AttackType::kComparativeSuperlative, AttackType::kOther}) {
        if (attack_type_name(t) == name) {
            return t;
        }
    }
    throw ParseError("unknown attack type '" + std::string(name) + "'");
}

SpellingVariants SpellingVariants::load(const std::filesystem::path& path) {
    SpellingVariants out;
    std::istringstream in(read_file(path));
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string british;
        std::string american;
        if (!(fields >> british)) {
            continue;
        }
        if (!(fields >> american)) {
            throw ParseError(path.string() + ":" + std::to_string(line_no) + ": expected two spellings");
        }
        out.add(british, american);
    }
    return out;
}

const SpellingVariants& SpellingVariants::bundled() {
    static const SpellingVariants instance = load(data_file("spelling_variants.tsv"));
    return instance;
}

void SpellingVariants::add(std::string_view british, std::string_view american) {
    const std::string b = lexsub::to_lower(british);
    const std::string a = lexsub::to_lower(american);
    if (b == a) {
        return;
    }
    auto& pb = partners_[b];
    if (!has(pb, a)) {
        pb.push_back(a);
        partners_[a].push_back(b);
        ++pairs_;
    }
}

bool SpellingVariants::are_variants(std::string_view a, std::string_view b) const {
    auto it = partners_.find(lexsub::to_lower(a));
    return it != partners_.end() && has(it->second, lexsub::to_lower(b));
}

std::vector<std::string> plural_forms(std::string_view noun) {
    const std::string w = lexsub::to_lower(noun);
    std::vector<std::string> out;
    for (const Irregular& irr : kIrregularPlurals) {
        if (irr.base == w) {
            out.emplace_back(irr.form);
        }
    }
    if (w.empty()) {
        return out;
    }
    if (w.ends_with("s") || w.ends_with("x") || w.ends_with("z") || w.ends_with("ch") || w.ends_with("sh")) {
        out.push_back(w + "es");
    } else if (w.size() >= 2 && w.back() == 'y' && !is_vowel(w[w.size() - 2])) {
        out.push_back(w.substr(0, w.size() - 1) + "ies");
    } else if (w.ends_with("fe")) {
        out.push_back(w.substr(0, w.size() - 2) + "ves");
        out.push_back(w + "s");
    } else if (w.ends_with("f")) {
        out.push_back(w.substr(0, w.size() - 1) + "ves");
        out.push_back(w + "s");
    } else if (w.ends_with("o")) {
        out.push_back(w + "s");
        out.push_back(w + "es");
    } else {
        out.push_back(w + "s");
    }
    return out;
}

std::vector<std::string> degree_forms(std::string_view adjective) {
    const std::string w = lexsub::to_lower(adjective);
    std::vector<std::string> out;
    for (const Irregular& irr : kIrregularDegrees) {
        if (irr.base == w) {
            out.emplace_back(irr.form);
        }
    }
    if (w == "many" || w == "much") {
        out.emplace_back("more");
        out.emplace_back("most");
    }
    if (w.size() < 2) {
        return out;
    }
    const std::size_t n = w.size();
    if (w.back() == 'e') {
        out.push_back(w + "r");
        out.push_back(w + "st");
    } else if (w.back() == 'y' && !is_vowel(w[n - 2])) {
        const std::string stem = w.substr(0, n - 1);
        out.push_back(stem + "ier");
        out.push_back(stem + "iest");
    } else if (n >= 3 && !is_vowel(w[n - 1]) && w[n - 1] != 'w' && w[n - 1] != 'x' && w[n - 1] != 'y' &&
               is_vowel(w[n - 2]) && !is_vowel(w[n - 3]) && n <= 4) {
        // Short consonant-vowel-consonant words double the final letter: big -> bigger.
        out.push_back(w + w.back() + "er");
        out.push_back(w + w.back() + "est");
    } else {
        out.push_back(w + "er");
        out.push_back(w + "est");
    }
    return out;
}

AttackType classify_attack_type(std::string_view original, std::string_view replacement, const TypeLexicons& lex) {
    if (original.empty() || replacement.empty()) {
        throw PreconditionError("classify_attack_type: words must be non-empty");
    }
    const std::string a = lexsub::to_lower(original);
    const std::string b = lexsub::to_lower(replacement);

    if (lex.spelling.are_variants(a, b)) {
        return AttackType::kBritishAmerican;
    }
    if (a != b && (has(plural_forms(a), b) || has(plural_forms(b), a))) {
        return AttackType::kSingularPlural;
    }
    if (a != b) {
        if ((a == "more" && b == "most") || (a == "most" && b == "more")) {
            return AttackType::kComparativeSuperlative;
        }
        for (const std::string& base : degree_bases(a)) {
            if (lex.tagger.tag_word(base) != lexsub::PosTag::kAdj && !(base == "many" || base == "little")) {
                continue;
            }
            std::vector<std::string> forms = degree_forms(base);
            forms.push_back(base);
            if (has(forms, a) && has(forms, b)) {
                return AttackType::kComparativeSuperlative;
            }
        }
    }
    if (lex.tagger.tag_word(a) == lex.tagger.tag_word(b)) {
        for (const lexsub::SynonymCandidate& c : lexsub::embedding_candidates(a, lex.embeddings, lex.k)) {
            if (c.word == b) {
                return AttackType::kSynonym;
            }
        }
    }
    return AttackType::kOther;
}

}  // namespace vdattack::runner
