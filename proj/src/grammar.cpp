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
#include <map>

#include "vdattack/constraints.hpp"
#include "vdattack/error.hpp"

namespace vdattack::constraints {

namespace {

// Words whose spelling and sound disagree on the first letter.
constexpr std::array<std::string_view, 12> kVowelSoundConsonantLetter{
    "hour", "hours", "hourly", "honest", "honestly", "honor", "honour", "honorable", "heir", "herb", "x-ray", "mba"};
constexpr std::array<std::string_view, 22> kConsonantSoundVowelLetter{
    "one",     "once",    "university", "unit",     "units", "united",   "unique", "uniform",
    "unicorn", "union",   "user",       "useful",   "usual", "usually",  "utensil", "ufo",
    "european", "euro",   "ewe",        "eucalyptus", "uranium", "utility"};

constexpr std::array<std::string_view, 12> kIrregularDegree{
    "better", "best", "worse", "worst", "less", "least", "lesser", "further", "furthest", "farther", "farthest",
    "elder"};

template <std::size_t N>
bool contains(const std::array<std::string_view, N>& list, std::string_view w) {
    for (std::string_view x : list) {
        if (x == w) {
            return true;
        }
    }
    return false;
}

bool starts_with_vowel_sound(std::string_view w) {
    if (w.empty()) {
        return false;
    }
    if (contains(kVowelSoundConsonantLetter, w)) {
        return true;
    }
    if (contains(kConsonantSoundVowelLetter, w)) {
        return false;
    }
    switch (w.front()) {
        case 'a':
        case 'e':
        case 'i':
        case 'o':
        case 'u':
            return true;
        default:
            return false;
    }
}

// "bigger" -> "big", "happier" -> "happy", "greater" -> "great".
std::vector<std::string> degree_stems(std::string_view w) {
    std::vector<std::string> stems;
    for (std::string_view suffix : {std::string_view("est"), std::string_view("er")}) {
        if (w.size() <= suffix.size() + 2 || !w.ends_with(suffix)) {
            continue;
        }
        std::string stem(w.substr(0, w.size() - suffix.size()));
        stems.push_back(stem);
        stems.push_back(stem + "e");
        if (stem.size() >= 2 && stem[stem.size() - 1] == stem[stem.size() - 2]) {
            stems.push_back(stem.substr(0, stem.size() - 1));
        }
        if (stem.ends_with('i')) {
            stems.push_back(stem.substr(0, stem.size() - 1) + "y");
        }
    }
    return stems;
}

}  // namespace

std::vector<Violation> RuleGrammarChecker::check(std::string_view text) const {
    const std::vector<lexsub::Token> tokens = lexsub::tokenize(text);
    std::vector<Violation> out;
    for (std::size_t i = 0; i + 1 < tokens.size(); ++i) {
        const lexsub::Token& cur = tokens[i];
        const lexsub::Token& next = tokens[i + 1];
        if (cur.is_punct || next.is_punct) {
            continue;
        }
        if (cur.lower == "a" || cur.lower == "an") {
            const bool vowel = starts_with_vowel_sound(next.lower);
            if ((cur.lower == "a") == vowel) {
                out.push_back({std::string(kRuleArticle), cur.begin, next.end});
            }
        }
        if (cur.lower == next.lower) {
            out.push_back({std::string(kRuleDuplicate), cur.begin, next.end});
        }
        if (cur.lower == "more" || cur.lower == "most") {
            bool inflected = contains(kIrregularDegree, next.lower);
            for (const std::string& stem : degree_stems(next.lower)) {
                if (tagger_.tag_word(stem) == lexsub::PosTag::kAdj &&
                    tagger_.tag_word(next.lower) != lexsub::PosTag::kNoun) {
                    inflected = true;
                    break;
                }
            }
            if (inflected) {
                out.push_back({std::string(kRuleDoubleComparative), cur.begin, next.end});
            }
        }
    }
    return out;
}

std::vector<Violation> ProtocolGrammarChecker::check(std::string_view text) const {
    const transport::Json request = {{"protocol_version", transport::kProtocolVersion}, {"text", std::string(text)}};
    const transport::Json reply = transport_->call(request);
    if (!reply.contains("violations") || !reply.at("violations").is_array()) {
        throw ProtocolError("grammar checker: reply lacks a 'violations' array");
    }
    std::vector<Violation> out;
    for (const auto& v : reply.at("violations")) {
        try {
            const auto span = v.at("span").get<std::array<std::size_t, 2>>();
            out.push_back({v.at("rule_id").get<std::string>(), span[0], span[1]});
        } catch (const transport::Json::exception& e) {
            throw ProtocolError(std::string("grammar checker: malformed violation: ") + e.what());
        }
    }
    return out;
}

std::vector<Violation> grammar_check(std::string_view text, const GrammarChecker& checker) {
    return checker.check(text);
}

bool introduces_violation(const std::vector<Violation>& before, const std::vector<Violation>& after) {
    std::map<std::string, long> counts;
    for (const Violation& v : after) {
        ++counts[v.rule_id];
    }
    for (const Violation& v : before) {
        --counts[v.rule_id];
    }
    for (const auto& [rule, n] : counts) {
        if (n > 0) {
            return true;
        }
    }
    return false;
}

}  // namespace vdattack::constraints
