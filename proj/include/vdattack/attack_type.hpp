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

#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "vdattack/lexsub.hpp"

namespace vdattack::runner {

enum class AttackType { kBritishAmerican, kSynonym, kSingularPlural, kComparativeSuperlative, kOther };

std::string_view attack_type_name(AttackType type);
AttackType parse_attack_type(std::string_view name);

/// British/American spelling pairs, matched case-insensitively in either direction.
class SpellingVariants {
public:
    /// Bundled list (data/spelling_variants.tsv).
    static const SpellingVariants& bundled();
    /// "british<TAB>american" per line, '#' comments.
    static SpellingVariants load(const std::filesystem::path& path);

    void add(std::string_view british, std::string_view american);
    bool are_variants(std::string_view a, std::string_view b) const;
    std::size_t size() const { return pairs_; }

private:
    std::unordered_map<std::string, std::vector<std::string>> partners_;
    std::size_t pairs_ = 0;
};

/// Plural forms of a noun: regular rules plus the bundled irregular table.
std::vector<std::string> plural_forms(std::string_view noun);
/// Comparative and superlative forms of an adjective, e.g. great -> greater, greatest.
std::vector<std::string> degree_forms(std::string_view adjective);

struct TypeLexicons {
    const SpellingVariants& spelling;
    const lexsub::EmbeddingTable& embeddings;
    const lexsub::PosTagger& tagger;
    /// Neighborhood size for the synonym rule.
    std::size_t k = 50;
};

/// First matching rule wins: spelling variant, number inflection, degree inflection
/// (or more/most alternation), embedding neighbor with equal POS, otherwise other.
/// Throws PreconditionError for empty words.
AttackType classify_attack_type(std::string_view original, std::string_view replacement, const TypeLexicons& lexicons);

}  // namespace vdattack::runner
