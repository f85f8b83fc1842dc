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
#include <cstdint>
#include <filesystem>
#include <map>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/attack.hpp"
#include "vdattack/attack_type.hpp"
#include "vdattack/constraints.hpp"
#include "vdattack/corpus.hpp"
#include "vdattack/encoder.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/oracle.hpp"

namespace vdattack::testing {

/// Bundled lexicons and the offline provider/encoder/grammar built on them.
struct Toolkit {
    Toolkit();

    const lexsub::EmbeddingTable& table;
    const lexsub::LexiconTagger& tagger;
    const lexsub::Stopwords& stopwords;
    lexsub::EmbeddingProvider provider;
    encoder::MeanEmbeddingEncoder encoder;
    constraints::RuleGrammarChecker grammar;

    attack::AttackContext context() const;
};

/// Synthetic dialogs over the embedding fixture vocabulary. Each round's GT answer
/// repeats the question's content words; distractors differ from it in one word, so a
/// matching substitution in the question moves them ahead. Captions mention the main
/// object, image tags do not.
std::vector<corpus::Dialog> fixture_corpus(std::size_t n_dialogs = 40, std::uint64_t seed = 2024);
std::vector<corpus::AttackInstance> fixture_instances(std::size_t n_dialogs = 40, std::uint64_t seed = 2024);

/// One question with several attackable words, exactly one of which carries the
/// victim's confidence.
struct PlantedSpec {
    std::string planted;
    std::vector<std::string> others;
};

struct PlantedFixture {
    std::vector<corpus::AttackInstance> instances;
    std::map<std::string, PlantedSpec> specs;  // by image_id
    std::map<std::string, std::size_t> planted_position;  // token index, by image_id
};

PlantedFixture planted_fixture(std::size_t n, std::uint64_t seed);

/// GT scores 2 + 0.01 per other original word still present + 1 if the planted word
/// is present; candidate 1 scores 2.5; the rest 0.
class PlantedVictim final : public oracle::Victim {
public:
    explicit PlantedVictim(const PlantedFixture& fixture) : fixture_(fixture) {}
    oracle::CandidateScores score(const oracle::VictimInput& input) const override;

private:
    const PlantedFixture& fixture_;
};

/// Counts every score call; thread-safe.
class CountingVictim final : public oracle::Victim {
public:
    explicit CountingVictim(const oracle::Victim& inner) : inner_(inner) {}
    oracle::CandidateScores score(const oracle::VictimInput& input) const override;
    std::size_t calls() const;
    void reset();

private:
    const oracle::Victim& inner_;
    mutable std::size_t calls_ = 0;
    mutable std::mutex mu_;
};

struct AttackTypeCase {
    std::string original;
    std::string replacement;
    runner::AttackType expected;
};

/// 40 hand-labeled word pairs, eight per type.
std::vector<AttackTypeCase> attack_type_cases();

/// Ratings JSONL over a small batch, hand-tallied:
///   label_consistency: L1 {yes,yes,no}, L2 {yes,no,unsure}, L3 {no,no,no},
///     L4 {yes,yes,yes,no}, L5 {yes,no} (under-rated)
///   grammaticality: G1 {5,4,4}, G2 {3,3,3}
///   similarity_no_image: S1 {4,3,4}, where annotator a1 first rated 1
std::string ratings_fixture();

/// Fresh empty directory under the system temp dir.
std::filesystem::path scratch_dir(std::string_view name);

/// Writes `text` to `path` and returns it.
std::filesystem::path write_text(const std::filesystem::path& path, std::string_view text);

}  // namespace vdattack::testing
