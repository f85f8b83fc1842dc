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
#include <functional>
#include <memory>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/attack.hpp"
#include "vdattack/constraints.hpp"
#include "vdattack/corpus.hpp"
#include "vdattack/encoder.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/metrics.hpp"
#include "vdattack/oracle.hpp"

namespace vdattack::runner {

struct ExperimentConfig {
    std::filesystem::path corpus_path;
    corpus::Format format = corpus::Format::kToy;
    std::optional<std::filesystem::path> dense_relevance;

    /// "builtin:<preset>", "http://...", or "cmd:<command>".
    std::string victim = "builtin:ih";
    /// "embedding" or "mlm:<endpoint>".
    std::string provider = "embedding";
    /// Defaults to the bundled fixture table.
    std::optional<std::filesystem::path> embeddings;
    std::optional<std::filesystem::path> stopwords;
    std::optional<std::filesystem::path> pos_lexicon;
    /// External encoder / grammar services; builtin defaults otherwise.
    std::optional<std::string> encoder_endpoint;
    std::optional<std::string> grammar_endpoint;

    attack::AttackConfig attack;

    /// Keep only these round ids (1-based); all when empty.
    std::vector<std::size_t> round_ids;
    std::optional<std::size_t> max_instances;
    std::optional<std::filesystem::path> out_dir;
    std::size_t workers = 1;
};

/// Owns the lexicons, provider, encoder, grammar checker and victim of one run.
class Services {
public:
    static std::unique_ptr<Services> build(const ExperimentConfig& config);

    attack::AttackContext context() const;
    const oracle::Victim& victim() const { return *victim_; }
    const lexsub::EmbeddingTable& embeddings() const { return *embeddings_; }
    const lexsub::PosTagger& tagger() const { return *tagger_; }

private:
    Services() = default;

    std::unique_ptr<lexsub::EmbeddingTable> owned_embeddings_;
    const lexsub::EmbeddingTable* embeddings_ = nullptr;
    std::unique_ptr<lexsub::Stopwords> owned_stopwords_;
    const lexsub::Stopwords* stopwords_ = nullptr;
    std::unique_ptr<lexsub::LexiconTagger> owned_tagger_;
    const lexsub::PosTagger* tagger_ = nullptr;
    std::unique_ptr<lexsub::SynonymProvider> provider_;
    std::unique_ptr<encoder::SentenceEncoder> encoder_;
    std::unique_ptr<constraints::GrammarChecker> grammar_;
    std::unique_ptr<oracle::Victim> victim_;
};

/// Loads, flattens and filters the corpus.
std::vector<corpus::AttackInstance> eligible_instances(const ExperimentConfig& config);

/// Attacks every instance on a pool of `workers` threads. Results come back in input
/// order. On a victim failure the remaining work is abandoned, completed results are
/// handed to `on_abort`, and the AttackAborted error propagates.
std::vector<attack::AttackResult> run_attacks(const std::vector<corpus::AttackInstance>& instances,
                                              const oracle::Victim& victim, const attack::AttackContext& context,
                                              const attack::AttackConfig& cfg, std::size_t workers,
                                              const std::function<void(const std::vector<attack::AttackResult>&)>&
                                                  on_abort = nullptr);

struct ExperimentOutput {
    metrics::RobustnessReport report;
    std::vector<attack::AttackResult> results;
    std::vector<std::string> warnings;
};

/// Attacks every eligible instance. With an output directory, writes results.jsonl,
/// report.json, report.csv and report.txt.
ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

enum class SweepAxis { kEpsilon, kConstraintStack, kWordSelection, kStopwords };

std::string_view axis_name(SweepAxis axis);
SweepAxis parse_axis(std::string_view name);

struct SweepRow {
    std::string setting;
    attack::AttackConfig attack;
    metrics::RobustnessReport report;
};

struct SweepTable {
    SweepAxis axis = SweepAxis::kEpsilon;
    std::vector<SweepRow> rows;
};

/// Settings along one ablation axis. `epsilons` is used for kEpsilon and as the
/// threshold of the "+eps" stack rows (first value).
std::vector<std::pair<std::string, attack::AttackConfig>> sweep_settings(const attack::AttackConfig& base,
                                                                         SweepAxis axis,
                                                                         const std::vector<double>& epsilons);

/// One report per setting over the identical instance set and seed. With an output
/// directory, writes sweep.csv, sweep.txt and per-setting result logs.
SweepTable ablation_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& epsilons = {},
                          std::ostream* log = nullptr);

std::string to_csv(const SweepTable& table);
std::string to_table(const SweepTable& table);

}  // namespace vdattack::runner
