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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/attack.hpp"
#include "vdattack/oracle.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::metrics {

/// Fraction of ranks <= k; empty input gives no value.
std::optional<double> recall_at_k(std::span<const std::size_t> ranks, std::size_t k);
std::optional<double> mrr(std::span<const std::size_t> ranks);

/// NDCG at K = number of candidates with positive relevance, ranking by score with
/// index tie-break. Throws DomainError when no relevance is positive.
double ndcg(const oracle::CandidateScores& scores, std::span<const double> relevance);

/// 2^(mean of −log2 p). Throws DomainError for p outside (0,1] or empty input.
double perplexity(std::span<const double> gt_probs);

struct AttackAggregates {
    std::size_t n_instances = 0;
    std::size_t n_attempted = 0;
    std::size_t n_success = 0;
    /// Mean over attempted instances of 100·|substitutions| / word count.
    std::optional<double> pert_percent;
    /// Mean final similarity over successful attacks.
    std::optional<double> mean_similarity;
    /// Mean queries over attempted attacks.
    std::optional<double> mean_queries;
    std::optional<double> success_rate;
};

AttackAggregates attack_aggregates(std::span<const attack::AttackResult> results);

/// Retrieval/uncertainty metrics over one instance set. R@k, MRR and NDCG are in
/// percent, as in the usual result tables.
struct MetricSet {
    std::vector<std::string> instance_ids;
    std::optional<double> r1;
    std::optional<double> r5;
    std::optional<double> r10;
    std::optional<double> mrr;
    std::optional<double> ndcg;
    std::optional<double> ppl;
    /// Instances carrying dense relevance (the NDCG denominator).
    std::size_t n_ndcg = 0;
};

enum class Phase { kBefore, kAfter };

MetricSet compute_metrics(std::span<const attack::AttackResult> results, Phase phase);

struct MetricRow {
    std::string name;
    std::optional<double> before;
    std::optional<double> after;
    /// 100·(after − before)/before; empty when before is 0 or missing.
    std::optional<double> relative_delta_percent;
};

/// Which history segment the first committed substitution of each successful history
/// attack landed in.
struct SegmentShares {
    std::size_t caption = 0;
    std::size_t user_question = 0;
    std::size_t system_answer = 0;

    std::size_t total() const { return caption + user_question + system_answer; }
    /// Percent of total; empty when nothing was counted.
    std::optional<double> percent(corpus::SegmentKind kind) const;
};

SegmentShares segment_shares(std::span<const attack::AttackResult> results);

struct RobustnessReport {
    std::vector<MetricRow> metrics;  // R@1, R@5, R@10, MRR, NDCG, PPL
    std::optional<double> pert_percent;
    /// Mean similarity in percent (the S.S. column).
    std::optional<double> mean_semantic_similarity;
    std::optional<double> mean_queries;
    std::size_t n_instances = 0;
    std::size_t n_attempted = 0;
    std::size_t n_success = 0;
    std::size_t n_ndcg = 0;
    /// Averaging unit of PPL.
    std::string ppl_axis = "round";
    /// Set for history attacks.
    std::optional<SegmentShares> segments;

    const MetricRow& metric(std::string_view name) const;
};

std::optional<double> relative_delta_percent(std::optional<double> before, std::optional<double> after);

/// Throws ValidationError when the two sets cover different instances.
RobustnessReport build_report(const MetricSet& before, const MetricSet& after, const AttackAggregates& aggregates);

/// compute_metrics + attack_aggregates + build_report.
RobustnessReport report_from_results(std::span<const attack::AttackResult> results);

transport::Json to_json(const RobustnessReport& report);
/// Header row then one value row; columns follow the Orig./Aft./Δ layout.
std::string to_csv(const RobustnessReport& report);
std::string to_table(const RobustnessReport& report);

}  // namespace vdattack::metrics
