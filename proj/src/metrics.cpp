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

#include "vdattack/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>

#include "vdattack/error.hpp"

namespace vdattack::metrics {

std::optional<double> recall_at_k(std::span<const std::size_t> ranks, std::size_t k) {
    if (ranks.empty()) {
        return std::nullopt;
    }
    const auto hits = std::count_if(ranks.begin(), ranks.end(), [k](std::size_t r) { return r <= k; });
    return static_cast<double>(hits) / static_cast<double>(ranks.size());
}

std::optional<double> mrr(std::span<const std::size_t> ranks) {
    if (ranks.empty()) {
        return std::nullopt;
    }
    double sum = 0.0;
    for (std::size_t r : ranks) {
        if (r == 0) {
            throw DomainError("ranks start at 1");
        }
        sum += 1.0 / static_cast<double>(r);
    }
    return sum / static_cast<double>(ranks.size());
}

double ndcg(const oracle::CandidateScores& scores, std::span<const double> relevance) {
    if (relevance.size() != scores.size()) {
        throw DomainError("ndcg: relevance and score lengths differ");
    }
    const auto k = static_cast<std::size_t>(std::count_if(relevance.begin(), relevance.end(), [](double r) { return r > 0.0; }));
    if (k == 0) {
        throw DomainError("ndcg: no candidate has positive relevance");
    }
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });
    std::vector<double> ideal(relevance.begin(), relevance.end());
    std::sort(ideal.begin(), ideal.end(), std::greater<>());
    double dcg = 0.0;
    double idcg = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double discount = std::log2(static_cast<double>(i) + 2.0);
        dcg += relevance[order[i]] / discount;
        idcg += ideal[i] / discount;
    }
    return dcg / idcg;
}

double perplexity(std::span<const double> gt_probs) {
    if (gt_probs.empty()) {
        throw DomainError("perplexity of an empty set");
    }
    double sum = 0.0;
    for (double p : gt_probs) {
        if (!(p > 0.0) || p > 1.0) {
            throw DomainError("perplexity: probability outside (0,1]");
        }
        sum -= std::log2(p);
    }
    return std::exp2(sum / static_cast<double>(gt_probs.size()));
}

AttackAggregates attack_aggregates(std::span<const attack::AttackResult> results) {
    AttackAggregates a;
    a.n_instances = results.size();
    double pert = 0.0;
    double sim = 0.0;
    double queries = 0.0;
    for (const attack::AttackResult& r : results) {
        if (!r.attempted) {
            continue;
        }
        ++a.n_attempted;
        if (r.target_word_count > 0) {
            pert += 100.0 * static_cast<double>(r.substitutions.size()) / static_cast<double>(r.target_word_count);
        }
        queries += static_cast<double>(r.queries);
        if (r.success) {
            ++a.n_success;
            sim += r.similarity_final;
        }
    }
    if (a.n_attempted > 0) {
        const auto n = static_cast<double>(a.n_attempted);
        a.pert_percent = pert / n;
        a.mean_queries = queries / n;
        a.success_rate = static_cast<double>(a.n_success) / n;
    }
    if (a.n_success > 0) {
        a.mean_similarity = sim / static_cast<double>(a.n_success);
    }
    return a;
}

MetricSet compute_metrics(std::span<const attack::AttackResult> results, Phase phase) {
    MetricSet m;
    std::vector<std::size_t> ranks;
    std::vector<double> probs;
    double ndcg_sum = 0.0;
    for (const attack::AttackResult& r : results) {
        const oracle::CandidateScores& s = phase == Phase::kBefore ? r.scores_before : r.scores_after;
        m.instance_ids.push_back(r.instance_id);
        ranks.push_back(oracle::rank_of(s, r.gt_index));
        probs.push_back(oracle::gt_probability(s, r.gt_index));
        if (r.relevance) {
            ndcg_sum += ndcg(s, *r.relevance);
            ++m.n_ndcg;
        }
    }
    auto pct = [](std::optional<double> v) { return v ? std::optional<double>(100.0 * *v) : std::nullopt; };
    m.r1 = pct(recall_at_k(ranks, 1));
    m.r5 = pct(recall_at_k(ranks, 5));
    m.r10 = pct(recall_at_k(ranks, 10));
    m.mrr = pct(mrr(ranks));
    if (m.n_ndcg > 0) {
        m.ndcg = 100.0 * ndcg_sum / static_cast<double>(m.n_ndcg);
    }
    if (!probs.empty()) {
        m.ppl = perplexity(probs);
    }
    return m;
}

std::optional<double> relative_delta_percent(std::optional<double> before, std::optional<double> after) {
    if (!before || !after || *before == 0.0) {
        return std::nullopt;
    }
    return 100.0 * (*after - *before) / *before;
}

const MetricRow& RobustnessReport::metric(std::string_view name) const {
    for (const MetricRow& row : metrics) {
        if (row.name == name) {
            return row;
        }
    }
    throw PreconditionError("no metric named " + std::string(name));
}

RobustnessReport build_report(const MetricSet& before, const MetricSet& after, const AttackAggregates& aggregates) {
    if (before.instance_ids != after.instance_ids) {
        throw ValidationError("before/after metrics cover different instance sets");
    }
    RobustnessReport rep;
    auto row = [&](const char* name, std::optional<double> b, std::optional<double> a) {
        rep.metrics.push_back({name, b, a, relative_delta_percent(b, a)});
    };
    row("R@1", before.r1, after.r1);
    row("R@5", before.r5, after.r5);
    row("R@10", before.r10, after.r10);
    row("MRR", before.mrr, after.mrr);
    row("NDCG", before.ndcg, after.ndcg);
    row("PPL", before.ppl, after.ppl);
    rep.pert_percent = aggregates.pert_percent;
    if (aggregates.mean_similarity) {
        rep.mean_semantic_similarity = 100.0 * *aggregates.mean_similarity;
    }
    rep.mean_queries = aggregates.mean_queries;
    rep.n_instances = aggregates.n_instances;
    rep.n_attempted = aggregates.n_attempted;
    rep.n_success = aggregates.n_success;
    rep.n_ndcg = before.n_ndcg;
    return rep;
}

std::optional<double> SegmentShares::percent(corpus::SegmentKind kind) const {
    if (total() == 0) {
        return std::nullopt;
    }
    std::size_t n = caption;
    if (kind == corpus::SegmentKind::kUserQuestion) {
        n = user_question;
    } else if (kind == corpus::SegmentKind::kSystemAnswer) {
        n = system_answer;
    }
    return 100.0 * static_cast<double>(n) / static_cast<double>(total());
}

SegmentShares segment_shares(std::span<const attack::AttackResult> results) {
    SegmentShares out;
    for (const attack::AttackResult& r : results) {
        if (!r.success || !r.attacked_segment) {
            continue;
        }
        switch (*r.attacked_segment) {
            case corpus::SegmentKind::kCaption:
                ++out.caption;
                break;
            case corpus::SegmentKind::kUserQuestion:
                ++out.user_question;
                break;
            case corpus::SegmentKind::kSystemAnswer:
                ++out.system_answer;
                break;
        }
    }
    return out;
}

RobustnessReport report_from_results(std::span<const attack::AttackResult> results) {
    RobustnessReport report = build_report(compute_metrics(results, Phase::kBefore),
                                           compute_metrics(results, Phase::kAfter), attack_aggregates(results));
    if (std::any_of(results.begin(), results.end(),
                    [](const attack::AttackResult& r) { return r.target == attack::Target::kHistory; })) {
        report.segments = segment_shares(results);
    }
    return report;
}

namespace {

transport::Json opt(std::optional<double> v) { return v ? transport::Json(*v) : transport::Json(nullptr); }

std::string fmt(std::optional<double> v, int precision = 1) {
    if (!v) {
        return "";
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << *v;
    return s.str();
}

}  // namespace

transport::Json to_json(const RobustnessReport& report) {
    transport::Json metrics = transport::Json::object();
    for (const MetricRow& row : report.metrics) {
        metrics[row.name] = {{"before", opt(row.before)},
                             {"after", opt(row.after)},
                             {"relative_delta_percent", opt(row.relative_delta_percent)}};
    }
    transport::Json j = {{"metrics", metrics},
            {"pert_percent", opt(report.pert_percent)},
            {"mean_semantic_similarity", opt(report.mean_semantic_similarity)},
            {"mean_queries", opt(report.mean_queries)},
            {"n_instances", report.n_instances},
            {"n_attempted", report.n_attempted},
            {"n_success", report.n_success},
            {"n_ndcg", report.n_ndcg},
            {"ppl_axis", report.ppl_axis}};
    if (report.segments) {
        const SegmentShares& s = *report.segments;
        j["segments"] = {{"caption", s.caption},
                         {"user_question", s.user_question},
                         {"system_answer", s.system_answer},
                         {"caption_percent", opt(s.percent(corpus::SegmentKind::kCaption))},
                         {"user_question_percent", opt(s.percent(corpus::SegmentKind::kUserQuestion))},
                         {"system_answer_percent", opt(s.percent(corpus::SegmentKind::kSystemAnswer))}};
    }
    return j;
}

std::string to_csv(const RobustnessReport& report) {
    std::ostringstream head;
    std::ostringstream vals;
    vals << std::setprecision(17);
    bool first = true;
    auto col = [&](const std::string& name, std::optional<double> v) {
        head << (first ? "" : ",") << name;
        vals << (first ? "" : ",");
        if (v) {
            vals << *v;
        }
        first = false;
    };
    for (const MetricRow& row : report.metrics) {
        col("Orig." + row.name, row.before);
        col("Aft." + row.name, row.after);
        col("Delta." + row.name, row.relative_delta_percent);
    }
    col("Pert.", report.pert_percent);
    col("S.S.", report.mean_semantic_similarity);
    col("Quer.", report.mean_queries);
    head << ",N,Attempted,Success,N.NDCG";
    vals << "," << report.n_instances << "," << report.n_attempted << "," << report.n_success << "," << report.n_ndcg;
    return head.str() + "\n" + vals.str() + "\n";
}

std::string to_table(const RobustnessReport& report) {
    std::ostringstream out;
    out << std::left << std::setw(8) << "metric" << std::right << std::setw(10) << "Orig." << std::setw(10) << "Aft."
        << std::setw(10) << "[Delta%]" << "\n";
    for (const MetricRow& row : report.metrics) {
        out << std::left << std::setw(8) << row.name << std::right << std::setw(10) << fmt(row.before, 2)
            << std::setw(10) << fmt(row.after, 2) << std::setw(10) << fmt(row.relative_delta_percent) << "\n";
    }
    out << "Pert. " << fmt(report.pert_percent) << "  S.S. " << fmt(report.mean_semantic_similarity)
        << "  Quer. " << fmt(report.mean_queries) << "\n";
    out << "instances " << report.n_instances << ", attempted " << report.n_attempted << ", successful "
        << report.n_success << ", with relevance " << report.n_ndcg << "\n";
    if (report.segments && report.segments->total() > 0) {
        const SegmentShares& s = *report.segments;
        out << "attacked segment: caption " << fmt(s.percent(corpus::SegmentKind::kCaption)) << "%, user "
            << fmt(s.percent(corpus::SegmentKind::kUserQuestion)) << "%, system "
            << fmt(s.percent(corpus::SegmentKind::kSystemAnswer)) << "%\n";
    }
    return out.str();
}

}  // namespace vdattack::metrics
