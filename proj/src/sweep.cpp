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

#include <iomanip>
#include <sstream>

#include "vdattack/error.hpp"
#include "vdattack/resources.hpp"
#include "vdattack/results_io.hpp"
#include "vdattack/runner.hpp"

namespace vdattack::runner {

std::string_view axis_name(SweepAxis axis) {
    switch (axis) {
        case SweepAxis::kEpsilon:
            return "epsilon";
        case SweepAxis::kConstraintStack:
            return "constraint_stack";
        case SweepAxis::kWordSelection:
            return "word_selection";
        case SweepAxis::kStopwords:
            return "stopwords";
    }
    return "epsilon";
}

SweepAxis parse_axis(std::string_view name) {
    if (name == "epsilon") return SweepAxis::kEpsilon;
    if (name == "constraint_stack") return SweepAxis::kConstraintStack;
    if (name == "word_selection") return SweepAxis::kWordSelection;
    if (name == "stopwords") return SweepAxis::kStopwords;
    throw PreconditionError("unknown sweep axis '" + std::string(name) +
                            "' (expected epsilon, constraint_stack, word_selection, stopwords)");
}

namespace {

std::string eps_label(double eps) {
    std::ostringstream s;
    s << eps;
    return s.str();
}

}  // namespace

std::vector<std::pair<std::string, attack::AttackConfig>> sweep_settings(const attack::AttackConfig& base,
                                                                         SweepAxis axis,
                                                                         const std::vector<double>& epsilons) {
    std::vector<std::pair<std::string, attack::AttackConfig>> out;
    switch (axis) {
        case SweepAxis::kEpsilon: {
            const std::vector<double> values = epsilons.empty() ? std::vector<double>{0.1, 0.3, 0.5, 0.7} : epsilons;
            for (double eps : values) {
                attack::AttackConfig c = base;
                c.constraints.epsilon = eps;
                c.constraints.validate();
                out.emplace_back("eps=" + eps_label(eps), c);
            }
            break;
        }
        case SweepAxis::kConstraintStack: {
            const double eps = epsilons.empty() ? constraints::kDefaultEpsilon : epsilons.front();
            attack::AttackConfig c = base;
            c.constraints.use_pos = false;
            c.constraints.epsilon.reset();
            c.constraints.use_grammar = false;
            out.emplace_back("raw", c);
            c.constraints.use_pos = true;
            out.emplace_back("+pos", c);
            c.constraints.epsilon = eps;
            c.constraints.validate();
            out.emplace_back("+pos+eps(" + eps_label(eps) + ")", c);
            c.constraints.use_grammar = true;
            out.emplace_back("+pos+eps(" + eps_label(eps) + ")+gram", c);
            break;
        }
        case SweepAxis::kWordSelection: {
            attack::AttackConfig c = base;
            c.order = attack::WordOrder::kRandom;
            out.emplace_back("random", c);
            c.order = attack::WordOrder::kImportance;
            out.emplace_back("importance", c);
            break;
        }
        case SweepAxis::kStopwords: {
            attack::AttackConfig c = base;
            c.constraints.use_stopwords = false;
            out.emplace_back("all words", c);
            c.constraints.use_stopwords = true;
            out.emplace_back("with stopwords", c);
            break;
        }
    }
    return out;
}

SweepTable ablation_sweep(const ExperimentConfig& config, SweepAxis axis, const std::vector<double>& epsilons,
                          std::ostream* log) {
    const auto instances = eligible_instances(config);
    const auto services = Services::build(config);
    SweepTable table;
    table.axis = axis;
    std::size_t index = 0;
    for (auto& [label, cfg] : sweep_settings(config.attack, axis, epsilons)) {
        cfg.validate();
        auto results = run_attacks(instances, services->victim(), services->context(), cfg, config.workers);
        if (config.out_dir) {
            write_file(*config.out_dir / ("results_" + std::to_string(index) + ".jsonl"), results_io::to_jsonl(results));
        }
        table.rows.push_back({label, cfg, metrics::report_from_results(results)});
        if (log != nullptr) {
            *log << label << ": " << table.rows.back().report.n_success << " successful\n";
        }
        ++index;
    }
    if (config.out_dir) {
        write_file(*config.out_dir / "sweep.csv", to_csv(table));
        write_file(*config.out_dir / "sweep.txt", to_table(table));
    }
    return table;
}

namespace {

std::string num(std::optional<double> v, int precision) {
    if (!v) {
        return "";
    }
    std::ostringstream s;
    s << std::fixed << std::setprecision(precision) << *v;
    return s.str();
}

double success_share(const metrics::RobustnessReport& r) {
    return r.n_instances == 0 ? 0.0 : 100.0 * static_cast<double>(r.n_success) / static_cast<double>(r.n_instances);
}

}  // namespace

std::string to_csv(const SweepTable& table) {
    std::ostringstream out;
    out << "setting,n_success,success_percent,Delta.R@1,Delta.NDCG,Delta.MRR,Delta.PPL,Pert.,S.S.,Quer.\n";
    for (const SweepRow& row : table.rows) {
        const auto& r = row.report;
        out << '"' << row.setting << "\"," << r.n_success << "," << num(success_share(r), 4) << ","
            << num(r.metric("R@1").relative_delta_percent, 6) << "," << num(r.metric("NDCG").relative_delta_percent, 6)
            << "," << num(r.metric("MRR").relative_delta_percent, 6) << ","
            << num(r.metric("PPL").relative_delta_percent, 6) << "," << num(r.pert_percent, 6) << ","
            << num(r.mean_semantic_similarity, 6) << "," << num(r.mean_queries, 6) << "\n";
    }
    return out.str();
}

std::string to_table(const SweepTable& table) {
    std::ostringstream out;
    out << "axis: " << axis_name(table.axis) << "\n";
    out << std::left << std::setw(26) << "setting" << std::right << std::setw(16) << "Num./(%)" << std::setw(9)
        << "dR@1" << std::setw(9) << "dNDCG" << std::setw(9) << "dMRR" << std::setw(9) << "dPPL" << "\n";
    for (const SweepRow& row : table.rows) {
        const auto& r = row.report;
        const std::string count = std::to_string(r.n_success) + " (" + num(success_share(r), 1) + "%)";
        out << std::left << std::setw(26) << row.setting << std::right << std::setw(16) << count << std::setw(9)
            << num(r.metric("R@1").relative_delta_percent, 1) << std::setw(9)
            << num(r.metric("NDCG").relative_delta_percent, 1) << std::setw(9)
            << num(r.metric("MRR").relative_delta_percent, 1) << std::setw(9)
            << num(r.metric("PPL").relative_delta_percent, 1) << "\n";
    }
    return out.str();
}

}  // namespace vdattack::runner
