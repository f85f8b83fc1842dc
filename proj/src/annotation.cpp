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

#include "vdattack/annotation.hpp"

#include <algorithm>
#include <array>
#include <iomanip>
#include <sstream>
#include <tuple>

#include "json.hpp"
#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::runner {

using nlohmann::json;

namespace {

constexpr std::array<AnnotationTask, 4> kTasks{AnnotationTask::kSimilarityNoImage, AnnotationTask::kSimilarityWithImage,
                                               AnnotationTask::kGrammaticality, AnnotationTask::kLabelConsistency};

int scale_max(AnnotationTask task) {
    switch (task) {
        case AnnotationTask::kSimilarityNoImage:
        case AnnotationTask::kSimilarityWithImage:
            return 4;
        case AnnotationTask::kGrammaticality:
            return 5;
        case AnnotationTask::kLabelConsistency:
            return 0;
    }
    return 0;
}

}  // namespace

std::string_view task_name(AnnotationTask task) {
    switch (task) {
        case AnnotationTask::kSimilarityNoImage:
            return "similarity_no_image";
        case AnnotationTask::kSimilarityWithImage:
            return "similarity_with_image";
        case AnnotationTask::kGrammaticality:
            return "grammaticality";
        case AnnotationTask::kLabelConsistency:
            return "label_consistency";
    }
    return "similarity_no_image";
}

AnnotationTask parse_task(std::string_view name) {
    for (AnnotationTask t : kTasks) {
        if (task_name(t) == name) {
            return t;
        }
    }
    throw ParseError("unknown annotation task '" + std::string(name) + "'");
}

std::vector<AnnotationTask> all_tasks() { return {kTasks.begin(), kTasks.end()}; }

std::vector<AnnotationItem> export_annotation_batch(std::span<const attack::AttackResult> results,
                                                    std::span<const AnnotationTask> tasks,
                                                    std::optional<std::size_t> sample_size, std::uint64_t seed) {
    std::vector<const attack::AttackResult*> pool;
    for (const attack::AttackResult& r : results) {
        if (r.success) {
            pool.push_back(&r);
        }
    }
    if (pool.empty()) {
        throw PreconditionError("no successful attacks to export");
    }
    if (sample_size) {
        if (*sample_size > pool.size()) {
            throw PreconditionError("sample size " + std::to_string(*sample_size) + " exceeds the " +
                                    std::to_string(pool.size()) + " successful attacks available");
        }
        std::vector<std::size_t> picked = attack::seeded_permutation(pool.size(), seed);
        picked.resize(*sample_size);
        std::sort(picked.begin(), picked.end());
        std::vector<const attack::AttackResult*> sampled;
        for (std::size_t i : picked) {
            sampled.push_back(pool[i]);
        }
        pool = std::move(sampled);
    }
    std::vector<AnnotationItem> items;
    for (const attack::AttackResult* r : pool) {
        for (AnnotationTask task : tasks) {
            items.push_back({r->instance_id + "/" + std::string(task_name(task)), r->instance_id, r->image_id,
                             r->original_text, r->adversarial_text, r->answer_before, r->answer_after, task});
        }
    }
    return items;
}

std::string to_jsonl(const std::vector<AnnotationItem>& items) {
    std::string out;
    for (const AnnotationItem& it : items) {
        out += json{{"item_id", it.item_id},
                    {"instance_id", it.instance_id},
                    {"image_id", it.image_id},
                    {"original_question", it.original_question},
                    {"adversarial_question", it.adversarial_question},
                    {"answer_before", it.answer_before},
                    {"answer_after", it.answer_after},
                    {"task", std::string(task_name(it.task))}}
                   .dump();
        out += '\n';
    }
    return out;
}

std::vector<AnnotationItem> parse_annotation_batch(std::string_view jsonl) {
    std::vector<AnnotationItem> items;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            const json j = json::parse(line);
            items.push_back({j.at("item_id").get<std::string>(), j.value("instance_id", std::string()),
                             j.at("image_id").get<std::string>(), j.at("original_question").get<std::string>(),
                             j.at("adversarial_question").get<std::string>(), j.value("answer_before", std::string()),
                             j.value("answer_after", std::string()), parse_task(j.at("task").get<std::string>())});
        } catch (const json::exception& e) {
            throw ParseError("annotation batch line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return items;
}

void validate_rating(const AnnotationRating& rating) {
    if (rating.task == AnnotationTask::kLabelConsistency) {
        if (rating.value != kLabelYes && rating.value != kLabelNo && rating.value != kLabelUnsure) {
            throw ValidationError("label_consistency value must be yes, no or unsure, got '" + rating.value + "'");
        }
        return;
    }
    const int max = scale_max(rating.task);
    int v = 0;
    std::istringstream in(rating.value);
    if (!(in >> v) || !in.eof() || v < 1 || v > max) {
        throw ValidationError(std::string(task_name(rating.task)) + " value must be an integer in 1.." +
                              std::to_string(max) + ", got '" + rating.value + "'");
    }
}

std::vector<AnnotationRating> parse_ratings(std::string_view jsonl) {
    std::vector<AnnotationRating> out;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = "ratings line " + std::to_string(line_no);
        AnnotationRating r;
        try {
            const json j = json::parse(line);
            r.item_id = j.at("item_id").get<std::string>();
            r.annotator_id = j.at("annotator_id").is_string() ? j.at("annotator_id").get<std::string>()
                                                              : j.at("annotator_id").dump();
            r.task = parse_task(j.at("task").get<std::string>());
            const json& v = j.at("value");
            if (v.is_number_integer()) {
                r.value = std::to_string(v.get<long long>());
            } else if (v.is_string()) {
                r.value = lexsub::to_lower(v.get<std::string>());
            } else {
                throw ValidationError("value must be an integer or a string");
            }
        } catch (const json::exception& e) {
            throw ParseError(where + ": " + e.what());
        } catch (const Error& e) {
            throw ValidationError(where + ": " + e.what());
        }
        try {
            validate_rating(r);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        out.push_back(std::move(r));
    }
    return out;
}

std::vector<AnnotationRating> load_ratings(const std::filesystem::path& path) { return parse_ratings(read_file(path)); }

std::string majority_label(std::span<const std::string> labels) {
    std::map<std::string, std::size_t> counts;
    for (const std::string& l : labels) {
        ++counts[l];
    }
    std::size_t best = 0;
    std::string label(kLabelUnsure);
    bool tie = false;
    for (const auto& [l, n] : counts) {
        if (n > best) {
            best = n;
            label = l;
            tie = false;
        } else if (n == best) {
            tie = true;
        }
    }
    return tie ? std::string(kLabelUnsure) : label;
}

AnnotationSummary aggregate_annotations(std::span<const AnnotationRating> ratings) {
    // Latest rating per (item, annotator, task) wins.
    std::map<std::tuple<std::string, std::string, AnnotationTask>, std::string> latest;
    for (const AnnotationRating& r : ratings) {
        validate_rating(r);
        latest[{r.item_id, r.annotator_id, r.task}] = r.value;
    }
    std::map<std::pair<AnnotationTask, std::string>, std::vector<std::string>> per_item;
    for (const auto& [key, value] : latest) {
        per_item[{std::get<2>(key), std::get<0>(key)}].push_back(value);
    }

    AnnotationSummary summary;
    for (AnnotationTask task : kTasks) {
        TaskSummary ts;
        ts.task = task;
        ts.scale_max = scale_max(task);
        double sum = 0.0;
        std::map<std::string, double> individual{{std::string(kLabelYes), 0.0}, {std::string(kLabelNo), 0.0},
                                                 {std::string(kLabelUnsure), 0.0}};
        std::map<std::string, double> majority = individual;
        bool seen = false;
        for (const auto& [key, values] : per_item) {
            if (key.first != task) {
                continue;
            }
            seen = true;
            if (values.size() < kMinRatingsPerItem) {
                summary.excluded_items.push_back(key.second);
                summary.warnings.push_back("item " + key.second + " (" + std::string(task_name(task)) + ") has " +
                                           std::to_string(values.size()) + " ratings; excluded");
                continue;
            }
            ++ts.n_items;
            ts.n_ratings += values.size();
            if (task == AnnotationTask::kLabelConsistency) {
                for (const std::string& v : values) {
                    individual[v] += 1.0;
                }
                majority[majority_label(values)] += 1.0;
            } else {
                for (const std::string& v : values) {
                    sum += std::stod(v);
                }
            }
        }
        if (!seen) {
            continue;
        }
        if (ts.n_items > 0) {
            if (task == AnnotationTask::kLabelConsistency) {
                for (auto& [label, n] : individual) {
                    ts.averaging_shares[label] = n / static_cast<double>(ts.n_ratings);
                }
                for (auto& [label, n] : majority) {
                    ts.majority_shares[label] = n / static_cast<double>(ts.n_items);
                }
            } else {
                ts.mean = sum / static_cast<double>(ts.n_ratings);
            }
        }
        summary.tasks.push_back(std::move(ts));
    }
    return summary;
}

std::string to_text(const AnnotationSummary& summary) {
    std::ostringstream out;
    out << std::fixed;
    for (const TaskSummary& ts : summary.tasks) {
        out << task_name(ts.task) << ": " << ts.n_items << " items, " << ts.n_ratings << " ratings";
        if (ts.mean) {
            out << ", mean " << std::setprecision(3) << *ts.mean << " / " << std::setprecision(0) << ts.scale_max;
        }
        if (!ts.averaging_shares.empty()) {
            out << std::setprecision(1);
            for (const char* label : {"yes", "no", "unsure"}) {
                out << ", " << label << " " << 100.0 * ts.averaging_shares.at(label) << "% avg / "
                    << 100.0 * ts.majority_shares.at(label) << "% majority";
            }
        }
        out << "\n";
    }
    for (const std::string& w : summary.warnings) {
        out << "warning: " << w << "\n";
    }
    return out.str();
}

}  // namespace vdattack::runner
