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
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/attack.hpp"

namespace vdattack::runner {

enum class AnnotationTask { kSimilarityNoImage, kSimilarityWithImage, kGrammaticality, kLabelConsistency };

std::string_view task_name(AnnotationTask task);
AnnotationTask parse_task(std::string_view name);
std::vector<AnnotationTask> all_tasks();

struct AnnotationItem {
    std::string item_id;
    std::string instance_id;
    std::string image_id;
    std::string original_question;
    std::string adversarial_question;
    std::string answer_before;
    std::string answer_after;
    AnnotationTask task = AnnotationTask::kSimilarityNoImage;

    friend bool operator==(const AnnotationItem&, const AnnotationItem&) = default;
};

/// One item per (result, task), ids "<instance_id>/<task>". With a sample size, a
/// seeded sample of results is taken first (order preserved). Throws PreconditionError
/// for an empty input or a sample larger than the input.
std::vector<AnnotationItem> export_annotation_batch(std::span<const attack::AttackResult> results,
                                                    std::span<const AnnotationTask> tasks,
                                                    std::optional<std::size_t> sample_size = std::nullopt,
                                                    std::uint64_t seed = 0);

std::string to_jsonl(const std::vector<AnnotationItem>& items);
std::vector<AnnotationItem> parse_annotation_batch(std::string_view jsonl);

/// label_consistency values.
inline constexpr std::string_view kLabelYes = "yes";
inline constexpr std::string_view kLabelNo = "no";
inline constexpr std::string_view kLabelUnsure = "unsure";

struct AnnotationRating {
    std::string item_id;
    std::string annotator_id;
    AnnotationTask task = AnnotationTask::kSimilarityNoImage;
    /// "1".."4", "1".."5", or yes/no/unsure, depending on the task.
    std::string value;
};

/// Throws ValidationError when the value is outside the task's scale.
void validate_rating(const AnnotationRating& rating);

/// Ratings JSONL: {item_id, annotator_id, task, value}; numeric tasks carry numbers,
/// label_consistency carries a string. Scale violations are ValidationErrors naming
/// the line.
std::vector<AnnotationRating> parse_ratings(std::string_view jsonl);
std::vector<AnnotationRating> load_ratings(const std::filesystem::path& path);

inline constexpr std::size_t kMinRatingsPerItem = 3;

struct TaskSummary {
    AnnotationTask task = AnnotationTask::kSimilarityNoImage;
    std::size_t n_items = 0;
    std::size_t n_ratings = 0;
    /// Numeric tasks.
    std::optional<double> mean;
    double scale_max = 0.0;
    /// Label task: share of individual ratings per label.
    std::map<std::string, double> averaging_shares;
    /// Label task: share of items per majority label (top-mode ties count as unsure).
    std::map<std::string, double> majority_shares;
};

struct AnnotationSummary {
    std::vector<TaskSummary> tasks;
    /// Items with fewer than three ratings for their task; excluded from the summary.
    std::vector<std::string> excluded_items;
    std::vector<std::string> warnings;
};

/// Majority label of one item's ratings; a tie at the top mode is unsure.
std::string majority_label(std::span<const std::string> labels);

/// Later ratings of the same (item, annotator, task) replace earlier ones.
AnnotationSummary aggregate_annotations(std::span<const AnnotationRating> ratings);

std::string to_text(const AnnotationSummary& summary);

}  // namespace vdattack::runner
