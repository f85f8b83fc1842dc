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
#include <vector>

namespace vdattack::corpus {

/// Every round ranks exactly this many candidate answers.
inline constexpr std::size_t kNumCandidates = 100;

struct DialogRound {
    std::string question;
    std::string answer;
    /// Candidate answer strings, already resolved from any index table.
    std::vector<std::string> candidates;
    std::size_t gt_index = 0;
    /// Dense relevance in [0,1], one per candidate, when annotated.
    std::optional<std::vector<double>> relevance;

    friend bool operator==(const DialogRound&, const DialogRound&) = default;
};

struct Dialog {
    std::string image_id;
    /// Bag of visual concepts standing in for image features.
    std::vector<std::string> image_tags;
    std::string caption;
    std::vector<DialogRound> rounds;

    friend bool operator==(const Dialog&, const Dialog&) = default;
};

struct QaPair {
    std::string question;
    std::string answer;

    friend bool operator==(const QaPair&, const QaPair&) = default;
};

/// Caption plus the QA pairs that precede the current round.
struct History {
    std::string caption;
    std::vector<QaPair> turns;

    friend bool operator==(const History&, const History&) = default;
};

/// One attackable round: the question of round `round_id` with everything before it as history.
struct AttackInstance {
    std::string image_id;
    std::vector<std::string> image_tags;
    std::size_t round_id = 1;  // 1-based
    History history;
    std::string question;
    std::vector<std::string> candidates;
    std::size_t gt_index = 0;
    std::optional<std::vector<double>> relevance;

    /// Stable key "<image_id>:<round_id>".
    std::string id() const;
};

enum class Format { kVisdialV1, kToy };

Format parse_format(std::string_view name);
std::string_view format_name(Format format);

/// Throws ValidationError naming the dialog/round on the first broken invariant.
void validate(const Dialog& dialog);

/// Loads a corpus. For visdial_v1 the optional dense-relevance side file is joined
/// on (image_id, round_id); annotations giving the GT zero relevance are dropped and
/// reported through `warnings`.
std::vector<Dialog> load_corpus(const std::filesystem::path& path, Format format,
                                const std::optional<std::filesystem::path>& dense_relevance = std::nullopt,
                                std::vector<std::string>* warnings = nullptr);

std::vector<Dialog> parse_visdial(std::string_view json, std::string_view source_name = "<memory>");
/// Joins dense relevance (a JSON list of {image_id, round_id, gt_relevance|relevance}).
void attach_dense_relevance(std::vector<Dialog>& corpus, std::string_view json,
                            std::vector<std::string>* warnings = nullptr);

std::vector<Dialog> parse_toy(std::string_view jsonl, std::string_view source_name = "<memory>");
std::string serialize_toy(const std::vector<Dialog>& corpus);
void save_toy(const std::vector<Dialog>& corpus, const std::filesystem::path& path);

/// One instance per round, in dialog order.
std::vector<AttackInstance> flatten_instances(const std::vector<Dialog>& corpus);

enum class SegmentKind { kCaption, kUserQuestion, kSystemAnswer };

std::string_view segment_name(SegmentKind kind);
SegmentKind parse_segment(std::string_view name);

/// Labeled half-open token range [begin, end) over the concatenated history tokens.
struct HistorySegment {
    SegmentKind kind;
    std::size_t begin = 0;
    std::size_t end = 0;

    std::size_t size() const { return end - begin; }
    friend bool operator==(const HistorySegment&, const HistorySegment&) = default;
};

/// History texts in dialog order: caption, q1, a1, q2, a2, ...
std::vector<std::pair<SegmentKind, std::string>> history_texts(const History& history);

std::vector<HistorySegment> segment_history(const AttackInstance& instance);

}  // namespace vdattack::corpus
