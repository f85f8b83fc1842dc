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
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/corpus.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::oracle {

using corpus::kNumCandidates;

/// The victim's observable output over the 100 candidates.
class CandidateScores {
public:
    CandidateScores() = default;
    /// Throws ProtocolError unless there are exactly 100 finite values.
    explicit CandidateScores(std::vector<double> scores, bool normalized = false);

    std::span<const double> values() const { return scores_; }
    double operator[](std::size_t i) const { return scores_[i]; }
    std::size_t size() const { return scores_.size(); }
    /// True when the victim already emits probabilities; softmax is then skipped.
    bool normalized() const { return normalized_; }

    friend bool operator==(const CandidateScores&, const CandidateScores&) = default;

private:
    std::vector<double> scores_;
    bool normalized_ = false;
};

/// 1 + #{strictly greater} + #{equal with smaller index}.
std::size_t rank_of(const CandidateScores& scores, std::size_t gt_index);
/// Index of the best candidate; ties go to the smaller index.
std::size_t top1(const CandidateScores& scores);
/// Max-subtracted softmax, or the raw values when the victim declared them normalized.
std::vector<double> softmax_probs(const CandidateScores& scores);
double gt_probability(const CandidateScores& scores, std::size_t gt_index);

/// Everything a victim sees for one scoring call.
struct VictimInput {
    std::string image_id;
    std::vector<std::string> image_tags;
    corpus::History history;
    std::string question;
    std::vector<std::string> candidates;
};

transport::Json to_json(const VictimInput& input);
VictimInput victim_input_from_json(const transport::Json& request);

class Victim {
public:
    virtual ~Victim() = default;
    /// Must be deterministic and stateless across calls.
    virtual CandidateScores score(const VictimInput& input) const = 0;
};

struct RankerConfig {
    bool use_question = true;
    bool use_image = false;
    bool use_history = false;
    double image_weight = 1.0;
    double history_weight = 1.0;

    /// Throws PreconditionError for negative weights or no active channel.
    void validate() const;
};

/// Named presets: "q" (question only), "i" (+image), "h" (+history), "ih"
/// (+image +history), "hist-only" (history without question).
RankerConfig ranker_preset(std::string_view name);
std::vector<std::string> ranker_preset_names();

/// Token-overlap reference ranker.
///
/// score(c) = |c∩Q| + [img]·w_img·|c∩tags| + [hist]·w_hist·|c∩H| − 1e-6·index(c),
/// over lowercased word-token sets (stopwords kept, punctuation dropped).
class OverlapRanker final : public Victim {
public:
    explicit OverlapRanker(RankerConfig config);
    CandidateScores score(const VictimInput& input) const override;
    const RankerConfig& config() const { return config_; }

private:
    RankerConfig config_;
};

CandidateScores overlap_ranker_score(const corpus::AttackInstance& instance, const RankerConfig& config);

/// Victim reached over the wire protocol.
class ProtocolVictim final : public Victim {
public:
    explicit ProtocolVictim(std::shared_ptr<transport::JsonTransport> transport)
        : transport_(std::move(transport)) {}
    CandidateScores score(const VictimInput& input) const override;

private:
    std::shared_ptr<transport::JsonTransport> transport_;
};

/// Wire handler that exposes any victim; rejects unknown protocol versions.
transport::Json handle_score_request(const Victim& victim, const transport::Json& request);

/// Builds a victim from "builtin:<preset>", "http://...", or "cmd:<command>".
std::unique_ptr<Victim> make_victim(std::string_view spec);

class QueryCounter {
public:
    void increment() { ++count_; }
    std::size_t count() const { return count_; }
    void reset() { count_ = 0; }

private:
    std::size_t count_ = 0;
};

/// The black-box F seen by one attack: scores an instance with optional overrides
/// and counts every call.
class Oracle {
public:
    explicit Oracle(const Victim& victim) : victim_(victim) {}

    CandidateScores score(const corpus::AttackInstance& instance,
                          const std::optional<std::string>& question_override = std::nullopt,
                          const std::optional<corpus::History>& history_override = std::nullopt);

    std::size_t queries() const { return counter_.count(); }
    void reset() { counter_.reset(); }

private:
    const Victim& victim_;
    QueryCounter counter_;
};

}  // namespace vdattack::oracle
