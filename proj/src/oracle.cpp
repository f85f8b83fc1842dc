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

#include "vdattack/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"

namespace vdattack::oracle {

using transport::Json;

CandidateScores::CandidateScores(std::vector<double> scores, bool normalized)
    : scores_(std::move(scores)), normalized_(normalized) {
    if (scores_.size() != kNumCandidates) {
        throw ProtocolError("expected " + std::to_string(kNumCandidates) + " scores, got " +
                            std::to_string(scores_.size()));
    }
    for (double s : scores_) {
        if (!std::isfinite(s)) {
            throw ProtocolError("non-finite candidate score");
        }
    }
}

std::size_t rank_of(const CandidateScores& scores, std::size_t gt_index) {
    const double gt = scores[gt_index];
    std::size_t rank = 1;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (scores[i] > gt || (scores[i] == gt && i < gt_index)) {
            ++rank;
        }
    }
    return rank;
}

std::size_t top1(const CandidateScores& scores) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < scores.size(); ++i) {
        if (scores[i] > scores[best]) {
            best = i;
        }
    }
    return best;
}

std::vector<double> softmax_probs(const CandidateScores& scores) {
    std::vector<double> p(scores.values().begin(), scores.values().end());
    if (scores.normalized()) {
        return p;
    }
    const double max = *std::max_element(p.begin(), p.end());
    double sum = 0.0;
    for (double& x : p) {
        x = std::exp(x - max);
        sum += x;
    }
    for (double& x : p) {
        x /= sum;
    }
    return p;
}

double gt_probability(const CandidateScores& scores, std::size_t gt_index) {
    return softmax_probs(scores)[gt_index];
}

Json to_json(const VictimInput& input) {
    Json history = Json::array();
    for (const corpus::QaPair& qa : input.history.turns) {
        history.push_back({{"q", qa.question}, {"a", qa.answer}});
    }
    return {{"protocol_version", transport::kProtocolVersion},
            {"image_id", input.image_id},
            {"image_tags", input.image_tags},
            {"caption", input.history.caption},
            {"history", history},
            {"question", input.question},
            {"candidates", input.candidates}};
}

VictimInput victim_input_from_json(const Json& request) {
    transport::check_request_version(request);
    VictimInput in;
    try {
        in.image_id = request.at("image_id").is_string() ? request.at("image_id").get<std::string>()
                                                          : request.at("image_id").dump();
        if (request.contains("image_tags")) {
            in.image_tags = request.at("image_tags").get<std::vector<std::string>>();
        }
        in.history.caption = request.at("caption").get<std::string>();
        for (const auto& qa : request.at("history")) {
            in.history.turns.push_back({qa.at("q").get<std::string>(), qa.at("a").get<std::string>()});
        }
        in.question = request.at("question").get<std::string>();
        in.candidates = request.at("candidates").get<std::vector<std::string>>();
    } catch (const Json::exception& e) {
        throw ProtocolError(std::string("malformed score request: ") + e.what());
    }
    if (in.candidates.size() != kNumCandidates) {
        throw ProtocolError("score request must carry " + std::to_string(kNumCandidates) + " candidates");
    }
    return in;
}

void RankerConfig::validate() const {
    if (image_weight < 0.0 || history_weight < 0.0) {
        throw PreconditionError("ranker weights must be non-negative");
    }
    if (!use_question && !use_image && !use_history) {
        throw PreconditionError("ranker needs at least one active input channel");
    }
}

RankerConfig ranker_preset(std::string_view name) {
    RankerConfig c;
    if (name == "q") {
    } else if (name == "i") {
        c.use_image = true;
    } else if (name == "h") {
        c.use_history = true;
    } else if (name == "ih") {
        c.use_image = true;
        c.use_history = true;
    } else if (name == "hist-only") {
        c.use_question = false;
        c.use_history = true;
    } else {
        throw PreconditionError("unknown ranker preset '" + std::string(name) + "'");
    }
    return c;
}

std::vector<std::string> ranker_preset_names() { return {"q", "i", "h", "ih", "hist-only"}; }

namespace {

using WordSet = std::set<std::string, std::less<>>;

void add_words(WordSet& set, std::string_view text) {
    for (const lexsub::Token& t : lexsub::tokenize(text)) {
        if (!t.is_punct) {
            set.insert(t.lower);
        }
    }
}

std::size_t overlap(const WordSet& candidate, const WordSet& channel) {
    std::size_t n = 0;
    for (const std::string& w : candidate) {
        n += channel.contains(w) ? 1 : 0;
    }
    return n;
}

}  // namespace

OverlapRanker::OverlapRanker(RankerConfig config) : config_(config) { config_.validate(); }

CandidateScores OverlapRanker::score(const VictimInput& input) const {
    if (input.candidates.size() != kNumCandidates) {
        throw PreconditionError("overlap ranker: expected " + std::to_string(kNumCandidates) + " candidates");
    }
    WordSet question;
    add_words(question, input.question);
    WordSet tags;
    for (const std::string& tag : input.image_tags) {
        add_words(tags, tag);
    }
    WordSet history;
    for (const auto& [kind, text] : corpus::history_texts(input.history)) {
        add_words(history, text);
    }
    std::vector<double> scores(kNumCandidates);
    for (std::size_t i = 0; i < kNumCandidates; ++i) {
        WordSet cand;
        add_words(cand, input.candidates[i]);
        double s = 0.0;
        if (config_.use_question) {
            s += static_cast<double>(overlap(cand, question));
        }
        if (config_.use_image) {
            s += config_.image_weight * static_cast<double>(overlap(cand, tags));
        }
        if (config_.use_history) {
            s += config_.history_weight * static_cast<double>(overlap(cand, history));
        }
        scores[i] = s - 1e-6 * static_cast<double>(i);
    }
    return CandidateScores(std::move(scores));
}

namespace {

VictimInput input_for(const corpus::AttackInstance& instance, const std::optional<std::string>& question,
                      const std::optional<corpus::History>& history) {
    return VictimInput{instance.image_id, instance.image_tags, history ? *history : instance.history,
                       question ? *question : instance.question, instance.candidates};
}

}  // namespace

CandidateScores overlap_ranker_score(const corpus::AttackInstance& instance, const RankerConfig& config) {
    return OverlapRanker(config).score(input_for(instance, std::nullopt, std::nullopt));
}

CandidateScores ProtocolVictim::score(const VictimInput& input) const {
    const Json reply = transport_->call(to_json(input));
    if (!reply.contains("scores") || !reply.at("scores").is_array()) {
        throw ProtocolError("victim reply lacks a 'scores' array");
    }
    std::vector<double> scores;
    for (const auto& s : reply.at("scores")) {
        if (!s.is_number()) {
            throw ProtocolError("victim reply has a non-numeric score");
        }
        scores.push_back(s.get<double>());
    }
    bool normalized = false;
    if (reply.contains("normalized")) {
        if (!reply.at("normalized").is_boolean()) {
            throw ProtocolError("victim reply: 'normalized' must be a boolean");
        }
        normalized = reply.at("normalized").get<bool>();
    }
    return CandidateScores(std::move(scores), normalized);
}

Json handle_score_request(const Victim& victim, const Json& request) {
    const CandidateScores scores = victim.score(victim_input_from_json(request));
    return {{"protocol_version", transport::kProtocolVersion},
            {"scores", std::vector<double>(scores.values().begin(), scores.values().end())},
            {"normalized", scores.normalized()}};
}

std::unique_ptr<Victim> make_victim(std::string_view spec) {
    if (spec.rfind("builtin:", 0) == 0) {
        return std::make_unique<OverlapRanker>(ranker_preset(spec.substr(8)));
    }
    return std::make_unique<ProtocolVictim>(std::shared_ptr<transport::JsonTransport>(transport::make_transport(spec)));
}

CandidateScores Oracle::score(const corpus::AttackInstance& instance, const std::optional<std::string>& question_override,
                              const std::optional<corpus::History>& history_override) {
    if (question_override && lexsub::tokenize(*question_override).empty()) {
        throw PreconditionError("question override must not be empty");
    }
    counter_.increment();
    return victim_.score(input_for(instance, question_override, history_override));
}

}  // namespace vdattack::oracle
