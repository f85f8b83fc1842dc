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

#include "vdattack/results_io.hpp"

#include <sstream>

#include "vdattack/error.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::results_io {

using transport::Json;

namespace {

Json scores_json(const oracle::CandidateScores& s) {
    return {{"values", std::vector<double>(s.values().begin(), s.values().end())}, {"normalized", s.normalized()}};
}

oracle::CandidateScores scores_from(const Json& j) {
    if (j.is_null()) {
        return {};
    }
    return oracle::CandidateScores(j.at("values").get<std::vector<double>>(), j.value("normalized", false));
}

Json segment_json(const std::optional<corpus::SegmentKind>& s) {
    return s ? Json(std::string(corpus::segment_name(*s))) : Json(nullptr);
}

std::optional<corpus::SegmentKind> segment_from(const Json& j) {
    if (j.is_null()) {
        return std::nullopt;
    }
    return corpus::parse_segment(j.get<std::string>());
}

}  // namespace

Json to_json(const attack::AttackResult& r) {
    Json subs = Json::array();
    for (const attack::Substitution& s : r.substitutions) {
        subs.push_back({{"position", s.position},
                        {"original", s.original},
                        {"replacement", s.replacement},
                        {"provider_score", s.provider_score},
                        {"similarity", s.similarity},
                        {"gt_prob_after", s.gt_prob_after},
                        {"goal_reached", s.goal_reached},
                        {"segment", segment_json(s.segment)}});
    }
    Json j = {{"instance_id", r.instance_id},
              {"image_id", r.image_id},
              {"round_id", r.round_id},
              {"target", std::string(attack::target_name(r.target))},
              {"order", std::string(attack::word_order_name(r.order))},
              {"attempted", r.attempted},
              {"skip_reason", r.skip_reason},
              {"success", r.success},
              {"original_text", r.original_text},
              {"adversarial_text", r.adversarial_text},
              {"target_word_count", r.target_word_count},
              {"substitutions", subs},
              {"queries", r.queries},
              {"gt_index", r.gt_index},
              {"gt_prob_before", r.gt_prob_before},
              {"gt_prob_after", r.gt_prob_after},
              {"similarity_final", r.similarity_final},
              {"attacked_segment", segment_json(r.attacked_segment)},
              {"answer_before", r.answer_before},
              {"answer_after", r.answer_after},
              {"word_order", r.word_order},
              {"scores_before", r.scores_before.size() ? scores_json(r.scores_before) : Json(nullptr)},
              {"scores_after", r.scores_after.size() ? scores_json(r.scores_after) : Json(nullptr)},
              {"relevance", r.relevance ? Json(*r.relevance) : Json(nullptr)}};
    if (!r.error.empty()) {
        j["error"] = r.error;
    }
    return j;
}

attack::AttackResult result_from_json(const Json& j) {
    attack::AttackResult r;
    try {
        r.instance_id = j.at("instance_id").get<std::string>();
        r.image_id = j.at("image_id").get<std::string>();
        r.round_id = j.at("round_id").get<std::size_t>();
        r.target = attack::parse_target(j.at("target").get<std::string>());
        r.order = attack::parse_word_order(j.at("order").get<std::string>());
        r.attempted = j.at("attempted").get<bool>();
        r.skip_reason = j.at("skip_reason").get<std::string>();
        r.success = j.at("success").get<bool>();
        r.original_text = j.at("original_text").get<std::string>();
        r.adversarial_text = j.at("adversarial_text").get<std::string>();
        r.target_word_count = j.at("target_word_count").get<std::size_t>();
        for (const Json& s : j.at("substitutions")) {
            attack::Substitution sub;
            sub.position = s.at("position").get<std::size_t>();
            sub.original = s.at("original").get<std::string>();
            sub.replacement = s.at("replacement").get<std::string>();
            sub.provider_score = s.at("provider_score").get<double>();
            sub.similarity = s.at("similarity").get<double>();
            sub.gt_prob_after = s.at("gt_prob_after").get<double>();
            sub.goal_reached = s.at("goal_reached").get<bool>();
            sub.segment = segment_from(s.at("segment"));
            r.substitutions.push_back(std::move(sub));
        }
        r.queries = j.at("queries").get<std::size_t>();
        r.gt_index = j.at("gt_index").get<std::size_t>();
        r.gt_prob_before = j.at("gt_prob_before").get<double>();
        r.gt_prob_after = j.at("gt_prob_after").get<double>();
        r.similarity_final = j.at("similarity_final").get<double>();
        r.attacked_segment = segment_from(j.at("attacked_segment"));
        r.answer_before = j.at("answer_before").get<std::string>();
        r.answer_after = j.at("answer_after").get<std::string>();
        r.word_order = j.at("word_order").get<std::vector<std::size_t>>();
        r.scores_before = scores_from(j.at("scores_before"));
        r.scores_after = scores_from(j.at("scores_after"));
        if (!j.at("relevance").is_null()) {
            r.relevance = j.at("relevance").get<std::vector<double>>();
        }
        r.error = j.value("error", std::string());
    } catch (const Json::exception& e) {
        throw ParseError(std::string("attack result: ") + e.what());
    }
    return r;
}

std::string to_jsonl(const std::vector<attack::AttackResult>& results) {
    std::string out;
    for (const attack::AttackResult& r : results) {
        out += to_json(r).dump();
        out += '\n';
    }
    return out;
}

std::vector<attack::AttackResult> parse_jsonl(std::string_view text) {
    std::vector<attack::AttackResult> out;
    std::istringstream in{std::string(text)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        try {
            out.push_back(result_from_json(Json::parse(line)));
        } catch (const Json::parse_error& e) {
            throw ParseError("results line " + std::to_string(line_no) + ": " + e.what());
        } catch (const ParseError& e) {
            throw ParseError("results line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return out;
}

std::vector<attack::AttackResult> load_jsonl(const std::filesystem::path& path) { return parse_jsonl(read_file(path)); }

}  // namespace vdattack::results_io
