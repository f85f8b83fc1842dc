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

#include <cmath>

#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"

namespace vdattack::lexsub {

std::vector<SynonymCandidate> EmbeddingProvider::candidates(std::span<const Token> tokens, std::size_t position,
                                                            std::size_t k) const {
    if (position >= tokens.size()) {
        throw PreconditionError("embedding provider: position out of range");
    }
    std::vector<SynonymCandidate> out;
    for (SynonymCandidate& c : embedding_candidates(tokens[position].lower, table_, k)) {
        if (!usable_fill(c.word, tokens[position].lower)) {
            continue;
        }
        c.pos = tagger_.tag_word(c.word);
        out.push_back(std::move(c));
    }
    return out;
}

bool usable_fill(std::string_view word, std::string_view original) {
    if (word.empty() || word.starts_with("##") || (word.starts_with('[') && word.ends_with(']'))) {
        return false;
    }
    const auto tokens = tokenize(word);
    if (tokens.size() != 1 || tokens.front().is_punct) {
        return false;
    }
    return to_lower(word) != to_lower(original);
}

std::vector<SynonymCandidate> MlmProvider::candidates(std::span<const Token> tokens, std::size_t position,
                                                      std::size_t k) const {
    if (position >= tokens.size()) {
        throw PreconditionError("mlm provider: position out of range");
    }
    const Token& target = tokens[position];
    if (target.is_stopword || target.is_punct) {
        throw PreconditionError("mlm provider: masked token '" + target.surface + "' is a stopword");
    }
    transport::Json words = transport::Json::array();
    for (std::size_t i = 0; i < tokens.size(); ++i) {
        words.push_back(i == position ? std::string(kMaskToken) : tokens[i].surface);
    }
    const transport::Json request = {{"protocol_version", transport::kProtocolVersion},
                                     {"tokens", words},
                                     {"mask_index", position},
                                     {"top_k", k}};
    const transport::Json reply = transport_->call(request);
    if (!reply.contains("candidates") || !reply.at("candidates").is_array()) {
        throw ProtocolError("mlm provider: reply lacks a 'candidates' array");
    }
    std::vector<SynonymCandidate> out;
    for (const auto& c : reply.at("candidates")) {
        if (!c.is_object() || !c.contains("word") || !c.at("word").is_string() || !c.contains("score") ||
            !c.at("score").is_number()) {
            throw ProtocolError("mlm provider: malformed candidate " + c.dump());
        }
        const auto word = c.at("word").get<std::string>();
        const double score = c.at("score").get<double>();
        if (!std::isfinite(score) || !usable_fill(word, target.lower)) {
            continue;
        }
        out.push_back({to_lower(word), score, tagger_.tag_word(word)});
        if (out.size() == k) {
            break;
        }
    }
    return out;
}

}  // namespace vdattack::lexsub
