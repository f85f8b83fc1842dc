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

#include "vdattack/encoder.hpp"

#include <algorithm>
#include <cmath>

#include "vdattack/error.hpp"

namespace vdattack::encoder {

namespace {

SentenceVector normalized(std::vector<double> v) {
    double norm = 0.0;
    for (double x : v) {
        norm += x * x;
    }
    norm = std::sqrt(norm);
    SentenceVector out;
    if (norm == 0.0 || !std::isfinite(norm)) {
        std::fill(v.begin(), v.end(), 0.0);
        out.vector = std::move(v);
        out.is_zero = true;
        return out;
    }
    for (double& x : v) {
        x /= norm;
    }
    out.vector = std::move(v);
    out.is_zero = false;
    return out;
}

}  // namespace

SentenceVector encode_sentence(std::string_view text, const lexsub::EmbeddingTable& table) {
    std::vector<double> sum(table.dim(), 0.0);
    std::size_t found = 0;
    for (const lexsub::Token& t : lexsub::tokenize(text)) {
        if (t.is_punct) {
            continue;
        }
        if (auto v = table.vector(t.lower)) {
            for (std::size_t i = 0; i < sum.size(); ++i) {
                sum[i] += (*v)[i];
            }
            ++found;
        }
    }
    if (found == 0) {
        return SentenceVector{std::vector<double>(table.dim(), 0.0), true};
    }
    for (double& x : sum) {
        x /= static_cast<double>(found);
    }
    return normalized(std::move(sum));
}

SentenceVector ProtocolEncoder::encode(std::string_view text) const {
    const transport::Json request = {{"protocol_version", transport::kProtocolVersion}, {"text", std::string(text)}};
    const transport::Json reply = transport_->call(request);
    if (!reply.contains("vector") || !reply.at("vector").is_array()) {
        throw ProtocolError("encoder: reply lacks a 'vector' array");
    }
    std::vector<double> v;
    for (const auto& x : reply.at("vector")) {
        if (!x.is_number()) {
            throw ProtocolError("encoder: non-numeric vector component");
        }
        v.push_back(x.get<double>());
    }
    if (v.empty()) {
        throw ProtocolError("encoder: empty vector");
    }
    return normalized(std::move(v));
}

double cosine(const SentenceVector& a, const SentenceVector& b) {
    if (a.is_zero || b.is_zero) {
        return 0.0;
    }
    if (a.vector.size() != b.vector.size()) {
        throw ProtocolError("encoder: vector dimensions differ");
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < a.vector.size(); ++i) {
        dot += a.vector[i] * b.vector[i];
    }
    return std::clamp(dot, -1.0, 1.0);
}

double semantic_similarity(std::string_view a, std::string_view b, const SentenceEncoder& encoder) {
    if (a == b) {
        // Same text, same vector; skip the round trip and float noise.
        const SentenceVector v = encoder.encode(a);
        return v.is_zero ? 0.0 : 1.0;
    }
    return cosine(encoder.encode(a), encoder.encode(b));
}

}  // namespace vdattack::encoder
