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

#include <memory>
#include <string_view>
#include <vector>

#include "vdattack/lexsub.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::encoder {

struct SentenceVector {
    std::vector<double> vector;
    /// Set when no in-vocabulary token existed; `vector` is then all zeros.
    bool is_zero = true;
};

class SentenceEncoder {
public:
    virtual ~SentenceEncoder() = default;
    virtual SentenceVector encode(std::string_view text) const = 0;
};

/// Mean of the in-vocabulary, non-punctuation word vectors, L2-normalized.
SentenceVector encode_sentence(std::string_view text, const lexsub::EmbeddingTable& table);

class MeanEmbeddingEncoder final : public SentenceEncoder {
public:
    explicit MeanEmbeddingEncoder(const lexsub::EmbeddingTable& table) : table_(table) {}
    SentenceVector encode(std::string_view text) const override { return encode_sentence(text, table_); }

private:
    const lexsub::EmbeddingTable& table_;
};

/// External encoder: {protocol_version, text} -> {vector: [d numbers]}.
/// Returned vectors are normalized here; a zero vector maps to is_zero.
class ProtocolEncoder final : public SentenceEncoder {
public:
    explicit ProtocolEncoder(std::shared_ptr<transport::JsonTransport> transport)
        : transport_(std::move(transport)) {}
    SentenceVector encode(std::string_view text) const override;

private:
    std::shared_ptr<transport::JsonTransport> transport_;
};

double cosine(const SentenceVector& a, const SentenceVector& b);

/// Cosine of the two sentence vectors; 0 when either side is degenerate.
double semantic_similarity(std::string_view a, std::string_view b, const SentenceEncoder& encoder);

}  // namespace vdattack::encoder
