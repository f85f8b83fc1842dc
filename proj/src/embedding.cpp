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

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::lexsub {

EmbeddingTable::EmbeddingTable(std::vector<std::string> words, std::vector<std::vector<double>> vectors) {
    if (words.size() != vectors.size()) {
        throw ValidationError("embedding table: word and vector counts differ");
    }
    if (words.empty()) {
        throw ValidationError("embedding table: empty vocabulary");
    }
    dim_ = vectors.front().size();
    if (dim_ == 0) {
        throw ValidationError("embedding table: zero dimension");
    }
    data_.reserve(words.size() * dim_);
    for (std::size_t i = 0; i < words.size(); ++i) {
        const auto& v = vectors[i];
        if (v.size() != dim_) {
            throw ValidationError("embedding table: '" + words[i] + "' has dimension " + std::to_string(v.size()) +
                                  ", expected " + std::to_string(dim_));
        }
        double norm = 0.0;
        for (double x : v) {
            if (!std::isfinite(x)) {
                throw ValidationError("embedding table: non-finite component for '" + words[i] + "'");
            }
            norm += x * x;
        }
        norm = std::sqrt(norm);
        if (norm == 0.0) {
            throw ValidationError("embedding table: zero vector for '" + words[i] + "'");
        }
        std::string lower = to_lower(words[i]);
        if (index_.contains(lower)) {
            throw ValidationError("embedding table: duplicate word '" + words[i] + "'");
        }
        index_.emplace(lower, words_.size());
        words_.push_back(std::move(lower));
        for (double x : v) {
            data_.push_back(x / norm);
        }
    }
}

EmbeddingTable EmbeddingTable::parse(std::string_view text, std::string_view source_name) {
    std::istringstream in{std::string(text)};
    std::vector<std::string> words;
    std::vector<std::vector<double>> vectors;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        std::istringstream fields(line);
        std::vector<std::string> parts;
        std::string part;
        while (fields >> part) {
            parts.push_back(part);
        }
        if (parts.empty() || parts.front().starts_with('#')) {
            continue;
        }
        const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
        if (line_no == 1 && parts.size() == 2 && std::all_of(parts[0].begin(), parts[0].end(), ::isdigit) &&
            std::all_of(parts[1].begin(), parts[1].end(), ::isdigit)) {
            continue;  // word2vec-style "<count> <dim>" header
        }
        if (parts.size() < 2) {
            throw ParseError(where + ": expected a word followed by its vector");
        }
        std::vector<double> v;
        for (std::size_t i = 1; i < parts.size(); ++i) {
            double x = 0.0;
            const auto& s = parts[i];
            auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), x);
            if (ec != std::errc() || ptr != s.data() + s.size()) {
                throw ParseError(where + ": bad number '" + s + "'");
            }
            v.push_back(x);
        }
        words.push_back(parts.front());
        vectors.push_back(std::move(v));
    }
    try {
        return EmbeddingTable(std::move(words), std::move(vectors));
    } catch (const ValidationError& e) {
        throw ValidationError(std::string(source_name) + ": " + e.what());
    }
}

EmbeddingTable EmbeddingTable::load(const std::filesystem::path& path) {
    return parse(read_file(path), path.string());
}

const EmbeddingTable& EmbeddingTable::fixture() {
    static const EmbeddingTable instance = load(data_file("embeddings_fixture.txt"));
    return instance;
}

std::optional<std::span<const double>> EmbeddingTable::vector(std::string_view word) const {
    auto it = index_.find(to_lower(word));
    if (it == index_.end()) {
        return std::nullopt;
    }
    return std::span<const double>(data_.data() + it->second * dim_, dim_);
}

std::optional<double> EmbeddingTable::cosine(std::string_view a, std::string_view b) const {
    auto va = vector(a);
    auto vb = vector(b);
    if (!va || !vb) {
        return std::nullopt;
    }
    double dot = 0.0;
    for (std::size_t i = 0; i < dim_; ++i) {
        dot += (*va)[i] * (*vb)[i];
    }
    return dot;
}

std::vector<SynonymCandidate> embedding_candidates(std::string_view word, const EmbeddingTable& table,
                                                   std::size_t k) {
    if (k == 0) {
        throw PreconditionError("embedding_candidates: k must be >= 1");
    }
    const auto query = table.vector(word);
    if (!query) {
        return {};
    }
    const std::string self = to_lower(word);
    std::vector<SynonymCandidate> all;
    all.reserve(table.size());
    for (const std::string& w : table.words()) {
        if (w == self) {
            continue;
        }
        const auto v = *table.vector(w);
        double dot = 0.0;
        for (std::size_t i = 0; i < table.dim(); ++i) {
            dot += (*query)[i] * v[i];
        }
        all.push_back({w, dot, PosTag::kOther});
    }
    const std::size_t n = std::min(k, all.size());
    auto better = [](const SynonymCandidate& a, const SynonymCandidate& b) {
        if (a.provider_score != b.provider_score) {
            return a.provider_score > b.provider_score;
        }
        return a.word < b.word;
    };
    std::partial_sort(all.begin(), all.begin() + static_cast<std::ptrdiff_t>(n), all.end(), better);
    all.resize(n);
    return all;
}

}  // namespace vdattack::lexsub
