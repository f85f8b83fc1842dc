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


#include "reference.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace vdattack::testing::reference {

std::vector<std::size_t> ranking(const std::vector<double>& scores) {
    std::vector<std::size_t> order(scores.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        if (scores[a] != scores[b]) {
            return scores[a] > scores[b];
        }
        return a < b;
    });
    return order;
}

std::size_t rank_of(const std::vector<double>& scores, std::size_t gt) {
    const auto order = ranking(scores);
    return static_cast<std::size_t>(std::find(order.begin(), order.end(), gt) - order.begin()) + 1;
}

double recall_at_k(const std::vector<std::size_t>& ranks, std::size_t k) {
    double hit = 0;
    for (std::size_t r : ranks) {
        hit += r <= k ? 1 : 0;
    }
    return hit / static_cast<double>(ranks.size());
}

double mrr(const std::vector<std::size_t>& ranks) {
    double s = 0;
    for (std::size_t r : ranks) {
        s += 1.0 / static_cast<double>(r);
    }
    return s / static_cast<double>(ranks.size());
}

double ndcg(const std::vector<double>& scores, const std::vector<double>& relevance) {
    const auto order = ranking(scores);
    std::size_t k = 0;
    for (double r : relevance) {
        k += r > 0 ? 1 : 0;
    }
    std::vector<double> ideal = relevance;
    std::sort(ideal.rbegin(), ideal.rend());
    double dcg = 0;
    double idcg = 0;
    for (std::size_t i = 0; i < k; ++i) {
        dcg += relevance[order[i]] / std::log2(static_cast<double>(i) + 2.0);
        idcg += ideal[i] / std::log2(static_cast<double>(i) + 2.0);
    }
    return dcg / idcg;
}

double softmax_gt(const std::vector<double>& scores, std::size_t gt) {
    long double z = 0;
    for (double s : scores) {
        z += std::exp(static_cast<long double>(s));
    }
    return static_cast<double>(std::exp(static_cast<long double>(scores[gt])) / z);
}

double perplexity(const std::vector<double>& probs) {
    long double h = 0;
    for (double p : probs) {
        h -= std::log2(static_cast<long double>(p));
    }
    return static_cast<double>(std::pow(2.0L, h / static_cast<long double>(probs.size())));
}

std::vector<RandomRound> random_rounds(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<int> level(0, 12);
    std::uniform_int_distribution<std::size_t> idx(0, 99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::vector<RandomRound> out;
    for (std::size_t i = 0; i < n; ++i) {
        RandomRound r;
        for (std::size_t c = 0; c < 100; ++c) {
            r.scores.push_back(unit(rng) < 0.5 ? level(rng) * 0.25 : unit(rng) * 3.0);
            const double u = unit(rng);
            r.relevance.push_back(u < 0.85 ? 0.0 : (u < 0.95 ? 0.5 : 1.0));
        }
        r.gt = idx(rng);
        r.relevance[r.gt] = 1.0;
        out.push_back(std::move(r));
    }
    return out;
}

}  // namespace vdattack::testing::reference
