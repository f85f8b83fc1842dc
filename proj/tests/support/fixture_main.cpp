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

// Writes the synthetic fixture corpus as toy JSONL.
#include <iostream>
#include <string>

#include "fixtures.hpp"
#include "vdattack/corpus.hpp"

int main(int argc, char** argv) {
    if (argc < 2) {
        std::cerr << "usage: vdattack_fixture <out.jsonl> [n_dialogs] [seed]\n";
        return 2;
    }
    const std::size_t n = argc > 2 ? std::stoul(argv[2]) : 40;
    const std::uint64_t seed = argc > 3 ? std::stoull(argv[3]) : 2024;
    vdattack::corpus::save_toy(vdattack::testing::fixture_corpus(n, seed), argv[1]);
    return 0;
}
