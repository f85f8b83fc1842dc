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

#include <sstream>

#include "vdattack/lexsub.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::lexsub {

Stopwords Stopwords::load(const std::filesystem::path& path) {
    std::istringstream in(read_file(path));
    std::unordered_set<std::string> words;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line.erase(hash);
        }
        std::istringstream fields(line);
        std::string w;
        while (fields >> w) {
            words.insert(to_lower(w));
        }
    }
    return Stopwords(std::move(words));
}

const Stopwords& Stopwords::bundled() {
    static const Stopwords instance = load(data_file("stopwords.txt"));
    return instance;
}

bool Stopwords::contains(std::string_view word) const {
    if (is_punctuation(word) || is_numeral(word)) {
        return true;
    }
    return words_.contains(to_lower(word));
}

}  // namespace vdattack::lexsub
