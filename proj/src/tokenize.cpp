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

#include <cctype>

#include "vdattack/lexsub.hpp"

namespace vdattack::lexsub {

namespace {

bool is_word_byte(unsigned char c) { return c >= 0x80 || std::isalnum(c) != 0; }

}  // namespace

std::string to_lower(std::string_view text) {
    std::string out(text);
    for (char& c : out) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return out;
}

bool is_punctuation(std::string_view word) {
    if (word.empty()) {
        return false;
    }
    for (unsigned char c : word) {
        if (c >= 0x80 || std::ispunct(c) == 0) {
            return false;
        }
    }
    return true;
}

bool is_numeral(std::string_view word) {
    if (word.empty()) {
        return false;
    }
    for (unsigned char c : word) {
        if (std::isdigit(c) == 0) {
            return false;
        }
    }
    return true;
}

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    const std::size_t n = text.size();
    std::size_t i = 0;
    auto emit = [&](std::size_t b, std::size_t e) {
        Token t;
        t.surface = std::string(text.substr(b, e - b));
        t.lower = to_lower(t.surface);
        t.begin = b;
        t.end = e;
        t.is_punct = is_punctuation(t.surface);
        tokens.push_back(std::move(t));
    };
    while (i < n) {
        const auto c = static_cast<unsigned char>(text[i]);
        if (std::isspace(c) != 0) {
            ++i;
            continue;
        }
        if (!is_word_byte(c)) {
            emit(i, i + 1);
            ++i;
            continue;
        }
        std::size_t j = i;
        while (j < n) {
            const auto cj = static_cast<unsigned char>(text[j]);
            if (is_word_byte(cj)) {
                ++j;
            } else if (cj == '\'' && j + 1 < n && is_word_byte(static_cast<unsigned char>(text[j + 1]))) {
                j += 2;
            } else {
                break;
            }
        }
        emit(i, j);
        i = j;
    }
    return tokens;
}

std::vector<Token> analyze(std::string_view text, const Stopwords& stopwords, const PosTagger& tagger) {
    std::vector<Token> tokens = tokenize(text);
    for (Token& t : tokens) {
        t.is_stopword = stopwords.contains(t.lower);
    }
    tagger.tag(tokens);
    return tokens;
}

}  // namespace vdattack::lexsub
