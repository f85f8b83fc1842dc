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

#include <cstddef>
#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "vdattack/transport.hpp"

namespace vdattack::lexsub {

enum class PosTag { kNoun, kVerb, kAdj, kAdv, kNum, kPron, kDet, kAdp, kOther };

std::string_view pos_name(PosTag tag);
std::optional<PosTag> parse_pos(std::string_view name);

struct Token {
    std::string surface;
    std::string lower;
    /// Byte offsets [begin, end) into the source text.
    std::size_t begin = 0;
    std::size_t end = 0;
    bool is_stopword = false;
    bool is_punct = false;
    PosTag pos = PosTag::kOther;
};

/// Splits on whitespace and ASCII punctuation. Apostrophes between two word
/// characters stay inside the word ("what's"). Bytes >= 0x80 count as word characters.
/// Stopword and POS fields are left at their defaults.
std::vector<Token> tokenize(std::string_view text);

std::string to_lower(std::string_view text);
bool is_punctuation(std::string_view word);
bool is_numeral(std::string_view word);

class Stopwords {
public:
    /// Bundled list (data/stopwords.txt).
    static const Stopwords& bundled();
    static Stopwords load(const std::filesystem::path& path);
    explicit Stopwords(std::unordered_set<std::string> words) : words_(std::move(words)) {}

    /// Case-insensitive membership. Punctuation and numerals always count as stopwords.
    bool contains(std::string_view word) const;
    std::size_t size() const { return words_.size(); }

private:
    std::unordered_set<std::string> words_;
};

class PosTagger {
public:
    virtual ~PosTagger() = default;
    /// Assigns `pos` to every token in place.
    virtual void tag(std::span<Token> tokens) const = 0;
    /// Tag of a word seen in isolation.
    virtual PosTag tag_word(std::string_view word) const;
};

/// Most-frequent-tag lexicon with suffix rules for unknown words.
class LexiconTagger final : public PosTagger {
public:
    static const LexiconTagger& bundled();
    /// Lexicon file: "word<TAB>TAG" per line, '#' comments.
    static LexiconTagger load(const std::filesystem::path& path);
    explicit LexiconTagger(std::unordered_map<std::string, PosTag> lexicon) : lexicon_(std::move(lexicon)) {}

    void tag(std::span<Token> tokens) const override;
    PosTag tag_word(std::string_view word) const override;
    bool in_lexicon(std::string_view word) const;

private:
    std::unordered_map<std::string, PosTag> lexicon_;
};

/// Tokenizes, then fills stopword flags and POS tags.
std::vector<Token> analyze(std::string_view text, const Stopwords& stopwords, const PosTagger& tagger);

/// Word vectors, unit-normalized at construction.
class EmbeddingTable {
public:
    EmbeddingTable() = default;
    /// Throws ValidationError on dimension mismatch, empty vocabulary or zero vectors.
    EmbeddingTable(std::vector<std::string> words, std::vector<std::vector<double>> vectors);

    /// Whitespace-separated text: a word followed by d floats per line. A leading
    /// "<count> <dim>" header line is skipped.
    static EmbeddingTable load(const std::filesystem::path& path);
    static EmbeddingTable parse(std::string_view text, std::string_view source_name = "<memory>");
    /// Bundled 2-d fixture (data/embeddings_fixture.txt).
    static const EmbeddingTable& fixture();

    std::size_t dim() const { return dim_; }
    std::size_t size() const { return words_.size(); }
    const std::vector<std::string>& words() const { return words_; }
    /// Lookup is on the lowercase form.
    std::optional<std::span<const double>> vector(std::string_view word) const;
    std::optional<double> cosine(std::string_view a, std::string_view b) const;

private:
    std::size_t dim_ = 0;
    std::vector<std::string> words_;
    std::vector<double> data_;  // row-major, size() x dim()
    std::unordered_map<std::string, std::size_t> index_;
};

struct SynonymCandidate {
    std::string word;
    /// Cosine for the embedding provider, model score for the masked-LM provider.
    double provider_score = 0.0;
    PosTag pos = PosTag::kOther;
};

/// Top-k vocabulary words by cosine, excluding the word itself; ties by word.
/// Empty when the word is out of vocabulary.
std::vector<SynonymCandidate> embedding_candidates(std::string_view word, const EmbeddingTable& table,
                                                   std::size_t k);

class SynonymProvider {
public:
    virtual ~SynonymProvider() = default;
    /// Candidates for replacing tokens[position]; the original word is never returned.
    virtual std::vector<SynonymCandidate> candidates(std::span<const Token> tokens, std::size_t position,
                                                     std::size_t k) const = 0;
};

class EmbeddingProvider final : public SynonymProvider {
public:
    EmbeddingProvider(const EmbeddingTable& table, const PosTagger& tagger) : table_(table), tagger_(tagger) {}
    std::vector<SynonymCandidate> candidates(std::span<const Token> tokens, std::size_t position,
                                             std::size_t k) const override;

private:
    const EmbeddingTable& table_;
    const PosTagger& tagger_;
};

inline constexpr std::string_view kMaskToken = "[MASK]";

/// Masked-LM fill candidates from an external provider.
///
/// Request {protocol_version, tokens, mask_index, top_k}; reply {candidates: [{word, score}]}.
class MlmProvider final : public SynonymProvider {
public:
    MlmProvider(std::shared_ptr<transport::JsonTransport> transport, const PosTagger& tagger)
        : transport_(std::move(transport)), tagger_(tagger) {}

    /// Throws PreconditionError when tokens[position] is a stopword or punctuation.
    std::vector<SynonymCandidate> candidates(std::span<const Token> tokens, std::size_t position,
                                             std::size_t k) const override;

private:
    std::shared_ptr<transport::JsonTransport> transport_;
    const PosTagger& tagger_;
};

/// Drops sub-word pieces ("##ing", "[UNK]"), punctuation-only strings, multi-token
/// strings, and anything equal to `original` ignoring case.
bool usable_fill(std::string_view word, std::string_view original);

}  // namespace vdattack::lexsub
