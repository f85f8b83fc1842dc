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
#include <cstdint>
#include <exception>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "vdattack/constraints.hpp"
#include "vdattack/corpus.hpp"
#include "vdattack/encoder.hpp"
#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/oracle.hpp"

namespace vdattack::attack {

enum class Target { kQuestion, kHistory };
enum class WordOrder { kImportance, kRandom };

std::string_view target_name(Target target);
Target parse_target(std::string_view name);
std::string_view word_order_name(WordOrder order);
WordOrder parse_word_order(std::string_view name);

inline constexpr std::size_t kDefaultTopK = 50;

struct AttackConfig {
    /// Synonym candidates requested per attacked word.
    std::size_t k = kDefaultTopK;
    constraints::ConstraintConfig constraints;
    Target target = Target::kQuestion;
    WordOrder order = WordOrder::kImportance;
    /// Unlimited when empty.
    std::optional<std::size_t> max_substitutions;
    /// Drives the random word order only.
    std::uint64_t seed = 0;

    void validate() const;
};

/// Read-only services shared by all attacks.
struct AttackContext {
    const lexsub::SynonymProvider& provider;
    const lexsub::Stopwords& stopwords;
    const lexsub::PosTagger& tagger;
    const encoder::SentenceEncoder& encoder;
    /// Needed only when the grammar constraint is on.
    const constraints::GrammarChecker* grammar = nullptr;
};

/// The text under attack: the question, or the history as caption/question/answer
/// segments joined by single spaces. Tokens carry stopword flags and POS tags and
/// byte spans into text().
class TargetText {
public:
    static TargetText question(const corpus::AttackInstance& instance, const lexsub::Stopwords& stopwords,
                               const lexsub::PosTagger& tagger);
    static TargetText history(const corpus::AttackInstance& instance, const lexsub::Stopwords& stopwords,
                              const lexsub::PosTagger& tagger);

    Target target() const { return target_; }
    const std::string& text() const { return text_; }
    const std::vector<lexsub::Token>& tokens() const { return tokens_; }
    /// Number of non-punctuation tokens.
    std::size_t word_count() const;
    /// Segment holding token `position` (history targets only).
    std::optional<corpus::SegmentKind> segment_of(std::size_t position) const;

    TargetText substitute(std::size_t position, std::string_view word) const;
    TargetText remove(std::size_t position) const;

    /// Scores the instance with this text in place of the question or history.
    oracle::CandidateScores score(oracle::Oracle& oracle, const corpus::AttackInstance& instance) const;

private:
    struct Segment {
        std::optional<corpus::SegmentKind> kind;
        std::string text;
    };

    TargetText(Target target, std::vector<Segment> segments, const lexsub::Stopwords& stopwords,
               const lexsub::PosTagger& tagger);
    TargetText with_segment_edit(std::size_t position, std::string_view replacement, bool remove) const;

    Target target_;
    std::vector<Segment> segments_;
    const lexsub::Stopwords* stopwords_;
    const lexsub::PosTagger* tagger_;
    std::string text_;
    std::vector<lexsub::Token> tokens_;
    std::vector<std::size_t> token_segment_;
    std::vector<std::size_t> segment_offset_;
};

/// True when the token may be attacked under the given stopword policy. Punctuation
/// and numerals never are.
bool attackable(const lexsub::Token& token, bool use_stopwords);

struct WordImportance {
    std::size_t position = 0;
    double importance = 0.0;

    friend bool operator==(const WordImportance&, const WordImportance&) = default;
};

/// Deletion-based importance: p_orig(GT) − p_del(GT), +1 when the deletion moves top-1
/// off the GT. Sorted descending, ties by position. Issues one query per attackable token;
/// `baseline` is the already-scored unperturbed text.
std::vector<WordImportance> word_importance(const corpus::AttackInstance& instance, oracle::Oracle& oracle,
                                            const TargetText& target, const oracle::CandidateScores& baseline,
                                            bool use_stopwords = true);

struct Substitution {
    std::size_t position = 0;
    std::string original;
    std::string replacement;
    double provider_score = 0.0;
    /// Similarity of the full text after this substitution to the unperturbed text.
    double similarity = 0.0;
    double gt_prob_after = 0.0;
    /// Whether this commit reached the attack goal.
    bool goal_reached = false;
    std::optional<corpus::SegmentKind> segment;

    friend bool operator==(const Substitution&, const Substitution&) = default;
};

struct AttackResult {
    std::string instance_id;
    std::string image_id;
    std::size_t round_id = 0;
    Target target = Target::kQuestion;
    WordOrder order = WordOrder::kImportance;
    /// False when the victim was already wrong (question mode) or nothing was attackable.
    bool attempted = false;
    std::string skip_reason;
    bool success = false;
    std::string original_text;
    std::string adversarial_text;
    std::size_t target_word_count = 0;
    std::vector<Substitution> substitutions;
    std::size_t queries = 0;
    std::size_t gt_index = 0;
    oracle::CandidateScores scores_before;
    oracle::CandidateScores scores_after;
    double gt_prob_before = 0.0;
    double gt_prob_after = 0.0;
    double similarity_final = 1.0;
    std::optional<corpus::SegmentKind> attacked_segment;
    std::string answer_before;
    std::string answer_after;
    std::optional<std::vector<double>> relevance;
    /// Visiting order of attackable positions.
    std::vector<std::size_t> word_order;
    /// Set when the attack was aborted by a victim or service failure.
    std::string error;
};

/// Raised when an oracle or service call fails mid-attack; carries what was done so far.
class AttackAborted : public Error {
public:
    AttackAborted(AttackResult partial, std::exception_ptr cause, const std::string& what)
        : Error(what), partial_(std::move(partial)), cause_(std::move(cause)) {}

    const AttackResult& partial() const { return partial_; }
    /// Original TransportError / ProtocolError.
    void rethrow_cause() const { std::rethrow_exception(cause_); }
    bool is_transport() const;

private:
    AttackResult partial_;
    std::exception_ptr cause_;
};

/// Dispatches on cfg.target and cfg.order.
AttackResult run_attack(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                        const AttackContext& context, const AttackConfig& cfg);

/// Success once top-1 leaves the GT. Skips instances the victim already gets wrong.
AttackResult attack_question(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                             const AttackContext& context, AttackConfig cfg);

/// Success once p(GT) strictly decreases; records the attacked history segment.
AttackResult attack_history(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                            const AttackContext& context, AttackConfig cfg);

/// attack_question with a seeded uniform shuffle instead of importance order.
AttackResult random_word_attack(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                                const AttackContext& context, AttackConfig cfg);

/// Fisher-Yates over [0, n) driven by a 64-bit Mersenne twister; stable across platforms.
std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed);

}  // namespace vdattack::attack
