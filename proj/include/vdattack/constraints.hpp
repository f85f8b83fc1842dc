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
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "vdattack/encoder.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::constraints {

inline constexpr double kDefaultEpsilon = 0.5;

struct ConstraintConfig {
    bool use_stopwords = true;
    bool use_pos = true;
    /// Sentence-similarity threshold; disabled when empty.
    std::optional<double> epsilon = kDefaultEpsilon;
    bool use_grammar = false;

    /// Throws PreconditionError when epsilon lies outside [0,1].
    void validate() const;

    /// Everything off.
    static ConstraintConfig raw();
    /// Parses "none" or a comma list over {stopwords, pos, sim, grammar}; `epsilon`
    /// is used when "sim" is listed.
    static ConstraintConfig parse(std::string_view list, double epsilon = kDefaultEpsilon);
    std::string describe() const;

    friend bool operator==(const ConstraintConfig&, const ConstraintConfig&) = default;
};

struct Violation {
    std::string rule_id;
    /// Byte span in the checked text.
    std::size_t begin = 0;
    std::size_t end = 0;

    friend bool operator==(const Violation&, const Violation&) = default;
};

class GrammarChecker {
public:
    virtual ~GrammarChecker() = default;
    virtual std::vector<Violation> check(std::string_view text) const = 0;
};

/// Rule ids emitted by the builtin checker.
inline constexpr std::string_view kRuleArticle = "article_agreement";
inline constexpr std::string_view kRuleDuplicate = "duplicate_word";
inline constexpr std::string_view kRuleDoubleComparative = "double_comparative";

/// a/an agreement by vowel sound, immediate duplicate words, and "more/most" followed
/// by an inflected comparative or superlative.
class RuleGrammarChecker final : public GrammarChecker {
public:
    explicit RuleGrammarChecker(const lexsub::PosTagger& tagger) : tagger_(tagger) {}
    std::vector<Violation> check(std::string_view text) const override;

private:
    const lexsub::PosTagger& tagger_;
};

/// External checker: {protocol_version, text} -> {violations: [{rule_id, span: [b, e]}]}.
class ProtocolGrammarChecker final : public GrammarChecker {
public:
    explicit ProtocolGrammarChecker(std::shared_ptr<transport::JsonTransport> transport)
        : transport_(std::move(transport)) {}
    std::vector<Violation> check(std::string_view text) const override;

private:
    std::shared_ptr<transport::JsonTransport> transport_;
};

std::vector<Violation> grammar_check(std::string_view text, const GrammarChecker& checker);

/// True when `after` has more violations of some rule than `before`.
bool introduces_violation(const std::vector<Violation>& before, const std::vector<Violation>& after);

enum class RejectReason { kNone, kStopwordSource, kPosMismatch, kLowSimilarity, kGrammar };

std::string_view reason_name(RejectReason reason);

struct Decision {
    RejectReason reason = RejectReason::kNone;
    /// Similarity to the anchor text; computed whenever the similarity stage was reached.
    std::optional<double> similarity;

    bool admitted() const { return reason == RejectReason::kNone; }
};

/// The admissibility checks in order: stopword source, POS, similarity, grammar.
class ConstraintStack {
public:
    /// `encoder` is required when epsilon is set, `grammar` when use_grammar is set.
    ConstraintStack(ConstraintConfig config, const encoder::SentenceEncoder* encoder,
                    const GrammarChecker* grammar);

    /// `anchor` is the unperturbed original text; `before`/`after` differ by exactly the
    /// one substitution of `original` by `candidate`.
    Decision admissible(const lexsub::Token& original, const lexsub::SynonymCandidate& candidate,
                        std::string_view anchor, std::string_view before, std::string_view after) const;

    const ConstraintConfig& config() const { return config_; }

private:
    ConstraintConfig config_;
    const encoder::SentenceEncoder* encoder_;
    const GrammarChecker* grammar_;
};

}  // namespace vdattack::constraints
