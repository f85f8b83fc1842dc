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

#include <charconv>
#include <sstream>

#include "vdattack/constraints.hpp"
#include "vdattack/error.hpp"

namespace vdattack::constraints {

void ConstraintConfig::validate() const {
    if (epsilon && (*epsilon < 0.0 || *epsilon > 1.0)) {
        throw PreconditionError("similarity threshold must lie in [0,1]");
    }
}

ConstraintConfig ConstraintConfig::raw() { return ConstraintConfig{false, false, std::nullopt, false}; }

ConstraintConfig ConstraintConfig::parse(std::string_view list, double epsilon) {
    ConstraintConfig cfg = raw();
    if (list == "none" || list == "raw" || list.empty()) {
        return cfg;
    }
    std::istringstream in{std::string(list)};
    std::string item;
    while (std::getline(in, item, ',')) {
        if (item == "stopwords") {
            cfg.use_stopwords = true;
        } else if (item == "pos") {
            cfg.use_pos = true;
        } else if (item == "sim" || item == "eps") {
            cfg.epsilon = epsilon;
        } else if ((item.starts_with("sim(") || item.starts_with("eps(")) && item.ends_with(')')) {
            const std::string value = item.substr(4, item.size() - 5);
            double eps = 0.0;
            const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), eps);
            if (ec != std::errc() || ptr != value.data() + value.size()) {
                throw PreconditionError("bad threshold in '" + item + "'");
            }
            cfg.epsilon = eps;
        } else if (item == "grammar" || item == "gram") {
            cfg.use_grammar = true;
        } else {
            throw PreconditionError("unknown constraint '" + item + "' (expected stopwords, pos, sim, grammar)");
        }
    }
    cfg.validate();
    return cfg;
}

std::string ConstraintConfig::describe() const {
    std::string out;
    auto add = [&](const std::string& part) {
        if (!out.empty()) {
            out += ",";
        }
        out += part;
    };
    if (use_stopwords) add("stopwords");
    if (use_pos) add("pos");
    if (epsilon) {
        std::ostringstream s;
        s << "sim(" << *epsilon << ")";
        add(s.str());
    }
    if (use_grammar) add("grammar");
    return out.empty() ? "none" : out;
}

std::string_view reason_name(RejectReason reason) {
    switch (reason) {
        case RejectReason::kNone:
            return "admit";
        case RejectReason::kStopwordSource:
            return "stopword_source";
        case RejectReason::kPosMismatch:
            return "pos_mismatch";
        case RejectReason::kLowSimilarity:
            return "low_similarity";
        case RejectReason::kGrammar:
            return "grammar";
    }
    return "admit";
}

ConstraintStack::ConstraintStack(ConstraintConfig config, const encoder::SentenceEncoder* encoder,
                                 const GrammarChecker* grammar)
    : config_(config), encoder_(encoder), grammar_(grammar) {
    config_.validate();
    if (config_.epsilon && encoder_ == nullptr) {
        throw PreconditionError("similarity constraint needs a sentence encoder");
    }
    if (config_.use_grammar && grammar_ == nullptr) {
        throw PreconditionError("grammar constraint needs a grammar checker");
    }
}

Decision ConstraintStack::admissible(const lexsub::Token& original, const lexsub::SynonymCandidate& candidate,
                                     std::string_view anchor, std::string_view before,
                                     std::string_view after) const {
    Decision d;
    if (config_.use_stopwords && (original.is_stopword || original.is_punct)) {
        d.reason = RejectReason::kStopwordSource;
        return d;
    }
    if (config_.use_pos && candidate.pos != original.pos) {
        d.reason = RejectReason::kPosMismatch;
        return d;
    }
    if (config_.epsilon) {
        d.similarity = encoder::semantic_similarity(anchor, after, *encoder_);
        if (*d.similarity < *config_.epsilon) {
            d.reason = RejectReason::kLowSimilarity;
            return d;
        }
    }
    if (config_.use_grammar && introduces_violation(grammar_->check(before), grammar_->check(after))) {
        d.reason = RejectReason::kGrammar;
        return d;
    }
    return d;
}

}  // namespace vdattack::constraints
