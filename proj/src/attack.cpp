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

#include "vdattack/attack.hpp"

#include <algorithm>
#include <cctype>
#include <random>

namespace vdattack::attack {

using oracle::CandidateScores;

std::string_view target_name(Target target) { return target == Target::kQuestion ? "question" : "history"; }

Target parse_target(std::string_view name) {
    if (name == "question") return Target::kQuestion;
    if (name == "history") return Target::kHistory;
    throw PreconditionError("unknown target '" + std::string(name) + "' (expected question or history)");
}

std::string_view word_order_name(WordOrder order) { return order == WordOrder::kImportance ? "importance" : "random"; }

WordOrder parse_word_order(std::string_view name) {
    if (name == "importance") return WordOrder::kImportance;
    if (name == "random") return WordOrder::kRandom;
    throw PreconditionError("unknown word order '" + std::string(name) + "' (expected importance or random)");
}

void AttackConfig::validate() const {
    if (k == 0) {
        throw PreconditionError("k must be >= 1");
    }
    constraints.validate();
}

bool AttackAborted::is_transport() const {
    try {
        std::rethrow_exception(cause_);
    } catch (const TransportError&) {
        return true;
    } catch (...) {
        return false;
    }
}

bool attackable(const lexsub::Token& token, bool use_stopwords) {
    if (token.is_punct || token.pos == lexsub::PosTag::kNum || lexsub::is_numeral(token.lower)) {
        return false;
    }
    return !(use_stopwords && token.is_stopword);
}

std::vector<std::size_t> seeded_permutation(std::size_t n, std::uint64_t seed) {
    std::vector<std::size_t> perm(n);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = i;
    }
    std::mt19937_64 rng(seed);
    for (std::size_t i = n; i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(rng() % i);
        std::swap(perm[i - 1], perm[j]);
    }
    return perm;
}

std::vector<WordImportance> word_importance(const corpus::AttackInstance& instance, oracle::Oracle& oracle,
                                            const TargetText& target, const CandidateScores& baseline,
                                            bool use_stopwords) {
    const double p0 = oracle::gt_probability(baseline, instance.gt_index);
    const bool at_gt = oracle::top1(baseline) == instance.gt_index;
    std::vector<WordImportance> out;
    for (std::size_t pos = 0; pos < target.tokens().size(); ++pos) {
        if (!attackable(target.tokens()[pos], use_stopwords)) {
            continue;
        }
        const CandidateScores deleted = target.remove(pos).score(oracle, instance);
        double importance = p0 - oracle::gt_probability(deleted, instance.gt_index);
        if (at_gt && oracle::top1(deleted) != instance.gt_index) {
            importance += 1.0;
        }
        out.push_back({pos, importance});
    }
    std::stable_sort(out.begin(), out.end(),
                     [](const WordImportance& a, const WordImportance& b) { return a.importance > b.importance; });
    return out;
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string match_case(std::string_view original, std::string word) {
    if (!original.empty() && !word.empty() && std::isupper(static_cast<unsigned char>(original.front())) != 0) {
        word.front() = static_cast<char>(std::toupper(static_cast<unsigned char>(word.front())));
    }
    return word;
}

struct Trial {
    lexsub::SynonymCandidate candidate;
    TargetText text;
    CandidateScores scores;
    double gt_prob;
    double similarity;
    bool goal_reached;
};

AttackResult run(const corpus::AttackInstance& instance, const oracle::Victim& victim, const AttackContext& ctx,
                 const AttackConfig& cfg) {
    cfg.validate();
    const std::size_t gt = instance.gt_index;

    AttackResult r;
    r.instance_id = instance.id();
    r.image_id = instance.image_id;
    r.round_id = instance.round_id;
    r.target = cfg.target;
    r.order = cfg.order;
    r.gt_index = gt;
    r.relevance = instance.relevance;

    const TargetText original = cfg.target == Target::kQuestion
                                    ? TargetText::question(instance, ctx.stopwords, ctx.tagger)
                                    : TargetText::history(instance, ctx.stopwords, ctx.tagger);
    r.original_text = original.text();
    r.adversarial_text = original.text();
    r.target_word_count = original.word_count();

    oracle::Oracle oracle(victim);
    const constraints::ConstraintStack stack(cfg.constraints, &ctx.encoder, ctx.grammar);
    const bool use_stopwords = cfg.constraints.use_stopwords;

    try {
        const CandidateScores before = original.score(oracle, instance);
        r.scores_before = before;
        r.scores_after = before;
        r.gt_prob_before = oracle::gt_probability(before, gt);
        r.gt_prob_after = r.gt_prob_before;
        r.answer_before = instance.candidates[oracle::top1(before)];
        r.answer_after = r.answer_before;
        r.queries = oracle.queries();

        if (cfg.target == Target::kQuestion && oracle::top1(before) != gt) {
            r.skip_reason = "victim already wrong";
            return r;
        }
        r.attempted = true;

        auto goal = [&](const CandidateScores& s, double p) {
            return cfg.target == Target::kQuestion ? oracle::top1(s) != gt : p < r.gt_prob_before;
        };

        if (cfg.order == WordOrder::kImportance) {
            for (const WordImportance& w : word_importance(instance, oracle, original, before, use_stopwords)) {
                r.word_order.push_back(w.position);
            }
        } else {
            std::vector<std::size_t> positions;
            for (std::size_t pos = 0; pos < original.tokens().size(); ++pos) {
                if (attackable(original.tokens()[pos], use_stopwords)) {
                    positions.push_back(pos);
                }
            }
            for (std::size_t i : seeded_permutation(positions.size(), cfg.seed ^ fnv1a(r.instance_id))) {
                r.word_order.push_back(positions[i]);
            }
        }
        r.queries = oracle.queries();

        TargetText current = original;
        CandidateScores current_scores = before;
        double current_p = r.gt_prob_before;

        for (std::size_t pos : r.word_order) {
            if (cfg.max_substitutions && r.substitutions.size() >= *cfg.max_substitutions) {
                break;
            }
            const lexsub::Token& source = original.tokens()[pos];
            std::vector<lexsub::Token> context = current.tokens();
            if (!use_stopwords) {
                // Stopwords are fair game in this setting, including for context-aware providers.
                context[pos].is_stopword = false;
            }
            std::vector<Trial> trials;
            for (lexsub::SynonymCandidate& c : ctx.provider.candidates(context, pos, cfg.k)) {
                if (lexsub::to_lower(c.word) == source.lower) {
                    continue;
                }
                TargetText next = current.substitute(pos, match_case(source.surface, c.word));
                if (next.tokens().size() != current.tokens().size()) {
                    continue;
                }
                const constraints::Decision d =
                    stack.admissible(source, c, original.text(), current.text(), next.text());
                if (!d.admitted()) {
                    continue;
                }
                const double sim =
                    d.similarity ? *d.similarity : encoder::semantic_similarity(original.text(), next.text(), ctx.encoder);
                CandidateScores scores = next.score(oracle, instance);
                const double p = oracle::gt_probability(scores, gt);
                const bool reached = goal(scores, p);
                trials.push_back(Trial{std::move(c), std::move(next), std::move(scores), p, sim, reached});
            }

            const Trial* chosen = nullptr;
            for (const Trial& t : trials) {
                if (t.goal_reached && (chosen == nullptr || t.similarity > chosen->similarity)) {
                    chosen = &t;
                }
            }
            if (chosen == nullptr) {
                for (const Trial& t : trials) {
                    if (t.gt_prob < current_p && (chosen == nullptr || t.gt_prob < chosen->gt_prob)) {
                        chosen = &t;
                    }
                }
            }
            if (chosen == nullptr) {
                continue;
            }

            Substitution sub;
            sub.position = pos;
            sub.original = source.surface;
            sub.replacement = chosen->candidate.word;
            sub.provider_score = chosen->candidate.provider_score;
            sub.similarity = chosen->similarity;
            sub.gt_prob_after = chosen->gt_prob;
            sub.goal_reached = chosen->goal_reached;
            sub.segment = original.segment_of(pos);
            if (!r.attacked_segment) {
                r.attacked_segment = sub.segment;
            }
            r.substitutions.push_back(std::move(sub));

            current = chosen->text;
            current_scores = chosen->scores;
            current_p = chosen->gt_prob;
            r.similarity_final = chosen->similarity;
            if (chosen->goal_reached) {
                r.success = true;
                break;
            }
        }

        r.adversarial_text = current.text();
        r.scores_after = current_scores;
        r.gt_prob_after = current_p;
        r.answer_after = instance.candidates[oracle::top1(current_scores)];
        r.queries = oracle.queries();
        return r;
    } catch (const Error& e) {
        if (dynamic_cast<const TransportError*>(&e) == nullptr && dynamic_cast<const ProtocolError*>(&e) == nullptr) {
            throw;
        }
        r.queries = oracle.queries();
        r.error = e.what();
        throw AttackAborted(r, std::current_exception(), "attack on " + r.instance_id + " aborted: " + e.what());
    }
}

}  // namespace

AttackResult run_attack(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                        const AttackContext& context, const AttackConfig& cfg) {
    return run(instance, victim, context, cfg);
}

AttackResult attack_question(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                             const AttackContext& context, AttackConfig cfg) {
    cfg.target = Target::kQuestion;
    cfg.order = WordOrder::kImportance;
    return run(instance, victim, context, cfg);
}

AttackResult attack_history(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                            const AttackContext& context, AttackConfig cfg) {
    cfg.target = Target::kHistory;
    return run(instance, victim, context, cfg);
}

AttackResult random_word_attack(const corpus::AttackInstance& instance, const oracle::Victim& victim,
                                const AttackContext& context, AttackConfig cfg) {
    cfg.target = Target::kQuestion;
    cfg.order = WordOrder::kRandom;
    return run(instance, victim, context, cfg);
}

}  // namespace vdattack::attack
