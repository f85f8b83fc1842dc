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

#include <gtest/gtest.h>

#include "fixtures.hpp"
#include "vdattack/constraints.hpp"
#include "vdattack/error.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::constraints {
namespace {

using lexsub::PosTag;

struct Env {
    testing::Toolkit kit;

    lexsub::Token token(std::string_view text, std::size_t i) const {
        return lexsub::analyze(text, kit.stopwords, kit.tagger).at(i);
    }
    lexsub::SynonymCandidate cand(std::string_view word) const {
        return {std::string(word), 0.5, kit.tagger.tag_word(word)};
    }
    Decision check(const ConstraintConfig& cfg, std::string_view text, std::size_t i, std::string_view word,
                   std::string_view after) const {
        const ConstraintStack stack(cfg, &kit.encoder, &kit.grammar);
        return stack.admissible(token(text, i), cand(word), text, text, after);
    }
};

TEST(Config, ParseAndDescribe) {
    EXPECT_EQ(ConstraintConfig::parse("none"), ConstraintConfig::raw());
    const ConstraintConfig c = ConstraintConfig::parse("stopwords,pos,sim", 0.3);
    EXPECT_TRUE(c.use_stopwords);
    EXPECT_TRUE(c.use_pos);
    EXPECT_DOUBLE_EQ(*c.epsilon, 0.3);
    EXPECT_FALSE(c.use_grammar);
    EXPECT_TRUE(ConstraintConfig::parse("grammar").use_grammar);
    EXPECT_FALSE(ConstraintConfig::parse("pos").epsilon.has_value());
    EXPECT_THROW(ConstraintConfig::parse("pos,spelling"), Error);
    ConstraintConfig bad;
    bad.epsilon = 1.5;
    EXPECT_THROW(bad.validate(), PreconditionError);
    EXPECT_EQ(ConstraintConfig::parse(ConstraintConfig{}.describe()), ConstraintConfig{});
    EXPECT_DOUBLE_EQ(*ConstraintConfig::parse("pos,sim(0.7)").epsilon, 0.7);
    EXPECT_THROW(ConstraintConfig::parse("sim(x)"), PreconditionError);
}

TEST(Config, Defaults) {
    const ConstraintConfig c;
    EXPECT_TRUE(c.use_stopwords);
    EXPECT_TRUE(c.use_pos);
    EXPECT_DOUBLE_EQ(*c.epsilon, 0.5);
    EXPECT_FALSE(c.use_grammar);
}

TEST(Admissible, RawAdmitsEverything) {
    const Env env;
    EXPECT_TRUE(env.check(ConstraintConfig::raw(), "is it sunny ?", 0, "cat", "cat it sunny ?").admitted());
    EXPECT_TRUE(env.check(ConstraintConfig::raw(), "the faces of people", 1, "confront", "the confront of people")
                    .admitted());
}

TEST(Admissible, StopwordSource) {
    const Env env;
    const Decision d = env.check(ConstraintConfig{}, "is it sunny ?", 1, "cat", "is cat sunny ?");
    EXPECT_EQ(d.reason, RejectReason::kStopwordSource);
}

TEST(Admissible, FacesToConfrontIsPosMismatch) {
    const Env env;
    ConstraintConfig cfg = ConstraintConfig::raw();
    cfg.use_pos = true;
    const Decision d = env.check(cfg, "faces of people", 0, "confront", "confront of people");
    EXPECT_EQ(d.reason, RejectReason::kPosMismatch);
    EXPECT_EQ(reason_name(d.reason), "pos_mismatch");
}

TEST(Admissible, FlatToLoftIsPosMismatch) {
    const Env env;
    ConstraintConfig cfg = ConstraintConfig::raw();
    cfg.use_pos = true;
    EXPECT_EQ(env.check(cfg, "is the dog lying flat", 4, "loft", "is the dog lying loft").reason,
              RejectReason::kPosMismatch);
}

TEST(Admissible, EpsilonThresholds) {
    const Env env;
    ConstraintConfig lo = ConstraintConfig::raw();
    lo.epsilon = 0.1;
    ConstraintConfig hi = lo;
    hi.epsilon = 0.7;
    // cos(cat, dog) = 0: below both thresholds
    EXPECT_EQ(env.check(lo, "cat", 0, "dog", "dog").reason, RejectReason::kLowSimilarity);
    EXPECT_EQ(env.check(hi, "cat", 0, "dog", "dog").reason, RejectReason::kLowSimilarity);
    // cos(cat, canine) = cos 80 deg, about 0.17: between them
    const Decision d_lo = env.check(lo, "cat", 0, "canine", "canine");
    const Decision d_hi = env.check(hi, "cat", 0, "canine", "canine");
    EXPECT_TRUE(d_lo.admitted());
    EXPECT_EQ(d_hi.reason, RejectReason::kLowSimilarity);
    EXPECT_NEAR(*d_lo.similarity, std::cos(80.0 * M_PI / 180.0), 1e-6);
}

TEST(Admissible, SimilarityAnchoredToOriginal) {
    const Env env;
    ConstraintConfig cfg = ConstraintConfig::raw();
    cfg.epsilon = 0.7;
    const ConstraintStack stack(cfg, &env.kit.encoder, nullptr);
    // second step of a chain: before already drifted, anchor is the untouched text
    const Decision d = stack.admissible(env.token("canine", 0), env.cand("dog"), "cat", "canine", "dog");
    EXPECT_EQ(d.reason, RejectReason::kLowSimilarity);
    const Decision e = stack.admissible(env.token("cat", 0), env.cand("cats"), "cat", "kitten", "cats");
    EXPECT_TRUE(e.admitted());
}

TEST(Grammar, RuleExamples) {
    const Env env;
    const auto article = grammar_check("a apple on the table", env.kit.grammar);
    ASSERT_EQ(article.size(), 1u);
    EXPECT_EQ(article[0].rule_id, kRuleArticle);
    EXPECT_EQ(article[0].begin, 0u);
    const auto dup = grammar_check("the the cat", env.kit.grammar);
    ASSERT_EQ(dup.size(), 1u);
    EXPECT_EQ(dup[0].rule_id, kRuleDuplicate);
    EXPECT_TRUE(grammar_check("is the bus red ?", env.kit.grammar).empty());
    EXPECT_TRUE(grammar_check("an apple and a unicorn and an hour", env.kit.grammar).empty());
    EXPECT_EQ(grammar_check("an dog", env.kit.grammar).size(), 1u);
    const auto cmp = grammar_check("is it more greater", env.kit.grammar);
    ASSERT_EQ(cmp.size(), 1u);
    EXPECT_EQ(cmp[0].rule_id, kRuleDoubleComparative);
}

TEST(Grammar, OnlyNewViolationsReject) {
    const Env env;
    ConstraintConfig cfg = ConstraintConfig::raw();
    cfg.use_grammar = true;
    const ConstraintStack stack(cfg, nullptr, &env.kit.grammar);
    const std::string before = "is there a red ball";
    EXPECT_EQ(stack.admissible(env.token(before, 3), env.cand("azure"), before, before, "is there a azure ball")
                  .reason,
              RejectReason::kGrammar);
    // pre-existing error in user text does not block an unrelated substitution
    const std::string sloppy = "the the red ball";
    EXPECT_TRUE(stack.admissible(env.token(sloppy, 2), env.cand("crimson"), sloppy, sloppy, "the the crimson ball")
                    .admitted());
    EXPECT_TRUE(introduces_violation({}, {{"duplicate_word", 0, 7}}));
    EXPECT_FALSE(introduces_violation({{"duplicate_word", 0, 7}}, {{"duplicate_word", 4, 11}}));
}

TEST(Grammar, ProtocolChecker) {
    auto t = std::make_shared<transport::InProcessTransport>([](const transport::Json& req) {
        transport::check_request_version(req);
        transport::Json v = transport::Json::array();
        if (std::string(req.at("text")).find("bad") != std::string::npos) {
            v.push_back({{"rule_id", "style"}, {"span", {0, 3}}});
        }
        return transport::Json{{"protocol_version", 1}, {"violations", v}};
    });
    const ProtocolGrammarChecker checker(t);
    const auto v = checker.check("bad text");
    ASSERT_EQ(v.size(), 1u);
    EXPECT_EQ(v[0], (Violation{"style", 0, 3}));
    EXPECT_TRUE(checker.check("good text").empty());
}

TEST(Stack, EachAddedConstraintShrinksAdmittedSet) {
    const Env env;
    const std::vector<ConstraintConfig> configs = {
        ConstraintConfig::raw(), ConstraintConfig::parse("pos"), ConstraintConfig::parse("pos,sim", 0.5),
        ConstraintConfig::parse("pos,sim,grammar", 0.5)};
    for (const auto& inst : testing::fixture_instances(10, 3)) {
        const auto tokens = lexsub::analyze(inst.question, env.kit.stopwords, env.kit.tagger);
        for (std::size_t pos = 0; pos < tokens.size(); ++pos) {
            if (tokens[pos].is_punct) {
                continue;
            }
            for (const auto& c : env.kit.provider.candidates(tokens, pos, 50)) {
                std::string after = inst.question;
                after.replace(tokens[pos].begin, tokens[pos].end - tokens[pos].begin, c.word);
                bool prev = true;
                for (const auto& cfg : configs) {
                    const ConstraintStack stack(cfg, &env.kit.encoder, &env.kit.grammar);
                    const bool ok = stack.admissible(tokens[pos], c, inst.question, inst.question, after).admitted();
                    ASSERT_TRUE(prev || !ok) << inst.question << " -> " << after;
                    prev = ok;
                }
                for (double lo : {0.1, 0.3, 0.5}) {
                    ConstraintConfig a = ConstraintConfig::raw();
                    a.epsilon = lo;
                    ConstraintConfig b = a;
                    b.epsilon = lo + 0.2;
                    const bool ok_b = ConstraintStack(b, &env.kit.encoder, nullptr)
                                          .admissible(tokens[pos], c, inst.question, inst.question, after)
                                          .admitted();
                    const bool ok_a = ConstraintStack(a, &env.kit.encoder, nullptr)
                                          .admissible(tokens[pos], c, inst.question, inst.question, after)
                                          .admitted();
                    ASSERT_TRUE(ok_a || !ok_b);
                }
            }
        }
    }
}

}  // namespace
}  // namespace vdattack::constraints
