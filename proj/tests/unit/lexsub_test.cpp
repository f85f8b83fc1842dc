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

#include <cmath>
#include <random>

#include "fixtures.hpp"
#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/transport.hpp"

namespace vdattack::lexsub {
namespace {

std::vector<std::string> surfaces(std::string_view text) {
    std::vector<std::string> out;
    for (const Token& t : tokenize(text)) {
        out.push_back(t.surface);
    }
    return out;
}

EmbeddingTable toy_table() {
    return EmbeddingTable({"cat", "feline", "dog"}, {{1.0, 0.0}, {0.8, 0.6}, {0.0, 1.0}});
}

TEST(Tokenize, Examples) {
    EXPECT_EQ(surfaces("Is it sunny?"), (std::vector<std::string>{"Is", "it", "sunny", "?"}));
    EXPECT_TRUE(tokenize("").empty());
    EXPECT_EQ(surfaces("black-and-white tv"), (std::vector<std::string>{"black", "-", "and", "-", "white", "tv"}));
    EXPECT_EQ(surfaces("what's that"), (std::vector<std::string>{"what's", "that"}));
    EXPECT_EQ(surfaces("dogs' bowls"), (std::vector<std::string>{"dogs", "'", "bowls"}));
}

TEST(Tokenize, SpansCoverSourceWithoutWhitespace) {
    const std::string text = "  Is the cat's  bowl, maybe, blue?!  café ";
    std::string rebuilt;
    for (const Token& t : tokenize(text)) {
        EXPECT_EQ(text.substr(t.begin, t.end - t.begin), t.surface);
        rebuilt += t.surface;
    }
    std::string expected;
    for (char c : text) {
        if (c != ' ') {
            expected += c;
        }
    }
    EXPECT_EQ(rebuilt, expected);
}

TEST(Tokenize, LowerAndPunctFlags) {
    const auto t = tokenize("Red ?");
    EXPECT_EQ(t[0].lower, "red");
    EXPECT_FALSE(t[0].is_punct);
    EXPECT_TRUE(t[1].is_punct);
}

TEST(Stopwords, BundledList) {
    const Stopwords& s = Stopwords::bundled();
    for (const char* w : {"is", "it", "what", "how", "Is", "WHAT"}) {
        EXPECT_TRUE(s.contains(w)) << w;
    }
    EXPECT_FALSE(s.contains("color"));
    EXPECT_FALSE(s.contains("cat"));
    EXPECT_TRUE(s.contains("?"));
    EXPECT_TRUE(s.contains("3"));
}

TEST(Pos, LexiconEntriesAndFallbacks) {
    const LexiconTagger& t = LexiconTagger::bundled();
    EXPECT_EQ(t.tag_word("sunny"), PosTag::kAdj);
    EXPECT_EQ(t.tag_word("sun"), PosTag::kNoun);
    EXPECT_EQ(t.tag_word("zxqv"), PosTag::kNoun);
    EXPECT_EQ(t.tag_word("confront"), PosTag::kVerb);
    EXPECT_EQ(t.tag_word("quickly"), PosTag::kAdv);
    EXPECT_EQ(t.tag_word("7"), PosTag::kNum);
    const auto tokens = analyze("faces of people", Stopwords::bundled(), t);
    EXPECT_EQ(tokens[0].pos, PosTag::kNoun);
    EXPECT_NE(tokens[0].pos, t.tag_word("confront"));
}

TEST(Pos, EveryFixtureTokenTagged) {
    const LexiconTagger& t = LexiconTagger::bundled();
    std::size_t n = 0;
    for (const auto& inst : testing::fixture_instances()) {
        for (std::string_view text : {std::string_view(inst.question), std::string_view(inst.history.caption)}) {
            for (const Token& tok : analyze(text, Stopwords::bundled(), t)) {
                EXPECT_TRUE(parse_pos(pos_name(tok.pos)).has_value());
                if (!tok.is_punct) {
                    EXPECT_TRUE(t.in_lexicon(tok.lower) || tok.pos == PosTag::kNoun || tok.pos == PosTag::kNum)
                        << tok.lower;
                }
                ++n;
            }
        }
    }
    EXPECT_GT(n, 1000u);
}

TEST(Embedding, ToyTableTopTwo) {
    const auto c = embedding_candidates("cat", toy_table(), 2);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].word, "feline");
    EXPECT_NEAR(c[0].provider_score, 0.8, 1e-12);
    EXPECT_EQ(c[1].word, "dog");
    EXPECT_NEAR(c[1].provider_score, 0.0, 1e-12);
}

TEST(Embedding, OovAndLargeK) {
    EXPECT_TRUE(embedding_candidates("zebra", toy_table(), 5).empty());
    EXPECT_EQ(embedding_candidates("cat", toy_table(), 50).size(), 2u);
    EXPECT_THROW(embedding_candidates("cat", toy_table(), 0), PreconditionError);
}

TEST(Embedding, TiesBrokenLexicographically) {
    const EmbeddingTable t({"a", "zed", "bee"}, {{1.0, 0.0}, {0.0, 1.0}, {0.0, 2.0}});
    const auto c = embedding_candidates("a", t, 2);
    EXPECT_EQ(c[0].word, "bee");
    EXPECT_EQ(c[1].word, "zed");
}

TEST(Embedding, NormalizedAtLoad) {
    const EmbeddingTable& t = EmbeddingTable::fixture();
    EXPECT_EQ(t.dim(), 2u);
    EXPECT_GE(t.size(), 45u);
    for (const std::string& w : t.words()) {
        const auto v = *t.vector(w);
        EXPECT_NEAR(std::hypot(v[0], v[1]), 1.0, 1e-6);
    }
    EXPECT_NEAR(*t.cosine("cat", "feline"), 0.8, 1e-6);
    EXPECT_NEAR(*t.cosine("cat", "dog"), 0.0, 1e-6);
}

TEST(Embedding, ParseErrors) {
    EXPECT_THROW(EmbeddingTable::parse("cat 1 0\ndog 1\n"), ValidationError);
    EXPECT_THROW(EmbeddingTable::parse("cat 1 x\n"), ParseError);
    EXPECT_THROW(EmbeddingTable::parse("cat 0 0\n"), ValidationError);
    EXPECT_EQ(EmbeddingTable::parse("2 2\ncat 1 0\ndog 0 1\n").size(), 2u);
}

TEST(Embedding, SelfExclusionAndSymmetry) {
    const EmbeddingTable& t = EmbeddingTable::fixture();
    std::mt19937_64 rng(17);
    for (int i = 0; i < 1000; ++i) {
        const std::string& w = t.words()[rng() % t.size()];
        const std::size_t k = 1 + rng() % 60;
        const auto cands = embedding_candidates(w, t, k);
        EXPECT_EQ(cands.size(), std::min(k, t.size() - 1));
        for (const SynonymCandidate& c : cands) {
            ASSERT_NE(c.word, w);
            const auto back = embedding_candidates(c.word, t, t.size());
            const auto it = std::find_if(back.begin(), back.end(), [&](const auto& b) { return b.word == w; });
            ASSERT_NE(it, back.end());
            ASSERT_NEAR(it->provider_score, c.provider_score, 1e-10);
        }
    }
}

TEST(Provider, EmbeddingProviderTagsCandidates) {
    const testing::Toolkit kit;
    const auto tokens = analyze("is the cat red ?", kit.stopwords, kit.tagger);
    const auto c = kit.provider.candidates(tokens, 2, 3);
    ASSERT_EQ(c.size(), 3u);
    EXPECT_EQ(c[0].word, "cats");
    EXPECT_EQ(c[0].pos, PosTag::kNoun);
}

std::shared_ptr<transport::JsonTransport> mlm_stub(transport::Json* last_request) {
    return std::make_shared<transport::InProcessTransport>([last_request](const transport::Json& req) {
        transport::check_request_version(req);
        *last_request = req;
        return transport::Json{{"protocol_version", 1},
                               {"candidates",
                                {{{"word", "Couch"}, {"score", 0.9}},
                                 {{"word", "sofa"}, {"score", 0.8}},
                                 {{"word", "##ing"}, {"score", 0.7}},
                                 {{"word", "?"}, {"score", 0.6}},
                                 {{"word", "settee"}, {"score", 0.5}}}}};
    });
}

TEST(Provider, MlmStubEchoesListMinusOriginal) {
    transport::Json request;
    const MlmProvider p(mlm_stub(&request), LexiconTagger::bundled());
    const auto tokens = analyze("is the couch red ?", Stopwords::bundled(), LexiconTagger::bundled());
    const auto c = p.candidates(tokens, 2, 5);
    ASSERT_EQ(c.size(), 2u);
    EXPECT_EQ(c[0].word, "sofa");
    EXPECT_EQ(c[1].word, "settee");
    EXPECT_EQ(request.at("tokens"), (transport::Json{"is", "the", "[MASK]", "red", "?"}));
    EXPECT_EQ(request.at("mask_index"), 2);
    EXPECT_EQ(request.at("top_k"), 5);
    EXPECT_EQ(p.candidates(tokens, 2, 1).size(), 1u);
}

TEST(Provider, MlmMaskOnStopwordIsPrecondition) {
    transport::Json request;
    const MlmProvider p(mlm_stub(&request), LexiconTagger::bundled());
    const auto tokens = analyze("is the couch red ?", Stopwords::bundled(), LexiconTagger::bundled());
    EXPECT_THROW(p.candidates(tokens, 0, 5), PreconditionError);
    EXPECT_THROW(p.candidates(tokens, 4, 5), PreconditionError);
}

TEST(Provider, MlmMalformedReplyIsProtocolError) {
    auto t = std::make_shared<transport::InProcessTransport>(
        [](const transport::Json&) { return transport::Json{{"protocol_version", 1}, {"words", {}}}; });
    const MlmProvider p(t, LexiconTagger::bundled());
    const auto tokens = analyze("the couch", Stopwords::bundled(), LexiconTagger::bundled());
    EXPECT_THROW(p.candidates(tokens, 1, 5), ProtocolError);
}

TEST(Provider, UsableFill) {
    EXPECT_TRUE(usable_fill("sofa", "couch"));
    EXPECT_FALSE(usable_fill("Couch", "couch"));
    EXPECT_FALSE(usable_fill("##ing", "couch"));
    EXPECT_FALSE(usable_fill("[UNK]", "couch"));
    EXPECT_FALSE(usable_fill("...", "couch"));
    EXPECT_FALSE(usable_fill("living room", "couch"));
}

}  // namespace
}  // namespace vdattack::lexsub
