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

#include <algorithm>

#include "fixtures.hpp"
#include "vdattack/attack_type.hpp"
#include "vdattack/error.hpp"

namespace vdattack::runner {
namespace {

bool contains(const std::vector<std::string>& v, const std::string& w) {
    return std::find(v.begin(), v.end(), w) != v.end();
}

struct AttackTypeTest : ::testing::Test {
    vdattack::testing::Toolkit kit;
    TypeLexicons lex() const { return TypeLexicons{SpellingVariants::bundled(), kit.table, kit.tagger}; }
};

TEST_F(AttackTypeTest, NamedExamples) {
    EXPECT_EQ(classify_attack_type("color", "colour", lex()), AttackType::kBritishAmerican);
    EXPECT_EQ(classify_attack_type("great", "greater", lex()), AttackType::kComparativeSuperlative);
    EXPECT_EQ(classify_attack_type("cat", "cats", lex()), AttackType::kSingularPlural);
    EXPECT_EQ(classify_attack_type("sunny", "sun", lex()), AttackType::kOther);
}

TEST_F(AttackTypeTest, FortyPairFixture) {
    const auto cases = vdattack::testing::attack_type_cases();
    ASSERT_EQ(cases.size(), 40u);
    for (const auto& c : cases) {
        EXPECT_EQ(attack_type_name(classify_attack_type(c.original, c.replacement, lex())),
                  attack_type_name(c.expected))
            << c.original << " -> " << c.replacement;
    }
}

TEST_F(AttackTypeTest, SpellingBeatsEverythingElse) {
    // also embedding neighbors with equal POS
    EXPECT_GT(kit.table.cosine("color", "colour").value_or(0), 0.9);
    EXPECT_EQ(classify_attack_type("colour", "color", lex()), AttackType::kBritishAmerican);
}

TEST_F(AttackTypeTest, SmallerNeighborhoodDropsSynonym) {
    TypeLexicons narrow = lex();
    narrow.k = 1;
    EXPECT_EQ(classify_attack_type("couch", "sofa", narrow), AttackType::kSynonym);
    EXPECT_EQ(classify_attack_type("couch", "settee", narrow), AttackType::kOther);
}

TEST_F(AttackTypeTest, EmptyWordRejected) {
    EXPECT_THROW(classify_attack_type("", "cat", lex()), PreconditionError);
    EXPECT_THROW(classify_attack_type("cat", "", lex()), PreconditionError);
}

TEST(AttackTypeNames, RoundTrip) {
    for (AttackType t : {AttackType::kBritishAmerican, AttackType::kSynonym, AttackType::kSingularPlural,
                         AttackType::kComparativeSuperlative, AttackType::kOther}) {
        EXPECT_EQ(parse_attack_type(attack_type_name(t)), t);
    }
    EXPECT_EQ(attack_type_name(AttackType::kBritishAmerican), "british_american");
    EXPECT_THROW(parse_attack_type("typo"), ParseError);
}

TEST(Inflection, PluralForms) {
    EXPECT_TRUE(contains(plural_forms("cat"), "cats"));
    EXPECT_TRUE(contains(plural_forms("box"), "boxes"));
    EXPECT_TRUE(contains(plural_forms("puppy"), "puppies"));
    EXPECT_TRUE(contains(plural_forms("knife"), "knives"));
    EXPECT_TRUE(contains(plural_forms("child"), "children"));
    EXPECT_TRUE(contains(plural_forms("mouse"), "mice"));
    EXPECT_FALSE(contains(plural_forms("cat"), "cat"));
}

TEST(Inflection, DegreeForms) {
    const auto great = degree_forms("great");
    EXPECT_TRUE(contains(great, "greater"));
    EXPECT_TRUE(contains(great, "greatest"));
    EXPECT_TRUE(contains(degree_forms("big"), "bigger"));
    EXPECT_TRUE(contains(degree_forms("happy"), "happiest"));
    EXPECT_TRUE(contains(degree_forms("large"), "larger"));
    EXPECT_TRUE(contains(degree_forms("good"), "better"));
}

TEST(SpellingVariantsTest, LoadAndLookup) {
    const auto dir = vdattack::testing::scratch_dir("spelling");
    const auto path = vdattack::testing::write_text(dir / "v.tsv", "# uk\tus\ncolour\tcolor\n\nlorry\ttruck\n");
    const SpellingVariants v = SpellingVariants::load(path);
    EXPECT_EQ(v.size(), 2u);
    EXPECT_TRUE(v.are_variants("Colour", "color"));
    EXPECT_TRUE(v.are_variants("truck", "lorry"));
    EXPECT_FALSE(v.are_variants("colour", "truck"));
    const auto bad = vdattack::testing::write_text(dir / "bad.tsv", "colour\n");
    EXPECT_THROW(SpellingVariants::load(bad), ParseError);
    EXPECT_GT(SpellingVariants::bundled().size(), 1000u);
}

}  // namespace
}  // namespace vdattack::runner
