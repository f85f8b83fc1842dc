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

#include "fixtures.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <set>
#include <utility>
#include <unistd.h>

#include "vdattack/resources.hpp"

namespace vdattack::testing {

namespace {

const std::vector<std::string> kMainNouns{"cat", "dog", "couch", "chair", "car", "ball", "man",
                                          "truck", "desk", "kitten", "puppy", "sofa", "woman", "globe"};
const std::vector<std::string> kNouns{"cat",   "cats",  "kitten", "feline", "dog",    "dogs",       "puppy",
                                      "canine", "man",  "guy",    "person", "woman",  "couch",      "sofa",
                                      "settee", "chair", "table", "desk",   "ball",   "sphere",     "globe",
                                      "car",   "automobile", "vehicle", "bus", "truck", "sun", "loft"};
const std::vector<std::string> kAdjectives{"red",  "crimson", "scarlet", "blue",  "azure", "navy",
                                           "white", "wooden", "old",     "big",   "large", "huge",
                                           "great", "small",  "sunny",   "bright", "cloudy", "flat"};
const std::vector<std::string> kVerbs{"sitting", "resting", "lying", "standing"};
const std::vector<std::string> kPlaces{"window", "floor", "wall", "tree", "road", "grass"};
const std::vector<std::string> kFillerWords{"probably", "perhaps", "possibly", "unsure",  "hard",      "say",
                                            "nothing",  "else",    "somewhere", "difficult", "unclear", "honestly"};

class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}
    std::size_t below(std::size_t n) { return static_cast<std::size_t>(gen_() % n); }
    bool chance(unsigned percent) { return below(100) < percent; }
    template <typename T>
    const T& pick(const std::vector<T>& v) {
        return v[below(v.size())];
    }
    std::string pick_unused(const std::vector<std::string>& pool, const std::set<std::string>& used) {
        std::vector<std::string> free;
        for (const std::string& w : pool) {
            if (!used.contains(w)) {
                free.push_back(w);
            }
        }
        return free.empty() ? std::string() : pick(free);
    }
    void shuffle(std::vector<std::string>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[below(i)]);
        }
    }

private:
    std::mt19937_64 gen_;
};

struct RoundPlan {
    int kind = 0;  // 0 adjective, 1 verb, 2 existential, 3 color
    std::string adjective;
    std::string verb;
};

}  // namespace

Toolkit::Toolkit()
    : table(lexsub::EmbeddingTable::fixture()),
      tagger(lexsub::LexiconTagger::bundled()),
      stopwords(lexsub::Stopwords::bundled()),
      provider(table, tagger),
      encoder(table),
      grammar(tagger) {}

attack::AttackContext Toolkit::context() const { return {provider, stopwords, tagger, encoder, &grammar}; }

std::vector<corpus::Dialog> fixture_corpus(std::size_t n_dialogs, std::uint64_t seed) {
    Rng rng(seed);
    std::vector<corpus::Dialog> out;
    for (std::size_t d = 0; d < n_dialogs; ++d) {
        corpus::Dialog dialog;
        dialog.image_id = "fx" + std::to_string(d);
        const std::string noun = kMainNouns[d % kMainNouns.size()];
        const std::string place = rng.pick(kPlaces);
        const std::string adj0 = rng.pick(kAdjectives);
        const std::string verb0 = rng.pick(kVerbs);
        dialog.image_tags = {place, d % 2 == 0 ? "indoor" : "outdoor"};
        dialog.caption = "a " + adj0 + " " + noun + " " + verb0 + " near the " + place;

        std::set<std::string> used{noun, adj0, verb0};
        std::vector<RoundPlan> plans(6);
        for (RoundPlan& p : plans) {
            p.kind = static_cast<int>(rng.below(4));
            p.adjective = rng.pick(kAdjectives);
            p.verb = rng.pick(kVerbs);
            used.insert(p.adjective);
            used.insert(p.verb);
        }

        for (const RoundPlan& p : plans) {
            corpus::DialogRound round;
            std::string gt;
            std::vector<std::string> distractors;
            const std::string other_noun = rng.pick_unused(kNouns, used);
            const std::string other_adj = rng.pick_unused(kAdjectives, used);
            const std::string other_verb = rng.pick_unused(kVerbs, used);
            switch (p.kind) {
                case 0:
                    round.question = "is the " + noun + " " + p.adjective + " ?";
                    gt = "yes the " + noun + " is " + p.adjective;
                    distractors.push_back("the " + other_noun + " is " + p.adjective);
                    if (rng.chance(70)) {
                        distractors.push_back("the " + noun + " is " + other_adj);
                    } else {
                        distractors.push_back("the " + noun + " is " + rng.pick_unused(kNouns, used));
                    }
                    break;
                case 1:
                    round.question = "is the " + noun + " " + p.verb + " ?";
                    gt = "yes the " + noun + " is " + p.verb;
                    distractors.push_back("the " + other_noun + " is " + p.verb);
                    if (!other_verb.empty()) {
                        distractors.push_back("the " + noun + " is " + other_verb);
                    }
                    break;
                case 2:
                    round.question = "is there a " + p.adjective + " " + noun + " ?";
                    gt = "yes there is a " + p.adjective + " " + noun;
                    distractors.push_back("there is a " + p.adjective + " " + other_noun);
                    distractors.push_back("there is a " + other_adj + " " + noun);
                    break;
                default:
                    round.question = "what color is the " + noun + " ?";
                    gt = "the " + noun + " is " + p.adjective;
                    distractors.push_back("the " + other_noun + " is " + p.adjective);
                    break;
            }
            round.answer = gt;

            std::vector<std::string> fillers;
            for (const std::string& a : kFillerWords) {
                for (const std::string& b : kFillerWords) {
                    if (a != b) {
                        fillers.push_back(a + " " + b);
                    }
                }
            }
            rng.shuffle(fillers);
            std::vector<std::string> candidates{gt};
            for (const std::string& s : distractors) {
                if (std::find(candidates.begin(), candidates.end(), s) == candidates.end()) {
                    candidates.push_back(s);
                }
            }
            for (std::size_t i = 0; candidates.size() < corpus::kNumCandidates; ++i) {
                candidates.push_back(fillers[i]);
            }
            rng.shuffle(candidates);
            round.gt_index =
                static_cast<std::size_t>(std::find(candidates.begin(), candidates.end(), gt) - candidates.begin());
            if (d % 2 == 0 && rng.chance(50)) {
                std::vector<double> rel(corpus::kNumCandidates, 0.0);
                rel[round.gt_index] = 1.0;
                rel[(round.gt_index + 1 + rng.below(corpus::kNumCandidates - 1)) % corpus::kNumCandidates] = 0.5;
                round.relevance = rel;
            }
            round.candidates = std::move(candidates);
            dialog.rounds.push_back(std::move(round));
        }
        out.push_back(std::move(dialog));
    }
    return out;
}

std::vector<corpus::AttackInstance> fixture_instances(std::size_t n_dialogs, std::uint64_t seed) {
    return corpus::flatten_instances(fixture_corpus(n_dialogs, seed));
}

PlantedFixture planted_fixture(std::size_t n, std::uint64_t seed) {
    // Words whose nearest neighbors share their tag and stay above the default threshold.
    // No two are neighbors of each other.
    const std::vector<std::string> pool{"cat", "couch", "car", "ball", "man", "table", "red", "blue", "big", "sunny"};
    Rng rng(seed);
    PlantedFixture fx;
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t n_words = 3 + rng.below(3);
        std::vector<std::string> words;
        while (words.size() < n_words) {
            const std::string& w = rng.pick(pool);
            if (std::find(words.begin(), words.end(), w) == words.end()) {
                words.push_back(w);
            }
        }
        const std::size_t planted = rng.below(n_words);
        corpus::AttackInstance inst;
        inst.image_id = "pv" + std::to_string(i);
        inst.round_id = 1;
        inst.history.caption = "a picture";
        inst.question = "is the";
        for (const std::string& w : words) {
            inst.question += " " + w;
        }
        inst.question += " ?";
        inst.candidates.push_back("yes");
        inst.candidates.push_back("no");
        for (std::size_t c = 2; c < corpus::kNumCandidates; ++c) {
            inst.candidates.push_back("option " + std::to_string(c));
        }
        inst.gt_index = 0;
        PlantedSpec spec{words[planted], {}};
        for (std::size_t w = 0; w < words.size(); ++w) {
            if (w != planted) {
                spec.others.push_back(words[w]);
            }
        }
        fx.specs[inst.image_id] = spec;
        fx.planted_position[inst.image_id] = 2 + planted;
        fx.instances.push_back(std::move(inst));
    }
    return fx;
}

oracle::CandidateScores PlantedVictim::score(const oracle::VictimInput& input) const {
    const PlantedSpec& spec = fixture_.specs.at(input.image_id);
    std::set<std::string> present;
    for (const lexsub::Token& t : lexsub::tokenize(input.question)) {
        present.insert(t.lower);
    }
    double gt = 2.0;
    for (const std::string& w : spec.others) {
        if (present.contains(w)) {
            gt += 0.01;
        }
    }
    if (present.contains(spec.planted)) {
        gt += 1.0;
    }
    std::vector<double> scores(corpus::kNumCandidates, 0.0);
    scores[0] = gt;
    scores[1] = 2.5;
    return oracle::CandidateScores(std::move(scores));
}

oracle::CandidateScores CountingVictim::score(const oracle::VictimInput& input) const {
    {
        std::lock_guard<std::mutex> lock(mu_);
        ++calls_;
    }
    return inner_.score(input);
}

std::size_t CountingVictim::calls() const {
    std::lock_guard<std::mutex> lock(mu_);
    return calls_;
}

void CountingVictim::reset() {
    std::lock_guard<std::mutex> lock(mu_);
    calls_ = 0;
}

std::filesystem::path scratch_dir(std::string_view name) {
    const auto dir = std::filesystem::temp_directory_path() /
                     ("vdattack-" + std::string(name) + "-" + std::to_string(::getpid()));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

std::filesystem::path write_text(const std::filesystem::path& path, std::string_view text) {
    write_file(path, std::string(text));
    return path;
}

std::vector<AttackTypeCase> attack_type_cases() {
    using runner::AttackType;
    const AttackType ba = AttackType::kBritishAmerican;
    const AttackType sp = AttackType::kSingularPlural;
    const AttackType cs = AttackType::kComparativeSuperlative;
    const AttackType syn = AttackType::kSynonym;
    const AttackType other = AttackType::kOther;
    return {
        {"color", "colour", ba},      {"colour", "color", ba},        {"centre", "center", ba},
        {"organise", "organize", ba}, {"analyse", "analyze", ba},     {"favourite", "favorite", ba},
        {"Theatre", "theater", ba},   {"grey", "gray", ba},

        {"cat", "cats", sp},          {"cats", "cat", sp},            {"dog", "dogs", sp},
        {"bus", "buses", sp},         {"box", "boxes", sp},           {"child", "children", sp},
        {"puppy", "puppies", sp},     {"knife", "knives", sp},

        {"great", "greater", cs},     {"greater", "greatest", cs},    {"big", "bigger", cs},
        {"large", "largest", cs},     {"small", "smaller", cs},       {"happy", "happier", cs},
        {"greatest", "great", cs},    {"more", "most", cs},

        {"couch", "sofa", syn},       {"cat", "feline", syn},         {"red", "crimson", syn},
        {"big", "large", syn},        {"car", "automobile", syn},     {"sitting", "resting", syn},
        {"man", "guy", syn},          {"ball", "sphere", syn},

        {"sunny", "sun", other},      {"faces", "confront", other},   {"flat", "loft", other},
        {"kite", "zebra", other},     {"lying", "desk", other},       {"huge", "truck", other},
        {"red", "standing", other},   {"giraffe", "table", other},
    };
}

std::string ratings_fixture() {
    std::string out;
    auto add = [&](const std::string& item, const std::string& annotator, const std::string& task,
                   const std::string& value) {
        out += R"({"item_id":")" + item + R"(","annotator_id":")" + annotator + R"(","task":")" + task +
               R"(","value":)" + value + "}\n";
    };
    const std::string lc = "label_consistency";
    const std::vector<std::pair<std::string, std::vector<std::string>>> labels{
        {"L1", {"yes", "yes", "no"}},
        {"L2", {"yes", "no", "unsure"}},
        {"L3", {"no", "no", "no"}},
        {"L4", {"yes", "yes", "yes", "no"}},
        {"L5", {"yes", "no"}},
    };
    for (const auto& [item, values] : labels) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            add("d:" + item + "/" + lc, "a" + std::to_string(i + 1), lc, "\"" + values[i] + "\"");
        }
    }
    const std::string g = "grammaticality";
    add("d:G1/" + g, "a1", g, "5");
    add("d:G1/" + g, "a2", g, "4");
    add("d:G1/" + g, "a3", g, "4");
    add("d:G2/" + g, "a1", g, "3");
    add("d:G2/" + g, "a2", g, "3");
    add("d:G2/" + g, "a3", g, "3");
    const std::string sim = "similarity_no_image";
    add("d:S1/" + sim, "a1", sim, "1");
    add("d:S1/" + sim, "a2", sim, "3");
    add("d:S1/" + sim, "a3", sim, "4");
    add("d:S1/" + sim, "a1", sim, "4");
    return out;
}

}  // namespace vdattack::testing
