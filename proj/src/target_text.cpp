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

namespace vdattack::attack {

TargetText::TargetText(Target target, std::vector<Segment> segments, const lexsub::Stopwords& stopwords,
                       const lexsub::PosTagger& tagger)
    : target_(target), segments_(std::move(segments)), stopwords_(&stopwords), tagger_(&tagger) {
    for (std::size_t s = 0; s < segments_.size(); ++s) {
        if (s > 0) {
            text_ += ' ';
        }
        const std::size_t offset = text_.size();
        segment_offset_.push_back(offset);
        text_ += segments_[s].text;
        for (lexsub::Token t : lexsub::analyze(segments_[s].text, stopwords, tagger)) {
            t.begin += offset;
            t.end += offset;
            tokens_.push_back(std::move(t));
            token_segment_.push_back(s);
        }
    }
}

TargetText TargetText::question(const corpus::AttackInstance& instance, const lexsub::Stopwords& stopwords,
                                const lexsub::PosTagger& tagger) {
    return TargetText(Target::kQuestion, {Segment{std::nullopt, instance.question}}, stopwords, tagger);
}

TargetText TargetText::history(const corpus::AttackInstance& instance, const lexsub::Stopwords& stopwords,
                               const lexsub::PosTagger& tagger) {
    std::vector<Segment> segments;
    for (auto& [kind, text] : corpus::history_texts(instance.history)) {
        segments.push_back(Segment{kind, std::move(text)});
    }
    return TargetText(Target::kHistory, std::move(segments), stopwords, tagger);
}

std::size_t TargetText::word_count() const {
    std::size_t n = 0;
    for (const lexsub::Token& t : tokens_) {
        n += t.is_punct ? 0 : 1;
    }
    return n;
}

std::optional<corpus::SegmentKind> TargetText::segment_of(std::size_t position) const {
    return segments_.at(token_segment_.at(position)).kind;
}

TargetText TargetText::with_segment_edit(std::size_t position, std::string_view replacement, bool remove) const {
    const lexsub::Token& tok = tokens_.at(position);
    const std::size_t s = token_segment_[position];
    const std::string& seg = segments_[s].text;
    std::size_t begin = tok.begin - segment_offset_[s];
    std::size_t end = tok.end - segment_offset_[s];
    if (remove) {
        if (end < seg.size() && seg[end] == ' ') {
            ++end;
        } else if (begin > 0 && seg[begin - 1] == ' ') {
            --begin;
        }
    }
    std::vector<Segment> segments = segments_;
    segments[s].text = seg.substr(0, begin) + std::string(replacement) + seg.substr(end);
    return TargetText(target_, std::move(segments), *stopwords_, *tagger_);
}

TargetText TargetText::substitute(std::size_t position, std::string_view word) const {
    return with_segment_edit(position, word, false);
}

TargetText TargetText::remove(std::size_t position) const {
    TargetText out = with_segment_edit(position, "", true);
    if (out.tokens_.empty()) {
        // The victim protocol needs a non-empty text; an unknown token stands in.
        return with_segment_edit(position, "[UNK]", false);
    }
    return out;
}

oracle::CandidateScores TargetText::score(oracle::Oracle& oracle, const corpus::AttackInstance& instance) const {
    if (target_ == Target::kQuestion) {
        return oracle.score(instance, segments_.front().text, std::nullopt);
    }
    corpus::History history;
    history.caption = segments_.front().text;
    for (std::size_t s = 1; s + 1 < segments_.size(); s += 2) {
        history.turns.push_back({segments_[s].text, segments_[s + 1].text});
    }
    return oracle.score(instance, std::nullopt, history);
}

}  // namespace vdattack::attack
