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

#include "vdattack/corpus.hpp"

#include <cmath>
#include <map>
#include <sstream>

#include "json.hpp"
#include "vdattack/error.hpp"
#include "vdattack/lexsub.hpp"
#include "vdattack/resources.hpp"

namespace vdattack::corpus {

using nlohmann::json;

std::string AttackInstance::id() const { return image_id + ":" + std::to_string(round_id); }

Format parse_format(std::string_view name) {
    if (name == "visdial_v1" || name == "visdial") {
        return Format::kVisdialV1;
    }
    if (name == "toy") {
        return Format::kToy;
    }
    throw PreconditionError("unknown corpus format '" + std::string(name) + "' (expected visdial_v1 or toy)");
}

std::string_view format_name(Format format) { return format == Format::kToy ? "toy" : "visdial_v1"; }

void validate(const Dialog& dialog) {
    const std::string where = "dialog " + dialog.image_id;
    if (dialog.caption.empty()) {
        throw ValidationError(where + ": empty caption");
    }
    if (dialog.rounds.empty()) {
        throw ValidationError(where + ": no rounds");
    }
    for (std::size_t r = 0; r < dialog.rounds.size(); ++r) {
        const DialogRound& round = dialog.rounds[r];
        const std::string at = where + " round " + std::to_string(r + 1);
        if (round.question.empty()) {
            throw ValidationError(at + ": empty question");
        }
        if (round.candidates.size() != kNumCandidates) {
            throw ValidationError(at + ": expected " + std::to_string(kNumCandidates) + " candidates, got " +
                                  std::to_string(round.candidates.size()));
        }
        if (round.gt_index >= kNumCandidates) {
            throw ValidationError(at + ": gt_index " + std::to_string(round.gt_index) + " out of range");
        }
        if (round.candidates[round.gt_index] != round.answer) {
            throw ValidationError(at + ": answer does not match the candidate at gt_index");
        }
        if (round.relevance) {
            const auto& rel = *round.relevance;
            if (rel.size() != kNumCandidates) {
                throw ValidationError(at + ": relevance must have " + std::to_string(kNumCandidates) + " entries");
            }
            for (double v : rel) {
                if (!std::isfinite(v) || v < 0.0 || v > 1.0) {
                    throw ValidationError(at + ": relevance outside [0,1]");
                }
            }
            if (rel[round.gt_index] <= 0.0) {
                throw ValidationError(at + ": relevance of the GT answer must be positive");
            }
        }
    }
}

namespace {

template <typename T>
T field(const json& obj, const char* key, const std::string& where) {
    auto it = obj.find(key);
    if (it == obj.end()) {
        throw ParseError(where + ": missing field '" + key + "'");
    }
    try {
        return it->get<T>();
    } catch (const json::exception& e) {
        throw ParseError(where + ": field '" + key + "': " + e.what());
    }
}

std::string image_id_string(const json& value) {
    if (value.is_string()) {
        return value.get<std::string>();
    }
    if (value.is_number_integer()) {
        return std::to_string(value.get<long long>());
    }
    throw ParseError("image_id must be a string or integer");
}

Dialog dialog_from_toy(const json& obj, const std::string& where) {
    if (!obj.is_object()) {
        throw ParseError(where + ": expected a JSON object");
    }
    Dialog d;
    try {
        d.image_id = image_id_string(obj.at("image_id"));
    } catch (const json::exception&) {
        throw ParseError(where + ": missing field 'image_id'");
    } catch (const ParseError& e) {
        throw ParseError(where + ": " + e.what());
    }
    if (obj.contains("image_tags")) {
        d.image_tags = field<std::vector<std::string>>(obj, "image_tags", where);
    }
    d.caption = field<std::string>(obj, "caption", where);
    const auto rounds = field<json>(obj, "rounds", where);
    if (!rounds.is_array()) {
        throw ParseError(where + ": 'rounds' must be an array");
    }
    for (std::size_t r = 0; r < rounds.size(); ++r) {
        const std::string at = where + " round " + std::to_string(r + 1);
        const json& jr = rounds[r];
        if (!jr.is_object()) {
            throw ParseError(at + ": expected a JSON object");
        }
        DialogRound round;
        round.question = field<std::string>(jr, "question", at);
        round.candidates = field<std::vector<std::string>>(jr, "candidates", at);
        round.gt_index = field<std::size_t>(jr, "gt_index", at);
        if (jr.contains("answer")) {
            round.answer = field<std::string>(jr, "answer", at);
        } else if (round.gt_index < round.candidates.size()) {
            round.answer = round.candidates[round.gt_index];
        }
        if (jr.contains("relevance") && !jr.at("relevance").is_null()) {
            round.relevance = field<std::vector<double>>(jr, "relevance", at);
        }
        d.rounds.push_back(std::move(round));
    }
    return d;
}

json dialog_to_toy(const Dialog& d) {
    json rounds = json::array();
    for (const DialogRound& r : d.rounds) {
        json jr = {{"question", r.question}, {"answer", r.answer}, {"candidates", r.candidates},
                   {"gt_index", r.gt_index}};
        if (r.relevance) {
            jr["relevance"] = *r.relevance;
        }
        rounds.push_back(std::move(jr));
    }
    return {{"image_id", d.image_id}, {"image_tags", d.image_tags}, {"caption", d.caption}, {"rounds", rounds}};
}

}  // namespace

std::vector<Dialog> parse_toy(std::string_view jsonl, std::string_view source_name) {
    std::vector<Dialog> corpus;
    std::istringstream in{std::string(jsonl)};
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const std::string where = std::string(source_name) + ":" + std::to_string(line_no);
        json obj;
        try {
            obj = json::parse(line);
        } catch (const json::parse_error& e) {
            throw ParseError(where + ": " + e.what());
        }
        Dialog d = dialog_from_toy(obj, where);
        try {
            validate(d);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
        corpus.push_back(std::move(d));
    }
    return corpus;
}

std::string serialize_toy(const std::vector<Dialog>& corpus) {
    std::string out;
    for (const Dialog& d : corpus) {
        out += dialog_to_toy(d).dump();
        out += '\n';
    }
    return out;
}

void save_toy(const std::vector<Dialog>& corpus, const std::filesystem::path& path) {
    write_file(path, serialize_toy(corpus));
}

std::vector<Dialog> parse_visdial(std::string_view text, std::string_view source_name) {
    const std::string src(source_name);
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(src + ": " + e.what());
    }
    const json* data = &root;
    if (root.contains("data")) {
        data = &root.at("data");
    }
    const auto questions = field<std::vector<std::string>>(*data, "questions", src);
    const auto answers = field<std::vector<std::string>>(*data, "answers", src);
    const json dialogs = field<json>(*data, "dialogs", src);
    if (!dialogs.is_array()) {
        throw ParseError(src + ": 'dialogs' must be an array");
    }

    auto lookup = [](const std::vector<std::string>& table, long long idx, const std::string& what,
                     const std::string& at) -> const std::string& {
        if (idx < 0 || static_cast<std::size_t>(idx) >= table.size()) {
            throw ValidationError(at + ": dangling " + what + " index " + std::to_string(idx));
        }
        return table[static_cast<std::size_t>(idx)];
    };

    std::vector<Dialog> corpus;
    for (std::size_t i = 0; i < dialogs.size(); ++i) {
        const json& jd = dialogs[i];
        std::string where = src + " dialog #" + std::to_string(i);
        Dialog d;
        try {
            d.image_id = image_id_string(jd.at("image_id"));
        } catch (const std::exception&) {
            throw ParseError(where + ": missing or invalid 'image_id'");
        }
        where += " (image_id " + d.image_id + ")";
        d.caption = field<std::string>(jd, "caption", where);
        const json rounds = field<json>(jd, "dialog", where);
        for (std::size_t r = 0; r < rounds.size(); ++r) {
            const std::string at = where + " round " + std::to_string(r + 1);
            const json& jr = rounds[r];
            DialogRound round;
            round.question = lookup(questions, field<long long>(jr, "question", at), "question", at);
            const auto options = field<std::vector<long long>>(jr, "answer_options", at);
            for (long long idx : options) {
                round.candidates.push_back(lookup(answers, idx, "answer", at));
            }
            round.gt_index = field<std::size_t>(jr, "gt_index", at);
            if (jr.contains("answer")) {
                round.answer = lookup(answers, field<long long>(jr, "answer", at), "answer", at);
            } else if (round.gt_index < round.candidates.size()) {
                round.answer = round.candidates[round.gt_index];
            }
            d.rounds.push_back(std::move(round));
        }
        validate(d);
        corpus.push_back(std::move(d));
    }
    return corpus;
}

void attach_dense_relevance(std::vector<Dialog>& corpus, std::string_view text, std::vector<std::string>* warnings) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("dense relevance: ") + e.what());
    }
    if (!root.is_array()) {
        throw ParseError("dense relevance: expected a JSON array");
    }
    std::map<std::string, Dialog*> by_image;
    for (Dialog& d : corpus) {
        by_image[d.image_id] = &d;
    }
    for (std::size_t i = 0; i < root.size(); ++i) {
        const json& entry = root[i];
        const std::string where = "dense relevance entry #" + std::to_string(i);
        std::string image_id;
        try {
            image_id = image_id_string(entry.at("image_id"));
        } catch (const std::exception&) {
            throw ParseError(where + ": missing or invalid 'image_id'");
        }
        const auto round_id = field<std::size_t>(entry, "round_id", where);
        const char* key = entry.contains("gt_relevance") ? "gt_relevance" : "relevance";
        auto rel = field<std::vector<double>>(entry, key, where);
        auto it = by_image.find(image_id);
        if (it == by_image.end()) {
            continue;
        }
        Dialog& d = *it->second;
        if (round_id < 1 || round_id > d.rounds.size()) {
            throw ValidationError(where + ": round_id " + std::to_string(round_id) + " out of range for image " +
                                  image_id);
        }
        DialogRound& round = d.rounds[round_id - 1];
        if (rel.size() == kNumCandidates && rel[round.gt_index] <= 0.0) {
            if (warnings != nullptr) {
                warnings->push_back(where + ": GT relevance is zero for " + image_id + ":" +
                                    std::to_string(round_id) + "; annotation dropped");
            }
            continue;
        }
        round.relevance = std::move(rel);
        try {
            validate(d);
        } catch (const ValidationError& e) {
            throw ValidationError(where + ": " + e.what());
        }
    }
}

std::vector<Dialog> load_corpus(const std::filesystem::path& path, Format format,
                                const std::optional<std::filesystem::path>& dense_relevance,
                                std::vector<std::string>* warnings) {
    const std::string text = read_file(path);
    std::vector<Dialog> corpus =
        format == Format::kToy ? parse_toy(text, path.string()) : parse_visdial(text, path.string());
    if (dense_relevance) {
        attach_dense_relevance(corpus, read_file(*dense_relevance), warnings);
    }
    return corpus;
}

std::vector<AttackInstance> flatten_instances(const std::vector<Dialog>& corpus) {
    std::vector<AttackInstance> out;
    for (const Dialog& d : corpus) {
        History history{d.caption, {}};
        for (std::size_t r = 0; r < d.rounds.size(); ++r) {
            const DialogRound& round = d.rounds[r];
            AttackInstance inst;
            inst.image_id = d.image_id;
            inst.image_tags = d.image_tags;
            inst.round_id = r + 1;
            inst.history = history;
            inst.question = round.question;
            inst.candidates = round.candidates;
            inst.gt_index = round.gt_index;
            inst.relevance = round.relevance;
            out.push_back(std::move(inst));
            history.turns.push_back({round.question, round.answer});
        }
    }
    return out;
}

std::string_view segment_name(SegmentKind kind) {
    switch (kind) {
        case SegmentKind::kCaption:
            return "caption";
        case SegmentKind::kUserQuestion:
            return "user_question";
        case SegmentKind::kSystemAnswer:
            return "system_answer";
    }
    return "caption";
}

SegmentKind parse_segment(std::string_view name) {
    if (name == "caption") return SegmentKind::kCaption;
    if (name == "user_question") return SegmentKind::kUserQuestion;
    if (name == "system_answer") return SegmentKind::kSystemAnswer;
    throw ParseError("unknown segment kind '" + std::string(name) + "'");
}

std::vector<std::pair<SegmentKind, std::string>> history_texts(const History& history) {
    std::vector<std::pair<SegmentKind, std::string>> out;
    out.emplace_back(SegmentKind::kCaption, history.caption);
    for (const QaPair& qa : history.turns) {
        out.emplace_back(SegmentKind::kUserQuestion, qa.question);
        out.emplace_back(SegmentKind::kSystemAnswer, qa.answer);
    }
    return out;
}

std::vector<HistorySegment> segment_history(const AttackInstance& instance) {
    std::vector<HistorySegment> out;
    std::size_t pos = 0;
    for (const auto& [kind, text] : history_texts(instance.history)) {
        const std::size_t n = lexsub::tokenize(text).size();
        out.push_back({kind, pos, pos + n});
        pos += n;
    }
    return out;
}

}  // namespace vdattack::corpus
