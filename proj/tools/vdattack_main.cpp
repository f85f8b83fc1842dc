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

#include <cstdio>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "vdattack/annotation.hpp"
#include "vdattack/attack_type.hpp"
#include "vdattack/error.hpp"
#include "vdattack/oracle.hpp"
#include "vdattack/resources.hpp"
#include "vdattack/results_io.hpp"
#include "vdattack/runner.hpp"
#include "vdattack/transport.hpp"

namespace {

using namespace vdattack;

struct ExperimentFlags {
    std::string corpus;
    std::string format = "toy";
    std::string dense;
    std::string victim = "builtin:ih";
    std::string provider = "embedding";
    double epsilon = constraints::kDefaultEpsilon;
    std::size_t k = attack::kDefaultTopK;
    std::string target = "question";
    std::string constraints = "stopwords,pos,sim";
    std::uint64_t seed = 0;
    std::string out;
    std::size_t workers = 1;
    std::string embeddings;
    std::string stopwords;
    std::string pos_lexicon;
    std::string encoder;
    std::string grammar;
    std::size_t max_instances = 0;
    std::vector<std::size_t> rounds;
    std::string order = "importance";
    std::size_t max_subs = 0;
};

void add_experiment_flags(CLI::App* app, ExperimentFlags& f) {
    app->add_option("--corpus", f.corpus, "Corpus file")->required()->check(CLI::ExistingFile);
    app->add_option("--format", f.format, "visdial | toy")->capture_default_str();
    app->add_option("--dense", f.dense, "Dense relevance annotations (visdial)")->check(CLI::ExistingFile);
    app->add_option("--victim", f.victim, "builtin:<preset> | http://host:port/path | cmd:<command>")
        ->capture_default_str();
    app->add_option("--provider", f.provider, "embedding | mlm:<endpoint>")->capture_default_str();
    app->add_option("--epsilon", f.epsilon, "Semantic similarity threshold")->capture_default_str();
    app->add_option("--k", f.k, "Synonym candidates per word")->capture_default_str();
    app->add_option("--target", f.target, "question | history")->capture_default_str();
    app->add_option("--constraints", f.constraints, "Comma list of stopwords,pos,sim,grammar, or none")
        ->capture_default_str();
    app->add_option("--seed", f.seed, "Seed for the random word order")->capture_default_str();
    app->add_option("--out", f.out, "Output directory");
    app->add_option("--workers", f.workers, "Parallel attacks")->capture_default_str();
    app->add_option("--embeddings", f.embeddings, "Embedding table (word2vec text)")->check(CLI::ExistingFile);
    app->add_option("--stopwords", f.stopwords, "Stopword list")->check(CLI::ExistingFile);
    app->add_option("--pos-lexicon", f.pos_lexicon, "POS lexicon (word<TAB>TAG)")->check(CLI::ExistingFile);
    app->add_option("--encoder", f.encoder, "Sentence encoder endpoint");
    app->add_option("--grammar", f.grammar, "Grammar checker endpoint");
    app->add_option("--max-instances", f.max_instances, "Attack at most this many instances");
    app->add_option("--rounds", f.rounds, "Only these round ids (1-based)")->delimiter(',');
    app->add_option("--order", f.order, "importance | random")->capture_default_str();
    app->add_option("--max-subs", f.max_subs, "Substitution budget per instance (0 = unlimited)");
}

runner::ExperimentConfig to_config(const ExperimentFlags& f) {
    runner::ExperimentConfig cfg;
    cfg.corpus_path = f.corpus;
    cfg.format = corpus::parse_format(f.format);
    if (!f.dense.empty()) {
        cfg.dense_relevance = f.dense;
    }
    cfg.victim = f.victim;
    cfg.provider = f.provider;
    if (!f.embeddings.empty()) {
        cfg.embeddings = f.embeddings;
    }
    if (!f.stopwords.empty()) {
        cfg.stopwords = f.stopwords;
    }
    if (!f.pos_lexicon.empty()) {
        cfg.pos_lexicon = f.pos_lexicon;
    }
    if (!f.encoder.empty()) {
        cfg.encoder_endpoint = f.encoder;
    }
    if (!f.grammar.empty()) {
        cfg.grammar_endpoint = f.grammar;
    }
    cfg.attack.k = f.k;
    cfg.attack.constraints = constraints::ConstraintConfig::parse(f.constraints, f.epsilon);
    cfg.attack.target = attack::parse_target(f.target);
    cfg.attack.order = attack::parse_word_order(f.order);
    if (f.max_subs > 0) {
        cfg.attack.max_substitutions = f.max_subs;
    }
    cfg.attack.seed = f.seed;
    cfg.attack.validate();
    cfg.round_ids = f.rounds;
    if (f.max_instances > 0) {
        cfg.max_instances = f.max_instances;
    }
    if (!f.out.empty()) {
        cfg.out_dir = f.out;
    }
    cfg.workers = f.workers;
    return cfg;
}

int run_attack_cmd(const ExperimentFlags& f) {
    const runner::ExperimentOutput out = runner::run_experiment(to_config(f), &std::cerr);
    std::cout << metrics::to_table(out.report);
    return 0;
}

int run_sweep_cmd(const ExperimentFlags& f, const std::string& axis, const std::vector<double>& epsilons) {
    const runner::SweepTable table = runner::ablation_sweep(to_config(f), runner::parse_axis(axis), epsilons, &std::cerr);
    std::cout << runner::to_table(table);
    return 0;
}

int run_report_cmd(const std::string& results_path, const std::string& format) {
    const auto results = results_io::load_jsonl(results_path);
    const metrics::RobustnessReport report = metrics::report_from_results(results);
    if (format == "json") {
        std::cout << metrics::to_json(report).dump(2) << "\n";
    } else if (format == "csv") {
        std::cout << metrics::to_csv(report);
    } else {
        std::cout << metrics::to_table(report);
    }
    return 0;
}

struct ClassifyFlags {
    std::vector<std::string> pair;
    std::string results;
    std::string embeddings;
    std::string pos_lexicon;
    std::string spelling;
    std::size_t k = attack::kDefaultTopK;
};

int run_classify_cmd(const ClassifyFlags& f) {
    std::optional<lexsub::EmbeddingTable> own_table;
    if (!f.embeddings.empty()) {
        own_table = lexsub::EmbeddingTable::load(f.embeddings);
    }
    std::optional<lexsub::LexiconTagger> own_tagger;
    if (!f.pos_lexicon.empty()) {
        own_tagger = lexsub::LexiconTagger::load(f.pos_lexicon);
    }
    std::optional<runner::SpellingVariants> own_spelling;
    if (!f.spelling.empty()) {
        own_spelling = runner::SpellingVariants::load(f.spelling);
    }
    const runner::TypeLexicons lex{own_spelling ? *own_spelling : runner::SpellingVariants::bundled(),
                                   own_table ? *own_table : lexsub::EmbeddingTable::fixture(),
                                   own_tagger ? static_cast<const lexsub::PosTagger&>(*own_tagger)
                                              : lexsub::LexiconTagger::bundled(),
                                   f.k};
    if (!f.pair.empty()) {
        std::cout << runner::attack_type_name(runner::classify_attack_type(f.pair[0], f.pair[1], lex)) << "\n";
        return 0;
    }
    if (f.results.empty()) {
        throw PreconditionError("classify needs --pair or --results");
    }
    std::map<runner::AttackType, std::size_t> counts;
    std::size_t total = 0;
    for (const attack::AttackResult& r : results_io::load_jsonl(f.results)) {
        if (!r.success) {
            continue;
        }
        for (const attack::Substitution& s : r.substitutions) {
            ++counts[runner::classify_attack_type(s.original, s.replacement, lex)];
            ++total;
        }
    }
    std::printf("%-26s %8s %8s\n", "type", "count", "share");
    for (auto t : {runner::AttackType::kBritishAmerican, runner::AttackType::kSynonym,
                   runner::AttackType::kSingularPlural, runner::AttackType::kComparativeSuperlative,
                   runner::AttackType::kOther}) {
        const std::size_t n = counts[t];
        std::printf("%-26s %8zu %7.1f%%\n", std::string(runner::attack_type_name(t)).c_str(), n,
                    total ? 100.0 * static_cast<double>(n) / static_cast<double>(total) : 0.0);
    }
    return 0;
}

int run_export_cmd(const std::string& results_path, const std::vector<std::string>& task_names,
                   std::size_t sample, std::uint64_t seed, const std::string& out) {
    const auto results = results_io::load_jsonl(results_path);
    std::vector<runner::AnnotationTask> tasks;
    for (const std::string& t : task_names) {
        tasks.push_back(runner::parse_task(t));
    }
    if (tasks.empty()) {
        tasks = runner::all_tasks();
    }
    const auto items = runner::export_annotation_batch(
        results, tasks, sample > 0 ? std::optional<std::size_t>(sample) : std::nullopt, seed);
    const std::string text = runner::to_jsonl(items);
    if (out.empty()) {
        std::cout << text;
    } else {
        write_file(out, text);
        std::cerr << items.size() << " items written to " << out << "\n";
    }
    return 0;
}

int run_aggregate_cmd(const std::string& ratings_path) {
    const auto summary = runner::aggregate_annotations(runner::load_ratings(ratings_path));
    std::cout << runner::to_text(summary);
    return 0;
}

int run_serve_cmd(const std::string& preset, bool use_stdio, const std::string& host, int port) {
    const oracle::OverlapRanker victim(oracle::ranker_preset(preset));
    auto handler = [&victim](const transport::Json& request) { return oracle::handle_score_request(victim, request); };
    if (use_stdio) {
        transport::serve_stdio(handler, std::cin, std::cout);
        return 0;
    }
    transport::HttpServer server(handler);
    std::cerr << "serving builtin:" << preset << " on " << host << ":" << port << "\n";
    server.listen_blocking(host, port);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Black-box word-substitution attacks on answer-ranking visual dialog models"};
    app.require_subcommand(1);

    ExperimentFlags attack_flags;
    CLI::App* attack_cmd = app.add_subcommand("attack", "Attack every eligible instance and report robustness");
    add_experiment_flags(attack_cmd, attack_flags);

    ExperimentFlags sweep_flags;
    std::string axis = "epsilon";
    std::vector<double> epsilons;
    CLI::App* sweep_cmd = app.add_subcommand("sweep", "Ablation sweep along one axis");
    add_experiment_flags(sweep_cmd, sweep_flags);
    sweep_cmd->add_option("--axis", axis, "epsilon | constraint_stack | word_selection | stopwords")
        ->capture_default_str();
    sweep_cmd->add_option("--epsilons", epsilons, "Thresholds for the epsilon axis")->delimiter(',');

    std::string report_results;
    std::string report_format = "table";
    CLI::App* report_cmd = app.add_subcommand("report", "Re-aggregate a result log");
    report_cmd->add_option("--results", report_results, "results.jsonl")->required()->check(CLI::ExistingFile);
    report_cmd->add_option("--format", report_format, "table | csv | json")->capture_default_str();

    ClassifyFlags classify_flags;
    CLI::App* classify_cmd = app.add_subcommand("classify", "Classify substitutions by attack type");
    classify_cmd->add_option("--pair", classify_flags.pair, "Original and replacement word")->expected(2);
    classify_cmd->add_option("--results", classify_flags.results, "results.jsonl")->check(CLI::ExistingFile);
    classify_cmd->add_option("--embeddings", classify_flags.embeddings, "Embedding table")->check(CLI::ExistingFile);
    classify_cmd->add_option("--pos-lexicon", classify_flags.pos_lexicon, "POS lexicon")->check(CLI::ExistingFile);
    classify_cmd->add_option("--spelling", classify_flags.spelling, "Spelling variant list")
        ->check(CLI::ExistingFile);
    classify_cmd->add_option("--k", classify_flags.k, "Neighborhood size")->capture_default_str();

    std::string export_results;
    std::vector<std::string> export_tasks;
    std::size_t export_sample = 0;
    std::uint64_t export_seed = 0;
    std::string export_out;
    CLI::App* export_cmd = app.add_subcommand("export-anno", "Export an annotation batch");
    export_cmd->add_option("--results", export_results, "results.jsonl")->required()->check(CLI::ExistingFile);
    export_cmd->add_option("--tasks", export_tasks, "Tasks (default all)")->delimiter(',');
    export_cmd->add_option("--sample", export_sample, "Sample this many successful attacks");
    export_cmd->add_option("--seed", export_seed, "Sampling seed")->capture_default_str();
    export_cmd->add_option("--out", export_out, "Output file (stdout when omitted)");

    std::string ratings_path;
    CLI::App* aggregate_cmd = app.add_subcommand("aggregate-anno", "Summarize annotation ratings");
    aggregate_cmd->add_option("--ratings", ratings_path, "Ratings JSONL")->required()->check(CLI::ExistingFile);

    std::string preset = "ih";
    bool use_stdio = false;
    std::string host = "127.0.0.1";
    int port = 8080;
    CLI::App* serve_cmd = app.add_subcommand("serve-victim", "Serve a builtin ranker over the victim protocol");
    serve_cmd->add_option("--preset", preset, "Ranker preset")->capture_default_str();
    serve_cmd->add_flag("--stdio", use_stdio, "Newline-delimited JSON on stdin/stdout");
    serve_cmd->add_option("--host", host, "Bind address")->capture_default_str();
    serve_cmd->add_option("--port", port, "HTTP port")->capture_default_str();

    CLI11_PARSE(app, argc, argv);

    try {
        if (attack_cmd->parsed()) {
            return run_attack_cmd(attack_flags);
        }
        if (sweep_cmd->parsed()) {
            return run_sweep_cmd(sweep_flags, axis, epsilons);
        }
        if (report_cmd->parsed()) {
            return run_report_cmd(report_results, report_format);
        }
        if (classify_cmd->parsed()) {
            return run_classify_cmd(classify_flags);
        }
        if (export_cmd->parsed()) {
            return run_export_cmd(export_results, export_tasks, export_sample, export_seed, export_out);
        }
        if (aggregate_cmd->parsed()) {
            return run_aggregate_cmd(ratings_path);
        }
        if (serve_cmd->parsed()) {
            return run_serve_cmd(preset, use_stdio, host, port);
        }
    } catch (const attack::AttackAborted& e) {
        std::cerr << "error: " << e.what() << "\n";
        std::cerr << "aborted at instance " << e.partial().instance_id << "; completed results were flushed\n";
        return 3;
    } catch (const TransportError& e) {
        std::cerr << "transport error: " << e.what() << "\n";
        return 3;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
