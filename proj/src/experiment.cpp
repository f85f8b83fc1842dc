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

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>

#include "vdattack/error.hpp"
#include "vdattack/resources.hpp"
#include "vdattack/results_io.hpp"
#include "vdattack/runner.hpp"

namespace vdattack::runner {

std::unique_ptr<Services> Services::build(const ExperimentConfig& config) {
    std::unique_ptr<Services> s(new Services());
    if (config.embeddings) {
        s->owned_embeddings_ = std::make_unique<lexsub::EmbeddingTable>(lexsub::EmbeddingTable::load(*config.embeddings));
        s->embeddings_ = s->owned_embeddings_.get();
    } else {
        s->embeddings_ = &lexsub::EmbeddingTable::fixture();
    }
    if (config.stopwords) {
        s->owned_stopwords_ = std::make_unique<lexsub::Stopwords>(lexsub::Stopwords::load(*config.stopwords));
        s->stopwords_ = s->owned_stopwords_.get();
    } else {
        s->stopwords_ = &lexsub::Stopwords::bundled();
    }
    if (config.pos_lexicon) {
        s->owned_tagger_ = std::make_unique<lexsub::LexiconTagger>(lexsub::LexiconTagger::load(*config.pos_lexicon));
        s->tagger_ = s->owned_tagger_.get();
    } else {
        s->tagger_ = &lexsub::LexiconTagger::bundled();
    }

    if (config.provider == "embedding") {
        s->provider_ = std::make_unique<lexsub::EmbeddingProvider>(*s->embeddings_, *s->tagger_);
    } else if (config.provider.rfind("mlm:", 0) == 0) {
        s->provider_ = std::make_unique<lexsub::MlmProvider>(
            std::shared_ptr<transport::JsonTransport>(transport::make_transport(config.provider.substr(4))), *s->tagger_);
    } else {
        throw PreconditionError("unknown provider '" + config.provider + "' (expected embedding or mlm:<endpoint>)");
    }

    if (config.encoder_endpoint) {
        s->encoder_ = std::make_unique<encoder::ProtocolEncoder>(
            std::shared_ptr<transport::JsonTransport>(transport::make_transport(*config.encoder_endpoint)));
    } else {
        s->encoder_ = std::make_unique<encoder::MeanEmbeddingEncoder>(*s->embeddings_);
    }
    if (config.grammar_endpoint) {
        s->grammar_ = std::make_unique<constraints::ProtocolGrammarChecker>(
            std::shared_ptr<transport::JsonTransport>(transport::make_transport(*config.grammar_endpoint)));
    } else {
        s->grammar_ = std::make_unique<constraints::RuleGrammarChecker>(*s->tagger_);
    }
    s->victim_ = oracle::make_victim(config.victim);
    return s;
}

attack::AttackContext Services::context() const {
    return attack::AttackContext{*provider_, *stopwords_, *tagger_, *encoder_, grammar_.get()};
}

std::vector<corpus::AttackInstance> eligible_instances(const ExperimentConfig& config) {
    const auto dialogs = corpus::load_corpus(config.corpus_path, config.format, config.dense_relevance);
    std::vector<corpus::AttackInstance> out;
    for (corpus::AttackInstance& inst : corpus::flatten_instances(dialogs)) {
        if (!config.round_ids.empty() &&
            std::find(config.round_ids.begin(), config.round_ids.end(), inst.round_id) == config.round_ids.end()) {
            continue;
        }
        out.push_back(std::move(inst));
        if (config.max_instances && out.size() >= *config.max_instances) {
            break;
        }
    }
    return out;
}

std::vector<attack::AttackResult> run_attacks(const std::vector<corpus::AttackInstance>& instances,
                                              const oracle::Victim& victim, const attack::AttackContext& context,
                                              const attack::AttackConfig& cfg, std::size_t workers,
                                              const std::function<void(const std::vector<attack::AttackResult>&)>&
                                                  on_abort) {
    std::vector<std::optional<attack::AttackResult>> slots(instances.size());
    std::atomic<std::size_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr first_error;
    std::mutex error_mutex;

    auto worker = [&] {
        for (;;) {
            if (failed.load()) {
                return;
            }
            const std::size_t i = next.fetch_add(1);
            if (i >= instances.size()) {
                return;
            }
            try {
                slots[i] = attack::run_attack(instances[i], victim, context, cfg);
            } catch (const attack::AttackAborted& e) {
                slots[i] = e.partial();
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                failed.store(true);
                return;
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!first_error) {
                    first_error = std::current_exception();
                }
                failed.store(true);
                return;
            }
        }
    };

    const std::size_t n_workers = std::max<std::size_t>(1, std::min(workers, instances.size()));
    if (n_workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (std::size_t w = 0; w < n_workers; ++w) {
            pool.emplace_back(worker);
        }
        for (std::thread& t : pool) {
            t.join();
        }
    }

    std::vector<attack::AttackResult> results;
    results.reserve(instances.size());
    for (auto& slot : slots) {
        if (slot) {
            results.push_back(std::move(*slot));
        }
    }
    if (first_error) {
        if (on_abort) {
            on_abort(results);
        }
        std::rethrow_exception(first_error);
    }
    return results;
}

namespace {

void write_outputs(const std::filesystem::path& dir, const std::vector<attack::AttackResult>& results,
                   const metrics::RobustnessReport* report) {
    write_file(dir / "results.jsonl", results_io::to_jsonl(results));
    if (report != nullptr) {
        write_file(dir / "report.json", metrics::to_json(*report).dump(2) + "\n");
        write_file(dir / "report.csv", metrics::to_csv(*report));
        write_file(dir / "report.txt", metrics::to_table(*report));
    }
}

}  // namespace

ExperimentOutput run_experiment(const ExperimentConfig& config, std::ostream* log) {
    config.attack.validate();
    const auto instances = eligible_instances(config);
    const auto services = Services::build(config);

    ExperimentOutput out;
    if (instances.empty()) {
        out.warnings.push_back("no eligible instances");
        if (log != nullptr) {
            *log << "warning: no eligible instances\n";
        }
    }
    auto flush_partial = [&](const std::vector<attack::AttackResult>& partial) {
        if (config.out_dir) {
            write_outputs(*config.out_dir, partial, nullptr);
        }
    };
    out.results = run_attacks(instances, services->victim(), services->context(), config.attack, config.workers,
                              flush_partial);
    out.report = metrics::report_from_results(out.results);
    if (config.out_dir) {
        write_outputs(*config.out_dir, out.results, &out.report);
    }
    if (log != nullptr) {
        *log << out.results.size() << " instances attacked, " << out.report.n_success << " successful";
        if (config.out_dir) {
            *log << "; outputs in " << config.out_dir->string();
        }
        *log << "\n";
    }
    return out;
}

}  // namespace vdattack::runner
