#include "senti/eval.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <functional>
#include <future>
#include <numeric>
#include <random>

#include <json.hpp>

#include "senti/errors.hpp"

namespace senti {
namespace {

using ordered_json = nlohmann::ordered_json;

double safe_div(double num, double den) { return den > 0.0 ? num / den : 0.0; }

double f_of(double r, double p) { return r + p > 0.0 ? 2.0 * r * p / (r + p) : 0.0; }

ClassMetrics class_metrics(std::size_t tp, std::size_t fp, std::size_t fn) {
    ClassMetrics m;
    m.recall = safe_div(static_cast<double>(tp), static_cast<double>(tp + fn));
    m.precision = safe_div(static_cast<double>(tp), static_cast<double>(tp + fp));
    m.f_measure = f_of(m.recall, m.precision);
    return m;
}

// One unit of the experiment grid before folds are applied.
struct Task {
    std::string label;
    Method method;
    std::size_t n = 0;               // 0 for lexicon tasks
    const Lexicon* lexicon = nullptr;
};

DocumentVector project(const DocumentVector& v, const std::vector<char>& selected) {
    DocumentVector out;
    for (std::size_t i = 0; i < v.idx.size(); ++i) {
        if (selected[v.idx[i]]) {
            out.idx.push_back(v.idx[i]);
            out.weight.push_back(v.weight[i]);
        }
    }
    return out;
}

std::vector<char> selection_mask(const FeatureSubset& subset, std::size_t vocab_size) {
    std::vector<char> mask(vocab_size, 0);
    for (std::uint32_t i : subset.indices) mask[i] = 1;
    return mask;
}

void run_parallel(int jobs, std::size_t count, const std::function<void(std::size_t)>& fn) {
    if (jobs <= 1 || count <= 1) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::future<void>> futures;
    for (int t = 1; t < jobs; ++t) futures.push_back(std::async(std::launch::async, worker));
    worker();
    for (auto& f : futures) f.get();
}

// Trains on the projected training rows and fills in one cell's metrics.
void evaluate_cell(const std::vector<DocumentVector>& vectors, const std::vector<Polarity>& labels,
                   const FoldAssignment& folds, std::uint32_t fold, const FeatureSubset& subset,
                   std::size_t vocab_size, const SvmSettings& svm, std::uint64_t seed,
                   CellResult& cell) {
    auto started = std::chrono::steady_clock::now();
    std::vector<char> mask = selection_mask(subset, vocab_size);

    TrainingProblem problem;
    problem.c = svm.c;
    problem.kernel.kind = svm.kernel;
    problem.kernel.gamma =
        svm.gamma > 0.0 ? svm.gamma : 1.0 / static_cast<double>(subset.indices.size());
    problem.tolerance = svm.tolerance;
    problem.seed = seed;

    std::vector<DocumentVector> test_vectors;
    std::vector<Polarity> test_labels;
    for (std::size_t i = 0; i < vectors.size(); ++i) {
        DocumentVector v = project(vectors[i], mask);
        if (folds.fold_of[i] == fold) {
            test_vectors.push_back(std::move(v));
            test_labels.push_back(labels[i]);
        } else {
            problem.vectors.push_back(std::move(v));
            problem.labels.push_back(to_pm1(labels[i]));
        }
    }

    SvmModel model = svm_train(problem);
    if (!model.converged) cell.error = model.warning;

    std::vector<Polarity> predicted;
    predicted.reserve(test_vectors.size());
    for (const auto& v : test_vectors) predicted.push_back(svm_predict(model, v));
    cell.metrics = compute_metrics(predicted, test_labels);
    cell.features_used = subset.indices.size();
    cell.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() -
                                                             started)
                       .count();
}

ordered_json metrics_to_json(const Metrics& m) {
    auto cls = [](const ClassMetrics& c) {
        return ordered_json{{"recall", c.recall}, {"precision", c.precision},
                            {"f_measure", c.f_measure}};
    };
    return ordered_json{{"accuracy", m.accuracy},
                        {"positive", cls(m.positive)},
                        {"negative", cls(m.negative)},
                        {"macro", cls(m.macro)},
                        {"confusion",
                         ordered_json{{"tp", m.confusion.tp},
                                      {"fp", m.confusion.fp},
                                      {"tn", m.confusion.tn},
                                      {"fn", m.confusion.fn}}}};
}

ordered_json config_json(const ExperimentConfig& c) {
    ordered_json methods = ordered_json::array();
    for (Method m : c.methods) methods.push_back(to_string(m));
    ordered_json lexicons = ordered_json::array();
    for (const auto& l : c.lexicons) {
        lexicons.push_back(ordered_json{{"name", l.name},
                                        {"positive_file", l.positive_file.string()},
                                        {"negative_file", l.negative_file.string()},
                                        {"tagged_file", l.tagged_file.string()}});
    }
    return ordered_json{
        {"data_root", c.data_root.string()},
        {"methods", methods},
        {"lexicons", lexicons},
        {"feature_counts", c.feature_counts},
        {"weighting", c.weighting == Weighting::Binary ? "binary" : "tf"},
        {"folds", c.folds},
        {"seed", c.seed},
        {"selection", c.scope == SelectionScope::PerFold ? "per-fold" : "global"},
        {"svm",
         ordered_json{{"c", c.svm.c},
                      {"gamma", c.svm.gamma},
                      {"tolerance", c.svm.tolerance},
                      {"kernel", c.svm.kernel == KernelParams::Kind::RBF ? "rbf" : "linear"}}},
        {"stopwords", c.stopword_file ? c.stopword_file->string() : ""},
        {"stem_lexicon", c.stem_lexicon},
        {"relieff_k", c.relieff_k},
        {"relieff_sample", c.relieff_sample},
        {"min_df", c.min_df},
        {"max_df_ratio", c.max_df_ratio},
        {"jobs", c.jobs},
        {"timings", c.timings},
    };
}

}  // namespace

FoldAssignment make_folds(const std::vector<Polarity>& labels, std::size_t k, std::uint64_t seed) {
    if (k < 2) throw config_error("fold count must be >= 2");
    std::array<std::vector<std::size_t>, 2> by_class;
    for (std::size_t i = 0; i < labels.size(); ++i) {
        by_class[static_cast<std::size_t>(labels[i])].push_back(i);
    }
    for (const auto& members : by_class) {
        if (members.size() < k) {
            throw config_error("a class has fewer documents than the fold count");
        }
    }
    FoldAssignment out;
    out.k = k;
    out.seed = seed;
    out.fold_of.resize(labels.size());
    std::mt19937_64 rng(seed);
    for (auto& members : by_class) {
        std::shuffle(members.begin(), members.end(), rng);
        for (std::size_t i = 0; i < members.size(); ++i) {
            out.fold_of[members[i]] = static_cast<std::uint32_t>(i % k);
        }
    }
    return out;
}

Metrics compute_metrics(const std::vector<Polarity>& predicted,
                        const std::vector<Polarity>& truth) {
    if (predicted.size() != truth.size() || predicted.empty()) {
        throw data_error("compute_metrics needs equal-length non-empty label lists");
    }
    Metrics m;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        bool t = truth[i] == Polarity::Positive;
        bool p = predicted[i] == Polarity::Positive;
        if (t && p) m.confusion.tp++;
        else if (t && !p) m.confusion.fn++;
        else if (!t && p) m.confusion.fp++;
        else m.confusion.tn++;
    }
    m.positive = class_metrics(m.confusion.tp, m.confusion.fp, m.confusion.fn);
    m.negative = class_metrics(m.confusion.tn, m.confusion.fn, m.confusion.fp);
    m.macro.recall = 0.5 * (m.positive.recall + m.negative.recall);
    m.macro.precision = 0.5 * (m.positive.precision + m.negative.precision);
    m.macro.f_measure = f_of(m.macro.recall, m.macro.precision);
    m.accuracy = static_cast<double>(m.confusion.tp + m.confusion.tn) /
                 static_cast<double>(m.confusion.total());
    return m;
}

ExperimentReport run_experiment(const ExperimentConfig& config) {
    return run_experiment(config, load_polarity_corpus(config.data_root));
}

ExperimentReport run_experiment(const ExperimentConfig& config, const CorpusRaw& corpus) {
    if (config.methods.empty()) throw config_error("no feature-selection method configured");
    bool wants_lexicon = std::count(config.methods.begin(), config.methods.end(), Method::Lexicon);
    bool wants_scored = config.methods.size() > static_cast<std::size_t>(wants_lexicon ? 1 : 0);
    if (wants_lexicon && config.lexicons.empty()) {
        throw config_error("method 'lexicon' needs --lexicon-pos/--lexicon-neg or --lexicon-tagged");
    }
    if (wants_scored && config.feature_counts.empty()) {
        throw config_error("--features must list at least one feature count");
    }
    for (std::size_t n : config.feature_counts) {
        if (n < 1) throw config_error("--features entries must be >= 1");
    }

    ExperimentReport report;
    report.config = config;
    for (const auto& w : corpus.warnings) report.warnings.push_back(w);

    const auto stopwords =
        config.stopword_file ? load_stopwords(*config.stopword_file) : default_stopwords();
    std::vector<TokenizedDocument> docs = preprocess_corpus(corpus, stopwords);
    std::vector<Polarity> labels;
    labels.reserve(docs.size());
    for (const auto& d : docs) labels.push_back(d.label);

    FoldAssignment folds = make_folds(labels, config.folds, config.seed);

    std::vector<Lexicon> lexicons;
    if (wants_lexicon) {
        for (const auto& src : config.lexicons) {
            lexicons.push_back(load_lexicon(src));
            const Lexicon& lex = lexicons.back();
            if (lex.conflicts > 0) {
                report.warnings.push_back("lexicon '" + lex.name + "': " +
                                          std::to_string(lex.conflicts) +
                                          " conflicting entries dropped");
            }
            for (const auto& w : lex.warnings) report.warnings.push_back(w);
        }
    }

    std::vector<Task> tasks;
    for (Method m : config.methods) {
        if (m == Method::Lexicon) {
            for (const auto& lex : lexicons) {
                tasks.push_back({std::string("lexicon:") + lex.name, m, 0, &lex});
            }
        } else {
            for (std::size_t n : config.feature_counts) {
                tasks.push_back({to_string(m), m, n, nullptr});
            }
        }
    }

    ReliefFOptions relieff{config.relieff_k, config.relieff_sample, config.seed};
    report.cells.resize(tasks.size() * config.folds);
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        for (std::uint32_t f = 0; f < config.folds; ++f) {
            CellResult& cell = report.cells[t * config.folds + f];
            cell.method = tasks[t].label;
            cell.n = tasks[t].n;
            cell.fold = f;
        }
    }

    auto subset_for = [&](const Task& task, const FeatureScores* scores, const Vocabulary& vocab) {
        if (task.method == Method::Lexicon) {
            return lexicon_select(vocab, *task.lexicon, config.stem_lexicon);
        }
        return select_top_n(*scores, vocab, task.n, &report.warnings);
    };

    if (config.scope == SelectionScope::Global) {
        Vocabulary vocab = build_vocabulary(docs, config.min_df, config.max_df_ratio);
        DatasetMatrix matrix = build_matrix(docs, std::move(vocab), config.weighting);
        std::vector<FeatureScores> scores_by_method;
        std::vector<Method> scored_methods;
        for (Method m : config.methods) {
            if (m == Method::Lexicon) continue;
            scored_methods.push_back(m);
            scores_by_method.push_back(score_features(m, matrix, relieff));
        }
        auto scores_of = [&](Method m) -> const FeatureScores* {
            for (std::size_t i = 0; i < scored_methods.size(); ++i) {
                if (scored_methods[i] == m) return &scores_by_method[i];
            }
            return nullptr;
        };
        // Subsets are computed sequentially; only the fold cells run in parallel.
        std::vector<FeatureSubset> subsets(tasks.size());
        std::vector<std::string> subset_errors(tasks.size());
        for (std::size_t t = 0; t < tasks.size(); ++t) {
            try {
                subsets[t] = subset_for(tasks[t], scores_of(tasks[t].method), matrix.vocabulary);
            } catch (const std::exception& ex) {
                subset_errors[t] = ex.what();
            }
        }
        run_parallel(config.jobs, tasks.size() * config.folds, [&](std::size_t unit) {
            std::size_t t = unit / config.folds;
            auto f = static_cast<std::uint32_t>(unit % config.folds);
            CellResult& cell = report.cells[unit];
            if (!subset_errors[t].empty()) {
                cell.error = subset_errors[t];
                return;
            }
            try {
                evaluate_cell(matrix.vectors, labels, folds, f, subsets[t],
                              matrix.vocabulary.size(), config.svm, config.seed, cell);
            } catch (const std::exception& ex) {
                cell.error = ex.what();
            }
            if (config.verbose) {
                std::fprintf(stderr, "cell %s n=%zu fold=%u done (%.0f ms)\n", cell.method.c_str(),
                             cell.n, cell.fold, cell.wall_ms);
            }
        });
    } else {
        for (std::uint32_t f = 0; f < config.folds; ++f) {
            std::vector<TokenizedDocument> train_docs;
            for (std::size_t i = 0; i < docs.size(); ++i) {
                if (folds.fold_of[i] != f) train_docs.push_back(docs[i]);
            }
            Vocabulary vocab;
            DatasetMatrix train_matrix;
            try {
                vocab = build_vocabulary(train_docs, config.min_df, config.max_df_ratio);
                train_matrix = build_matrix(train_docs, vocab, config.weighting);
            } catch (const std::exception& ex) {
                for (std::size_t t = 0; t < tasks.size(); ++t) {
                    report.cells[t * config.folds + f].error = ex.what();
                }
                continue;
            }
            // All documents vectorized against the training-fold vocabulary.
            std::vector<DocumentVector> vectors;
            vectors.reserve(docs.size());
            for (const auto& d : docs) vectors.push_back(vectorize(d, vocab, config.weighting));

            std::vector<FeatureScores> scores_by_method;
            std::vector<Method> scored_methods;
            for (Method m : config.methods) {
                if (m == Method::Lexicon) continue;
                scored_methods.push_back(m);
                scores_by_method.push_back(score_features(m, train_matrix, relieff));
            }
            auto scores_of = [&](Method m) -> const FeatureScores* {
                for (std::size_t i = 0; i < scored_methods.size(); ++i) {
                    if (scored_methods[i] == m) return &scores_by_method[i];
                }
                return nullptr;
            };
            std::vector<FeatureSubset> subsets(tasks.size());
            std::vector<std::string> subset_errors(tasks.size());
            for (std::size_t t = 0; t < tasks.size(); ++t) {
                try {
                    subsets[t] = subset_for(tasks[t], scores_of(tasks[t].method), vocab);
                } catch (const std::exception& ex) {
                    subset_errors[t] = ex.what();
                }
            }
            run_parallel(config.jobs, tasks.size(), [&](std::size_t t) {
                CellResult& cell = report.cells[t * config.folds + f];
                if (!subset_errors[t].empty()) {
                    cell.error = subset_errors[t];
                    return;
                }
                try {
                    evaluate_cell(vectors, labels, folds, f, subsets[t], vocab.size(), config.svm,
                                  config.seed, cell);
                } catch (const std::exception& ex) {
                    cell.error = ex.what();
                }
                if (config.verbose) {
                    std::fprintf(stderr, "cell %s n=%zu fold=%u done (%.0f ms)\n",
                                 cell.method.c_str(), cell.n, cell.fold, cell.wall_ms);
                }
            });
        }
    }

    // Aggregate over folds.
    for (std::size_t t = 0; t < tasks.size(); ++t) {
        AggregateResult agg;
        agg.method = tasks[t].label;
        agg.n = tasks[t].n;
        std::size_t ok = 0;
        for (std::uint32_t f = 0; f < config.folds; ++f) {
            const CellResult& cell = report.cells[t * config.folds + f];
            if (!cell.error.empty()) {
                report.warnings.push_back("cell failed (" + cell.method + ", n=" +
                                          std::to_string(cell.n) + ", fold " +
                                          std::to_string(f) + "): " + cell.error);
                continue;
            }
            ++ok;
            const Metrics& m = cell.metrics;
            for (auto [dst, src] : {std::pair{&agg.metrics.positive, &m.positive},
                                    {&agg.metrics.negative, &m.negative},
                                    {&agg.metrics.macro, &m.macro}}) {
                dst->recall += src->recall;
                dst->precision += src->precision;
                dst->f_measure += src->f_measure;
            }
            agg.metrics.accuracy += m.accuracy;
            agg.metrics.confusion.tp += m.confusion.tp;
            agg.metrics.confusion.fp += m.confusion.fp;
            agg.metrics.confusion.tn += m.confusion.tn;
            agg.metrics.confusion.fn += m.confusion.fn;
            agg.features_used_mean += static_cast<double>(cell.features_used);
        }
        if (ok > 0) {
            double inv = 1.0 / static_cast<double>(ok);
            for (ClassMetrics* c : {&agg.metrics.positive, &agg.metrics.negative,
                                    &agg.metrics.macro}) {
                c->recall *= inv;
                c->precision *= inv;
                c->f_measure *= inv;
            }
            agg.metrics.accuracy *= inv;
            agg.features_used_mean *= inv;
        }
        report.aggregates.push_back(std::move(agg));
    }
    return report;
}

std::string config_to_json(const ExperimentConfig& config) {
    return config_json(config).dump(2) + "\n";
}

void write_report_json(const ExperimentReport& report, std::ostream& out) {
    ordered_json j;
    j["schema_version"] = 1;
    j["config"] = config_json(report.config);
    j["cells"] = ordered_json::array();
    for (const auto& cell : report.cells) {
        ordered_json c{{"method", cell.method}, {"n", cell.n}, {"fold", cell.fold}};
        if (cell.error.empty()) {
            c["features_used"] = cell.features_used;
            c["metrics"] = metrics_to_json(cell.metrics);
            if (report.config.timings) c["wall_ms"] = cell.wall_ms;
        } else {
            c["error"] = cell.error;
        }
        j["cells"].push_back(std::move(c));
    }
    j["aggregates"] = ordered_json::array();
    for (const auto& agg : report.aggregates) {
        j["aggregates"].push_back(ordered_json{{"method", agg.method},
                                               {"n", agg.n},
                                               {"features_used_mean", agg.features_used_mean},
                                               {"metrics", metrics_to_json(agg.metrics)}});
    }
    j["warnings"] = report.warnings;
    out << j.dump(2) << "\n";
}

void write_report_csv(const ExperimentReport& report, std::ostream& out) {
    out << "method,n,fold,class,recall,precision,f_measure,accuracy\n";
    char buf[160];
    auto row = [&](const std::string& method, std::size_t n, const std::string& fold,
                   const char* cls, const ClassMetrics& c, double accuracy) {
        std::snprintf(buf, sizeof buf, "%s,%zu,%s,%s,%.6f,%.6f,%.6f,%.6f\n", method.c_str(), n,
                      fold.c_str(), cls, c.recall, c.precision, c.f_measure, accuracy);
        out << buf;
    };
    auto emit = [&](const std::string& method, std::size_t n, const std::string& fold,
                    const Metrics& m) {
        row(method, n, fold, "positive", m.positive, m.accuracy);
        row(method, n, fold, "negative", m.negative, m.accuracy);
        row(method, n, fold, "macro", m.macro, m.accuracy);
    };
    for (const auto& cell : report.cells) {
        if (!cell.error.empty()) continue;
        emit(cell.method, cell.n, std::to_string(cell.fold), cell.metrics);
    }
    for (const auto& agg : report.aggregates) {
        emit(agg.method, agg.n, "mean", agg.metrics);
    }
}

}  // namespace senti
