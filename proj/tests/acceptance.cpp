// End-to-end acceptance suite. Each numbered check prints exactly one
// PASS/FAIL line; the process exits non-zero if any check fails.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "helpers.hpp"
#include "senti/errors.hpp"
#include "senti/eval.hpp"
#include "senti/synth.hpp"

using namespace senti;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, bool ok, const std::string& detail) {
    std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", criterion, detail.c_str());
    std::fflush(stdout);
    if (!ok) ++g_failures;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.4f", v);
    return buf;
}

struct SweepResults {
    // macro f-measure keyed by (method label, n); lexicons use n = 0.
    std::map<std::pair<std::string, std::size_t>, double> macro_f;

    double get(const std::string& method, std::size_t n) const {
        auto it = macro_f.find({method, n});
        if (it == macro_f.end()) {
            throw std::runtime_error("missing aggregate " + method + "@" + std::to_string(n));
        }
        return it->second;
    }
};

SweepResults run_benchmark_sweep(const SynthPaths& paths) {
    ExperimentConfig cfg;
    cfg.data_root = paths.corpus_dir;
    cfg.methods = {Method::IG, Method::GR, Method::Lexicon};
    cfg.feature_counts = {100, 500, 1000, 2000, 5000};
    cfg.weighting = Weighting::Binary;
    cfg.folds = 10;
    cfg.seed = 42;
    cfg.scope = SelectionScope::Global;
    cfg.stem_lexicon = true;
    cfg.jobs = 1;

    LexiconSource hm;
    hm.name = "hm";
    hm.tagged_file = paths.hm_tagged;
    LexiconSource gi;
    gi.name = "gi";
    gi.tagged_file = paths.gi_tagged;
    LexiconSource opinion;
    opinion.name = "opinion";
    opinion.positive_file = paths.opinion_positive;
    opinion.negative_file = paths.opinion_negative;
    cfg.lexicons = {hm, gi, opinion};

    ExperimentReport report = run_experiment(cfg);
    SweepResults out;
    for (const auto& agg : report.aggregates) {
        out.macro_f[{agg.method, agg.n}] = agg.metrics.macro.f_measure;
    }
    return out;
}

double stddev(const std::vector<double>& xs) {
    double mean = 0.0;
    for (double x : xs) mean += x;
    mean /= static_cast<double>(xs.size());
    double var = 0.0;
    for (double x : xs) var += (x - mean) * (x - mean);
    return std::sqrt(var / static_cast<double>(xs.size()));
}

void check_lexicon_quality(const SweepResults& r) {
    double gi = r.get("lexicon:gi", 0);
    double hm = r.get("lexicon:hm", 0);
    bool in_window = gi >= 0.65 && gi <= 0.85;
    bool ordered = hm < gi;
    report(1, in_window && ordered,
           "gi macro-F " + fmt(gi) + " in [0.65, 0.85]; hm " + fmt(hm) + " < gi");
}

void check_top_method(const SweepResults& r) {
    double gr5000 = r.get("gr", 5000);
    double best_lex = std::max({r.get("lexicon:gi", 0), r.get("lexicon:hm", 0),
                                r.get("lexicon:opinion", 0)});
    bool ok = gr5000 >= 0.80 && gr5000 >= best_lex + 0.05;
    report(2, ok, "gr@5000 macro-F " + fmt(gr5000) + " >= 0.80 and >= best lexicon " +
                      fmt(best_lex) + " + 0.05");
}

void check_small_n_ordering(const SweepResults& r) {
    double gr100 = r.get("gr", 100);
    double ig100 = r.get("ig", 100);
    if (gr100 <= ig100) {
        report(3, true, "gr@100 " + fmt(gr100) + " <= ig@100 " + fmt(ig100));
    } else if (gr100 - ig100 <= 0.01) {
        report(3, true, "gr@100 " + fmt(gr100) + " exceeds ig@100 " + fmt(ig100) +
                            " by <= 0.01 (soft warning)");
    } else {
        report(3, false, "gr@100 " + fmt(gr100) + " > ig@100 " + fmt(ig100) + " by > 0.01");
    }
}

void check_stability(const SweepResults& r) {
    std::vector<double> ig, gr;
    for (std::size_t n : {100, 500, 1000, 2000, 5000}) {
        ig.push_back(r.get("ig", n));
        gr.push_back(r.get("gr", n));
    }
    double ig_sd = stddev(ig), gr_sd = stddev(gr);
    report(4, ig_sd <= gr_sd,
           "ig macro-F stddev " + fmt(ig_sd) + " <= gr stddev " + fmt(gr_sd) +
               " over n in {100,500,1000,2000,5000}");
}

void check_scoring_oracles() {
    std::size_t corpora = 0, mismatches = 0;
    double worst = 0.0;
    for (std::uint64_t seed = 0; seed < 120; ++seed) {
        DatasetMatrix m = helpers::random_matrix(seed, 50, 30);
        FeatureScores ig = score_features(Method::IG, m);
        FeatureScores gr = score_features(Method::GR, m);
        FeatureScores chi = score_features(Method::CHI, m);
        FeatureScores df = score_features(Method::DF, m);
        for (std::uint32_t t = 0; t < m.vocabulary.size(); ++t) {
            double diffs[] = {
                std::abs(ig.scores[t] - helpers::oracle::info_gain(t, m)),
                std::abs(gr.scores[t] - helpers::oracle::gain_ratio(t, m)),
                std::abs(chi.scores[t] - helpers::oracle::chi_squared(t, m)),
                std::abs(df.scores[t] -
                         static_cast<double>(helpers::oracle::document_frequency(t, m))),
            };
            for (double d : diffs) {
                worst = std::max(worst, d);
                if (d > 1e-9) ++mismatches;
            }
        }
        ++corpora;
    }
    report(5, corpora >= 100 && mismatches == 0,
           "ig/gr/chi/df match brute-force oracles on " + std::to_string(corpora) +
               " corpora, max |diff| " + fmt(worst) + " (tol 1e-9)");
}

void check_svm() {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    bool ok = true;
    std::string why;

    // Dual feasibility plus agreement with the exhaustive solver.
    for (int trial = 0; trial < 15 && ok; ++trial) {
        std::size_t n = 4 + rng() % 6;  // 4..9 points, oracle handles up to 12
        TrainingProblem p;
        for (std::size_t i = 0; i < n; ++i) {
            DocumentVector v;
            for (std::uint32_t f = 0; f < 5; ++f) {
                if (unit(rng) < 0.5) {
                    v.idx.push_back(f);
                    v.weight.push_back(1.0);
                }
            }
            p.vectors.push_back(std::move(v));
            p.labels.push_back(i % 2 == 0 ? +1 : -1);
        }
        p.c = trial % 2 == 0 ? 1.0 : 5.0;
        p.kernel = {KernelParams::Kind::RBF, 0.75};
        p.tolerance = 1e-6;
        p.seed = static_cast<std::uint64_t>(trial);

        SvmModel m = svm_train(p);
        double sum_ay = 0.0;
        for (std::size_t i = 0; i < m.alpha.size(); ++i) {
            sum_ay += m.alpha[i] * m.labels[i];
            if (m.alpha[i] < 0.0 || m.alpha[i] > p.c) {
                ok = false;
                why = "alpha outside [0, C]";
            }
        }
        if (std::abs(sum_ay) > 1e-6) {
            ok = false;
            why = "sum alpha_i y_i = " + fmt(sum_ay);
        }
        double oracle = helpers::oracle::svm_dual_max(p.vectors, p.labels, p.c, p.kernel);
        double rel = std::abs(m.dual_objective - oracle) / std::max(1.0, std::abs(oracle));
        if (rel > 1e-3) {
            ok = false;
            why = "dual objective off oracle by rel " + fmt(rel);
        }
    }

    // Separable toys with large C must be classified perfectly.
    for (int trial = 0; trial < 5 && ok; ++trial) {
        TrainingProblem p;
        for (std::size_t i = 0; i < 24; ++i) {
            bool positive = i % 2 == 0;
            DocumentVector v;
            v.idx.push_back(positive ? 0 : 1);
            v.weight.push_back(1.0);
            if (unit(rng) < 0.5) {
                v.idx.push_back(2 + static_cast<std::uint32_t>(rng() % 4));
                v.weight.push_back(1.0);
                std::sort(v.idx.begin(), v.idx.end());
            }
            p.vectors.push_back(std::move(v));
            p.labels.push_back(positive ? +1 : -1);
        }
        p.c = 1000.0;
        p.kernel = {KernelParams::Kind::RBF, 0.5};
        p.seed = static_cast<std::uint64_t>(trial);
        SvmModel m = svm_train(p);
        for (std::size_t i = 0; i < p.vectors.size(); ++i) {
            if (to_pm1(svm_predict(m, p.vectors[i])) != p.labels[i]) {
                ok = false;
                why = "separable toy misclassified";
            }
        }
    }

    // Two symmetric points: zero bias.
    if (ok) {
        TrainingProblem p;
        DocumentVector a, b;
        a.idx = {0};
        a.weight = {1.0};
        b.idx = {1};
        b.weight = {1.0};
        p.vectors = {a, b};
        p.labels = {+1, -1};
        p.c = 10.0;
        p.kernel = {KernelParams::Kind::RBF, 1.0};
        SvmModel m = svm_train(p);
        if (std::abs(m.bias) > 1e-6) {
            ok = false;
            why = "symmetric pair bias " + fmt(m.bias);
        }
    }

    report(6, ok, ok ? "dual constraints, oracle agreement (rel 1e-3), separable accuracy, "
                       "symmetric bias all hold"
                     : why);
}

void check_harness(const fs::path& corpus_dir) {
    bool ok = true;
    std::string why;

    // Metric identities on random confusions.
    std::mt19937 rng(7);
    for (int trial = 0; trial < 200 && ok; ++trial) {
        std::vector<Polarity> truth, pred;
        for (int i = 0; i < 30; ++i) {
            truth.push_back(rng() % 2 ? Polarity::Positive : Polarity::Negative);
            pred.push_back(rng() % 2 ? Polarity::Positive : Polarity::Negative);
        }
        Metrics m = compute_metrics(pred, truth);
        for (const ClassMetrics* cm : {&m.positive, &m.negative, &m.macro}) {
            double p = cm->precision, r = cm->recall;
            double expect = (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
            if (std::abs(cm->f_measure - expect) > 1e-12 ||
                cm->f_measure < std::min(p, r) - 1e-12 ||
                cm->f_measure > std::max(p, r) + 1e-12) {
                ok = false;
                why = "f-measure identity violated";
            }
        }
    }

    // Published recall/precision pairs must reproduce their f-measures.
    auto f_of = [](double r, double p) { return 2.0 * p * r / (p + r); };
    if (ok && (std::abs(f_of(0.739, 0.760) - 0.7494) > 0.005 ||
               std::abs(f_of(0.490, 0.640) - 0.5550) > 0.005)) {
        ok = false;
        why = "reference f-measure reconstruction off by > 0.005";
    }

    // Fold invariants on the full corpus labels.
    if (ok) {
        CorpusRaw corpus = load_polarity_corpus(corpus_dir);
        std::vector<Polarity> labels;
        for (const auto& d : corpus.documents) labels.push_back(d.label);
        FoldAssignment folds = make_folds(labels, 10, 42);
        std::vector<std::size_t> pos(10, 0), neg(10, 0);
        for (std::size_t i = 0; i < labels.size(); ++i) {
            (labels[i] == Polarity::Positive ? pos : neg)[folds.fold_of[i]]++;
        }
        auto [pmin, pmax] = std::minmax_element(pos.begin(), pos.end());
        auto [nmin, nmax] = std::minmax_element(neg.begin(), neg.end());
        if (*pmax - *pmin > 1 || *nmax - *nmin > 1) {
            ok = false;
            why = "per-class fold counts differ by more than 1";
        }
        if (folds.fold_of != make_folds(labels, 10, 42).fold_of) {
            ok = false;
            why = "fold assignment not deterministic";
        }
    }

    // Byte-identical reports for identical config + seed (small subset run).
    if (ok) {
        ExperimentConfig cfg;
        cfg.data_root = corpus_dir;
        cfg.methods = {Method::IG};
        cfg.feature_counts = {50};
        cfg.folds = 10;
        cfg.seed = 42;
        cfg.scope = SelectionScope::Global;

        CorpusRaw full = load_polarity_corpus(corpus_dir);
        CorpusRaw sample;
        for (const auto& d : full.documents) {
            bool take = (d.label == Polarity::Positive ? sample.positive_count
                                                       : sample.negative_count) < 60;
            if (take) {
                sample.documents.push_back(d);
                (d.label == Polarity::Positive ? sample.positive_count
                                               : sample.negative_count)++;
            }
        }
        std::ostringstream a, b;
        write_report_json(run_experiment(cfg, sample), a);
        write_report_json(run_experiment(cfg, sample), b);
        if (a.str() != b.str()) {
            ok = false;
            why = "reports not byte-identical across runs";
        }
    }

    report(7, ok, ok ? "metric identities, fold invariants, and report determinism hold" : why);
}

}  // namespace

int main() {
    fs::path work = fs::temp_directory_path() /
                    ("senti_accept_" + std::to_string(std::random_device{}()));
    fs::create_directories(work);

    try {
        SynthSpec spec;  // seeded defaults: 1000 docs per class
        std::printf("generating benchmark dataset (seed %llu, %zu docs/class)...\n",
                    static_cast<unsigned long long>(spec.seed), spec.docs_per_class);
        std::fflush(stdout);
        SynthPaths paths = write_synthetic_dataset(spec, work);

        std::printf("running feature-selection / lexicon sweep (10-fold CV)...\n");
        std::fflush(stdout);
        SweepResults sweep = run_benchmark_sweep(paths);

        check_lexicon_quality(sweep);
        check_top_method(sweep);
        check_small_n_ordering(sweep);
        check_stability(sweep);
        check_scoring_oracles();
        check_svm();
        check_harness(paths.corpus_dir);
    } catch (const std::exception& e) {
        std::printf("FAIL acceptance aborted: %s\n", e.what());
        ++g_failures;
    }

    fs::remove_all(work);
    std::printf("%s: %d criteria failed\n", g_failures == 0 ? "OK" : "FAILED", g_failures);
    return g_failures == 0 ? 0 : 1;
}
