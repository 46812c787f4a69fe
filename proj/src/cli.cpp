#include "senti/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "senti/errors.hpp"
#include "senti/eval.hpp"
#include "senti/featsel.hpp"
#include "senti/synth.hpp"

namespace senti {
namespace {

constexpr const char* kVersion = "sentibench 1.0.0";

struct RunFlags {
    std::string data;
    std::vector<std::string> methods{"ig"};
    std::vector<std::size_t> features{100, 500, 1000, 2000, 5000};
    std::string weighting = "binary";
    std::size_t folds = 10;
    std::uint64_t seed = 42;
    std::string selection = "per-fold";
    double svm_c = 1.0;
    std::string svm_gamma = "auto";
    std::string kernel = "rbf";
    std::string stopwords;
    std::string lexicon_pos, lexicon_neg, lexicon_tagged, lexicon_name = "lexicon";
    bool stem_lexicon = false;
    std::size_t relieff_k = 10;
    std::size_t relieff_sample = 0;
    std::size_t min_df = 1;
    double max_df_ratio = 1.0;
    std::string out;
    int jobs = 0;
    bool quiet = false;
    bool timings = false;
    bool print_config = false;
};

ExperimentConfig build_config(const RunFlags& f) {
    ExperimentConfig cfg;
    if (f.data.empty()) throw config_error("--data is required");
    cfg.data_root = f.data;
    for (const auto& name : f.methods) {
        auto m = method_from_string(name);
        if (!m) throw config_error("--method: unknown method '" + name + "'");
        cfg.methods.push_back(*m);
    }
    cfg.feature_counts = f.features;
    if (f.weighting == "binary") cfg.weighting = Weighting::Binary;
    else if (f.weighting == "tf") cfg.weighting = Weighting::TermFrequency;
    else throw config_error("--weighting must be 'binary' or 'tf'");
    cfg.folds = f.folds;
    cfg.seed = f.seed;
    if (f.selection == "per-fold") cfg.scope = SelectionScope::PerFold;
    else if (f.selection == "global") cfg.scope = SelectionScope::Global;
    else throw config_error("--selection must be 'per-fold' or 'global'");
    cfg.svm.c = f.svm_c;
    if (f.svm_c <= 0.0) throw config_error("--svm-c must be > 0");
    if (f.svm_gamma == "auto") {
        cfg.svm.gamma = 0.0;
    } else {
        try {
            cfg.svm.gamma = std::stod(f.svm_gamma);
        } catch (...) {
            throw config_error("--svm-gamma must be a number or 'auto'");
        }
        if (cfg.svm.gamma <= 0.0) throw config_error("--svm-gamma must be > 0 or 'auto'");
    }
    if (f.kernel == "rbf") cfg.svm.kernel = KernelParams::Kind::RBF;
    else if (f.kernel == "linear") cfg.svm.kernel = KernelParams::Kind::Linear;
    else throw config_error("--kernel must be 'rbf' or 'linear'");
    if (!f.stopwords.empty()) cfg.stopword_file = f.stopwords;
    bool lexicon_requested =
        std::count(cfg.methods.begin(), cfg.methods.end(), Method::Lexicon) > 0;
    if (lexicon_requested) {
        LexiconSource src;
        src.name = f.lexicon_name;
        if (!f.lexicon_tagged.empty()) {
            src.tagged_file = f.lexicon_tagged;
        } else if (!f.lexicon_pos.empty() && !f.lexicon_neg.empty()) {
            src.positive_file = f.lexicon_pos;
            src.negative_file = f.lexicon_neg;
        } else {
            throw config_error(
                "--method lexicon needs --lexicon-pos and --lexicon-neg, or --lexicon-tagged");
        }
        cfg.lexicons.push_back(std::move(src));
    }
    cfg.stem_lexicon = f.stem_lexicon;
    cfg.relieff_k = f.relieff_k;
    cfg.relieff_sample = f.relieff_sample;
    cfg.min_df = f.min_df;
    cfg.max_df_ratio = f.max_df_ratio;
    cfg.jobs = f.jobs > 0 ? f.jobs : static_cast<int>(std::thread::hardware_concurrency());
    if (cfg.jobs < 1) cfg.jobs = 1;
    cfg.timings = f.timings;
    cfg.verbose = !f.quiet;
    return cfg;
}

void add_run_flags(CLI::App* cmd, RunFlags& f, bool with_sweep) {
    cmd->add_option("--data", f.data, "corpus root with pos/ and neg/ subdirectories");
    if (with_sweep) {
        cmd->add_option("--method", f.methods, "methods: df,ig,gr,chi,relieff,lexicon")
            ->delimiter(',');
        cmd->add_option("--features", f.features, "top-n feature counts to sweep")->delimiter(',');
        cmd->add_option("--selection", f.selection, "selection scope: per-fold|global");
        cmd->add_option("--svm-c", f.svm_c, "SVM box constraint C");
        cmd->add_option("--svm-gamma", f.svm_gamma, "RBF gamma, or 'auto' (1/#features)");
        cmd->add_option("--kernel", f.kernel, "kernel: rbf|linear");
        cmd->add_option("--lexicon-pos", f.lexicon_pos, "positive word-list file");
        cmd->add_option("--lexicon-neg", f.lexicon_neg, "negative word-list file");
        cmd->add_option("--lexicon-tagged", f.lexicon_tagged, "word<TAB>polarity lexicon file");
        cmd->add_option("--lexicon-name", f.lexicon_name, "label for the lexicon in reports");
        cmd->add_flag("--stem-lexicon", f.stem_lexicon, "stem lexicon entries before matching");
        cmd->add_option("--relieff-k", f.relieff_k, "Relief-F neighbor count");
        cmd->add_option("--relieff-sample", f.relieff_sample,
                        "Relief-F sampled instances (0 = all)");
        cmd->add_option("--jobs", f.jobs, "parallel cells (0 = available cores)");
        cmd->add_flag("--timings", f.timings, "include per-cell wall-clock in the JSON report");
        cmd->add_flag("--print-config", f.print_config,
                      "print the fully resolved configuration and exit");
    }
    cmd->add_option("--weighting", f.weighting, "binary|tf");
    cmd->add_option("--folds", f.folds, "cross-validation fold count");
    cmd->add_option("--seed", f.seed, "random seed");
    cmd->add_option("--stopwords", f.stopwords, "stopword file, one word per line");
    cmd->add_option("--min-df", f.min_df, "minimum document frequency for vocabulary terms");
    cmd->add_option("--max-df-ratio", f.max_df_ratio, "maximum document frequency ratio");
    cmd->add_option("--out", f.out, "output path");
    cmd->add_flag("--quiet", f.quiet, "suppress progress output");
}

int do_run(const RunFlags& flags) {
    ExperimentConfig cfg = build_config(flags);
    if (flags.print_config) {
        std::cout << config_to_json(cfg);
        return 0;
    }
    ExperimentReport report = run_experiment(cfg);
    if (flags.out.empty()) {
        write_report_json(report, std::cout);
    } else {
        std::filesystem::path json_path = flags.out;
        std::ofstream json_out(json_path);
        if (!json_out) throw data_error("cannot write report: " + json_path.string());
        write_report_json(report, json_out);
        std::filesystem::path csv_path = json_path;
        csv_path.replace_extension(".csv");
        std::ofstream csv_out(csv_path);
        if (!csv_out) throw data_error("cannot write report: " + csv_path.string());
        write_report_csv(report, csv_out);
        if (!flags.quiet) {
            std::fprintf(stderr, "wrote %s and %s\n", json_path.string().c_str(),
                         csv_path.string().c_str());
        }
    }
    for (const auto& w : report.warnings) std::fprintf(stderr, "warning: %s\n", w.c_str());
    return 0;
}

int do_score_dump(const RunFlags& flags, const std::string& method_name) {
    auto method = method_from_string(method_name);
    if (!method || *method == Method::Lexicon) {
        throw config_error("--method: score-dump needs one of df,ig,gr,chi,relieff");
    }
    if (flags.data.empty()) throw config_error("--data is required");
    CorpusRaw corpus = load_polarity_corpus(flags.data);
    auto stopwords =
        flags.stopwords.empty() ? default_stopwords() : load_stopwords(flags.stopwords);
    auto docs = preprocess_corpus(corpus, stopwords);
    Vocabulary vocab = build_vocabulary(docs, flags.min_df, flags.max_df_ratio);
    DatasetMatrix matrix = build_matrix(
        docs, std::move(vocab),
        flags.weighting == "tf" ? Weighting::TermFrequency : Weighting::Binary);
    ReliefFOptions relieff{flags.relieff_k, flags.relieff_sample, flags.seed};
    FeatureScores scores = score_features(*method, matrix, relieff);
    FeatureSubset ranked = select_top_n(scores, matrix.vocabulary, matrix.vocabulary.size());

    std::ofstream file;
    std::ostream* out = &std::cout;
    if (!flags.out.empty()) {
        file.open(flags.out);
        if (!file) throw data_error("cannot write " + flags.out);
        out = &file;
    }
    *out << "term,method,score,rank\n";
    char buf[160];
    for (std::size_t rank = 0; rank < ranked.indices.size(); ++rank) {
        std::uint32_t t = ranked.indices[rank];
        std::snprintf(buf, sizeof buf, "%s,%s,%.12g,%zu\n", matrix.vocabulary.terms[t].c_str(),
                      method_name.c_str(), scores.scores[t], rank + 1);
        *out << buf;
    }
    return 0;
}

int do_folds_check(const RunFlags& flags) {
    if (flags.data.empty()) throw config_error("--data is required");
    CorpusRaw corpus = load_polarity_corpus(flags.data);
    std::vector<Polarity> labels;
    for (const auto& d : corpus.documents) labels.push_back(d.label);
    FoldAssignment folds = make_folds(labels, flags.folds, flags.seed);
    std::vector<std::array<std::size_t, 2>> per_fold(flags.folds, {0, 0});
    for (std::size_t i = 0; i < labels.size(); ++i) {
        per_fold[folds.fold_of[i]][static_cast<std::size_t>(labels[i])]++;
    }
    std::printf("fold,negative,positive,total\n");
    for (std::size_t f = 0; f < flags.folds; ++f) {
        std::printf("%zu,%zu,%zu,%zu\n", f, per_fold[f][0], per_fold[f][1],
                    per_fold[f][0] + per_fold[f][1]);
    }
    return 0;
}

}  // namespace

int parse_and_run(int argc, const char* const* argv) {
    CLI::App app{"Feature-selection and sentiment-lexicon benchmark for SVM sentiment "
                 "classification"};
    app.require_subcommand(1);

    RunFlags run_flags;
    CLI::App* run = app.add_subcommand("run", "run a cross-validated experiment grid");
    add_run_flags(run, run_flags, true);

    RunFlags dump_flags;
    std::string dump_method = "ig";
    CLI::App* dump = app.add_subcommand("score-dump", "dump per-term scores as CSV");
    add_run_flags(dump, dump_flags, false);
    dump->add_option("--method", dump_method, "df|ig|gr|chi|relieff");
    dump->add_option("--relieff-k", dump_flags.relieff_k, "Relief-F neighbor count");
    dump->add_option("--relieff-sample", dump_flags.relieff_sample,
                     "Relief-F sampled instances (0 = all)");

    RunFlags folds_flags;
    CLI::App* folds = app.add_subcommand("folds-check", "print the stratified fold assignment");
    add_run_flags(folds, folds_flags, false);

    CLI::App* version = app.add_subcommand("version", "print the tool version");

    std::string gen_out = "synth-data";
    std::uint64_t gen_seed = 7;
    std::size_t gen_docs = 1000;
    CLI::App* gen = app.add_subcommand(
        "gen-data", "generate a seeded synthetic corpus and lexicons in the expected layouts");
    gen->add_option("--out", gen_out, "output directory");
    gen->add_option("--seed", gen_seed, "random seed");
    gen->add_option("--docs-per-class", gen_docs, "documents per class");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    }

    try {
        if (version->parsed()) {
            std::printf("%s\n", kVersion);
            return 0;
        }
        if (gen->parsed()) {
            SynthSpec spec;
            spec.seed = gen_seed;
            spec.docs_per_class = gen_docs;
            SynthPaths paths = write_synthetic_dataset(spec, gen_out);
            std::printf("corpus: %s\nhm: %s\ngi: %s\nopinion-pos: %s\nopinion-neg: %s\n",
                        paths.corpus_dir.string().c_str(), paths.hm_tagged.string().c_str(),
                        paths.gi_tagged.string().c_str(),
                        paths.opinion_positive.string().c_str(),
                        paths.opinion_negative.string().c_str());
            return 0;
        }
        if (run->parsed()) return do_run(run_flags);
        if (dump->parsed()) return do_score_dump(dump_flags, dump_method);
        if (folds->parsed()) return do_folds_check(folds_flags);
    } catch (const config_error& e) {
        std::fprintf(stderr, "configuration error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}

}  // namespace senti
