#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "senti/corpus.hpp"
#include "senti/featsel.hpp"
#include "senti/svm.hpp"
#include "senti/textprep.hpp"

namespace senti {

struct FoldAssignment {
    std::size_t k = 0;
    std::vector<std::uint32_t> fold_of;  // per document
    std::uint64_t seed = 0;
};

struct ConfusionCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;  // Positive is the target class
    std::size_t total() const { return tp + fp + tn + fn; }
};

struct ClassMetrics {
    double recall = 0.0;
    double precision = 0.0;
    double f_measure = 0.0;
};

struct Metrics {
    ClassMetrics positive, negative, macro;
    double accuracy = 0.0;
    ConfusionCounts confusion;
};

enum class SelectionScope { PerFold, Global };

struct SvmSettings {
    double c = 1.0;
    double gamma = 0.0;  // 0 = auto (1 / number of selected features)
    double tolerance = 1e-3;
    KernelParams::Kind kernel = KernelParams::Kind::RBF;
};

struct ExperimentConfig {
    std::filesystem::path data_root;
    std::vector<Method> methods;
    std::vector<LexiconSource> lexicons;      // consumed when methods include Lexicon
    std::vector<std::size_t> feature_counts;  // the top-n sweep
    Weighting weighting = Weighting::Binary;
    std::size_t folds = 10;
    std::uint64_t seed = 42;
    SelectionScope scope = SelectionScope::PerFold;
    SvmSettings svm;
    std::optional<std::filesystem::path> stopword_file;
    bool stem_lexicon = false;
    std::size_t relieff_k = 10;
    std::size_t relieff_sample = 0;  // 0 = all documents
    std::size_t min_df = 1;
    double max_df_ratio = 1.0;
    int jobs = 1;
    bool timings = false;  // include wall-clock per cell in the JSON report
    bool verbose = false;  // progress lines on stderr, never in the report
};

struct CellResult {
    std::string method;  // "ig", "gr", ..., or "lexicon:<name>"
    std::size_t n = 0;   // requested feature count; 0 for lexicon selection
    std::uint32_t fold = 0;
    Metrics metrics;
    std::size_t features_used = 0;
    double wall_ms = 0.0;
    std::string error;  // non-fatal cell failure, metrics invalid when set
};

struct AggregateResult {
    std::string method;
    std::size_t n = 0;
    Metrics metrics;  // arithmetic mean of fold metrics; confusion counts summed
    double features_used_mean = 0.0;
};

struct ExperimentReport {
    ExperimentConfig config;
    std::vector<CellResult> cells;
    std::vector<AggregateResult> aggregates;
    std::vector<std::string> warnings;
};

// Stratified fold assignment: each class shuffled with the seeded generator
// and dealt round-robin, so sizes and per-class counts differ by at most 1.
FoldAssignment make_folds(const std::vector<Polarity>& labels, std::size_t k, std::uint64_t seed);

Metrics compute_metrics(const std::vector<Polarity>& predicted,
                        const std::vector<Polarity>& truth);

ExperimentReport run_experiment(const ExperimentConfig& config);
ExperimentReport run_experiment(const ExperimentConfig& config, const CorpusRaw& corpus);

void write_report_json(const ExperimentReport& report, std::ostream& out);
void write_report_csv(const ExperimentReport& report, std::ostream& out);
std::string config_to_json(const ExperimentConfig& config);

}  // namespace senti
