#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "senti/corpus.hpp"
#include "senti/textprep.hpp"

namespace senti {

struct KernelParams {
    enum class Kind { RBF, Linear };
    Kind kind = Kind::RBF;
    double gamma = 1.0;  // RBF width, > 0
};

inline int to_pm1(Polarity p) { return p == Polarity::Positive ? +1 : -1; }

struct TrainingProblem {
    std::vector<DocumentVector> vectors;
    std::vector<int> labels;  // +1 / -1, Positive mapped to +1
    double c = 1.0;
    KernelParams kernel;
    double tolerance = 1e-3;
    std::uint64_t seed = 0;

    std::size_t max_stall_passes = 10;       // change-free full scans before stopping
    std::uint64_t max_pair_updates = 10'000'000;
    std::size_t dense_cache_limit = 2500;    // dense kernel cache up to this many points
    std::size_t lru_cache_rows = 512;        // row cache capacity beyond the dense limit
    bool trace_objective = false;            // record dual objective after each accepted step
};

struct SvmModel {
    std::vector<DocumentVector> support_vectors;
    std::vector<double> alpha;   // 0 < alpha_i <= C
    std::vector<int> labels;     // y_i of the support vectors
    double bias = 0.0;
    KernelParams kernel;

    bool converged = true;
    std::string warning;
    double dual_objective = 0.0;
    std::uint64_t pair_updates = 0;
    std::vector<double> objective_trace;  // filled when trace_objective was set
};

double kernel_value(const DocumentVector& x, const DocumentVector& y, const KernelParams& params);

// SMO solver for the soft-margin dual. Deterministic for a fixed seed.
SvmModel svm_train(const TrainingProblem& problem);

// Sum_i alpha_i y_i K(sv_i, x) + b
double svm_decision(const SvmModel& model, const DocumentVector& x);

// Positive when the decision value is >= 0 (ties go to Positive).
Polarity svm_predict(const SvmModel& model, const DocumentVector& x);

// Versioned flat-file persistence.
void save_model(const SvmModel& model, std::ostream& out);
void save_model(const SvmModel& model, const std::filesystem::path& path);
SvmModel load_model(std::istream& in);
SvmModel load_model(const std::filesystem::path& path);

}  // namespace senti
