// Shared fixtures and independent brute-force oracles for the test suites.
// Oracles deliberately recompute everything from document scans so they share
// no code path with the library implementations they check.
#pragma once

#include <algorithm>
#include <cmath>
#include <random>
#include <vector>

#include "senti/eval.hpp"
#include "senti/featsel.hpp"
#include "senti/svm.hpp"
#include "senti/textprep.hpp"

namespace helpers {

using namespace senti;

// d1=pos{good,fun}, d2=pos{good}, d3=neg{bad,fun}, d4=neg{bad}
inline DatasetMatrix toy4() {
    std::vector<TokenizedDocument> docs = {
        {"d1", {"good", "fun"}, Polarity::Positive},
        {"d2", {"good"}, Polarity::Positive},
        {"d3", {"bad", "fun"}, Polarity::Negative},
        {"d4", {"bad"}, Polarity::Negative},
    };
    return build_matrix(docs, build_vocabulary(docs), Weighting::Binary);
}

inline std::uint32_t term_index(const DatasetMatrix& m, const std::string& term) {
    return m.vocabulary.index.at(term);
}

// Random binary corpus for oracle-equivalence sweeps.
inline DatasetMatrix random_matrix(std::uint64_t seed, std::size_t max_docs = 50,
                                   std::size_t max_terms = 30) {
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> nd(4, max_docs), nt(2, max_terms);
    std::size_t n_docs = nd(rng), n_terms = nt(rng);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    std::vector<TokenizedDocument> docs(n_docs);
    for (std::size_t d = 0; d < n_docs; ++d) {
        docs[d].id = "d" + std::to_string(d);
        // Force both classes present.
        docs[d].label = d < 2 ? (d == 0 ? Polarity::Positive : Polarity::Negative)
                              : (unit(rng) < 0.5 ? Polarity::Positive : Polarity::Negative);
        for (std::size_t t = 0; t < n_terms; ++t) {
            if (unit(rng) < 0.35) docs[d].tokens.push_back("t" + std::to_string(t));
        }
        if (docs[d].tokens.empty()) docs[d].tokens.push_back("t0");
    }
    return build_matrix(docs, build_vocabulary(docs), Weighting::Binary);
}

namespace oracle {

inline double entropy_of(const std::vector<Polarity>& labels) {
    if (labels.empty()) return 0.0;
    double pos = 0.0;
    for (auto l : labels) {
        if (l == Polarity::Positive) pos += 1.0;
    }
    double h = 0.0;
    for (double c : {pos, static_cast<double>(labels.size()) - pos}) {
        double p = c / static_cast<double>(labels.size());
        if (p > 0.0) h -= p * std::log2(p);
    }
    return h;
}

inline bool present(const DatasetMatrix& m, std::size_t doc, std::uint32_t term) {
    const auto& v = m.vectors[doc];
    for (std::size_t i = 0; i < v.idx.size(); ++i) {
        if (v.idx[i] == term) return v.weight[i] != 0.0;
    }
    return false;
}

inline double info_gain(std::uint32_t term, const DatasetMatrix& m) {
    std::vector<Polarity> all, with, without;
    for (std::size_t d = 0; d < m.n_docs(); ++d) {
        all.push_back(m.labels[d]);
        (present(m, d, term) ? with : without).push_back(m.labels[d]);
    }
    double n = static_cast<double>(all.size());
    double cond = (static_cast<double>(with.size()) / n) * entropy_of(with) +
                  (static_cast<double>(without.size()) / n) * entropy_of(without);
    return std::max(0.0, entropy_of(all) - cond);
}

inline double split_info(std::uint32_t term, const DatasetMatrix& m) {
    double n = static_cast<double>(m.n_docs()), w = 0.0;
    for (std::size_t d = 0; d < m.n_docs(); ++d) {
        if (present(m, d, term)) w += 1.0;
    }
    double si = 0.0;
    for (double part : {w, n - w}) {
        double p = part / n;
        if (p > 0.0) si -= p * std::log2(p);
    }
    return si;
}

inline double gain_ratio(std::uint32_t term, const DatasetMatrix& m) {
    double si = oracle::split_info(term, m);
    return si > 0.0 ? oracle::info_gain(term, m) / si : 0.0;
}

inline double chi_squared(std::uint32_t term, const DatasetMatrix& m) {
    double best = 0.0;
    for (Polarity cls : {Polarity::Positive, Polarity::Negative}) {
        double a = 0, b = 0, e = 0, d = 0;
        for (std::size_t doc = 0; doc < m.n_docs(); ++doc) {
            bool in_class = m.labels[doc] == cls;
            bool has_term = present(m, doc, term);
            if (has_term && in_class) a += 1;
            else if (has_term) b += 1;
            else if (in_class) e += 1;
            else d += 1;
        }
        double denom = (a + e) * (b + d) * (a + b) * (e + d);
        if (denom > 0.0) {
            double n = a + b + e + d;
            best = std::max(best, n * (a * d - b * e) * (a * d - b * e) / denom);
        }
    }
    return best;
}

inline std::size_t document_frequency(std::uint32_t term, const DatasetMatrix& m) {
    std::size_t c = 0;
    for (std::size_t d = 0; d < m.n_docs(); ++d) {
        if (present(m, d, term)) ++c;
    }
    return c;
}

// Exhaustive active-set QP solver for the SVM dual: every bound/free
// assignment is tried and the stationary point of each face solved directly.
// Returns the best feasible dual objective. Practical up to ~12 points.
inline double svm_dual_max(const std::vector<DocumentVector>& x, const std::vector<int>& y,
                           double c, const KernelParams& kernel) {
    const std::size_t n = x.size();
    std::vector<std::vector<double>> q(n, std::vector<double>(n));
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            q[i][j] = y[i] * y[j] * kernel_value(x[i], x[j], kernel);
        }
    }
    auto objective = [&](const std::vector<double>& a) {
        double w = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            w += a[i];
            for (std::size_t j = 0; j < n; ++j) w -= 0.5 * a[i] * a[j] * q[i][j];
        }
        return w;
    };

    double best = 0.0;  // alpha = 0 is always feasible
    std::vector<int> state(n);  // 0 = at 0, 1 = at C, 2 = free
    std::size_t combos = 1;
    for (std::size_t i = 0; i < n; ++i) combos *= 3;
    std::vector<double> alpha(n);

    for (std::size_t code = 0; code < combos; ++code) {
        std::size_t rem = code;
        std::vector<std::size_t> free;
        for (std::size_t i = 0; i < n; ++i) {
            state[i] = static_cast<int>(rem % 3);
            rem /= 3;
            if (state[i] == 2) free.push_back(i);
        }
        for (std::size_t i = 0; i < n; ++i) alpha[i] = state[i] == 1 ? c : 0.0;

        if (free.empty()) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += y[i] * alpha[i];
            if (std::abs(sum) < 1e-9) best = std::max(best, objective(alpha));
            continue;
        }
        // Solve [Q_FF y_F; y_F^T 0] [a_F; beta] = [1 - Q_FB a_B; -sum_B y a]
        std::size_t m = free.size() + 1;
        std::vector<std::vector<double>> sys(m, std::vector<double>(m + 1, 0.0));
        for (std::size_t r = 0; r < free.size(); ++r) {
            for (std::size_t cidx = 0; cidx < free.size(); ++cidx) {
                sys[r][cidx] = q[free[r]][free[cidx]];
            }
            sys[r][free.size()] = y[free[r]];
            double rhs = 1.0;
            for (std::size_t i = 0; i < n; ++i) {
                if (state[i] == 1) rhs -= q[free[r]][i] * c;
            }
            sys[r][m] = rhs;
        }
        double bound_sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            if (state[i] == 1) bound_sum += y[i] * c;
        }
        for (std::size_t cidx = 0; cidx < free.size(); ++cidx) {
            sys[free.size()][cidx] = y[free[cidx]];
        }
        sys[free.size()][m] = -bound_sum;

        // Gaussian elimination with partial pivoting.
        bool singular = false;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < m; ++r) {
                if (std::abs(sys[r][col]) > std::abs(sys[piv][col])) piv = r;
            }
            if (std::abs(sys[piv][col]) < 1e-12) { singular = true; break; }
            std::swap(sys[col], sys[piv]);
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col) continue;
                double factor = sys[r][col] / sys[col][col];
                for (std::size_t k = col; k <= m; ++k) sys[r][k] -= factor * sys[col][k];
            }
        }
        if (singular) continue;
        bool feasible = true;
        for (std::size_t r = 0; r < free.size(); ++r) {
            double a = sys[r][m] / sys[r][r];
            if (a < -1e-9 || a > c + 1e-9) { feasible = false; break; }
            alpha[free[r]] = std::clamp(a, 0.0, c);
        }
        if (!feasible) continue;
        best = std::max(best, objective(alpha));
    }
    return best;
}

}  // namespace oracle
}  // namespace helpers
