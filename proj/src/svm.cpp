#include "senti/svm.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <list>
#include <random>
#include <sstream>
#include <unordered_map>

#include "senti/errors.hpp"

namespace senti {
namespace {

double sparse_dot(const DocumentVector& a, const DocumentVector& b) {
    double s = 0.0;
    std::size_t i = 0, j = 0;
    while (i < a.idx.size() && j < b.idx.size()) {
        if (a.idx[i] < b.idx[j]) ++i;
        else if (a.idx[i] > b.idx[j]) ++j;
        else s += a.weight[i++] * b.weight[j++];
    }
    return s;
}

double self_dot(const DocumentVector& v) {
    double s = 0.0;
    for (double w : v.weight) s += w * w;
    return s;
}

// Kernel rows, dense for small problems, LRU rows otherwise.
class KernelCache {
public:
    KernelCache(const std::vector<DocumentVector>& x, const KernelParams& params,
                std::size_t dense_limit, std::size_t lru_rows)
        : x_(x), params_(params), n_(x.size()), dense_(n_ <= dense_limit),
          lru_capacity_(std::max<std::size_t>(2, lru_rows)) {
        xx_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) xx_[i] = self_dot(x[i]);
        if (dense_) rows_.resize(n_);
    }

    const std::vector<float>& row(std::size_t i) {
        if (dense_) {
            if (rows_[i].empty()) rows_[i] = compute_row(i);
            return rows_[i];
        }
        auto it = lru_index_.find(i);
        if (it != lru_index_.end()) {
            lru_.splice(lru_.begin(), lru_, it->second);
            return it->second->second;
        }
        if (lru_.size() >= lru_capacity_) {
            lru_index_.erase(lru_.back().first);
            lru_.pop_back();
        }
        lru_.emplace_front(i, compute_row(i));
        lru_index_[i] = lru_.begin();
        return lru_.front().second;
    }

    double value(std::size_t i, std::size_t j) const {
        double d = sparse_dot(x_[i], x_[j]);
        if (params_.kind == KernelParams::Kind::Linear) return d;
        return std::exp(-params_.gamma * (xx_[i] - 2.0 * d + xx_[j]));
    }

private:
    std::vector<float> compute_row(std::size_t i) const {
        std::vector<float> r(n_);
        for (std::size_t j = 0; j < n_; ++j) r[j] = static_cast<float>(value(i, j));
        return r;
    }

    const std::vector<DocumentVector>& x_;
    KernelParams params_;
    std::size_t n_;
    bool dense_;
    std::size_t lru_capacity_;
    std::vector<double> xx_;
    std::vector<std::vector<float>> rows_;
    std::list<std::pair<std::size_t, std::vector<float>>> lru_;
    std::unordered_map<std::size_t, std::list<std::pair<std::size_t, std::vector<float>>>::iterator>
        lru_index_;
};

class SmoSolver {
public:
    explicit SmoSolver(const TrainingProblem& p)
        : p_(p), n_(p.vectors.size()),
          cache_(p.vectors, p.kernel, p.dense_cache_limit, p.lru_cache_rows), rng_(p.seed) {
        alpha_.assign(n_, 0.0);
        error_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) error_[i] = -static_cast<double>(p.labels[i]);
    }

    SvmModel solve() {
        std::size_t stall = 0;
        bool examine_all = true;
        bool hit_cap = false;
        while (stall < p_.max_stall_passes && !hit_cap) {
            std::size_t changed = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (!examine_all && !is_free(alpha_[i])) continue;
                if (examine(i)) ++changed;
                if (updates_ >= p_.max_pair_updates) { hit_cap = true; break; }
            }
            if (changed > 0) {
                stall = 0;
                examine_all = false;
            } else if (examine_all) {
                ++stall;
            } else {
                examine_all = true;  // clean non-bound pass, re-check everything
            }
        }
        return build_model(!hit_cap);
    }

private:
    bool is_free(double a) const { return a > 0.0 && a < p_.c; }

    bool examine(std::size_t i2) {
        double y2 = p_.labels[i2];
        double e2 = error_[i2];
        double r2 = e2 * y2;
        bool violated = (r2 < -p_.tolerance && alpha_[i2] < p_.c) ||
                        (r2 > p_.tolerance && alpha_[i2] > 0.0);
        if (!violated) return false;

        // Second-choice heuristic: maximal |E1 - E2| over free multipliers.
        std::size_t best = n_;
        double best_gap = -1.0;
        for (std::size_t i = 0; i < n_; ++i) {
            if (!is_free(alpha_[i])) continue;
            double gap = std::abs(error_[i] - e2);
            if (gap > best_gap) { best_gap = gap; best = i; }
        }
        if (best < n_ && take_step(best, i2)) return true;

        std::size_t start = rng_() % n_;
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t i1 = (start + k) % n_;
            if (is_free(alpha_[i1]) && take_step(i1, i2)) return true;
        }
        start = rng_() % n_;
        for (std::size_t k = 0; k < n_; ++k) {
            std::size_t i1 = (start + k) % n_;
            if (take_step(i1, i2)) return true;
        }
        return false;
    }

    bool take_step(std::size_t i1, std::size_t i2) {
        if (i1 == i2) return false;
        double a1 = alpha_[i1], a2 = alpha_[i2];
        double y1 = p_.labels[i1], y2 = p_.labels[i2];
        double e1 = error_[i1], e2 = error_[i2];
        double s = y1 * y2;

        double lo, hi;
        if (s < 0.0) {
            lo = std::max(0.0, a2 - a1);
            hi = std::min(p_.c, p_.c + a2 - a1);
        } else {
            lo = std::max(0.0, a1 + a2 - p_.c);
            hi = std::min(p_.c, a1 + a2);
        }
        if (lo >= hi) return false;

        const auto& row1 = cache_.row(i1);
        double k11 = row1[i1], k12 = row1[i2], k22 = cache_.row(i2)[i2];
        double eta = k11 + k22 - 2.0 * k12;

        double a2_new;
        if (eta > 0.0) {
            a2_new = a2 + y2 * (e1 - e2) / eta;
            a2_new = std::clamp(a2_new, lo, hi);
        } else {
            // Flat or concave along the constraint line; test both endpoints.
            double v1 = e1 + y1 - bias_ - y1 * a1 * k11 - y2 * a2 * k12;
            double v2 = e2 + y2 - bias_ - y1 * a1 * k12 - y2 * a2 * k22;
            auto objective = [&](double t2) {
                double t1 = a1 + s * (a2 - t2);
                return t1 + t2 - 0.5 * k11 * t1 * t1 - 0.5 * k22 * t2 * t2 -
                       s * k12 * t1 * t2 - y1 * t1 * v1 - y2 * t2 * v2;
            };
            double lobj = objective(lo), hobj = objective(hi);
            if (lobj > hobj + 1e-12) a2_new = lo;
            else if (hobj > lobj + 1e-12) a2_new = hi;
            else return false;
        }
        if (std::abs(a2_new - a2) < 1e-12 * (a2_new + a2 + 1e-12)) return false;

        double a1_new = a1 + s * (a2 - a2_new);
        // Snap to the box to keep 0 <= alpha <= C exact.
        if (a1_new < 1e-12) { a2_new += s * a1_new; a1_new = 0.0; }
        if (a1_new > p_.c - 1e-12) { a2_new += s * (a1_new - p_.c); a1_new = p_.c; }
        a2_new = std::clamp(a2_new, 0.0, p_.c);

        double d1 = a1_new - a1, d2 = a2_new - a2;
        double b1 = bias_ - e1 - y1 * d1 * k11 - y2 * d2 * k12;
        double b2 = bias_ - e2 - y1 * d1 * k12 - y2 * d2 * k22;
        double b_new;
        if (is_free(a1_new)) b_new = b1;
        else if (is_free(a2_new)) b_new = b2;
        else b_new = 0.5 * (b1 + b2);

        const auto& row2 = cache_.row(i2);
        double db = b_new - bias_;
        for (std::size_t i = 0; i < n_; ++i) {
            error_[i] += y1 * d1 * row1[i] + y2 * d2 * row2[i] + db;
        }
        alpha_[i1] = a1_new;
        alpha_[i2] = a2_new;
        bias_ = b_new;
        ++updates_;
        if (p_.trace_objective) trace_.push_back(dual_objective());
        return true;
    }

    double dual_objective() const {
        double obj = 0.0;
        std::vector<std::size_t> active;
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > 0.0) active.push_back(i);
        }
        for (std::size_t i : active) obj += alpha_[i];
        for (std::size_t a = 0; a < active.size(); ++a) {
            for (std::size_t b = 0; b < active.size(); ++b) {
                std::size_t i = active[a], j = active[b];
                obj -= 0.5 * alpha_[i] * alpha_[j] * p_.labels[i] * p_.labels[j] *
                       cache_.value(i, j);
            }
        }
        return obj;
    }

    SvmModel build_model(bool converged) {
        SvmModel m;
        m.kernel = p_.kernel;
        m.bias = bias_;
        m.converged = converged;
        if (!converged) m.warning = "smo hit the pair-update cap before convergence";
        m.pair_updates = updates_;
        m.dual_objective = dual_objective();
        m.objective_trace = std::move(trace_);
        for (std::size_t i = 0; i < n_; ++i) {
            if (alpha_[i] > 0.0) {
                m.support_vectors.push_back(p_.vectors[i]);
                m.alpha.push_back(alpha_[i]);
                m.labels.push_back(p_.labels[i]);
            }
        }
        if (m.support_vectors.empty()) {
            // All multipliers at zero means every point already satisfies KKT;
            // keep one dummy-free model invariant by retaining the bias only.
            m.warning = m.warning.empty() ? "trained model has no support vectors" : m.warning;
        }
        return m;
    }

    const TrainingProblem& p_;
    std::size_t n_;
    KernelCache cache_;
    std::mt19937_64 rng_;
    std::vector<double> alpha_;
    std::vector<double> error_;
    std::vector<double> trace_;
    double bias_ = 0.0;
    std::uint64_t updates_ = 0;
};

}  // namespace

double kernel_value(const DocumentVector& x, const DocumentVector& y, const KernelParams& params) {
    double d = sparse_dot(x, y);
    if (params.kind == KernelParams::Kind::Linear) return d;
    double dist2 = self_dot(x) - 2.0 * d + self_dot(y);
    return std::exp(-params.gamma * std::max(0.0, dist2));
}

SvmModel svm_train(const TrainingProblem& problem) {
    if (problem.vectors.size() != problem.labels.size() || problem.vectors.size() < 2) {
        throw config_error("svm training needs at least two labeled vectors");
    }
    bool has_pos = false, has_neg = false;
    for (int y : problem.labels) {
        if (y == +1) has_pos = true;
        else if (y == -1) has_neg = true;
        else throw config_error("svm labels must be +1 or -1");
    }
    if (!has_pos || !has_neg) throw config_error("svm training needs both classes present");
    if (problem.c <= 0.0) throw config_error("svm C must be > 0");
    if (problem.kernel.kind == KernelParams::Kind::RBF && problem.kernel.gamma <= 0.0) {
        throw config_error("rbf gamma must be > 0");
    }
    return SmoSolver(problem).solve();
}

double svm_decision(const SvmModel& model, const DocumentVector& x) {
    double f = model.bias;
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        f += model.alpha[i] * model.labels[i] * kernel_value(model.support_vectors[i], x, model.kernel);
    }
    return f;
}

Polarity svm_predict(const SvmModel& model, const DocumentVector& x) {
    return svm_decision(model, x) >= 0.0 ? Polarity::Positive : Polarity::Negative;
}

void save_model(const SvmModel& model, std::ostream& out) {
    out << "sentisvm 1\n";
    out << "kernel " << (model.kernel.kind == KernelParams::Kind::RBF ? "rbf" : "linear");
    char buf[64];
    std::snprintf(buf, sizeof buf, " %.17g\n", model.kernel.gamma);
    out << buf;
    std::snprintf(buf, sizeof buf, "bias %.17g\n", model.bias);
    out << buf;
    out << "nsv " << model.support_vectors.size() << "\n";
    for (std::size_t i = 0; i < model.support_vectors.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", model.alpha[i] * model.labels[i]);
        out << buf;  // alpha_i * y_i, enough to evaluate decisions
        const auto& v = model.support_vectors[i];
        for (std::size_t j = 0; j < v.idx.size(); ++j) {
            std::snprintf(buf, sizeof buf, " %u:%.17g", v.idx[j], v.weight[j]);
            out << buf;
        }
        out << "\n";
    }
}

void save_model(const SvmModel& model, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw data_error("cannot write model file: " + path.string());
    save_model(model, out);
}

SvmModel load_model(std::istream& in) {
    std::string magic;
    int version = 0;
    if (!(in >> magic >> version) || magic != "sentisvm" || version != 1) {
        throw data_error("unrecognized model file header");
    }
    SvmModel m;
    std::string key, kind;
    in >> key >> kind >> m.kernel.gamma;
    if (key != "kernel" || (kind != "rbf" && kind != "linear")) {
        throw data_error("malformed model kernel line");
    }
    m.kernel.kind = kind == "rbf" ? KernelParams::Kind::RBF : KernelParams::Kind::Linear;
    std::size_t nsv = 0;
    in >> key >> m.bias;
    if (key != "bias") throw data_error("malformed model bias line");
    in >> key >> nsv;
    if (key != "nsv") throw data_error("malformed model nsv line");
    std::getline(in, key);  // rest of the nsv line
    for (std::size_t i = 0; i < nsv; ++i) {
        std::string line;
        if (!std::getline(in, line)) throw data_error("truncated model file");
        std::istringstream row(line);
        double ay;
        if (!(row >> ay)) throw data_error("malformed support vector line");
        m.alpha.push_back(std::abs(ay));
        m.labels.push_back(ay >= 0.0 ? +1 : -1);
        DocumentVector v;
        std::string entry;
        while (row >> entry) {
            auto colon = entry.find(':');
            if (colon == std::string::npos) throw data_error("malformed support vector entry");
            v.idx.push_back(static_cast<std::uint32_t>(std::stoul(entry.substr(0, colon))));
            v.weight.push_back(std::stod(entry.substr(colon + 1)));
        }
        m.support_vectors.push_back(std::move(v));
    }
    return m;
}

SvmModel load_model(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw data_error("cannot read model file: " + path.string());
    return load_model(in);
}

}  // namespace senti
