#include "senti/featsel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "senti/errors.hpp"

namespace senti {
namespace {

constexpr double kNonNegativeSlack = 1e-12;

double plogp(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

ClassDistribution overall_distribution(const DatasetMatrix& m) {
    ClassDistribution d;
    for (Polarity y : m.labels) d.counts[static_cast<std::size_t>(y)]++;
    return d;
}

double entropy_of_sizes(double n1, double n2) {
    double n = n1 + n2;
    if (n <= 0.0) return 0.0;
    return -(plogp(n1 / n) + plogp(n2 / n));
}

double ig_from_partition(const PresencePartition& part) {
    ClassDistribution whole;
    whole.counts[0] = part.with_term.counts[0] + part.without_term.counts[0];
    whole.counts[1] = part.with_term.counts[1] + part.without_term.counts[1];
    double ig = entropy(whole) - conditional_info(part);
    return ig > kNonNegativeSlack ? ig : std::max(ig, 0.0);
}

double splitinfo_from_partition(const PresencePartition& part) {
    return entropy_of_sizes(static_cast<double>(part.with_term.total()),
                            static_cast<double>(part.without_term.total()));
}

double gr_from_partition(const PresencePartition& part) {
    double si = splitinfo_from_partition(part);
    if (si <= 0.0) return 0.0;  // term in all or no documents
    return ig_from_partition(part) / si;
}

double chi_from_table(const ContingencyTable& t) {
    double a = static_cast<double>(t.a), b = static_cast<double>(t.b);
    double e = static_cast<double>(t.e), d = static_cast<double>(t.d);
    double denom = (a + e) * (b + d) * (a + b) * (e + d);
    if (denom <= 0.0) return 0.0;
    double n = a + b + e + d;
    double diff = a * d - b * e;
    return n * diff * diff / denom;
}

double chi_from_partition(const PresencePartition& part) {
    // Max over the two classes (identical for a 2x2 table, but kept explicit).
    double best = 0.0;
    for (std::size_t cls = 0; cls < 2; ++cls) {
        ContingencyTable t;
        t.a = part.with_term.counts[cls];
        t.b = part.with_term.counts[1 - cls];
        t.e = part.without_term.counts[cls];
        t.d = part.without_term.counts[1 - cls];
        best = std::max(best, chi_from_table(t));
    }
    return best;
}

// Per-term document frequency split by class, one pass over the matrix.
std::vector<ClassDistribution> term_class_df(const DatasetMatrix& m) {
    std::vector<ClassDistribution> df(m.vocabulary.size());
    for (std::size_t doc = 0; doc < m.vectors.size(); ++doc) {
        auto cls = static_cast<std::size_t>(m.labels[doc]);
        for (std::uint32_t f : m.vectors[doc].idx) df[f].counts[cls]++;
    }
    return df;
}

PresencePartition partition_from_counts(const ClassDistribution& present,
                                        const ClassDistribution& whole) {
    PresencePartition p;
    p.with_term = present;
    p.without_term.counts[0] = whole.counts[0] - present.counts[0];
    p.without_term.counts[1] = whole.counts[1] - present.counts[1];
    return p;
}

}  // namespace

const char* to_string(Method m) {
    switch (m) {
        case Method::DF: return "df";
        case Method::IG: return "ig";
        case Method::GR: return "gr";
        case Method::CHI: return "chi";
        case Method::ReliefF: return "relieff";
        case Method::Lexicon: return "lexicon";
    }
    return "?";
}

std::optional<Method> method_from_string(std::string_view name) {
    if (name == "df") return Method::DF;
    if (name == "ig") return Method::IG;
    if (name == "gr") return Method::GR;
    if (name == "chi") return Method::CHI;
    if (name == "relieff") return Method::ReliefF;
    if (name == "lexicon") return Method::Lexicon;
    return std::nullopt;
}

double entropy(const ClassDistribution& dist) {
    std::size_t n = dist.total();
    if (n == 0) return 0.0;
    double h = 0.0;
    for (std::size_t c : dist.counts) h -= plogp(static_cast<double>(c) / static_cast<double>(n));
    return h;
}

double conditional_info(const PresencePartition& part) {
    double n = static_cast<double>(part.with_term.total() + part.without_term.total());
    if (n <= 0.0) return 0.0;
    return (static_cast<double>(part.with_term.total()) / n) * entropy(part.with_term) +
           (static_cast<double>(part.without_term.total()) / n) * entropy(part.without_term);
}

PresencePartition presence_partition(std::uint32_t term, const DatasetMatrix& m) {
    PresencePartition p;
    for (std::size_t doc = 0; doc < m.vectors.size(); ++doc) {
        const auto& v = m.vectors[doc];
        bool present = std::binary_search(v.idx.begin(), v.idx.end(), term);
        auto& side = present ? p.with_term : p.without_term;
        side.counts[static_cast<std::size_t>(m.labels[doc])]++;
    }
    return p;
}

ContingencyTable contingency_table(std::uint32_t term, Polarity cls, const DatasetMatrix& m) {
    PresencePartition p = presence_partition(term, m);
    auto c = static_cast<std::size_t>(cls);
    ContingencyTable t;
    t.a = p.with_term.counts[c];
    t.b = p.with_term.counts[1 - c];
    t.e = p.without_term.counts[c];
    t.d = p.without_term.counts[1 - c];
    return t;
}

double info_gain(std::uint32_t term, const DatasetMatrix& m) {
    return ig_from_partition(presence_partition(term, m));
}

double split_info(std::uint32_t term, const DatasetMatrix& m) {
    return splitinfo_from_partition(presence_partition(term, m));
}

double gain_ratio(std::uint32_t term, const DatasetMatrix& m) {
    return gr_from_partition(presence_partition(term, m));
}

double chi_squared(std::uint32_t term, const DatasetMatrix& m) {
    return chi_from_partition(presence_partition(term, m));
}

std::size_t document_frequency(std::uint32_t term, const DatasetMatrix& m) {
    PresencePartition p = presence_partition(term, m);
    return p.with_term.total();
}

FeatureScores relieff_weights(const DatasetMatrix& m, const ReliefFOptions& opts) {
    if (opts.k_neighbors < 1) throw config_error("relieff k_neighbors must be >= 1");
    const std::size_t n_docs = m.n_docs();
    const std::size_t n_feat = m.vocabulary.size();
    ClassDistribution dist = overall_distribution(m);
    for (std::size_t c = 0; c < 2; ++c) {
        if (dist.counts[c] < opts.k_neighbors + 1) {
            throw config_error("relieff needs at least k+1 documents per class");
        }
    }

    // Value range per feature for diff normalization.
    std::vector<double> max_v(n_feat, 0.0);
    std::vector<double> min_stored(n_feat, std::numeric_limits<double>::infinity());
    std::vector<std::size_t> df(n_feat, 0);
    for (const auto& v : m.vectors) {
        for (std::size_t i = 0; i < v.idx.size(); ++i) {
            max_v[v.idx[i]] = std::max(max_v[v.idx[i]], v.weight[i]);
            min_stored[v.idx[i]] = std::min(min_stored[v.idx[i]], v.weight[i]);
            df[v.idx[i]]++;
        }
    }
    std::vector<double> range(n_feat, 0.0);
    for (std::size_t f = 0; f < n_feat; ++f) {
        double min_v = df[f] < n_docs ? std::min(0.0, min_stored[f]) : min_stored[f];
        range[f] = max_v[f] - min_v;
    }

    // Sampled instance set (all documents when sample_size covers them).
    std::vector<std::size_t> samples(n_docs);
    std::iota(samples.begin(), samples.end(), 0);
    if (opts.sample_size > 0 && opts.sample_size < n_docs) {
        std::mt19937_64 rng(opts.seed);
        std::shuffle(samples.begin(), samples.end(), rng);
        samples.resize(opts.sample_size);
        std::sort(samples.begin(), samples.end());
    }

    auto manhattan = [&](const DocumentVector& a, const DocumentVector& b) {
        double dsum = 0.0;
        std::size_t i = 0, j = 0;
        while (i < a.idx.size() && j < b.idx.size()) {
            if (a.idx[i] < b.idx[j]) dsum += std::abs(a.weight[i++]);
            else if (a.idx[i] > b.idx[j]) dsum += std::abs(b.weight[j++]);
            else { dsum += std::abs(a.weight[i] - b.weight[j]); ++i; ++j; }
        }
        for (; i < a.idx.size(); ++i) dsum += std::abs(a.weight[i]);
        for (; j < b.idx.size(); ++j) dsum += std::abs(b.weight[j]);
        return dsum;
    };

    std::vector<double> w(n_feat, 0.0);
    std::vector<std::pair<double, std::size_t>> hits, misses;
    const double k = static_cast<double>(opts.k_neighbors);

    for (std::size_t s : samples) {
        hits.clear();
        misses.clear();
        for (std::size_t other = 0; other < n_docs; ++other) {
            if (other == s) continue;
            double d = manhattan(m.vectors[s], m.vectors[other]);
            (m.labels[other] == m.labels[s] ? hits : misses).emplace_back(d, other);
        }
        auto take_k = [&](std::vector<std::pair<double, std::size_t>>& v) {
            std::partial_sort(v.begin(), v.begin() + opts.k_neighbors, v.end());
            v.resize(opts.k_neighbors);
        };
        take_k(hits);
        take_k(misses);

        auto accumulate = [&](const DocumentVector& a, const DocumentVector& b, double sign) {
            std::size_t i = 0, j = 0;
            auto add = [&](std::uint32_t f, double diff) {
                if (range[f] > 0.0) w[f] += sign * std::abs(diff) / range[f] / k;
            };
            while (i < a.idx.size() && j < b.idx.size()) {
                if (a.idx[i] < b.idx[j]) { add(a.idx[i], a.weight[i]); ++i; }
                else if (a.idx[i] > b.idx[j]) { add(b.idx[j], b.weight[j]); ++j; }
                else { add(a.idx[i], a.weight[i] - b.weight[j]); ++i; ++j; }
            }
            for (; i < a.idx.size(); ++i) add(a.idx[i], a.weight[i]);
            for (; j < b.idx.size(); ++j) add(b.idx[j], b.weight[j]);
        };
        for (const auto& [d, doc] : misses) accumulate(m.vectors[s], m.vectors[doc], +1.0);
        for (const auto& [d, doc] : hits) accumulate(m.vectors[s], m.vectors[doc], -1.0);
    }

    FeatureScores out{Method::ReliefF, std::move(w)};
    const double n_samples = static_cast<double>(samples.size());
    for (double& x : out.scores) x /= n_samples;
    return out;
}

FeatureScores score_features(Method method, const DatasetMatrix& m, const ReliefFOptions& relieff) {
    if (method == Method::Lexicon) {
        throw config_error("lexicon selection has no per-term scores; use lexicon_select");
    }
    if (method == Method::ReliefF) return relieff_weights(m, relieff);

    ClassDistribution whole = overall_distribution(m);
    std::vector<ClassDistribution> df = term_class_df(m);
    FeatureScores out{method, std::vector<double>(m.vocabulary.size(), 0.0)};
    for (std::size_t t = 0; t < df.size(); ++t) {
        PresencePartition p = partition_from_counts(df[t], whole);
        switch (method) {
            case Method::DF: out.scores[t] = static_cast<double>(p.with_term.total()); break;
            case Method::IG: out.scores[t] = ig_from_partition(p); break;
            case Method::GR: out.scores[t] = gr_from_partition(p); break;
            case Method::CHI: out.scores[t] = chi_from_partition(p); break;
            default: break;
        }
    }
    return out;
}

FeatureSubset select_top_n(const FeatureScores& scores, const Vocabulary& vocab, std::size_t n,
                           std::vector<std::string>* warnings) {
    if (n < 1) throw config_error("feature count must be >= 1");
    if (scores.scores.size() != vocab.size()) {
        throw data_error("score vector does not match vocabulary size");
    }
    std::vector<std::uint32_t> order(vocab.size());
    std::iota(order.begin(), order.end(), 0u);
    std::sort(order.begin(), order.end(), [&](std::uint32_t a, std::uint32_t b) {
        if (scores.scores[a] != scores.scores[b]) return scores.scores[a] > scores.scores[b];
        return vocab.terms[a] < vocab.terms[b];
    });
    if (n > order.size()) {
        if (warnings) {
            warnings->push_back("requested " + std::to_string(n) + " features but vocabulary has " +
                                std::to_string(order.size()));
        }
        n = order.size();
    }
    order.resize(n);
    return FeatureSubset{scores.method, "", std::move(order)};
}

FeatureSubset lexicon_select(const Vocabulary& vocab, const Lexicon& lexicon, bool match_stemmed) {
    std::unordered_set<std::string> words;
    words.reserve(lexicon.positive.size() + lexicon.negative.size());
    for (const auto& set : {std::cref(lexicon.positive), std::cref(lexicon.negative)}) {
        for (const auto& w : set.get()) words.insert(match_stemmed ? stem(w) : w);
    }
    FeatureSubset out{Method::Lexicon, lexicon.name, {}};
    for (std::uint32_t i = 0; i < vocab.size(); ++i) {
        if (words.count(vocab.terms[i])) out.indices.push_back(i);
    }
    if (out.indices.empty()) {
        throw config_error("lexicon '" + lexicon.name + "' shares no terms with the vocabulary");
    }
    return out;
}

}  // namespace senti
