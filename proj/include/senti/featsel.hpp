#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "senti/corpus.hpp"
#include "senti/textprep.hpp"

namespace senti {

enum class Method { DF, IG, GR, CHI, ReliefF, Lexicon };

const char* to_string(Method m);
std::optional<Method> method_from_string(std::string_view name);

struct ClassDistribution {
    std::array<std::size_t, 2> counts{};  // [negative, positive]
    std::size_t total() const { return counts[0] + counts[1]; }
};

// The two-way split induced by a term: documents containing it vs not.
struct PresencePartition {
    ClassDistribution with_term;
    ClassDistribution without_term;
};

// 2x2 term/class table in the usual A/B/E/D cell naming:
// a = term & class, b = term & !class, e = !term & class, d = neither.
struct ContingencyTable {
    std::size_t a = 0, b = 0, e = 0, d = 0;
    std::size_t n() const { return a + b + e + d; }
};

struct FeatureScores {
    Method method;
    std::vector<double> scores;  // one per vocabulary term
};

struct FeatureSubset {
    Method method;
    std::string lexicon_name;             // set when method == Lexicon
    std::vector<std::uint32_t> indices;   // in rank order, unique
};

struct ReliefFOptions {
    std::size_t k_neighbors = 10;
    std::size_t sample_size = 0;  // 0 = all documents
    std::uint64_t seed = 0;
};

double entropy(const ClassDistribution& dist);
double conditional_info(const PresencePartition& part);

PresencePartition presence_partition(std::uint32_t term, const DatasetMatrix& matrix);
ContingencyTable contingency_table(std::uint32_t term, Polarity cls, const DatasetMatrix& matrix);

double info_gain(std::uint32_t term, const DatasetMatrix& matrix);
double split_info(std::uint32_t term, const DatasetMatrix& matrix);
double gain_ratio(std::uint32_t term, const DatasetMatrix& matrix);
double chi_squared(std::uint32_t term, const DatasetMatrix& matrix);
std::size_t document_frequency(std::uint32_t term, const DatasetMatrix& matrix);

// Relief-F feature weights: for sampled instances, k nearest hits and misses
// under Manhattan distance; per-feature diffs normalized by the feature's
// value range. Weights land in [-1, 1].
FeatureScores relieff_weights(const DatasetMatrix& matrix, const ReliefFOptions& opts);

// Scores every vocabulary term with one method (not Lexicon).
FeatureScores score_features(Method method, const DatasetMatrix& matrix,
                             const ReliefFOptions& relieff = {});

// Highest n scores; ties broken by term string so the order is total.
FeatureSubset select_top_n(const FeatureScores& scores, const Vocabulary& vocab, std::size_t n,
                           std::vector<std::string>* warnings = nullptr);

// Vocabulary terms found in the lexicon (positive or negative side). With
// match_stemmed, lexicon entries go through stem() before the intersection.
FeatureSubset lexicon_select(const Vocabulary& vocab, const Lexicon& lexicon, bool match_stemmed);

}  // namespace senti
