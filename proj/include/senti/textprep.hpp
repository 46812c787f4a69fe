#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "senti/corpus.hpp"

namespace senti {

enum class Weighting { Binary, TermFrequency };

struct TokenizedDocument {
    std::string id;
    std::vector<std::string> tokens;  // lowercase, stopword-free, stemmed
    Polarity label;
};

struct Vocabulary {
    // Ordered by descending document frequency, ties lexicographic.
    std::vector<std::string> terms;
    std::vector<std::size_t> doc_frequency;  // parallel to terms
    std::unordered_map<std::string, std::uint32_t> index;

    std::size_t size() const { return terms.size(); }
};

// Sparse vector, entries sorted by feature index, no stored zeros.
struct DocumentVector {
    std::vector<std::uint32_t> idx;
    std::vector<double> weight;

    std::size_t nnz() const { return idx.size(); }
};

struct DatasetMatrix {
    std::vector<DocumentVector> vectors;
    std::vector<Polarity> labels;
    Vocabulary vocabulary;
    Weighting weighting = Weighting::Binary;

    std::size_t n_docs() const { return vectors.size(); }
};

// Lowercased maximal runs of ASCII letters; tokens shorter than 2 chars dropped.
std::vector<std::string> tokenize(std::string_view text);

// Order-preserving filter.
std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopwords);

// Classic Porter (1980) stemmer. Input is expected lowercase; non-alphabetic
// characters pass through untouched by the suffix rules.
std::string stem(std::string_view token);

// Bundled English stopword list.
const std::unordered_set<std::string>& default_stopwords();

// One word per line, '#'/';' comments allowed.
std::unordered_set<std::string> load_stopwords(const std::filesystem::path& file);

// tokenize + stopword removal + stemming for one document.
TokenizedDocument preprocess(const LabeledDocument& doc,
                             const std::unordered_set<std::string>& stopwords);

std::vector<TokenizedDocument> preprocess_corpus(const CorpusRaw& corpus,
                                                 const std::unordered_set<std::string>& stopwords);

// All terms with document frequency in [min_df, max_df_ratio * n_docs],
// ordered by descending DF then lexicographic. Empty result is a config_error.
Vocabulary build_vocabulary(const std::vector<TokenizedDocument>& docs, std::size_t min_df = 1,
                            double max_df_ratio = 1.0);

DocumentVector vectorize(const TokenizedDocument& doc, const Vocabulary& vocab, Weighting weighting);

DatasetMatrix build_matrix(const std::vector<TokenizedDocument>& docs, Vocabulary vocab,
                           Weighting weighting);

}  // namespace senti
