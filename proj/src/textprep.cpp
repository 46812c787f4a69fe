#include "senti/textprep.hpp"

#include <algorithm>
#include <fstream>
#include <map>

#include "senti/errors.hpp"

namespace senti {

std::vector<std::string> tokenize(std::string_view text) {
    std::vector<std::string> out;
    std::string cur;
    for (char raw : text) {
        unsigned char c = static_cast<unsigned char>(raw);
        char lower = 0;
        if (c >= 'a' && c <= 'z') lower = static_cast<char>(c);
        else if (c >= 'A' && c <= 'Z') lower = static_cast<char>(c - 'A' + 'a');
        if (lower) {
            cur.push_back(lower);
        } else if (!cur.empty()) {
            if (cur.size() >= 2) out.push_back(std::move(cur));
            cur.clear();
        }
    }
    if (cur.size() >= 2) out.push_back(std::move(cur));
    return out;
}

std::vector<std::string> remove_stopwords(const std::vector<std::string>& tokens,
                                          const std::unordered_set<std::string>& stopwords) {
    std::vector<std::string> out;
    out.reserve(tokens.size());
    for (const auto& t : tokens) {
        if (!stopwords.count(t)) out.push_back(t);
    }
    return out;
}

const std::unordered_set<std::string>& default_stopwords() {
    static const std::unordered_set<std::string> words = {
        "me", "my", "myself", "we", "our", "ours", "ourselves", "you", "your", "yours",
        "yourself", "yourselves", "he", "him", "his", "himself", "she", "her", "hers",
        "herself", "it", "its", "itself", "they", "them", "their", "theirs", "themselves",
        "what", "which", "who", "whom", "this", "that", "these", "those", "am", "is", "are",
        "was", "were", "be", "been", "being", "have", "has", "had", "having", "do", "does",
        "did", "doing", "an", "the", "and", "but", "if", "or", "because", "as", "until",
        "while", "of", "at", "by", "for", "with", "about", "against", "between", "into",
        "through", "during", "before", "after", "above", "below", "to", "from", "up", "down",
        "in", "out", "on", "off", "over", "under", "again", "further", "then", "once", "here",
        "there", "when", "where", "why", "how", "all", "any", "both", "each", "few", "more",
        "most", "other", "some", "such", "no", "nor", "not", "only", "own", "same", "so",
        "than", "too", "very", "can", "will", "just", "should", "would", "could", "ought",
        "isn", "aren", "wasn", "weren", "hasn", "haven", "hadn", "doesn", "don", "didn",
        "won", "wouldn", "shan", "shouldn", "couldn", "mustn", "ll", "re", "ve",
    };
    return words;
}

std::unordered_set<std::string> load_stopwords(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open stopword file: " + file.string());
    std::unordered_set<std::string> out;
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        size_t b = line.find_first_not_of(" \t");
        if (b == std::string::npos || line[b] == '#' || line[b] == ';') continue;
        size_t e = line.find_last_not_of(" \t");
        std::string word = line.substr(b, e - b + 1);
        for (char& c : word) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
        out.insert(std::move(word));
    }
    return out;
}

TokenizedDocument preprocess(const LabeledDocument& doc,
                             const std::unordered_set<std::string>& stopwords) {
    TokenizedDocument out;
    out.id = doc.id;
    out.label = doc.label;
    for (auto& tok : remove_stopwords(tokenize(doc.text), stopwords)) {
        out.tokens.push_back(stem(tok));
    }
    return out;
}

std::vector<TokenizedDocument> preprocess_corpus(const CorpusRaw& corpus,
                                                 const std::unordered_set<std::string>& stopwords) {
    std::vector<TokenizedDocument> out;
    out.reserve(corpus.documents.size());
    for (const auto& d : corpus.documents) out.push_back(preprocess(d, stopwords));
    return out;
}

Vocabulary build_vocabulary(const std::vector<TokenizedDocument>& docs, std::size_t min_df,
                            double max_df_ratio) {
    if (min_df < 1) throw config_error("min_df must be >= 1");
    std::map<std::string, std::size_t> df;  // ordered map keeps ties lexicographic for free
    std::unordered_set<std::string> seen;
    for (const auto& doc : docs) {
        seen.clear();
        for (const auto& t : doc.tokens) {
            if (seen.insert(t).second) df[t]++;
        }
    }
    const double max_df = max_df_ratio * static_cast<double>(docs.size());
    std::vector<std::pair<std::string, std::size_t>> kept;
    for (auto& [term, count] : df) {
        if (count >= min_df && static_cast<double>(count) <= max_df) kept.emplace_back(term, count);
    }
    std::stable_sort(kept.begin(), kept.end(),
                     [](const auto& a, const auto& b) { return a.second > b.second; });
    if (kept.empty()) throw config_error("vocabulary is empty after df filtering");
    Vocabulary vocab;
    vocab.terms.reserve(kept.size());
    for (std::uint32_t i = 0; i < kept.size(); ++i) {
        vocab.index.emplace(kept[i].first, i);
        vocab.terms.push_back(std::move(kept[i].first));
        vocab.doc_frequency.push_back(kept[i].second);
    }
    return vocab;
}

DocumentVector vectorize(const TokenizedDocument& doc, const Vocabulary& vocab,
                         Weighting weighting) {
    std::map<std::uint32_t, double> counts;
    for (const auto& t : doc.tokens) {
        auto it = vocab.index.find(t);
        if (it == vocab.index.end()) continue;
        counts[it->second] += 1.0;
    }
    DocumentVector v;
    v.idx.reserve(counts.size());
    v.weight.reserve(counts.size());
    for (auto& [i, c] : counts) {
        v.idx.push_back(i);
        v.weight.push_back(weighting == Weighting::Binary ? 1.0 : c);
    }
    return v;
}

DatasetMatrix build_matrix(const std::vector<TokenizedDocument>& docs, Vocabulary vocab,
                           Weighting weighting) {
    DatasetMatrix m;
    m.vocabulary = std::move(vocab);
    m.weighting = weighting;
    m.vectors.reserve(docs.size());
    m.labels.reserve(docs.size());
    for (const auto& d : docs) {
        m.vectors.push_back(vectorize(d, m.vocabulary, weighting));
        m.labels.push_back(d.label);
    }
    return m;
}

}  // namespace senti
