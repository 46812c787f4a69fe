#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <unordered_set>
#include <vector>

namespace senti {

enum class Polarity { Negative = 0, Positive = 1 };

inline const char* to_string(Polarity p) {
    return p == Polarity::Positive ? "positive" : "negative";
}

struct LabeledDocument {
    std::string id;    // path relative to the corpus root, '/' separators
    std::string text;  // raw review text
    Polarity label;
};

struct CorpusRaw {
    std::vector<LabeledDocument> documents;  // sorted by id
    std::size_t positive_count = 0;
    std::size_t negative_count = 0;
    std::vector<std::string> warnings;  // skipped files etc.
};

// Where a lexicon comes from: either a pair of word-list files
// (Opinion Lexicon layout) or a single word<TAB>polarity file (HM/GI layout).
struct LexiconSource {
    std::string name;
    std::filesystem::path positive_file;
    std::filesystem::path negative_file;
    std::filesystem::path tagged_file;

    bool is_tagged() const { return !tagged_file.empty(); }
};

struct Lexicon {
    std::string name;
    std::unordered_set<std::string> positive;
    std::unordered_set<std::string> negative;
    std::size_t conflicts = 0;  // entries seen under both polarities, dropped from both
    std::vector<std::string> warnings;
};

// Reads a polarity-v2.0 style directory (root/pos/*, root/neg/*).
// Unreadable or empty files are skipped with a warning; a missing
// pos/ or neg/ subdirectory is a config_error.
CorpusRaw load_polarity_corpus(const std::filesystem::path& root);

// Loads and normalizes a lexicon. Entries are lowercased and trimmed,
// duplicates collapse, and words listed under both polarities are dropped
// from both sets (counted in Lexicon::conflicts).
Lexicon load_lexicon(const LexiconSource& src);

}  // namespace senti
