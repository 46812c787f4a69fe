#include "senti/corpus.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "senti/errors.hpp"

namespace fs = std::filesystem;

namespace senti {
namespace {

std::string trim_lower(std::string_view s) {
    size_t b = 0, e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    std::string out(s.substr(b, e - b));
    for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    return out;
}

bool is_comment_or_blank(const std::string& line) {
    for (char c : line) {
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        return c == ';' || c == '#';
    }
    return true;
}

void load_side(const fs::path& root, const char* side, Polarity label, CorpusRaw& out) {
    fs::path dir = root / side;
    if (!fs::is_directory(dir)) {
        throw config_error("corpus root is missing subdirectory '" + std::string(side) +
                           "/': " + dir.string());
    }
    for (const auto& entry : fs::directory_iterator(dir)) {
        if (!entry.is_regular_file()) continue;
        std::string id = std::string(side) + "/" + entry.path().filename().string();
        std::ifstream in(entry.path(), std::ios::binary);
        if (!in) {
            out.warnings.push_back("unreadable file skipped: " + id);
            continue;
        }
        std::ostringstream buf;
        buf << in.rdbuf();
        std::string text = buf.str();
        if (text.empty()) {
            out.warnings.push_back("empty file skipped: " + id);
            continue;
        }
        out.documents.push_back({std::move(id), std::move(text), label});
    }
}

// One word per line; ';' and '#' comment lines allowed.
void load_word_list(const fs::path& file, std::unordered_set<std::string>& into,
                    std::vector<std::string>& warnings) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open lexicon file: " + file.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) continue;
        std::string word = trim_lower(line);
        if (word.find_first_of(" \t") != std::string::npos) {
            warnings.push_back("unparseable lexicon line skipped: " + line);
            continue;
        }
        into.insert(std::move(word));
    }
}

// word<TAB>polarity lines.
void load_tagged(const fs::path& file, Lexicon& lex) {
    std::ifstream in(file);
    if (!in) throw config_error("cannot open lexicon file: " + file.string());
    std::string line;
    while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (is_comment_or_blank(line)) continue;
        size_t tab = line.find('\t');
        if (tab == std::string::npos) {
            lex.warnings.push_back("unparseable lexicon line skipped: " + line);
            continue;
        }
        std::string word = trim_lower(std::string_view(line).substr(0, tab));
        std::string tag = trim_lower(std::string_view(line).substr(tab + 1));
        if (word.empty()) {
            lex.warnings.push_back("unparseable lexicon line skipped: " + line);
            continue;
        }
        if (tag == "positive" || tag == "pos" || tag == "+" || tag == "1" || tag == "p") {
            lex.positive.insert(std::move(word));
        } else if (tag == "negative" || tag == "neg" || tag == "-" || tag == "-1" || tag == "n") {
            lex.negative.insert(std::move(word));
        } else {
            lex.warnings.push_back("unknown polarity tag skipped: " + line);
        }
    }
}

}  // namespace

CorpusRaw load_polarity_corpus(const fs::path& root) {
    if (!fs::is_directory(root)) {
        throw config_error("corpus root is not a directory: " + root.string());
    }
    CorpusRaw out;
    load_side(root, "pos", Polarity::Positive, out);
    load_side(root, "neg", Polarity::Negative, out);
    std::sort(out.documents.begin(), out.documents.end(),
              [](const LabeledDocument& a, const LabeledDocument& b) { return a.id < b.id; });
    for (const auto& d : out.documents) {
        (d.label == Polarity::Positive ? out.positive_count : out.negative_count)++;
    }
    return out;
}

Lexicon load_lexicon(const LexiconSource& src) {
    Lexicon lex;
    lex.name = src.name;
    if (src.is_tagged()) {
        load_tagged(src.tagged_file, lex);
    } else {
        if (src.positive_file.empty() || src.negative_file.empty()) {
            throw config_error("lexicon '" + src.name +
                               "' needs either a tagged file or both word-list files");
        }
        load_word_list(src.positive_file, lex.positive, lex.warnings);
        load_word_list(src.negative_file, lex.negative, lex.warnings);
    }
    // Entries claimed by both polarities carry no usable signal; drop them.
    std::vector<std::string> both;
    for (const auto& w : lex.positive) {
        if (lex.negative.count(w)) both.push_back(w);
    }
    for (const auto& w : both) {
        lex.positive.erase(w);
        lex.negative.erase(w);
    }
    lex.conflicts = both.size();
    return lex;
}

}  // namespace senti
