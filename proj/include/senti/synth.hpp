#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "senti/corpus.hpp"

namespace senti {

// Generator for a seeded stand-in dataset in the polarity-v2.0 layout, with
// three companion lexicons of graded quality. Word frequencies are Zipfian,
// documents mix class-oriented sentiment words with neutral background text,
// and a per-document mixture makes a fraction of reviews genuinely ambiguous.
struct SynthSpec {
    std::uint64_t seed = 7;
    std::size_t docs_per_class = 1000;
    std::size_t background_words = 9000;
    std::size_t sentiment_words_per_side = 1200;
    double mean_doc_tokens = 180.0;

    // Lexicon sizes follow the published HM/GI counts.
    std::size_t hm_positive = 657, hm_negative = 679;
    std::size_t gi_positive = 1614, gi_negative = 1982;
    std::size_t opinion_positive = 800, opinion_negative = 900;
};

struct SynthDataset {
    CorpusRaw corpus;
    std::vector<std::pair<std::string, bool>> hm;  // word, is_positive
    std::vector<std::pair<std::string, bool>> gi;
    std::vector<std::string> opinion_positive;
    std::vector<std::string> opinion_negative;
};

struct SynthPaths {
    std::filesystem::path corpus_dir;
    std::filesystem::path hm_tagged;
    std::filesystem::path gi_tagged;
    std::filesystem::path opinion_positive;
    std::filesystem::path opinion_negative;
};

SynthDataset make_synthetic_dataset(const SynthSpec& spec);

// Writes corpus/pos, corpus/neg, hm.tsv, gi.tsv, opinion-pos.txt, opinion-neg.txt.
SynthPaths write_synthetic_dataset(const SynthSpec& spec, const std::filesystem::path& out_dir);

}  // namespace senti
