#include "senti/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <unordered_set>

#include "senti/errors.hpp"
#include "senti/textprep.hpp"

namespace fs = std::filesystem;

namespace senti {
namespace {

// Pronounceable CV-syllable words that the Porter stemmer leaves untouched,
// so surface forms, stems, and lexicon entries stay in one-to-one relation.
class WordMint {
public:
    explicit WordMint(std::mt19937_64& rng) : rng_(rng) {}

    std::string next() {
        static constexpr char consonants[] = "bcdfghjklmnpqrtvz";
        static constexpr char vowels[] = "aiou";
        std::uniform_int_distribution<int> syllables(2, 4);
        std::uniform_int_distribution<int> cpick(0, sizeof consonants - 2);
        std::uniform_int_distribution<int> vpick(0, sizeof vowels - 2);
        while (true) {
            std::string w;
            int n = syllables(rng_);
            for (int i = 0; i < n; ++i) {
                w.push_back(consonants[cpick(rng_)]);
                w.push_back(vowels[vpick(rng_)]);
            }
            if (used_.count(w) || default_stopwords().count(w)) continue;
            if (stem(w) != w) continue;
            used_.insert(w);
            return w;
        }
    }

private:
    std::mt19937_64& rng_;
    std::unordered_set<std::string> used_;
};

std::discrete_distribution<std::size_t> zipf(std::size_t n, double s) {
    std::vector<double> weights(n);
    for (std::size_t i = 0; i < n; ++i) weights[i] = 1.0 / std::pow(static_cast<double>(i + 1), s);
    return std::discrete_distribution<std::size_t>(weights.begin(), weights.end());
}

double sample_beta(std::mt19937_64& rng, double a, double b) {
    std::gamma_distribution<double> ga(a, 1.0), gb(b, 1.0);
    double x = ga(rng), y = gb(rng);
    return x / (x + y);
}

// Picks lexicon entries from a sentiment pool by frequency-rank band, then
// pads with out-of-corpus filler so the totals match the published counts.
std::vector<std::string> pick_lexicon_side(std::mt19937_64& rng, WordMint& mint,
                                           const std::vector<std::string>& pool,
                                           std::size_t rank_lo, std::size_t rank_hi,
                                           double keep_prob, double head_prob,
                                           std::size_t head_ranks, std::size_t total) {
    std::vector<std::string> out;
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (std::size_t r = 0; r < pool.size() && out.size() < total; ++r) {
        double p = 0.0;
        if (r < head_ranks) p = head_prob;
        else if (r >= rank_lo && r < rank_hi) p = keep_prob;
        if (p > 0.0 && unit(rng) < p) out.push_back(pool[r]);
    }
    while (out.size() < total) out.push_back(mint.next());
    return out;
}

}  // namespace

SynthDataset make_synthetic_dataset(const SynthSpec& spec) {
    std::mt19937_64 rng(spec.seed);
    WordMint mint(rng);

    std::vector<std::string> background(spec.background_words);
    for (auto& w : background) w = mint.next();
    std::vector<std::string> pos_words(spec.sentiment_words_per_side);
    std::vector<std::string> neg_words(spec.sentiment_words_per_side);
    for (auto& w : pos_words) w = mint.next();
    for (auto& w : neg_words) w = mint.next();

    std::vector<std::string> stopword_pool(default_stopwords().begin(), default_stopwords().end());
    std::sort(stopword_pool.begin(), stopword_pool.end());

    auto background_pick = zipf(spec.background_words, 1.0);
    auto sentiment_pick = zipf(spec.sentiment_words_per_side, 0.8);
    std::uniform_int_distribution<std::size_t> stop_pick(0, stopword_pool.size() - 1);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    std::normal_distribution<double> doc_len(spec.mean_doc_tokens, spec.mean_doc_tokens * 0.22);

    SynthDataset out;
    char name[32];
    for (std::size_t cls = 0; cls < 2; ++cls) {
        bool positive = cls == 1;
        const auto& own = positive ? pos_words : neg_words;
        const auto& other = positive ? neg_words : pos_words;
        for (std::size_t d = 0; d < spec.docs_per_class; ++d) {
            // How consistently this review leans toward its own label.
            double mu = sample_beta(rng, 5.0, 2.0);
            auto n_tokens = static_cast<std::size_t>(
                std::clamp(doc_len(rng), spec.mean_doc_tokens * 0.45, spec.mean_doc_tokens * 1.8));
            std::string text;
            std::size_t line = 0;
            for (std::size_t t = 0; t < n_tokens; ++t) {
                double kind = unit(rng);
                const std::string* word;
                if (kind < 0.35) {
                    word = &stopword_pool[stop_pick(rng)];
                } else if (kind < 0.80) {
                    word = &background[background_pick(rng)];
                } else {
                    const auto& side = unit(rng) < mu ? own : other;
                    word = &side[sentiment_pick(rng)];
                }
                text += *word;
                double punct = unit(rng);
                if (punct < 0.06) text += " .";
                else if (punct < 0.10) text += " ,";
                text += ++line % 15 == 0 ? "\n" : " ";
            }
            text += "\n";
            std::snprintf(name, sizeof name, "%s/d%04zu.txt", positive ? "pos" : "neg", d);
            out.corpus.documents.push_back(
                {name, std::move(text), positive ? Polarity::Positive : Polarity::Negative});
        }
    }
    std::sort(out.corpus.documents.begin(), out.corpus.documents.end(),
              [](const auto& a, const auto& b) { return a.id < b.id; });
    out.corpus.positive_count = out.corpus.negative_count = spec.docs_per_class;

    // HM: small, weak-word coverage. GI: broad coverage but thin on the most
    // frequent sentiment words. Opinion: mid-band coverage between the two.
    auto tag = [](std::vector<std::string> words, bool positive,
                  std::vector<std::pair<std::string, bool>>& into) {
        for (auto& w : words) into.emplace_back(std::move(w), positive);
    };
    tag(pick_lexicon_side(rng, mint, pos_words, 300, 1200, 0.12, 0.0, 0, spec.hm_positive), true,
        out.hm);
    tag(pick_lexicon_side(rng, mint, neg_words, 300, 1200, 0.12, 0.0, 0, spec.hm_negative), false,
        out.hm);
    tag(pick_lexicon_side(rng, mint, pos_words, 50, 1200, 0.42, 0.15, 50, spec.gi_positive), true,
        out.gi);
    tag(pick_lexicon_side(rng, mint, neg_words, 50, 1200, 0.42, 0.15, 50, spec.gi_negative), false,
        out.gi);
    out.opinion_positive =
        pick_lexicon_side(rng, mint, pos_words, 30, 800, 0.35, 0.0, 0, spec.opinion_positive);
    out.opinion_negative =
        pick_lexicon_side(rng, mint, neg_words, 30, 800, 0.35, 0.0, 0, spec.opinion_negative);
    return out;
}

SynthPaths write_synthetic_dataset(const SynthSpec& spec, const fs::path& out_dir) {
    SynthDataset data = make_synthetic_dataset(spec);
    SynthPaths paths;
    paths.corpus_dir = out_dir / "corpus";
    fs::create_directories(paths.corpus_dir / "pos");
    fs::create_directories(paths.corpus_dir / "neg");
    for (const auto& doc : data.corpus.documents) {
        std::ofstream f(paths.corpus_dir / doc.id);
        if (!f) throw data_error("cannot write " + (paths.corpus_dir / doc.id).string());
        f << doc.text;
    }
    auto write_tagged = [&](const fs::path& path,
                            const std::vector<std::pair<std::string, bool>>& entries) {
        std::ofstream f(path);
        if (!f) throw data_error("cannot write " + path.string());
        f << "; synthetic lexicon, seed " << spec.seed << "\n";
        for (const auto& [word, positive] : entries) {
            f << word << "\t" << (positive ? "positive" : "negative") << "\n";
        }
    };
    auto write_list = [&](const fs::path& path, const std::vector<std::string>& words) {
        std::ofstream f(path);
        if (!f) throw data_error("cannot write " + path.string());
        f << "; synthetic lexicon, seed " << spec.seed << "\n";
        for (const auto& w : words) f << w << "\n";
    };
    paths.hm_tagged = out_dir / "hm.tsv";
    paths.gi_tagged = out_dir / "gi.tsv";
    paths.opinion_positive = out_dir / "opinion-pos.txt";
    paths.opinion_negative = out_dir / "opinion-neg.txt";
    write_tagged(paths.hm_tagged, data.hm);
    write_tagged(paths.gi_tagged, data.gi);
    write_list(paths.opinion_positive, data.opinion_positive);
    write_list(paths.opinion_negative, data.opinion_negative);
    return paths;
}

}  // namespace senti
