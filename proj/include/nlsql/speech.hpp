#pragma once

#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace nlsql {

// Word recognition over symbolic phoneme streams: one left-to-right HMM per
// word, a word-level grammar automaton as language model, Viterbi search over
// their product. All scores are natural-log probabilities.

struct PhonemeState {
    std::string phoneme;
    std::map<std::string, double> emissions;  // observation symbol -> probability
};

struct ProbArc {
    std::size_t state;
    double prob;

    bool operator==(const ProbArc&) const = default;
};

struct WordHmm {
    std::string word;
    std::vector<PhonemeState> states;
    std::vector<std::vector<ProbArc>> transitions;  // indexed by source state
    std::vector<ProbArc> entry;
    std::vector<ProbArc> exit;
};

struct GrammarArc {
    std::string from;
    std::string word;
    std::string to;
};

/// Unweighted word automaton; every accepted word sequence is equally likely.
struct GrammarFsa {
    std::vector<std::string> states;
    std::string start;
    std::vector<std::string> accepting;
    std::vector<GrammarArc> arcs;
};

struct AcousticModels {
    std::vector<std::string> alphabet;
    std::vector<WordHmm> words;
    GrammarFsa grammar;

    const WordHmm* find(std::string_view word) const;
};

/// Checks every probability and structural invariant; throws ConfigError
/// naming the word/state and the offending sum.
void validate(const AcousticModels& models);

/// Parses and validates a model-config document (strict JSON).
AcousticModels load_models(std::string_view config_text);

/// Splits an observation line into phoneme symbols.
std::vector<std::string> split_observations(std::string_view line);

struct WordAlignment {
    double log_probability;        // -inf when no path has positive probability
    std::vector<std::size_t> path; // one state per observation; empty when impossible

    bool possible() const;
};

/// Best entry -> ... -> exit state path emitting exactly `observations`.
/// Equal scores resolve to the lexicographically smallest state path.
WordAlignment viterbi_word(std::span<const std::string> observations, const WordHmm& hmm);

struct Decoding {
    std::vector<std::string> words;
    double log_probability = 0.0;
    std::vector<std::pair<std::string, std::size_t>> state_path;  // (word, state) per observation

    /// Words joined by single spaces.
    std::string text() const;
};

/// Jointly best segmentation, grammar path and per-word state paths.
/// Equal scores prefer the lexicographically smaller word sequence, then
/// the smaller state path. Throws DecodeError when nothing is accepted.
Decoding decode_sentence(std::span<const std::string> observations,
                         std::span<const WordHmm> words, const GrammarFsa& grammar);
Decoding decode_sentence(std::span<const std::string> observations, const AcousticModels& models);

} // namespace nlsql
