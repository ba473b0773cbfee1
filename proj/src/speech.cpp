#include "nlsql/speech.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <optional>
#include <set>
#include <sstream>

#include "json_util.hpp"
#include "nlsql/error.hpp"

namespace nlsql {

namespace {

constexpr double kSumTolerance = 1e-9;
constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double safe_log(double p) { return p > 0.0 ? std::log(p) : kNegInf; }

std::string format_sum(double sum) {
    std::ostringstream out;
    out.precision(12);
    out << sum;
    return out.str();
}

void check_probability(double p, const std::string& where) {
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError(where + ": probability " + format_sum(p) + " outside [0, 1]");
}

void check_sum(double sum, const std::string& where) {
    if (std::fabs(sum - 1.0) > kSumTolerance)
        throw ConfigError(where + " sums to " + format_sum(sum) + ", expected 1");
}

void validate_word(const WordHmm& hmm, const std::set<std::string>& alphabet) {
    const std::string name = "word '" + hmm.word + "'";
    const std::size_t n = hmm.states.size();
    if (hmm.word.empty()) throw ConfigError("word with empty name");
    if (n == 0) throw ConfigError(name + ": no states");
    if (hmm.transitions.size() != n)
        throw ConfigError(name + ": transition table does not cover every state");

    auto check_arcs = [&](const std::vector<ProbArc>& arcs, const std::string& where) {
        std::set<std::size_t> targets;
        double sum = 0.0;
        for (const ProbArc& arc : arcs) {
            if (arc.state >= n)
                throw ConfigError(where + ": state index " + std::to_string(arc.state) +
                                  " out of range");
            if (!targets.insert(arc.state).second)
                throw ConfigError(where + ": state " + std::to_string(arc.state) + " listed twice");
            check_probability(arc.prob, where);
            sum += arc.prob;
        }
        return sum;
    };

    check_sum(check_arcs(hmm.entry, name + " entry"), name + " entry mass");

    std::vector<double> exit_mass(n, 0.0);
    {
        const std::string where = name + " exit";
        check_arcs(hmm.exit, where);
        for (const ProbArc& arc : hmm.exit) exit_mass[arc.state] = arc.prob;
    }

    for (std::size_t s = 0; s < n; ++s) {
        const std::string where = name + " state " + std::to_string(s);
        const PhonemeState& state = hmm.states[s];
        if (!alphabet.count(state.phoneme))
            throw ConfigError(where + ": phoneme '" + state.phoneme + "' not in the alphabet");
        double emitted = 0.0;
        for (const auto& [symbol, p] : state.emissions) {
            if (!alphabet.count(symbol))
                throw ConfigError(where + ": emission symbol '" + symbol +
                                  "' not in the alphabet");
            check_probability(p, where + " emission");
            emitted += p;
        }
        check_sum(emitted, where + " emission row");

        for (const ProbArc& arc : hmm.transitions[s]) {
            if (arc.state < s)
                throw ConfigError(where + ": transition to state " + std::to_string(arc.state) +
                                  " goes backwards");
        }
        const double outgoing = check_arcs(hmm.transitions[s], where + " transitions");
        check_sum(outgoing + exit_mass[s], where + " outgoing plus exit mass");
    }
}

// Log-domain view of one word model against one observation sequence.
struct ScoredHmm {
    std::size_t size = 0;
    std::vector<double> entry;
    std::vector<double> exit;
    std::vector<std::vector<std::pair<std::size_t, double>>> incoming;  // per target state
    std::vector<std::vector<double>> emit;                             // [state][time]

    ScoredHmm(const WordHmm& hmm, std::span<const std::string> observations)
        : size(hmm.states.size()),
          entry(size, kNegInf),
          exit(size, kNegInf),
          incoming(size),
          emit(size, std::vector<double>(observations.size(), kNegInf)) {
        for (const ProbArc& arc : hmm.entry) entry[arc.state] = safe_log(arc.prob);
        for (const ProbArc& arc : hmm.exit) exit[arc.state] = safe_log(arc.prob);
        for (std::size_t from = 0; from < size; ++from)
            for (const ProbArc& arc : hmm.transitions[from])
                incoming[arc.state].emplace_back(from, safe_log(arc.prob));
        for (auto& list : incoming) std::sort(list.begin(), list.end());
        for (std::size_t s = 0; s < size; ++s) {
            const auto& emissions = hmm.states[s].emissions;
            for (std::size_t t = 0; t < observations.size(); ++t) {
                auto it = emissions.find(observations[t]);
                if (it != emissions.end()) emit[s][t] = safe_log(it->second);
            }
        }
    }
};

struct Hypothesis {
    double score = kNegInf;
    std::vector<std::string> words;
    std::vector<std::pair<std::string, std::size_t>> path;
};

bool better(const Hypothesis& a, const Hypothesis& b) {
    if (a.score != b.score) return a.score > b.score;
    if (a.words != b.words) return a.words < b.words;
    return a.path < b.path;
}

void offer(std::optional<Hypothesis>& slot, Hypothesis&& candidate) {
    if (candidate.score == kNegInf) return;
    if (!slot || better(candidate, *slot)) slot = std::move(candidate);
}

} // namespace

const WordHmm* AcousticModels::find(std::string_view word) const {
    for (const WordHmm& w : words)
        if (w.word == word) return &w;
    return nullptr;
}

void validate(const AcousticModels& models) {
    if (models.alphabet.empty()) throw ConfigError("phoneme alphabet is empty");
    const std::set<std::string> alphabet(models.alphabet.begin(), models.alphabet.end());
    if (alphabet.size() != models.alphabet.size())
        throw ConfigError("phoneme alphabet lists a symbol twice");

    std::set<std::string> names;
    for (const WordHmm& hmm : models.words) {
        validate_word(hmm, alphabet);
        if (!names.insert(hmm.word).second)
            throw ConfigError("word '" + hmm.word + "' declared twice");
    }

    const GrammarFsa& fsa = models.grammar;
    const std::set<std::string> states(fsa.states.begin(), fsa.states.end());
    if (states.size() != fsa.states.size()) throw ConfigError("grammar lists a state twice");
    if (!states.count(fsa.start))
        throw ConfigError("grammar start state '" + fsa.start + "' is not declared");
    for (const std::string& s : fsa.accepting)
        if (!states.count(s)) throw ConfigError("grammar accepting state '" + s + "' is not declared");
    for (const GrammarArc& arc : fsa.arcs) {
        if (!states.count(arc.from) || !states.count(arc.to))
            throw ConfigError("grammar arc " + arc.from + " -" + arc.word + "-> " + arc.to +
                              " uses an undeclared state");
        if (!names.count(arc.word))
            throw ConfigError("grammar arc " + arc.from + " -" + arc.word + "-> " + arc.to +
                              " uses unknown word '" + arc.word + "'");
    }
}

AcousticModels load_models(std::string_view config_text) {
    using detail::Json;
    const Json doc = detail::parse_json(config_text, "model config");
    detail::check_fields(doc, "model config", {"phoneme_alphabet", "words", "grammar"},
                         {"phoneme_alphabet", "words", "grammar"});

    AcousticModels models;
    for (const Json& symbol : detail::require_array(doc, "phoneme_alphabet", "model config")) {
        if (!symbol.is_string()) throw ConfigError("phoneme_alphabet: expected strings");
        models.alphabet.push_back(symbol.get<std::string>());
    }

    auto read_arcs = [](const Json& list, const std::string& context) {
        std::vector<ProbArc> arcs;
        for (std::size_t i = 0; i < list.size(); ++i) {
            const std::string where = context + "[" + std::to_string(i) + "]";
            detail::check_fields(list[i], where, {"state", "p"}, {"state", "p"});
            if (!list[i]["state"].is_number_unsigned())
                throw ConfigError(where + ": state must be a non-negative integer");
            arcs.push_back({list[i]["state"].get<std::size_t>(),
                            detail::require_number(list[i]["p"], where + ".p")});
        }
        return arcs;
    };

    const Json& words = detail::require_array(doc, "words", "model config");
    for (std::size_t w = 0; w < words.size(); ++w) {
        const std::string context = "words[" + std::to_string(w) + "]";
        const Json& entry = words[w];
        detail::check_fields(entry, context, {"name", "states", "entry", "exit", "transitions"},
                             {"name", "states", "entry", "exit", "transitions"});
        WordHmm hmm;
        hmm.word = detail::require_string(entry, "name", context);

        const Json& states = detail::require_array(entry, "states", context);
        for (std::size_t s = 0; s < states.size(); ++s) {
            const std::string where = context + ".states[" + std::to_string(s) + "]";
            detail::check_fields(states[s], where, {"phoneme", "emissions"},
                                 {"phoneme", "emissions"});
            PhonemeState state;
            state.phoneme = detail::require_string(states[s], "phoneme", where);
            const Json& emissions = states[s]["emissions"];
            if (!emissions.is_object()) throw ConfigError(where + ": emissions must be an object");
            for (const auto& [symbol, p] : emissions.items())
                state.emissions[symbol] = detail::require_number(p, where + ".emissions." + symbol);
            hmm.states.push_back(std::move(state));
        }

        hmm.entry = read_arcs(detail::require_array(entry, "entry", context), context + ".entry");
        hmm.exit = read_arcs(detail::require_array(entry, "exit", context), context + ".exit");
        hmm.transitions.resize(hmm.states.size());
        const Json& transitions = detail::require_array(entry, "transitions", context);
        for (std::size_t i = 0; i < transitions.size(); ++i) {
            const std::string where = context + ".transitions[" + std::to_string(i) + "]";
            detail::check_fields(transitions[i], where, {"from", "to", "p"}, {"from", "to", "p"});
            if (!transitions[i]["from"].is_number_unsigned() ||
                !transitions[i]["to"].is_number_unsigned())
                throw ConfigError(where + ": from/to must be non-negative integers");
            const auto from = transitions[i]["from"].get<std::size_t>();
            if (from >= hmm.states.size())
                throw ConfigError(where + ": state index " + std::to_string(from) +
                                  " out of range");
            hmm.transitions[from].push_back({transitions[i]["to"].get<std::size_t>(),
                                             detail::require_number(transitions[i]["p"], where)});
        }
        models.words.push_back(std::move(hmm));
    }

    const Json& grammar = doc["grammar"];
    detail::check_fields(grammar, "grammar", {"states", "start", "accepting", "arcs"},
                         {"states", "start", "accepting", "arcs"});
    for (const Json& s : detail::require_array(grammar, "states", "grammar")) {
        if (!s.is_string()) throw ConfigError("grammar.states: expected strings");
        models.grammar.states.push_back(s.get<std::string>());
    }
    models.grammar.start = detail::require_string(grammar, "start", "grammar");
    for (const Json& s : detail::require_array(grammar, "accepting", "grammar")) {
        if (!s.is_string()) throw ConfigError("grammar.accepting: expected strings");
        models.grammar.accepting.push_back(s.get<std::string>());
    }
    const Json& arcs = detail::require_array(grammar, "arcs", "grammar");
    for (std::size_t i = 0; i < arcs.size(); ++i) {
        const std::string where = "grammar.arcs[" + std::to_string(i) + "]";
        detail::check_fields(arcs[i], where, {"from", "word", "to"}, {"from", "word", "to"});
        models.grammar.arcs.push_back({detail::require_string(arcs[i], "from", where),
                                       detail::require_string(arcs[i], "word", where),
                                       detail::require_string(arcs[i], "to", where)});
    }

    validate(models);
    return models;
}

std::vector<std::string> split_observations(std::string_view line) {
    std::vector<std::string> out;
    std::size_t i = 0;
    while (i < line.size()) {
        while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        const std::size_t start = i;
        while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
        if (i > start) out.emplace_back(line.substr(start, i - start));
    }
    return out;
}

bool WordAlignment::possible() const { return log_probability != kNegInf; }

WordAlignment viterbi_word(std::span<const std::string> observations, const WordHmm& hmm) {
    if (observations.empty()) return {kNegInf, {}};
    const ScoredHmm model(hmm, observations);
    const std::size_t n = model.size;

    // Best prefix per state, with its path; equal scores keep the smaller path.
    std::vector<double> score(n, kNegInf);
    std::vector<std::vector<std::size_t>> path(n);
    for (std::size_t j = 0; j < n; ++j) {
        score[j] = model.entry[j] + model.emit[j][0];
        path[j] = {j};
    }

    for (std::size_t t = 1; t < observations.size(); ++t) {
        std::vector<double> next(n, kNegInf);
        std::vector<std::vector<std::size_t>> next_path(n);
        for (std::size_t j = 0; j < n; ++j) {
            std::optional<std::size_t> from;
            double best = kNegInf;
            for (const auto& [i, log_trans] : model.incoming[j]) {
                const double v = score[i] + log_trans;
                if (v == kNegInf) continue;
                if (!from || v > best || (v == best && path[i] < path[*from])) {
                    best = v;
                    from = i;
                }
            }
            if (!from) continue;
            next[j] = best + model.emit[j][t];
            next_path[j] = path[*from];
            next_path[j].push_back(j);
        }
        score = std::move(next);
        path = std::move(next_path);
    }

    WordAlignment result{kNegInf, {}};
    for (std::size_t j = 0; j < n; ++j) {
        const double v = score[j] + model.exit[j];
        if (v == kNegInf) continue;
        if (!result.possible() || v > result.log_probability ||
            (v == result.log_probability && path[j] < result.path)) {
            result.log_probability = v;
            result.path = path[j];
        }
    }
    return result;
}

std::string Decoding::text() const {
    std::string out;
    for (std::size_t i = 0; i < words.size(); ++i) {
        if (i > 0) out += ' ';
        out += words[i];
    }
    return out;
}

Decoding decode_sentence(std::span<const std::string> observations,
                         std::span<const WordHmm> words, const GrammarFsa& grammar) {
    if (observations.empty()) throw DecodeError("empty phoneme stream");

    auto state_index = [&](const std::string& name) -> std::size_t {
        auto it = std::find(grammar.states.begin(), grammar.states.end(), name);
        if (it == grammar.states.end())
            throw DecodeError("grammar state '" + name + "' is not declared");
        return static_cast<std::size_t>(it - grammar.states.begin());
    };

    struct ArcModel {
        std::size_t from;
        std::size_t to;
        const std::string* word;
        ScoredHmm hmm;
    };
    std::vector<ArcModel> arcs;
    for (const GrammarArc& arc : grammar.arcs) {
        auto it = std::find_if(words.begin(), words.end(),
                               [&](const WordHmm& w) { return w.word == arc.word; });
        if (it == words.end()) throw DecodeError("grammar uses unknown word '" + arc.word + "'");
        arcs.push_back({state_index(arc.from), state_index(arc.to), &it->word,
                        ScoredHmm(*it, observations)});
    }
    const std::size_t start = state_index(grammar.start);
    const std::size_t fsa_size = grammar.states.size();

    using Slot = std::optional<Hypothesis>;
    // active[a][s]: best hypothesis sitting in state s of arc a's word model.
    std::vector<std::vector<Slot>> active(arcs.size());
    for (std::size_t a = 0; a < arcs.size(); ++a) active[a].resize(arcs[a].hmm.size);
    // ended[q]: best hypothesis that has just left a word into grammar state q.
    std::vector<Slot> ended(fsa_size);

    auto enter = [&](std::size_t a, const Hypothesis* prior, std::size_t t,
                     std::vector<std::vector<Slot>>& into) {
        const ArcModel& arc = arcs[a];
        for (std::size_t j = 0; j < arc.hmm.size; ++j) {
            Hypothesis h;
            const double base = prior ? prior->score : 0.0;
            h.score = (base + arc.hmm.entry[j]) + arc.hmm.emit[j][t];
            if (h.score == kNegInf) continue;
            if (prior) {
                h.words = prior->words;
                h.path = prior->path;
            }
            h.words.push_back(*arc.word);
            h.path.emplace_back(*arc.word, j);
            offer(into[a][j], std::move(h));
        }
    };

    auto collect_ends = [&]() {
        std::vector<Slot> out(fsa_size);
        for (std::size_t a = 0; a < arcs.size(); ++a) {
            for (std::size_t j = 0; j < arcs[a].hmm.size; ++j) {
                const Slot& slot = active[a][j];
                if (!slot) continue;
                Hypothesis h = *slot;
                h.score = h.score + arcs[a].hmm.exit[j];
                offer(out[arcs[a].to], std::move(h));
            }
        }
        return out;
    };

    for (std::size_t a = 0; a < arcs.size(); ++a)
        if (arcs[a].from == start) enter(a, nullptr, 0, active);
    ended = collect_ends();

    for (std::size_t t = 1; t < observations.size(); ++t) {
        std::vector<std::vector<Slot>> next(arcs.size());
        for (std::size_t a = 0; a < arcs.size(); ++a) next[a].resize(arcs[a].hmm.size);

        for (std::size_t a = 0; a < arcs.size(); ++a) {
            const ScoredHmm& hmm = arcs[a].hmm;
            for (std::size_t j = 0; j < hmm.size; ++j) {
                for (const auto& [i, log_trans] : hmm.incoming[j]) {
                    const Slot& from = active[a][i];
                    if (!from) continue;
                    Hypothesis h;
                    h.score = (from->score + log_trans) + hmm.emit[j][t];
                    if (h.score == kNegInf) continue;
                    h.words = from->words;
                    h.path = from->path;
                    h.path.emplace_back(*arcs[a].word, j);
                    offer(next[a][j], std::move(h));
                }
            }
            const Slot& prior = ended[arcs[a].from];
            if (prior) enter(a, &*prior, t, next);
        }
        active = std::move(next);
        ended = collect_ends();
    }

    std::optional<Hypothesis> best;
    for (const std::string& name : grammar.accepting) {
        const Slot& slot = ended[state_index(name)];
        if (slot) offer(best, Hypothesis(*slot));
    }
    if (!best)
        throw DecodeError("no grammar-accepted word sequence matches the " +
                          std::to_string(observations.size()) + "-symbol phoneme stream");
    return {std::move(best->words), best->score, std::move(best->path)};
}

Decoding decode_sentence(std::span<const std::string> observations, const AcousticModels& models) {
    return decode_sentence(observations, models.words, models.grammar);
}

} // namespace nlsql
