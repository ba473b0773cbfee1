// One PASS/FAIL line per acceptance criterion; exit status 1 if any fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numeric>
#include <random>
#include <sstream>

#include "nlsql/cli.hpp"
#include "nlsql/error.hpp"
#include "nlsql/mini_exec.hpp"
#include "nlsql/parser.hpp"
#include "nlsql/speech.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace nlsql;

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
    return std::chrono::duration<double>(Clock::now() - start).count();
}

struct Report {
    int failures = 0;

    void line(int id, const std::string& name, bool ok, const std::string& detail) {
        std::cout << (ok ? "PASS" : "FAIL") << "  criterion " << id << "  " << name << "  (" << detail
                  << ")\n";
        if (!ok) ++failures;
    }
};

struct CliResult {
    int code;
    std::string out;
};

CliResult run_cli(std::vector<std::string> args) {
    args.insert(args.begin(), "nlsql");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out;
    std::ostringstream err;
    std::istringstream in;
    const auto parsed = cli::parse_command_line(static_cast<int>(argv.size()), argv.data(), out, err);
    if (const int* code = std::get_if<int>(&parsed)) return {*code, out.str()};
    const int code = cli::run(std::get<cli::CliConfig>(parsed), in, out, err);
    return {code, out.str()};
}

std::string fixture(const char* relative) { return (test::kFixtures / relative).string(); }

std::string run_binary(const std::string& args) {
    const std::string command = std::string(NLSQL_BINARY) + " " + args + " 2>/dev/null";
    std::string out;
    if (FILE* pipe = popen(command.c_str(), "r")) {
        std::array<char, 512> buffer{};
        std::size_t n;
        while ((n = fread(buffer.data(), 1, buffer.size(), pipe)) > 0) out.append(buffer.data(), n);
        out += "[exit " + std::to_string(pclose(pipe)) + "]";
    }
    return out;
}

// Sentences from the query grammar over the bank lexicon.
std::string generate_query(std::mt19937& rng) {
    const Schema& schema = test::bank_schema();
    std::vector<std::string> columns;
    for (const auto& t : schema.tables())
        for (const auto& c : t.columns)
            if (std::find(columns.begin(), columns.end(), c.name) == columns.end()) columns.push_back(c.name);
    const char* verbs[] = {"get", "show", "find", "list", "display", "give"};
    const char* wheres[] = {"whose", "where", "with", "having"};
    const char* comparators[] = {"greater than", "less than", "equal to", "equals", "not equal to",
                                 "at least", "at most", "greater than or equal to", "less than or equal to"};

    std::string text = verbs[rng() % 6];
    std::vector<std::string> pool = columns;
    std::shuffle(pool.begin(), pool.end(), rng);
    const std::size_t n_select = 1 + rng() % 3;
    for (std::size_t i = 0; i < n_select; ++i) text += (i ? " and " : " ") + pool[i];
    if (rng() % 4 == 0) text += " of " + schema.tables()[rng() % schema.size()].name;
    const std::size_t n_conditions = rng() % 4;
    for (std::size_t i = 0; i < n_conditions; ++i) {
        text += i == 0 ? std::string(" ") + wheres[rng() % 4] : (rng() % 2 ? " and" : " or");
        text += " " + columns[rng() % columns.size()] + " " + comparators[rng() % 9] + " ";
        text += rng() % 2 ? std::to_string(rng() % 10000) : "'v" + std::to_string(rng() % 50) + "'";
    }
    return text;
}

bool criterion_golden_sql(Report& report) {
    const auto start = Clock::now();
    const CliResult r = run_cli({"--schema", fixture("bank/schema.json"), "--query", test::kGoldenQuery});
    const double elapsed = seconds_since(start);
    const bool ok = r.code == 0 && test::normalize_whitespace(r.out) == test::kGoldenSql && elapsed < 1.0;
    std::ostringstream detail;
    detail << "exit " << r.code << ", " << elapsed << " s";
    report.line(1, "golden end-to-end SQL", ok, detail.str());
    return ok;
}

void criterion_golden_ir(Report& report) {
    const CliResult r =
        run_cli({"--schema", fixture("bank/schema.json"), "--query", test::kGoldenQuery, "--emit", "ir"});
    report.line(2, "golden IR", r.code == 0 && r.out == std::string(test::kGoldenIr) + "\n",
                "printed " + test::normalize_whitespace(r.out));
}

void criterion_lexical_mapping(Report& report) {
    const auto tokens = tokenize("get the branch_name", test::bank_translator().lexicon());
    const bool tokens_ok = tokens.size() == 2 && tokens[0].kind == TokenKind::VerbSelect &&
                           tokens[0].target == "select" && tokens[1].kind == TokenKind::Column &&
                           tokens[1].target == "branch_name";
    const CliResult r = run_cli({"--schema", fixture("bank/schema.json"), "--query", "get the branch_name"});
    const bool sql_ok = r.out == "SELECT branch_name FROM branch\n";
    report.line(3, "lexical mapping drops noise", tokens_ok && sql_ok,
                std::to_string(tokens.size()) + " tokens, SQL " + test::normalize_whitespace(r.out));
}

void criterion_join_path(Report& report) {
    const auto start = Clock::now();
    std::size_t cases = 0;
    std::size_t mismatches = 0;

    auto check_schema = [&](const Schema& schema, const std::vector<std::vector<std::size_t>>& requests) {
        const SchemaGraph g = build_graph(schema);
        const auto adjacency = oracle::shared_column_adjacency(schema);
        for (const auto& picked : requests) {
            ++cases;
            std::vector<std::string> required;
            for (std::size_t i : picked) required.push_back(schema.tables()[i].name);
            const auto expected = oracle::min_connected_superset(adjacency, picked);
            try {
                const JoinPlan plan = join_path(g, required);
                if (!expected || plan.tables.size() != *expected || !oracle::plan_connected(plan)) ++mismatches;
            } catch (const DisconnectedError&) {
                if (expected) ++mismatches;
            }
        }
    };

    const Schema& bank = test::bank_schema();
    std::vector<std::vector<std::size_t>> pairs;
    for (std::size_t a = 0; a < bank.size(); ++a)
        for (std::size_t b = a + 1; b < bank.size(); ++b) pairs.push_back({a, b});
    check_schema(bank, pairs);

    const JoinPlan golden = join_path(build_graph(bank), {"customer", "account"});
    const bool golden_ok = golden.tables == std::vector<std::string>{"customer", "depositor", "account"};

    std::mt19937 rng(2024);
    for (int round = 0; round < 100; ++round) {
        const std::size_t n = 1 + rng() % 6;
        std::vector<Table> tables;
        for (std::size_t i = 0; i < n; ++i)
            tables.push_back({"t" + std::to_string(i), TableKind::Entity,
                              {{"own" + std::to_string(i), ValueKind::Integer}}});
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                if (rng() % 100 < 45) {
                    const std::string key = "k" + std::to_string(i) + "_" + std::to_string(j);
                    tables[i].columns.push_back({key, ValueKind::Integer});
                    tables[j].columns.push_back({key, ValueKind::Integer});
                }
        const Schema schema(tables);
        std::vector<std::vector<std::size_t>> requests;
        for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = a + 1; b < n; ++b) requests.push_back({a, b});
        if (n >= 3) {
            std::vector<std::size_t> triple(n);
            std::iota(triple.begin(), triple.end(), 0);
            std::shuffle(triple.begin(), triple.end(), rng);
            triple.resize(3);
            requests.push_back(triple);
        }
        if (requests.empty()) requests.push_back({0});
        check_schema(schema, requests);
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << cases << " requests, " << mismatches << " mismatches, golden "
           << (golden_ok ? "ok" : "wrong") << ", " << elapsed << " s";
    report.line(4, "join path matches brute-force minimum", mismatches == 0 && golden_ok && elapsed < 5.0,
                detail.str());
}

WordHmm list_model() {
    WordHmm w;
    w.word = "list";
    for (const char* p : {"l", "ih", "iy", "s", "t"}) w.states.push_back({p, {{p, 1.0}}});
    w.transitions = {{{1, 0.5}, {2, 0.5}}, {{3, 1.0}}, {{3, 1.0}}, {{4, 1.0}}, {}};
    w.entry = {{0, 1.0}};
    w.exit = {{4, 1.0}};
    return w;
}

void criterion_viterbi(Report& report) {
    const auto start = Clock::now();
    const AcousticModels& models = test::bank_models();
    std::mt19937 rng(8);
    std::size_t word_cases = 0;
    std::size_t sentence_cases = 0;
    std::size_t mismatches = 0;

    auto same = [](double a, double b) {
        if (std::isinf(a) || std::isinf(b)) return a == b;
        return std::fabs(a - b) <= 1e-9;
    };

    std::vector<WordHmm> word_fixtures = models.words;
    word_fixtures.push_back(list_model());
    std::vector<std::string> symbols = models.alphabet;
    for (const WordHmm& w : word_fixtures) {
        if (w.states.size() > 8) continue;
        for (std::size_t length = 1; length <= 6; ++length) {
            for (int k = 0; k < 12; ++k) {
                std::vector<std::string> stream;
                // Half the streams follow the word's own phonemes so most are possible.
                for (std::size_t t = 0; t < length; ++t) {
                    if (k % 2 == 0) stream.push_back(w.states[std::min(t, w.states.size() - 1)].phoneme);
                    else stream.push_back(symbols[rng() % symbols.size()]);
                }
                ++word_cases;
                if (!same(viterbi_word(stream, w).log_probability, oracle::enumerate_word(stream, w)))
                    ++mismatches;
            }
        }
    }
    for (const char* line : {"l ih s t", "l iy s t", "t"}) {
        ++word_cases;
        const auto stream = split_observations(line);
        if (!same(viterbi_word(stream, list_model()).log_probability,
                  oracle::enumerate_word(stream, list_model())))
            ++mismatches;
    }

    for (int round = 0; round < 5000 && sentence_cases < 40; ++round) {
        std::string state = models.grammar.start;
        std::vector<std::string> stream;
        for (int step = 0; step < 10; ++step) {
            const bool accepting = std::find(models.grammar.accepting.begin(), models.grammar.accepting.end(),
                                             state) != models.grammar.accepting.end();
            std::vector<const GrammarArc*> out;
            for (const auto& a : models.grammar.arcs)
                if (a.from == state) out.push_back(&a);
            if ((accepting && rng() % 2) || out.empty()) break;
            const GrammarArc* arc = out[rng() % out.size()];
            for (const auto& st : models.find(arc->word)->states) stream.push_back(st.phoneme);
            state = arc->to;
        }
        if (stream.empty() || stream.size() > 12) continue;
        for (auto& s : stream)
            if (rng() % 5 == 0) s = symbols[rng() % symbols.size()];
        ++sentence_cases;
        const auto expected = oracle::enumerate_sentence(stream, models.words, models.grammar);
        try {
            const Decoding got = decode_sentence(stream, models);
            if (!expected || !same(got.log_probability, expected->log_probability)) ++mismatches;
        } catch (const DecodeError&) {
            if (expected) ++mismatches;
        }
    }
    const double elapsed = seconds_since(start);
    std::ostringstream detail;
    detail << word_cases << " word alignments, " << sentence_cases << " sentence decodings, " << mismatches
           << " mismatches, " << elapsed << " s";
    report.line(5, "Viterbi and sentence decoding match enumeration",
                mismatches == 0 && sentence_cases >= 20 && elapsed < 10.0, detail.str());
}

void criterion_executor(Report& report) {
    const Dataset& data = test::bank_dataset();
    const Translator& translator = test::bank_translator();
    const ResultSet golden = execute(translator.translate(test::kGoldenQuery).resolved, data);
    const std::vector<std::vector<Value>> expected_rows = {{Value(std::string("Adams"))},
                                                           {Value(std::string("Williams"))}};
    const bool golden_ok = golden.rows == expected_rows;

    std::mt19937 rng(50);
    int mismatches = 0;
    int plans = 0;
    while (plans < 50) {
        const std::string text = generate_query(rng);
        ResolvedQuery q;
        try {
            q = translator.translate(text).resolved;
        } catch (const Error&) {
            continue;  // ill-typed random literal
        }
        ++plans;
        if (execute(q, data).rows != oracle::reference_execute(q, data).rows) ++mismatches;
    }
    report.line(6, "executor matches hand-computed rows and reference", golden_ok && mismatches == 0,
                std::to_string(golden.rows.size()) + " golden rows, " + std::to_string(plans) + " plans, " +
                    std::to_string(mismatches) + " mismatches");
}

void criterion_noise(Report& report) {
    const Translator& translator = test::bank_translator();
    const std::vector<std::string> noise(translator.lexicon().noise_words.begin(),
                                         translator.lexicon().noise_words.end());
    std::mt19937 rng(200);
    int changed = 0;
    for (int i = 0; i < 200; ++i) {
        const std::string query = generate_query(rng);
        const std::string ir = ir_to_text(translator.to_ir(query));
        const auto tokens = tokenize(query, translator.lexicon());
        for (int variant = 0; variant < 5; ++variant) {
            std::string noisy;
            for (const auto& t : tokens) {
                while (rng() % 3 == 0) noisy += noise[rng() % noise.size()] + " ";
                noisy += t.source + " ";
            }
            if (rng() % 2) noisy += noise[rng() % noise.size()];
            if (ir_to_text(translator.to_ir(noisy)) != ir) ++changed;
        }
    }
    report.line(7, "noise words leave the IR unchanged", changed == 0,
                "200 queries x 5 variants, " + std::to_string(changed) + " changed");
}

void criterion_determinism(Report& report) {
    const std::string schema = "--schema " + fixture("bank/schema.json");
    const std::string golden = "--query \"" + std::string(test::kGoldenQuery) + "\"";
    const std::vector<std::string> invocations = {
        schema + " " + golden,
        schema + " " + golden + " --emit ir",
        schema + " --query \"get the branch_name\"",
        schema + " " + golden + " --emit rows --data " + fixture("bank/data"),
        schema + " " + golden + " --emit rows --format csv --data " + fixture("bank/data"),
        schema + " --models " + fixture("models/bank_models.json") + " --phonemes " +
            fixture("models/bank_utterances.txt"),
    };
    int differing = 0;
    for (const auto& args : invocations) {
        const std::string first = run_binary(args);
        for (int repeat = 0; repeat < 3; ++repeat)
            if (run_binary(args) != first) ++differing;
        if (first.find("[exit 0]") == std::string::npos) ++differing;
    }
    report.line(8, "repeated golden runs are byte-identical", differing == 0,
                std::to_string(invocations.size()) + " invocations x 4 runs, " + std::to_string(differing) +
                    " differing");
}

} // namespace

int main() {
    Report report;
    const std::vector<std::function<void(Report&)>> criteria = {
        [](Report& r) { criterion_golden_sql(r); },
        criterion_golden_ir,
        criterion_lexical_mapping,
        criterion_join_path,
        criterion_viterbi,
        criterion_executor,
        criterion_noise,
        criterion_determinism,
    };
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        try {
            criteria[i](report);
        } catch (const std::exception& e) {
            report.line(static_cast<int>(i + 1), "raised an exception", false, e.what());
        }
    }
    std::cout << (report.failures == 0 ? "all criteria passed" : std::to_string(report.failures) + " failed")
              << "\n";
    return report.failures == 0 ? 0 : 1;
}
