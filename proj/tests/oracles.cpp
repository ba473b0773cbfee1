#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <set>

namespace nlsql::oracle {

namespace {
constexpr double kNegInf = -std::numeric_limits<double>::infinity();
}

std::vector<std::string> shared_columns(const Table& a, const Table& b) {
    std::set<std::string> left;
    std::set<std::string> right;
    for (const Column& c : a.columns) left.insert(fold_case(c.name));
    for (const Column& c : b.columns) right.insert(fold_case(c.name));
    std::vector<std::string> out;
    std::set_intersection(left.begin(), left.end(), right.begin(), right.end(),
                          std::back_inserter(out));
    return out;
}

std::vector<std::vector<bool>> shared_column_adjacency(const Schema& schema) {
    const auto& tables = schema.tables();
    std::vector<std::vector<bool>> adj(tables.size(), std::vector<bool>(tables.size(), false));
    for (std::size_t i = 0; i < tables.size(); ++i)
        for (std::size_t j = 0; j < tables.size(); ++j)
            if (i != j) adj[i][j] = !shared_columns(tables[i], tables[j]).empty();
    return adj;
}

std::optional<std::size_t> min_connected_superset(const std::vector<std::vector<bool>>& adjacency,
                                                  const std::vector<std::size_t>& required) {
    const std::size_t n = adjacency.size();
    unsigned need = 0;
    for (std::size_t r : required) need |= 1u << r;

    std::optional<std::size_t> best;
    for (unsigned subset = 0; subset < (1u << n); ++subset) {
        if ((subset & need) != need || subset == 0) continue;
        // Flood fill inside the subset from its lowest member.
        unsigned seen = subset & (~subset + 1);
        bool grew = true;
        while (grew) {
            grew = false;
            for (std::size_t i = 0; i < n; ++i) {
                if (!(seen >> i & 1u)) continue;
                for (std::size_t j = 0; j < n; ++j) {
                    if ((subset >> j & 1u) && !(seen >> j & 1u) && adjacency[i][j]) {
                        seen |= 1u << j;
                        grew = true;
                    }
                }
            }
        }
        if (seen != subset) continue;
        const auto size = static_cast<std::size_t>(__builtin_popcount(subset));
        if (!best || size < *best) best = size;
    }
    return best;
}

bool plan_connected(const JoinPlan& plan) {
    std::map<std::string, std::string> parent;
    for (const auto& t : plan.tables) parent[t] = t;
    std::function<std::string(const std::string&)> find = [&](const std::string& x) {
        return parent.at(x) == x ? x : parent[x] = find(parent.at(x));
    };
    for (const auto& c : plan.conditions) {
        if (!parent.count(c.left_table) || !parent.count(c.right_table)) return false;
        parent[find(c.left_table)] = find(c.right_table);
    }
    std::set<std::string> roots;
    for (const auto& t : plan.tables) roots.insert(find(t));
    return roots.size() <= 1;
}

double enumerate_word(const std::vector<std::string>& observations, const WordHmm& hmm,
                      std::vector<std::size_t>* best_path) {
    const std::size_t T = observations.size();
    double best = kNegInf;
    std::vector<std::size_t> path;

    auto emission = [&](std::size_t state, std::size_t t) {
        const auto& e = hmm.states[state].emissions;
        auto it = e.find(observations[t]);
        return it == e.end() ? 0.0 : it->second;
    };
    auto exit_prob = [&](std::size_t state) {
        for (const ProbArc& a : hmm.exit)
            if (a.state == state) return a.prob;
        return 0.0;
    };

    std::function<void(std::size_t, std::size_t, double)> walk = [&](std::size_t state,
                                                                      std::size_t t,
                                                                      double logp) {
        const double e = emission(state, t);
        if (e <= 0.0) return;
        logp += std::log(e);
        path.push_back(state);
        if (t + 1 == T) {
            const double x = exit_prob(state);
            if (x > 0.0) {
                const double total = logp + std::log(x);
                if (total > best || (total == best && best_path && path < *best_path)) {
                    best = total;
                    if (best_path) *best_path = path;
                }
            }
        } else {
            for (const ProbArc& a : hmm.transitions[state])
                if (a.prob > 0.0) walk(a.state, t + 1, logp + std::log(a.prob));
        }
        path.pop_back();
    };

    if (T == 0) return kNegInf;
    for (const ProbArc& a : hmm.entry)
        if (a.prob > 0.0) walk(a.state, 0, std::log(a.prob));
    return best;
}

std::optional<SentenceResult> enumerate_sentence(const std::vector<std::string>& observations,
                                                 const std::vector<WordHmm>& words,
                                                 const GrammarFsa& grammar) {
    const std::size_t T = observations.size();
    std::map<std::string, const WordHmm*> by_name;
    for (const WordHmm& w : words) by_name[w.word] = &w;

    // Span scores, memoized: (word, begin, length) -> best log-probability.
    std::map<std::tuple<std::string, std::size_t, std::size_t>, double> span_cache;
    auto span = [&](const std::string& word, std::size_t begin, std::size_t length) {
        auto key = std::make_tuple(word, begin, length);
        auto it = span_cache.find(key);
        if (it != span_cache.end()) return it->second;
        std::vector<std::string> part(observations.begin() + static_cast<long>(begin),
                                      observations.begin() + static_cast<long>(begin + length));
        const double v = enumerate_word(part, *by_name.at(word));
        span_cache.emplace(key, v);
        return v;
    };

    const std::set<std::string> accepting(grammar.accepting.begin(), grammar.accepting.end());
    std::optional<SentenceResult> best;

    // Every accepting word path of length <= T.
    std::vector<std::vector<std::string>> sentences;
    std::vector<std::string> current;
    std::function<void(const std::string&)> paths = [&](const std::string& state) {
        if (accepting.count(state) && !current.empty()) sentences.push_back(current);
        if (current.size() == T) return;
        for (const GrammarArc& arc : grammar.arcs) {
            if (arc.from != state) continue;
            current.push_back(arc.word);
            paths(arc.to);
            current.pop_back();
        }
    };
    paths(grammar.start);

    for (const auto& sentence : sentences) {
        const std::size_t k = sentence.size();
        // Compositions of T into k positive parts via cut positions.
        std::vector<std::size_t> cuts(k + 1, 0);
        cuts[k] = T;
        std::function<void(std::size_t)> place = [&](std::size_t i) {
            if (i == k) {
                double total = 0.0;
                for (std::size_t w = 0; w < k && total != kNegInf; ++w)
                    total += span(sentence[w], cuts[w], cuts[w + 1] - cuts[w]);
                if (total == kNegInf) return;
                if (!best || total > best->log_probability ||
                    (total == best->log_probability && sentence < best->words))
                    best = SentenceResult{sentence, total};
                return;
            }
            // cuts[i] ranges so that every remaining word keeps >= 1 symbol.
            for (std::size_t c = cuts[i - 1] + 1; c + (k - i) <= T; ++c) {
                cuts[i] = c;
                place(i + 1);
            }
        };
        place(1);
    }
    return best;
}

namespace {

bool ref_less(const Value& a, const Value& b);

bool ref_equal(const Value& a, const Value& b) {
    if (is_null(a) || is_null(b)) return false;
    if (std::holds_alternative<std::string>(a) || std::holds_alternative<std::string>(b)) {
        return std::holds_alternative<std::string>(a) && std::holds_alternative<std::string>(b) &&
               std::get<std::string>(a) == std::get<std::string>(b);
    }
    auto num = [](const Value& v) {
        return std::holds_alternative<double>(v) ? std::get<double>(v)
                                                 : static_cast<double>(std::get<std::int64_t>(v));
    };
    return num(a) == num(b);
}

bool ref_less(const Value& a, const Value& b) {
    if (is_null(a) || is_null(b)) return false;
    if (std::holds_alternative<std::string>(a) != std::holds_alternative<std::string>(b))
        return false;
    if (std::holds_alternative<std::string>(a))
        return std::get<std::string>(a) < std::get<std::string>(b);
    auto num = [](const Value& v) {
        return std::holds_alternative<double>(v) ? std::get<double>(v)
                                                 : static_cast<double>(std::get<std::int64_t>(v));
    };
    return num(a) < num(b);
}

bool ref_compare(const Value& cell, CompareOp op, const Literal& literal) {
    Value lit = literal.is_number() ? Value(literal.numeric_value()) : Value(literal.text());
    if (is_null(cell)) return false;
    const bool typed = std::holds_alternative<std::string>(cell) == !literal.is_number();
    if (!typed) return false;
    switch (op) {
    case CompareOp::Equal: return ref_equal(cell, lit);
    case CompareOp::NotEqual: return !ref_equal(cell, lit);
    case CompareOp::Less: return ref_less(cell, lit);
    case CompareOp::Greater: return ref_less(lit, cell);
    case CompareOp::LessEqual: return ref_less(cell, lit) || ref_equal(cell, lit);
    case CompareOp::GreaterEqual: return ref_less(lit, cell) || ref_equal(cell, lit);
    }
    return false;
}

std::size_t column_index(const TableData& t, const std::string& column) {
    for (std::size_t i = 0; i < t.header.size(); ++i)
        if (t.header[i] == column) return i;
    throw std::runtime_error("reference executor: no column " + column);
}

} // namespace

ResultSet reference_execute(const ResolvedQuery& query, const Dataset& dataset) {
    const auto& names = query.join_plan.tables;
    std::map<std::string, const TableData*> tables;
    for (const auto& n : names) tables[n] = dataset.find(n);

    ResultSet out;
    out.columns = query.select_refs;
    std::map<std::string, const std::vector<Value>*> bound;

    auto value = [&](const std::string& table, const std::string& column) -> const Value& {
        return (*bound.at(table))[column_index(*tables.at(table), column)];
    };
    std::function<bool(const Predicate&)> eval = [&](const Predicate& p) {
        if (auto* c = p.comparison()) return ref_compare(value(c->table, c->column), c->op, c->literal);
        const auto& k = *p.connective();
        const bool l = eval(*k.left);
        const bool r = eval(*k.right);
        return k.op == Logical::And ? (l && r) : (l || r);
    };

    std::function<void(std::size_t)> loop = [&](std::size_t depth) {
        if (depth == names.size()) {
            for (const auto& c : query.join_plan.conditions)
                if (!ref_equal(value(c.left_table, c.left_column), value(c.right_table, c.right_column)))
                    return;
            if (query.predicate && !eval(*query.predicate)) return;
            std::vector<Value> row;
            for (const auto& ref : query.select_refs) row.push_back(value(ref.table, ref.column));
            out.rows.push_back(std::move(row));
            return;
        }
        for (const auto& row : tables.at(names[depth])->rows) {
            bound[names[depth]] = &row;
            loop(depth + 1);
        }
    };
    loop(0);
    return out;
}

} // namespace nlsql::oracle
