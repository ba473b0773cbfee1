#include "nlsql/mini_exec.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "nlsql/error.hpp"

namespace nlsql {

namespace {

struct Cell {
    std::string text;
    bool quoted = false;
};

using Record = std::vector<Cell>;

struct CsvRecord {
    Record cells;
    std::size_t line;
};

// RFC 4180 reader. Quoted fields may span lines; CR before LF is dropped.
std::vector<CsvRecord> read_csv(std::string_view text, const std::string& file) {
    std::vector<CsvRecord> records;
    Record record;
    Cell cell;
    std::size_t line = 1;
    std::size_t record_line = 1;
    bool in_quotes = false;
    bool after_quote = false;  // closing quote seen; only a separator may follow
    bool record_started = false;

    auto end_cell = [&] {
        record.push_back(std::move(cell));
        cell = Cell{};
        after_quote = false;
    };
    auto end_record = [&] {
        end_cell();
        const bool blank = record.size() == 1 && record[0].text.empty() && !record[0].quoted;
        if (!blank) records.push_back({std::move(record), record_line});
        record.clear();
        record_started = false;
    };

    for (std::size_t i = 0; i < text.size(); ++i) {
        const char c = text[i];
        if (!record_started) {
            record_started = true;
            record_line = line;
        }
        if (in_quotes) {
            if (c == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    cell.text += '"';
                    ++i;
                } else {
                    in_quotes = false;
                    after_quote = true;
                }
            } else {
                if (c == '\n') ++line;
                cell.text += c;
            }
            continue;
        }
        if (c == ',') {
            end_cell();
        } else if (c == '\n' || c == '\r') {
            if (c == '\r' && i + 1 < text.size() && text[i + 1] == '\n') ++i;
            end_record();
            ++line;
        } else if (after_quote) {
            throw ConfigError(file + " line " + std::to_string(line) +
                              ": unexpected character after closing quote");
        } else if (c == '"' && cell.text.empty() && !cell.quoted) {
            cell.quoted = true;
            in_quotes = true;
        } else {
            cell.text += c;
        }
    }
    if (in_quotes)
        throw ConfigError(file + " line " + std::to_string(record_line) + ": unterminated quote");
    if (record_started) end_record();
    return records;
}

template <typename Number>
bool parse_number(const std::string& text, Number& out) {
    const char* first = text.data();
    const char* last = text.data() + text.size();
    if (first != last && *first == '+') ++first;
    auto [ptr, ec] = std::from_chars(first, last, out);
    return ec == std::errc() && ptr == last && first != last;
}

Value convert(const Cell& cell, ValueKind kind, const std::string& where) {
    if (cell.text.empty() && !cell.quoted) return std::monostate{};
    switch (kind) {
    case ValueKind::Text:
        return cell.text;
    case ValueKind::Integer: {
        std::int64_t v = 0;
        if (!parse_number(cell.text, v))
            throw ConfigError(where + ": cannot parse '" + cell.text + "' as integer");
        return v;
    }
    case ValueKind::Real: {
        double v = 0.0;
        if (!parse_number(cell.text, v))
            throw ConfigError(where + ": cannot parse '" + cell.text + "' as real");
        return v;
    }
    }
    return std::monostate{};
}

double as_double(const Value& v) {
    if (auto* i = std::get_if<std::int64_t>(&v)) return static_cast<double>(*i);
    return std::get<double>(v);
}

// Three-way compare of two non-null values of compatible kinds.
int compare_values(const Value& a, const Value& b) {
    if (auto* sa = std::get_if<std::string>(&a)) {
        const std::string& sb = std::get<std::string>(b);
        return sa->compare(sb) < 0 ? -1 : (*sa == sb ? 0 : 1);
    }
    if (std::holds_alternative<std::int64_t>(a) && std::holds_alternative<std::int64_t>(b)) {
        const auto x = std::get<std::int64_t>(a);
        const auto y = std::get<std::int64_t>(b);
        return x < y ? -1 : (x == y ? 0 : 1);
    }
    const double x = as_double(a);
    const double y = as_double(b);
    return x < y ? -1 : (x == y ? 0 : 1);
}

bool holds(CompareOp op, int order) {
    switch (op) {
    case CompareOp::Greater: return order > 0;
    case CompareOp::Less: return order < 0;
    case CompareOp::Equal: return order == 0;
    case CompareOp::GreaterEqual: return order >= 0;
    case CompareOp::LessEqual: return order <= 0;
    case CompareOp::NotEqual: return order != 0;
    }
    return false;
}

bool comparable(const Value& a, const Value& b) {
    const bool ta = std::holds_alternative<std::string>(a);
    const bool tb = std::holds_alternative<std::string>(b);
    return !is_null(a) && !is_null(b) && ta == tb;
}

Value literal_value(const Literal& literal) {
    if (literal.is_number()) return literal.numeric_value();
    return literal.text();
}

std::string header_name(const ResultSet& result, std::size_t i) {
    std::set<std::string> tables;
    for (const ColumnRef& c : result.columns) tables.insert(c.table);
    const ColumnRef& ref = result.columns[i];
    return tables.size() > 1 ? ref.table + "." + ref.column : ref.column;
}

} // namespace

std::string render_value(const Value& value) {
    if (is_null(value)) return "NULL";
    if (auto* s = std::get_if<std::string>(&value)) return *s;
    if (auto* i = std::get_if<std::int64_t>(&value)) return std::to_string(*i);
    char buffer[64];
    auto [ptr, ec] = std::to_chars(buffer, buffer + sizeof buffer, std::get<double>(value));
    return std::string(buffer, ptr);
}

const TableData* Dataset::find(std::string_view table) const {
    const std::string key = fold_case(table);
    for (const TableData& t : tables_)
        if (fold_case(t.name) == key) return &t;
    return nullptr;
}

TableData parse_table_csv(std::string_view csv_text, const Table& table) {
    const std::string file = table.name + ".csv";
    if (csv_text.substr(0, 3) == "\xEF\xBB\xBF") csv_text.remove_prefix(3);
    std::vector<CsvRecord> records = read_csv(csv_text, file);
    if (records.empty()) throw ConfigError(file + ": missing header row");

    TableData data;
    data.name = table.name;
    for (Cell& cell : records.front().cells) data.header.push_back(std::move(cell.text));

    std::vector<std::string> expected;
    for (const Column& c : table.columns) expected.push_back(c.name);
    if (data.header != expected) {
        auto list = [](const std::vector<std::string>& names) {
            std::string out;
            for (const auto& n : names) out += (out.empty() ? "" : ", ") + n;
            return "[" + out + "]";
        };
        throw ConfigError(file + ": header " + list(data.header) + " does not match schema " +
                          list(expected));
    }

    for (std::size_t r = 1; r < records.size(); ++r) {
        const CsvRecord& record = records[r];
        const std::string row_name =
            file + " row " + std::to_string(r) + " (line " + std::to_string(record.line) + ")";
        if (record.cells.size() != expected.size())
            throw ConfigError(row_name + ": expected " + std::to_string(expected.size()) +
                              " fields, found " + std::to_string(record.cells.size()));
        std::vector<Value> row;
        for (std::size_t c = 0; c < expected.size(); ++c)
            row.push_back(convert(record.cells[c], table.columns[c].kind,
                                  row_name + ", column " + expected[c]));
        data.rows.push_back(std::move(row));
    }
    return data;
}

Dataset load_dataset(const std::filesystem::path& directory, const Schema& schema) {
    std::vector<TableData> tables;
    for (const Table& table : schema.tables()) {
        const auto path = directory / (table.name + ".csv");
        std::ifstream in(path, std::ios::binary);
        if (!in) throw ConfigError("missing data file " + path.string());
        std::ostringstream buffer;
        buffer << in.rdbuf();
        tables.push_back(parse_table_csv(buffer.str(), table));
    }
    return Dataset(std::move(tables));
}

ResultSet execute(const ResolvedQuery& query, const Dataset& dataset) {
    const auto& plan = query.join_plan;
    std::vector<const TableData*> tables;
    for (const std::string& name : plan.tables) {
        const TableData* t = dataset.find(name);
        if (!t) throw ExecError("dataset has no table '" + name + "'");
        tables.push_back(t);
    }

    // (position in plan, column index) for a table.column reference.
    auto locate = [&](const std::string& table, const std::string& column) {
        for (std::size_t p = 0; p < tables.size(); ++p) {
            if (fold_case(tables[p]->name) != fold_case(table)) continue;
            const auto& header = tables[p]->header;
            for (std::size_t c = 0; c < header.size(); ++c)
                if (fold_case(header[c]) == fold_case(column)) return std::pair{p, c};
            throw ExecError("table '" + table + "' has no column '" + column + "'");
        }
        throw ExecError("table '" + table + "' is not part of the join plan");
    };

    struct JoinCheck {
        std::pair<std::size_t, std::size_t> left, right;
    };
    std::vector<JoinCheck> joins;
    for (const JoinCondition& c : plan.conditions)
        joins.push_back({locate(c.left_table, c.left_column), locate(c.right_table, c.right_column)});

    std::vector<std::pair<std::size_t, std::size_t>> projection;
    ResultSet result;
    for (const ColumnRef& ref : query.select_refs) {
        projection.push_back(locate(ref.table, ref.column));
        result.columns.push_back(ref);
    }

    std::vector<std::pair<const Comparison*, std::pair<std::size_t, std::size_t>>> predicate_refs;
    if (query.predicate)
        for (const Comparison* c : comparisons(*query.predicate))
            predicate_refs.emplace_back(c, locate(c->table, c->column));

    std::vector<std::size_t> cursor(tables.size(), 0);
    auto cell = [&](std::pair<std::size_t, std::size_t> at) -> const Value& {
        return tables[at.first]->rows[cursor[at.first]][at.second];
    };

    auto evaluate = [&](const auto& self, const Predicate& p) -> bool {
        if (const Comparison* c = p.comparison()) {
            auto it = std::find_if(predicate_refs.begin(), predicate_refs.end(),
                                   [&](const auto& entry) { return entry.first == c; });
            const Value& value = cell(it->second);
            const Value literal = literal_value(c->literal);
            return comparable(value, literal) && holds(c->op, compare_values(value, literal));
        }
        const Connective& c = *p.connective();
        const bool left = self(self, *c.left);
        if (c.op == Logical::And) return left && self(self, *c.right);
        return left || self(self, *c.right);
    };

    auto row_matches = [&] {
        for (const JoinCheck& j : joins) {
            const Value& a = cell(j.left);
            const Value& b = cell(j.right);
            if (!comparable(a, b) || compare_values(a, b) != 0) return false;
        }
        return !query.predicate || evaluate(evaluate, *query.predicate);
    };

    for (const TableData* t : tables)
        if (t->rows.empty()) return result;

    // Odometer over row indices; the last table varies fastest.
    while (true) {
        if (row_matches()) {
            std::vector<Value> row;
            for (const auto& at : projection) row.push_back(cell(at));
            result.rows.push_back(std::move(row));
        }
        std::size_t p = tables.size();
        while (p > 0) {
            --p;
            if (++cursor[p] < tables[p]->rows.size()) break;
            cursor[p] = 0;
            if (p == 0) return result;
        }
        if (tables.empty()) return result;
    }
}

std::string format_table(const ResultSet& result) {
    const std::size_t n = result.columns.size();
    std::vector<std::string> header;
    std::vector<std::size_t> width(n, 0);
    for (std::size_t i = 0; i < n; ++i) {
        header.push_back(header_name(result, i));
        width[i] = header[i].size();
    }
    std::vector<std::vector<std::string>> cells;
    for (const auto& row : result.rows) {
        std::vector<std::string> rendered;
        for (std::size_t i = 0; i < n; ++i) {
            rendered.push_back(render_value(row[i]));
            width[i] = std::max(width[i], rendered.back().size());
        }
        cells.push_back(std::move(rendered));
    }

    std::string out;
    auto emit_line = [&](const std::vector<std::string>& fields) {
        std::string line;
        for (std::size_t i = 0; i < n; ++i) {
            if (i > 0) line += "  ";
            line += fields[i];
            if (i + 1 < n) line.append(width[i] - fields[i].size(), ' ');
        }
        out += line + "\n";
    };
    emit_line(header);
    std::vector<std::string> rule;
    for (std::size_t w : width) rule.emplace_back(w, '-');
    emit_line(rule);
    for (const auto& row : cells) emit_line(row);
    return out;
}

std::string format_csv(const ResultSet& result) {
    auto field = [](const std::string& text) {
        if (text.find_first_of(",\"\r\n") == std::string::npos) return text;
        std::string out = "\"";
        for (char c : text) {
            if (c == '"') out += '"';
            out += c;
        }
        return out + "\"";
    };
    std::string out;
    for (std::size_t i = 0; i < result.columns.size(); ++i)
        out += (i > 0 ? "," : "") + field(header_name(result, i));
    out += "\n";
    for (const auto& row : result.rows) {
        for (std::size_t i = 0; i < row.size(); ++i)
            out += (i > 0 ? "," : "") + (is_null(row[i]) ? std::string() : field(render_value(row[i])));
        out += "\n";
    }
    return out;
}

} // namespace nlsql
