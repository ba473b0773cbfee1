#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "nlsql/query_builder.hpp"
#include "nlsql/schema.hpp"

namespace nlsql {

/// A cell: null, text, integer or real.
using Value = std::variant<std::monostate, std::string, std::int64_t, double>;

inline bool is_null(const Value& v) { return std::holds_alternative<std::monostate>(v); }

/// Plain rendering: integers in decimal, reals in shortest round-trip form,
/// text verbatim, null as "NULL".
std::string render_value(const Value& value);

struct TableData {
    std::string name;
    std::vector<std::string> header;
    std::vector<std::vector<Value>> rows;
};

class Dataset {
public:
    Dataset() = default;
    explicit Dataset(std::vector<TableData> tables) : tables_(std::move(tables)) {}

    const std::vector<TableData>& tables() const { return tables_; }
    const TableData* find(std::string_view table) const;

private:
    std::vector<TableData> tables_;
};

/// Parses one table's CSV text (RFC 4180, header row required, LF or CRLF,
/// blank lines ignored). An empty unquoted cell is null. Throws ConfigError
/// naming the row and column of a bad cell or the header mismatch.
TableData parse_table_csv(std::string_view csv_text, const Table& table);

/// Reads `<table>.csv` for every schema table from `directory`.
Dataset load_dataset(const std::filesystem::path& directory, const Schema& schema);

struct ResultSet {
    std::vector<ColumnRef> columns;
    std::vector<std::vector<Value>> rows;
};

/// Nested-loop evaluation: the product of the plan's tables (first table
/// outermost, rows in file order) filtered by the join equalities and the
/// user predicate, projected onto the select list. Comparisons involving
/// null are false. Throws ExecError when a table or column is missing.
ResultSet execute(const ResolvedQuery& query, const Dataset& dataset);

/// Space-aligned columns under a header and a dashed rule.
std::string format_table(const ResultSet& result);

/// RFC 4180 CSV with a header row; null renders as an empty field.
std::string format_csv(const ResultSet& result);

} // namespace nlsql
