#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <variant>

namespace nlsql::cli {

enum class Emit { Sql, Ir, Rows };
enum class Format { Table, Csv };

namespace exit_code {
inline constexpr int ok = 0;
inline constexpr int usage = 2;
inline constexpr int config = 3;
inline constexpr int translation = 4;
inline constexpr int decode = 5;
inline constexpr int execution = 6;
} // namespace exit_code

struct CliConfig {
    std::string schema_path;
    std::optional<std::string> data_dir;
    std::optional<std::string> models_path;
    Emit emit = Emit::Sql;
    Format format = Format::Table;
    std::optional<std::string> query;
    std::optional<std::string> phoneme_file;
    bool repl = false;
};

/// Either a validated config or the exit status to return immediately
/// (0 after --help, 2 on a usage error; the message is already written).
std::variant<CliConfig, int> parse_command_line(int argc, const char* const* argv,
                                                std::ostream& out, std::ostream& err);

/// Runs the pipeline. Only emitted artifacts go to `out`; diagnostics go
/// to `err`, one line each.
int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err);

} // namespace nlsql::cli
