#include "nlsql/cli.hpp"

#include <fstream>
#include <sstream>

#include <CLI11.hpp>

#include "nlsql/error.hpp"
#include "nlsql/mini_exec.hpp"
#include "nlsql/pipeline.hpp"
#include "nlsql/speech.hpp"

namespace nlsql::cli {

namespace {

std::string read_file(const std::string& path, std::string_view what) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open " + std::string(what) + " '" + path + "'");
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

int code_for(const std::exception& e) {
    if (dynamic_cast<const ConfigError*>(&e)) return exit_code::config;
    if (dynamic_cast<const DecodeError*>(&e)) return exit_code::decode;
    if (dynamic_cast<const ExecError*>(&e)) return exit_code::execution;
    if (dynamic_cast<const Error*>(&e)) return exit_code::translation;
    return exit_code::execution;
}

class Session {
public:
    Session(const CliConfig& config, std::ostream& out)
        : config_(config),
          out_(out),
          translator_(load_schema(read_file(config.schema_path, "schema config"))) {
        if (config.data_dir) dataset_ = load_dataset(*config.data_dir, translator_.schema());
        if (config.models_path)
            models_ = load_models(read_file(*config.models_path, "model config"));
    }

    const AcousticModels& models() const { return *models_; }

    void answer(std::string_view query) {
        switch (config_.emit) {
        case Emit::Ir:
            out_ << ir_to_text(translator_.to_ir(query)) << '\n';
            break;
        case Emit::Sql:
            out_ << translator_.translate(query).sql.text << '\n';
            break;
        case Emit::Rows: {
            const Translation t = translator_.translate(query);
            const ResultSet rows = execute(t.resolved, *dataset_);
            out_ << (config_.format == Format::Csv ? format_csv(rows) : format_table(rows));
            break;
        }
        }
        out_.flush();
    }

private:
    const CliConfig& config_;
    std::ostream& out_;
    Translator translator_;
    std::optional<Dataset> dataset_;
    std::optional<AcousticModels> models_;
};

bool blank(const std::string& line) {
    return line.find_first_not_of(" \t\r") == std::string::npos;
}

} // namespace

std::variant<CliConfig, int> parse_command_line(int argc, const char* const* argv,
                                                std::ostream& out, std::ostream& err) {
    CliConfig config;
    CLI::App app{"Translate restricted-English (or phoneme-stream) queries into SQL", "nlsql"};

    std::string emit = "sql";
    std::string format = "table";
    std::string query;
    std::string phonemes;
    std::string data;
    std::string models;

    app.add_option("--schema", config.schema_path, "Schema-config file")->required();
    auto* data_opt = app.add_option("--data", data, "Directory holding <table>.csv files");
    auto* models_opt = app.add_option("--models", models, "Acoustic model-config file");
    auto* query_opt = app.add_option("--query", query, "English query to translate");
    auto* phoneme_opt = app.add_option("--phonemes", phonemes, "File of phoneme lines to decode");
    app.add_flag("--repl", config.repl, "Read queries from standard input");
    app.add_option("--emit", emit, "What to print")
        ->check(CLI::IsMember({"sql", "ir", "rows"}));
    app.add_option("--format", format, "Row output format")
        ->check(CLI::IsMember({"table", "csv"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_code::ok;
    } catch (const CLI::ParseError& e) {
        err << "nlsql: " << e.what() << '\n';
        return exit_code::usage;
    }

    if (*data_opt) config.data_dir = data;
    if (*models_opt) config.models_path = models;
    if (*query_opt) config.query = query;
    if (*phoneme_opt) config.phoneme_file = phonemes;
    config.emit = emit == "ir" ? Emit::Ir : emit == "rows" ? Emit::Rows : Emit::Sql;
    config.format = format == "csv" ? Format::Csv : Format::Table;

    const int modes = int(config.query.has_value()) + int(config.phoneme_file.has_value()) +
                      int(config.repl);
    std::string problem;
    if (modes != 1) problem = "exactly one of --query, --phonemes or --repl is required";
    else if (config.emit == Emit::Rows && !config.data_dir) problem = "--emit rows requires --data";
    else if (config.phoneme_file && !config.models_path) problem = "--phonemes requires --models";
    if (!problem.empty()) {
        err << "nlsql: " << problem << '\n';
        return exit_code::usage;
    }
    return config;
}

int run(const CliConfig& config, std::istream& in, std::ostream& out, std::ostream& err) {
    auto report = [&](const std::exception& e) {
        err << "nlsql: " << e.what() << '\n';
        return code_for(e);
    };

    std::optional<Session> session;
    try {
        session.emplace(config, out);
    } catch (const std::exception& e) {
        report(e);
        return exit_code::config;
    }

    if (config.query) {
        try {
            session->answer(*config.query);
        } catch (const std::exception& e) {
            return report(e);
        }
        return exit_code::ok;
    }

    if (config.phoneme_file) {
        std::ifstream file(*config.phoneme_file);
        if (!file) {
            err << "nlsql: cannot open phoneme file '" << *config.phoneme_file << "'\n";
            return exit_code::config;
        }
        std::string line;
        std::size_t number = 0;
        while (std::getline(file, line)) {
            ++number;
            if (blank(line)) continue;
            try {
                const auto observations = split_observations(line);
                const Decoding decoding = decode_sentence(observations, session->models());
                err << "line " << number << ": decoded \"" << decoding.text() << "\"\n";
                session->answer(decoding.text());
            } catch (const std::exception& e) {
                err << "nlsql: line " << number << ": " << e.what() << '\n';
                return code_for(e);
            }
        }
        return exit_code::ok;
    }

    std::string line;
    while (std::getline(in, line)) {
        if (blank(line)) continue;
        try {
            session->answer(line);
        } catch (const std::exception& e) {
            report(e);
        }
    }
    return exit_code::ok;
}

} // namespace nlsql::cli
