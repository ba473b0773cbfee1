#include "support.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace nlsql::test {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open fixture " + path.string());
    std::ostringstream buffer;
    buffer << in.rdbuf();
    return buffer.str();
}

const Schema& bank_schema() {
    static const Schema schema = load_schema(read_text(kFixtures / "bank" / "schema.json"));
    return schema;
}

const Translator& bank_translator() {
    static const Translator translator(bank_schema());
    return translator;
}

const Dataset& bank_dataset() {
    static const Dataset dataset = load_dataset(kFixtures / "bank" / "data", bank_schema());
    return dataset;
}

const AcousticModels& bank_models() {
    static const AcousticModels models =
        load_models(read_text(kFixtures / "models" / "bank_models.json"));
    return models;
}

std::string normalize_whitespace(const std::string& text) {
    std::istringstream in(text);
    std::string word;
    std::string out;
    while (in >> word) out += (out.empty() ? "" : " ") + word;
    return out;
}

} // namespace nlsql::test
