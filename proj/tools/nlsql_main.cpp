#include <iostream>
#include <variant>

#include "nlsql/cli.hpp"

int main(int argc, char** argv) {
    auto parsed = nlsql::cli::parse_command_line(argc, argv, std::cout, std::cerr);
    if (auto* code = std::get_if<int>(&parsed)) return *code;
    return nlsql::cli::run(std::get<nlsql::cli::CliConfig>(parsed), std::cin, std::cout, std::cerr);
}
