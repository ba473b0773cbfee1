#pragma once

#include <filesystem>
#include <string>

#include "nlsql/mini_exec.hpp"
#include "nlsql/pipeline.hpp"
#include "nlsql/schema.hpp"
#include "nlsql/speech.hpp"

namespace nlsql::test {

inline const std::filesystem::path kFixtures = NLSQL_FIXTURES;

std::string read_text(const std::filesystem::path& path);

const Schema& bank_schema();
const Translator& bank_translator();
const Dataset& bank_dataset();
const AcousticModels& bank_models();

/// Collapses whitespace runs to single spaces and trims the ends.
std::string normalize_whitespace(const std::string& text);

inline constexpr const char* kGoldenQuery = "get customer_name whose balance is greater than 3000";
inline constexpr const char* kGoldenSql =
    "SELECT customer.customer_name FROM customer, depositor, account "
    "WHERE account.balance > 3000 "
    "AND customer.customer_name = depositor.customer_name "
    "AND depositor.account_number = account.account_number";
inline constexpr const char* kGoldenIr = "VP[select(customer_name), where(>(balance, 3000))]";

} // namespace nlsql::test
