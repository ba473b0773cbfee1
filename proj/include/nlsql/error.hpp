#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace nlsql {

/// Base of every error raised by the translation pipeline.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or invalid schema-config, model-config or data files.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A word of the query that the lexicon cannot classify.
class LexError : public Error {
public:
    LexError(std::string word, std::size_t position);

    const std::string& word() const { return word_; }
    std::size_t position() const { return position_; }

private:
    std::string word_;
    std::size_t position_;
};

/// Token sequence outside the query grammar.
class ParseError : public Error {
public:
    ParseError(std::size_t position, std::string expected, std::string found);

    std::size_t position() const { return position_; }
    const std::string& expected() const { return expected_; }
    const std::string& found() const { return found_; }

private:
    std::size_t position_;
    std::string expected_;
    std::string found_;
};

/// Column resolution, typing or join-planning failure.
class ResolveError : public Error {
public:
    using Error::Error;
};

/// The schema graph has no path between two required tables.
class DisconnectedError : public ResolveError {
public:
    DisconnectedError(std::string from, std::string to);

    const std::string& from() const { return from_; }
    const std::string& to() const { return to_; }

private:
    std::string from_;
    std::string to_;
};

/// No accepting decoding of a phoneme stream has positive probability.
class DecodeError : public Error {
public:
    using Error::Error;
};

class ExecError : public Error {
public:
    using Error::Error;
};

} // namespace nlsql
