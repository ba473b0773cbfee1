#include "nlsql/lexer.hpp"

#include <cctype>

#include "nlsql/error.hpp"

namespace nlsql {

namespace {

struct Phrase {
    std::string_view words;
    TokenKind kind;
    std::string_view target;
};

// The fixed part of the lexicon. Keep the comparator phrases in sync with
// the README's query-language section.
constexpr Phrase kPhrases[] = {
    {"get", TokenKind::VerbSelect, "select"},
    {"show", TokenKind::VerbSelect, "select"},
    {"find", TokenKind::VerbSelect, "select"},
    {"list", TokenKind::VerbSelect, "select"},
    {"display", TokenKind::VerbSelect, "select"},
    {"give", TokenKind::VerbSelect, "select"},
    {"whose", TokenKind::WhereIntro, "where"},
    {"where", TokenKind::WhereIntro, "where"},
    {"with", TokenKind::WhereIntro, "where"},
    {"having", TokenKind::WhereIntro, "where"},
    {"and", TokenKind::LogicalAnd, "and"},
    {"or", TokenKind::LogicalOr, "or"},
    {"of", TokenKind::Of, "of"},
    {"greater than", TokenKind::Comparator, ">"},
    {"less than", TokenKind::Comparator, "<"},
    {"equal to", TokenKind::Comparator, "="},
    {"equals", TokenKind::Comparator, "="},
    {"not equal to", TokenKind::Comparator, "<>"},
    {"at least", TokenKind::Comparator, ">="},
    {"greater than or equal to", TokenKind::Comparator, ">="},
    {"at most", TokenKind::Comparator, "<="},
    {"less than or equal to", TokenKind::Comparator, "<="},
};

constexpr std::string_view kNoise[] = {"the", "all", "is", "are", "a", "an", "please", "me"};

std::vector<std::string> split_words(std::string_view text) {
    std::vector<std::string> words;
    std::size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        std::size_t start = i;
        while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        if (i > start) words.emplace_back(text.substr(start, i - start));
    }
    return words;
}

struct RawWord {
    std::string text;
    bool quoted = false;
    std::string literal;  // unescaped body for quoted words
};

// Splits on whitespace except inside single- or double-quoted runs; a quoted
// run counts as one word. A doubled quote inside a run stands for itself.
std::vector<RawWord> scan(std::string_view text) {
    std::vector<RawWord> words;
    std::size_t i = 0;
    while (i < text.size()) {
        if (std::isspace(static_cast<unsigned char>(text[i]))) {
            ++i;
            continue;
        }
        RawWord word;
        const std::size_t start = i;
        const char quote = text[i];
        if (quote == '\'' || quote == '"') {
            word.quoted = true;
            ++i;
            bool closed = false;
            while (i < text.size()) {
                if (text[i] == quote) {
                    if (i + 1 < text.size() && text[i + 1] == quote) {
                        word.literal += quote;
                        i += 2;
                        continue;
                    }
                    ++i;
                    closed = true;
                    break;
                }
                word.literal += text[i++];
            }
            word.text = std::string(text.substr(start, i - start));
            if (!closed || (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i])))) {
                // Unterminated, or glued to trailing characters: report the whole run.
                while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
                word.text = std::string(text.substr(start, i - start));
                word.quoted = false;
                word.literal.clear();
            }
        } else {
            while (i < text.size() && !std::isspace(static_cast<unsigned char>(text[i]))) ++i;
            word.text = std::string(text.substr(start, i - start));
        }
        words.push_back(std::move(word));
    }
    return words;
}

bool is_number(std::string_view word) {
    std::size_t i = 0;
    if (i < word.size() && (word[i] == '+' || word[i] == '-')) ++i;
    const std::size_t int_start = i;
    while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) ++i;
    if (i == int_start) return false;
    if (i < word.size() && word[i] == '.') {
        const std::size_t frac_start = ++i;
        while (i < word.size() && std::isdigit(static_cast<unsigned char>(word[i]))) ++i;
        if (i == frac_start) return false;
    }
    return i == word.size();
}

} // namespace

std::string_view to_string(TokenKind kind) {
    switch (kind) {
    case TokenKind::VerbSelect: return "VERB_SELECT";
    case TokenKind::WhereIntro: return "WHERE_INTRO";
    case TokenKind::Column: return "COLUMN";
    case TokenKind::Table: return "TABLE";
    case TokenKind::Comparator: return "COMPARATOR";
    case TokenKind::LogicalAnd: return "LOGICAL_AND";
    case TokenKind::LogicalOr: return "LOGICAL_OR";
    case TokenKind::Number: return "NUMBER";
    case TokenKind::StringLiteral: return "STRING_LITERAL";
    case TokenKind::Of: return "OF";
    }
    return "?";
}

const std::set<std::string>& reserved_words() {
    static const std::set<std::string> words = [] {
        std::set<std::string> out;
        for (const Phrase& p : kPhrases)
            for (auto& w : split_words(p.words)) out.insert(w);
        for (std::string_view w : kNoise) out.emplace(w);
        return out;
    }();
    return words;
}

Lexicon generate_lexicon(const Schema& schema) {
    Lexicon lexicon;
    const auto& reserved = reserved_words();
    auto check = [&](const std::string& name, std::string_view what) {
        if (reserved.count(fold_case(name)))
            throw ConfigError(std::string(what) + " name '" + name +
                              "' collides with a reserved query word");
    };
    for (const Table& table : schema.tables()) {
        check(table.name, "table");
        lexicon.tables.emplace(fold_case(table.name), table.name);
        for (const Column& column : table.columns) {
            check(column.name, "column");
            lexicon.columns.emplace(fold_case(column.name), column.name);
        }
    }
    for (const Phrase& p : kPhrases) {
        auto words = split_words(p.words);
        lexicon.longest_phrase = std::max(lexicon.longest_phrase, words.size());
        lexicon.keywords.emplace(std::move(words), KeywordEntry{p.kind, std::string(p.target)});
    }
    for (std::string_view w : kNoise) lexicon.noise_words.emplace(w);
    return lexicon;
}

std::vector<Token> tokenize(std::string_view query, const Lexicon& lexicon) {
    const std::vector<RawWord> words = scan(query);
    std::vector<std::string> folded;
    folded.reserve(words.size());
    for (const RawWord& w : words) folded.push_back(w.quoted ? std::string() : fold_case(w.text));

    std::vector<Token> tokens;
    std::size_t i = 0;
    while (i < words.size()) {
        const RawWord& word = words[i];
        if (word.quoted) {
            tokens.push_back({TokenKind::StringLiteral, word.text, word.literal, i});
            ++i;
            continue;
        }
        if (is_number(word.text)) {
            tokens.push_back({TokenKind::Number, word.text, word.text, i});
            ++i;
            continue;
        }

        // Longest keyword phrase starting here.
        bool matched = false;
        for (std::size_t len = std::min(lexicon.longest_phrase, words.size() - i); len >= 1; --len) {
            std::vector<std::string> phrase;
            bool has_quoted = false;
            for (std::size_t k = i; k < i + len; ++k) {
                has_quoted = has_quoted || words[k].quoted;
                phrase.push_back(folded[k]);
            }
            if (has_quoted) continue;
            auto it = lexicon.keywords.find(phrase);
            if (it == lexicon.keywords.end()) continue;
            std::string source = words[i].text;
            for (std::size_t k = i + 1; k < i + len; ++k) source += " " + words[k].text;
            tokens.push_back({it->second.kind, std::move(source), it->second.target, i});
            i += len;
            matched = true;
            break;
        }
        if (matched) continue;

        if (lexicon.noise_words.count(folded[i])) {
            ++i;
            continue;
        }

        auto column = lexicon.columns.find(folded[i]);
        auto table = lexicon.tables.find(folded[i]);
        const bool after_of = !tokens.empty() && tokens.back().kind == TokenKind::Of;
        if (table != lexicon.tables.end() && (after_of || column == lexicon.columns.end())) {
            tokens.push_back({TokenKind::Table, word.text, table->second, i});
        } else if (column != lexicon.columns.end()) {
            tokens.push_back({TokenKind::Column, word.text, column->second, i});
        } else {
            throw LexError(word.text, i);
        }
        ++i;
    }
    return tokens;
}

} // namespace nlsql
