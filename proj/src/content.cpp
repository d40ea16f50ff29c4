#include "scot/content.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>

#include <fmt/format.h>

#include "scot/error.hpp"

namespace scot {

std::string format_value(const Value& v) {
    if (const auto* d = std::get_if<double>(&v)) {
        if (std::isfinite(*d) && *d == std::floor(*d) && std::fabs(*d) < 1e15)
            return fmt::format("{}", static_cast<long long>(*d));
        return fmt::format("{}", *d);
    }
    const auto& s = std::get<std::string>(v);
    bool needs_quotes = s.empty() || std::any_of(s.begin(), s.end(), [](char c) {
        return c == ',' || c == '"' || c == '=' || c == '<' || c == '>' || c == '!' ||
               std::isspace(static_cast<unsigned char>(c));
    });
    if (!needs_quotes) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"' || c == '\\') out.push_back('\\');
        out.push_back(c);
    }
    out.push_back('"');
    return out;
}

const char* to_string(Op op) {
    switch (op) {
        case Op::eq: return "eq";
        case Op::neq: return "neq";
        case Op::lt: return "lt";
        case Op::le: return "le";
        case Op::gt: return "gt";
        case Op::ge: return "ge";
    }
    return "?";
}

Filter::Filter(std::vector<Predicate> predicates) : predicates_(std::move(predicates)) {
    if (predicates_.empty()) throw ParseError("subscription needs at least one predicate");
    for (std::size_t i = 0; i < predicates_.size(); ++i) {
        const auto& p = predicates_[i];
        if (p.attribute.empty()) throw ParseError("predicate with empty attribute name");
        if (p.op != Op::eq && p.op != Op::neq && !std::holds_alternative<double>(p.value))
            throw ParseError(fmt::format("operator {} on '{}' needs a numeric value",
                                         to_string(p.op), p.attribute));
        for (std::size_t j = 0; j < i; ++j) {
            if (predicates_[j].attribute == p.attribute && predicates_[j].op == p.op)
                throw ParseError(fmt::format("duplicate predicate '{} {}'", p.attribute,
                                             to_string(p.op)));
        }
    }
}

std::string Filter::str() const {
    std::string out;
    for (const auto& p : predicates_) {
        if (!out.empty()) out += ", ";
        out += fmt::format("{} {} {}", p.attribute, to_string(p.op), format_value(p.value));
    }
    return out;
}

Content::Content(std::vector<std::pair<std::string, Value>> attributes)
    : attributes_(std::move(attributes)) {
    std::sort(attributes_.begin(), attributes_.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < attributes_.size(); ++i) {
        if (attributes_[i].first.empty()) throw ParseError("attribute with empty name");
        if (i > 0 && attributes_[i - 1].first == attributes_[i].first)
            throw ParseError(fmt::format("duplicate attribute '{}'", attributes_[i].first));
    }
}

const Value* Content::find(std::string_view name) const {
    auto it = std::lower_bound(attributes_.begin(), attributes_.end(), name,
                               [](const auto& a, std::string_view n) { return a.first < n; });
    if (it == attributes_.end() || it->first != name) return nullptr;
    return &it->second;
}

std::string Content::str() const {
    std::string out;
    for (const auto& [name, value] : attributes_) {
        if (!out.empty()) out += ", ";
        out += fmt::format("{}={}", name, format_value(value));
    }
    return out;
}

bool holds(const Predicate& p, const Content& n, MatchDiagnostics* diag) {
    if (diag) ++diag->evaluations;
    const Value* v = n.find(p.attribute);
    if (!v) return false;
    if (v->index() != p.value.index()) {
        if (diag) ++diag->type_mismatches;
        return false;
    }
    if (const auto* s = std::get_if<std::string>(v)) {
        const auto& want = std::get<std::string>(p.value);
        if (p.op == Op::eq) return *s == want;
        if (p.op == Op::neq) return *s != want;
        if (diag) ++diag->type_mismatches;
        return false;
    }
    const double x = std::get<double>(*v);
    const double y = std::get<double>(p.value);
    switch (p.op) {
        case Op::eq: return x == y;
        case Op::neq: return x != y;
        case Op::lt: return x < y;
        case Op::le: return x <= y;
        case Op::gt: return x > y;
        case Op::ge: return x >= y;
    }
    return false;
}

bool matches(const Content& n, const Filter& s, MatchDiagnostics* diag) {
    for (const auto& p : s.predicates())
        if (!holds(p, n, diag)) return false;
    return true;
}

namespace {

class Lexer {
public:
    explicit Lexer(std::string_view text) : text_(text) {}

    void skip_space() {
        while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
    }
    bool done() {
        skip_space();
        return pos_ >= text_.size();
    }
    bool consume(char c) {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    void expect(char c) {
        if (!consume(c)) fail(fmt::format("expected '{}'", c));
    }

    // Bare word up to whitespace, ',' or '='; or a quoted string.
    // Returns the text and whether it was quoted.
    std::pair<std::string, bool> word() {
        skip_space();
        if (pos_ < text_.size() && text_[pos_] == '"') {
            ++pos_;
            std::string out;
            while (pos_ < text_.size() && text_[pos_] != '"') {
                if (text_[pos_] == '\\' && pos_ + 1 < text_.size()) ++pos_;
                out.push_back(text_[pos_++]);
            }
            if (pos_ >= text_.size()) fail("unterminated string");
            ++pos_;
            return {out, true};
        }
        std::size_t start = pos_;
        while (pos_ < text_.size()) {
            char c = text_[pos_];
            if (std::isspace(static_cast<unsigned char>(c)) || c == ',' || c == '=' || c == '"' ||
                c == '<' || c == '>' || c == '!')
                break;
            ++pos_;
        }
        if (start == pos_) fail("expected a word");
        return {std::string(text_.substr(start, pos_ - start)), false};
    }

    // Operator word ("eq", "lt", ...) or symbol ("=", "!=", "<", ...).
    Op op() {
        skip_space();
        static constexpr std::pair<std::string_view, Op> symbols[] = {
            {"!=", Op::neq}, {"<=", Op::le}, {">=", Op::ge}, {"==", Op::eq},
            {"=", Op::eq},   {"<", Op::lt},  {">", Op::gt}};
        for (auto [sym, o] : symbols) {
            if (text_.substr(pos_, sym.size()) == sym) {
                pos_ += sym.size();
                return o;
            }
        }
        auto [w, quoted] = word();
        static constexpr std::pair<std::string_view, Op> words[] = {
            {"eq", Op::eq}, {"neq", Op::neq}, {"ne", Op::neq}, {"lt", Op::lt},
            {"le", Op::le}, {"gt", Op::gt},   {"ge", Op::ge}};
        if (!quoted)
            for (auto [name, o] : words)
                if (w == name) return o;
        fail(fmt::format("unknown operator '{}'", w));
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError(fmt::format("{} at column {} in '{}'", what, pos_ + 1, text_));
    }

    std::string_view rest() const { return text_.substr(pos_); }
    void advance(std::size_t n) { pos_ += n; }

private:
    std::string_view text_;
    std::size_t pos_ = 0;
};

Value to_value(const std::string& text, bool quoted) {
    if (!quoted) {
        double d = 0;
        auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), d);
        if (ec == std::errc() && ptr == text.data() + text.size()) return d;
    }
    return text;
}

void strip_prefix(Lexer& lex, std::string_view prefix) {
    lex.skip_space();
    auto rest = lex.rest();
    if (rest.substr(0, prefix.size()) == prefix) lex.advance(prefix.size());
}

}  // namespace

Filter parse_filter(std::string_view text) {
    Lexer lex(text);
    strip_prefix(lex, "sub:");
    std::vector<Predicate> predicates;
    do {
        Predicate p;
        auto [attr, attr_quoted] = lex.word();
        p.attribute = attr;
        p.op = lex.op();
        auto [value, quoted] = lex.word();
        p.value = to_value(value, quoted);
        predicates.push_back(std::move(p));
    } while (lex.consume(','));
    if (!lex.done()) lex.fail("trailing input");
    return Filter(std::move(predicates));
}

Content parse_content(std::string_view text) {
    Lexer lex(text);
    strip_prefix(lex, "pub:");
    std::vector<std::pair<std::string, Value>> attributes;
    if (lex.done()) return Content{};
    do {
        auto [name, name_quoted] = lex.word();
        lex.expect('=');
        auto [value, quoted] = lex.word();
        attributes.emplace_back(name, to_value(value, quoted));
    } while (lex.consume(','));
    if (!lex.done()) lex.fail("trailing input");
    return Content(std::move(attributes));
}

}  // namespace scot
