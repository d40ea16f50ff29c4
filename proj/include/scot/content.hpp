#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace scot {

using Value = std::variant<double, std::string>;

std::string format_value(const Value& v);

enum class Op : std::uint8_t { eq, neq, lt, le, gt, ge };

const char* to_string(Op op);

struct Predicate {
    std::string attribute;
    Op op = Op::eq;
    Value value;

    bool operator==(const Predicate&) const = default;
};

// Conjunction of predicates. Non-empty, ordering operators carry numeric
// values, and an attribute/operator pair occurs at most once.
class Filter {
public:
    Filter() = default;
    explicit Filter(std::vector<Predicate> predicates);

    const std::vector<Predicate>& predicates() const { return predicates_; }
    std::string str() const;

    bool operator==(const Filter&) const = default;

private:
    std::vector<Predicate> predicates_;
};

// Flat attribute set of a notification, kept sorted by attribute name.
class Content {
public:
    Content() = default;
    explicit Content(std::vector<std::pair<std::string, Value>> attributes);

    const std::vector<std::pair<std::string, Value>>& attributes() const { return attributes_; }
    const Value* find(std::string_view name) const;
    std::string str() const;

    bool operator==(const Content&) const = default;

private:
    std::vector<std::pair<std::string, Value>> attributes_;
};

struct MatchDiagnostics {
    std::uint64_t evaluations = 0;
    // Ordering operator applied to a non-numeric attribute, or eq/neq
    // across value types. Such predicates evaluate to false.
    std::uint64_t type_mismatches = 0;
};

bool holds(const Predicate& p, const Content& n, MatchDiagnostics* diag = nullptr);
bool matches(const Content& n, const Filter& s, MatchDiagnostics* diag = nullptr);

// Literal syntax, see docs/literals.md:
//   sub: symbol eq IBM, price gt 50
//   pub: symbol=IBM, price=55
// The "sub:"/"pub:" prefixes are optional. Throws ParseError.
Filter parse_filter(std::string_view text);
Content parse_content(std::string_view text);

}  // namespace scot
