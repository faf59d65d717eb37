#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtn/error.hpp"
#include "mtn/model.hpp"
#include "mtn/validate.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn {

inline constexpr std::string_view kFormatVersion = "1.0";

enum class ParseErrorKind {
  MalformedXml,
  UnknownElement,
  UnknownAttribute,
  MissingAttribute,
  BadFraction,
  BadValue,
  DuplicateId,
  Validation,
};

std::string_view parse_error_kind_name(ParseErrorKind kind);

class ParseError : public Error {
 public:
  ParseError(ParseErrorKind kind, int line, int column, const std::string& message)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              std::string(parse_error_kind_name(kind)) + ": " + message),
        kind_(kind),
        line_(line),
        column_(column) {}

  ParseErrorKind kind() const { return kind_; }
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  ParseErrorKind kind_;
  int line_;
  int column_;
};

/// Refusal to serialize a work that does not validate.
class InvalidWorkError : public Error {
 public:
  explicit InvalidWorkError(Violation first)
      : Error("invalid work: " + first.rule + " [" + first.subject + "]: " + first.message),
        violation_(std::move(first)) {}
  const Violation& violation() const { return violation_; }

 private:
  Violation violation_;
};

/// Canonical UTF-8 XML: elements named after node kinds, attributes in
/// alphabetical order, onsets as lowest-terms fractions, two-space indent,
/// LF line endings. Equal works give identical bytes.
std::string serialize_work(const Work& work, const Vocabulary& vocab = Vocabulary::standard());

struct ParsedWork {
  Work work;
  bool reordered = false;             // input was not in canonical order
  std::vector<Violation> violations;  // validate() of the parsed work
};

/// Reads a .mtn.xml document. Schema errors throw ParseError with location;
/// out-of-order children are re-canonicalized and flagged.
ParsedWork parse_work(std::string_view bytes, const Vocabulary& vocab = Vocabulary::standard());

}  // namespace mtn
