#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mtn/error.hpp"

namespace mtn::xml {

/// Minimal element tree with source locations, built on expat.
struct Element {
  std::string name;
  std::vector<std::pair<std::string, std::string>> attributes;  // document order
  std::vector<Element> children;
  std::string text;  // concatenated character data directly inside this element
  int line = 0;
  int column = 0;

  const std::string* attribute(std::string_view key) const;
  const Element* child(std::string_view child_name) const;
  std::vector<const Element*> children_named(std::string_view child_name) const;
  /// Trimmed text of the named child, or empty.
  std::string child_text(std::string_view child_name) const;
};

class SyntaxError : public Error {
 public:
  SyntaxError(const std::string& message, int line, int column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + message),
        line_(line),
        column_(column) {}
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

/// Parses a complete document and returns its root element.
Element parse(std::string_view bytes);

std::string trim(std::string_view text);

/// Escapes &, <, > and " for use inside a double-quoted attribute value.
std::string escape_attribute(std::string_view value);

}  // namespace mtn::xml
