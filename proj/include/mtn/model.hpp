#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "mtn/rational.hpp"

namespace mtn {

/// Staff is 1-based from the top of the system. Step counts lines and
/// spaces upward from the first ledger line below the staff, so the
/// bottom line of a five-line staff is step 2 and the top line step 10.
struct StaffPosition {
  int staff = 1;
  std::optional<int> step;

  bool operator==(const StaffPosition&) const = default;
};

struct Token {
  std::string id;
  std::string label;
  StaffPosition position;
  std::optional<std::string> pair_id;
  std::optional<int> numeric_value;
  bool orphan = false;  // spanner end whose partner is missing from the work

  bool operator==(const Token&) const = default;
};

enum class NodeKind {
  Attributes,
  AttrStaff,
  Clef,
  Key,
  TimeSig,
  Barline,
  Direction,
  NoteGroup,
  Chord,
  Stem,
  Note,
  Rest,
};

/// Lower-snake-case element / tree label for a node kind.
std::string_view kind_name(NodeKind kind);
std::optional<NodeKind> kind_from_name(std::string_view name);

struct Node;
using Element = std::variant<Node, Token>;

struct Node {
  NodeKind kind = NodeKind::NoteGroup;
  std::string id;                     // may be empty
  std::optional<RationalTime> onset;  // measure children and chords only
  std::optional<int> staff;           // AttrStaff only
  bool synthetic = false;             // injected line-start attributes
  std::vector<Element> children;

  bool operator==(const Node&) const = default;
};

struct Measure {
  std::string id;
  bool line_start = false;
  std::vector<Node> children;

  bool operator==(const Measure&) const = default;
};

struct Part {
  std::string id;
  int staff_count = 1;
  std::vector<Measure> measures;

  bool operator==(const Part&) const = default;
};

struct Work {
  std::string work_id;
  std::vector<Part> parts;

  bool operator==(const Work&) const = default;
};

inline bool is_node(const Element& e) { return std::holds_alternative<Node>(e); }
inline bool is_token(const Element& e) { return std::holds_alternative<Token>(e); }

/// Pre-order visit of every token below `node`.
void for_each_token(const Node& node, const std::function<void(const Token&)>& fn);
void for_each_token(const Measure& measure, const std::function<void(const Token&)>& fn);
void for_each_token(Node& node, const std::function<void(Token&)>& fn);
void for_each_token(Measure& measure, const std::function<void(Token&)>& fn);

/// Pre-order visit of `node` and every node below it.
void for_each_node(const Node& node, const std::function<void(const Node&)>& fn);

std::size_t token_count(const Measure& measure);

/// Lookup of a measure by id across all parts; nullptr when absent.
const Measure* find_measure(const Work& work, std::string_view measure_id);

}  // namespace mtn
