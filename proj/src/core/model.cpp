#include "mtn/model.hpp"

#include <array>
#include <utility>

namespace mtn {

namespace {

constexpr std::array<std::pair<NodeKind, std::string_view>, 12> kKindNames{{
    {NodeKind::Attributes, "attributes"},
    {NodeKind::AttrStaff, "attr_staff"},
    {NodeKind::Clef, "clef"},
    {NodeKind::Key, "key"},
    {NodeKind::TimeSig, "time_sig"},
    {NodeKind::Barline, "barline"},
    {NodeKind::Direction, "direction"},
    {NodeKind::NoteGroup, "note_group"},
    {NodeKind::Chord, "chord"},
    {NodeKind::Stem, "stem"},
    {NodeKind::Note, "note"},
    {NodeKind::Rest, "rest"},
}};

}  // namespace

std::string_view kind_name(NodeKind kind) {
  for (const auto& [k, name] : kKindNames) {
    if (k == kind) return name;
  }
  return "unknown";
}

std::optional<NodeKind> kind_from_name(std::string_view name) {
  for (const auto& [k, n] : kKindNames) {
    if (n == name) return k;
  }
  return std::nullopt;
}

void for_each_token(const Node& node, const std::function<void(const Token&)>& fn) {
  for (const auto& child : node.children) {
    if (const auto* token = std::get_if<Token>(&child)) {
      fn(*token);
    } else {
      for_each_token(std::get<Node>(child), fn);
    }
  }
}

void for_each_token(const Measure& measure, const std::function<void(const Token&)>& fn) {
  for (const auto& node : measure.children) for_each_token(node, fn);
}

void for_each_token(Node& node, const std::function<void(Token&)>& fn) {
  for (auto& child : node.children) {
    if (auto* token = std::get_if<Token>(&child)) {
      fn(*token);
    } else {
      for_each_token(std::get<Node>(child), fn);
    }
  }
}

void for_each_token(Measure& measure, const std::function<void(Token&)>& fn) {
  for (auto& node : measure.children) for_each_token(node, fn);
}

void for_each_node(const Node& node, const std::function<void(const Node&)>& fn) {
  fn(node);
  for (const auto& child : node.children) {
    if (const auto* sub = std::get_if<Node>(&child)) for_each_node(*sub, fn);
  }
}

std::size_t token_count(const Measure& measure) {
  std::size_t n = 0;
  for_each_token(measure, [&](const Token&) { ++n; });
  return n;
}

const Measure* find_measure(const Work& work, std::string_view measure_id) {
  for (const auto& part : work.parts) {
    for (const auto& m : part.measures) {
      if (m.id == measure_id) return &m;
    }
  }
  return nullptr;
}

}  // namespace mtn
