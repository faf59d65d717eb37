#pragma once

#include <initializer_list>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mtn/model.hpp"

namespace mtn::testing {

inline Token tok(std::string id, std::string label, int staff = 1,
                 std::optional<int> step = std::nullopt) {
  Token t;
  t.id = std::move(id);
  t.label = std::move(label);
  t.position = {staff, step};
  return t;
}

inline Token paired(std::string id, std::string label, std::string pair, int staff = 1) {
  Token t = tok(std::move(id), std::move(label), staff);
  t.pair_id = std::move(pair);
  return t;
}

inline Token numeric(std::string id, std::string label, int value, int staff = 1,
                     std::optional<int> step = std::nullopt) {
  Token t = tok(std::move(id), std::move(label), staff, step);
  t.numeric_value = value;
  return t;
}

inline Node node(NodeKind kind, std::string id, std::optional<RationalTime> onset,
                 std::vector<Element> children) {
  Node n;
  n.kind = kind;
  n.id = std::move(id);
  n.onset = onset;
  n.children = std::move(children);
  return n;
}

inline Node attr_staff(std::string id, int staff, std::vector<Element> children) {
  Node n = node(NodeKind::AttrStaff, std::move(id), std::nullopt, std::move(children));
  n.staff = staff;
  return n;
}

/// Chord with optional stem (label plus flag count) and the given notes.
inline Node chord(std::string id, RationalTime onset, std::optional<std::string> stem_label,
                  std::vector<Node> notes, int flags = 0) {
  std::vector<Element> kids;
  if (stem_label) {
    std::vector<Element> stem_kids{tok(id + ".s", *stem_label)};
    for (int f = 0; f < flags; ++f) stem_kids.emplace_back(tok(id + ".f" + std::to_string(f), "flag"));
    kids.emplace_back(node(NodeKind::Stem, id + ".stem", std::nullopt, std::move(stem_kids)));
  }
  for (auto& n : notes) kids.emplace_back(std::move(n));
  return node(NodeKind::Chord, std::move(id), onset, std::move(kids));
}

inline Node note(std::string id, std::string head, int staff, int step,
                 std::vector<Token> modifiers = {}) {
  std::vector<Element> kids{tok(id + ".h", std::move(head), staff, step)};
  for (auto& m : modifiers) kids.emplace_back(std::move(m));
  return node(NodeKind::Note, std::move(id), std::nullopt, std::move(kids));
}

inline Node rest(std::string id, RationalTime onset, std::string label, int staff = 1,
                 std::vector<Token> modifiers = {}) {
  std::vector<Element> kids{tok(id + ".r", std::move(label), staff)};
  for (auto& m : modifiers) kids.emplace_back(std::move(m));
  return node(NodeKind::Rest, std::move(id), onset, std::move(kids));
}

inline Node group(std::string id, std::optional<RationalTime> onset, std::vector<Element> children) {
  return node(NodeKind::NoteGroup, std::move(id), onset, std::move(children));
}

inline Node barline(std::string id, RationalTime onset, std::string label = "barline_tok_regular") {
  return node(NodeKind::Barline, id, onset, {tok(id + ".b", std::move(label))});
}

inline Measure measure(std::string id, std::vector<Node> children) {
  Measure m;
  m.id = std::move(id);
  m.children = std::move(children);
  return m;
}

inline Work work_of(std::vector<Measure> measures, int staves = 1, std::string id = "w") {
  Work w;
  w.work_id = std::move(id);
  Part p;
  p.id = "P1";
  p.staff_count = staves;
  p.measures = std::move(measures);
  w.parts.push_back(std::move(p));
  return w;
}

}  // namespace mtn::testing
