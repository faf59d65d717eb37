#include <map>
#include <set>

#include "mtn/canonical.hpp"
#include "mtn/musicxml/convert.hpp"

namespace mtn::musicxml {

namespace {

struct StaffState {
  std::optional<Token> clef;
  std::vector<Token> key;  // empty for no accidentals
};

const Node* child_of_kind(const Node& n, NodeKind kind) {
  for (const auto& c : n.children) {
    const auto* sub = std::get_if<Node>(&c);
    if (sub && sub->kind == kind) return sub;
  }
  return nullptr;
}

std::vector<Token> tokens_of(const Node& n) {
  std::vector<Token> out;
  for (const auto& c : n.children) {
    if (const auto* t = std::get_if<Token>(&c)) out.push_back(*t);
  }
  return out;
}

void update(std::map<int, StaffState>& state, const Node& attributes) {
  for (const auto& c : attributes.children) {
    const auto* staff = std::get_if<Node>(&c);
    if (!staff || staff->kind != NodeKind::AttrStaff || !staff->staff) continue;
    StaffState& s = state[*staff->staff];
    if (const Node* clef = child_of_kind(*staff, NodeKind::Clef)) {
      const auto toks = tokens_of(*clef);
      if (!toks.empty()) s.clef = toks.front();
    }
    if (const Node* key = child_of_kind(*staff, NodeKind::Key)) {
      std::vector<Token> accs;
      for (const auto& t : tokens_of(*key)) {
        if (t.label != "accidental_natural") accs.push_back(t);
      }
      s.key = std::move(accs);
    }
  }
}

void restate(Measure& m, const std::map<int, StaffState>& state) {
  std::set<int> has_clef, has_key;
  for (const auto& n : m.children) {
    if (n.kind != NodeKind::Attributes || !n.onset || *n.onset != RationalTime(0)) continue;
    for (const auto& c : n.children) {
      const auto* staff = std::get_if<Node>(&c);
      if (!staff || !staff->staff) continue;
      if (child_of_kind(*staff, NodeKind::Clef)) has_clef.insert(*staff->staff);
      if (child_of_kind(*staff, NodeKind::Key)) has_key.insert(*staff->staff);
    }
  }
  Node attrs;
  attrs.kind = NodeKind::Attributes;
  attrs.id = m.id + ".ls";
  attrs.onset = RationalTime(0);
  attrs.synthetic = true;
  int serial = 0;
  auto fresh = [&](Token t) {
    t.id = attrs.id + std::to_string(++serial);
    return t;
  };
  for (const auto& [staff, s] : state) {
    Node as;
    as.kind = NodeKind::AttrStaff;
    as.id = attrs.id + ".s" + std::to_string(staff);
    as.staff = staff;
    if (s.clef && !has_clef.count(staff)) {
      Node clef;
      clef.kind = NodeKind::Clef;
      clef.id = as.id + ".c";
      clef.children.emplace_back(fresh(*s.clef));
      as.children.emplace_back(std::move(clef));
    }
    if (!s.key.empty() && !has_key.count(staff)) {
      Node key;
      key.kind = NodeKind::Key;
      key.id = as.id + ".k";
      for (const auto& t : s.key) key.children.emplace_back(fresh(t));
      as.children.emplace_back(std::move(key));
    }
    if (!as.children.empty()) attrs.children.emplace_back(std::move(as));
  }
  if (!attrs.children.empty()) m.children.push_back(std::move(attrs));
}

}  // namespace

Work inject_line_starts(Work work, std::span<const std::string> measure_ids) {
  std::set<std::string> wanted(measure_ids.begin(), measure_ids.end());
  std::set<std::string> found;
  for (auto& part : work.parts) {
    std::map<int, StaffState> state;
    for (auto& m : part.measures) {
      if (wanted.count(m.id)) {
        found.insert(m.id);
        m.line_start = true;
        restate(m, state);
        m = canonicalize(std::move(m));
      }
      for (const auto& n : m.children) {
        if (n.kind == NodeKind::Attributes) update(state, n);
      }
    }
  }
  for (const auto& id : wanted) {
    if (!found.count(id)) throw ConversionError(id, "line break refers to an unknown measure");
  }
  return work;
}

}  // namespace mtn::musicxml
