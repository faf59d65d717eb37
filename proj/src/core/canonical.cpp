#include "mtn/canonical.hpp"

#include <algorithm>
#include <climits>
#include <numeric>

#include "mtn/error.hpp"

namespace mtn {

namespace {

constexpr int kTokenRank = 13;

bool is_grace_chord(const Node& chord, const Vocabulary& vocab) {
  bool any_head = false;
  bool all_grace = true;
  for_each_token(chord, [&](const Token& t) {
    const TokenClass* tc = vocab.find(t.label);
    if (tc && tc->category == TokenCategory::Notehead) {
      any_head = true;
      all_grace = all_grace && tc->grace_or_cue;
    }
  });
  return any_head && all_grace;
}

int rank_of(const Node& node, const Vocabulary& vocab) {
  switch (node.kind) {
    case NodeKind::Attributes: return 0;
    case NodeKind::Direction: return 1;
    case NodeKind::Rest: return 2;
    case NodeKind::NoteGroup: return 3;
    case NodeKind::Barline: return 4;
    case NodeKind::AttrStaff: return 5;
    case NodeKind::Clef: return 6;
    case NodeKind::Key: return 7;
    case NodeKind::TimeSig: return 8;
    case NodeKind::Chord: return is_grace_chord(node, vocab) ? 9 : 10;
    case NodeKind::Stem: return 11;
    case NodeKind::Note: return 12;
  }
  return kTokenRank;
}

std::optional<RationalTime> effective_onset(const Element& e) {
  const auto* node = std::get_if<Node>(&e);
  if (!node) return std::nullopt;
  if (node->onset) return node->onset;
  std::optional<RationalTime> best;
  for (const auto& child : node->children) {
    auto t = effective_onset(child);
    if (t && (!best || *t < *best)) best = t;
  }
  return best;
}

struct SortKey {
  std::optional<RationalTime> onset;
  int rank = 0;
  int staff = INT_MAX;
  std::optional<int> step;
  int stem = 1;  // 0 up, 1 none, 2 down
  std::vector<std::string> labels;
  std::string print;
};

// nullopt sorts before any value
template <typename T>
int compare_optional(const std::optional<T>& a, const std::optional<T>& b) {
  if (a.has_value() != b.has_value()) return a.has_value() ? 1 : -1;
  if (!a) return 0;
  if (*a < *b) return -1;
  if (*b < *a) return 1;
  return 0;
}

bool key_less(const SortKey& a, const SortKey& b) {
  if (int c = compare_optional(a.onset, b.onset)) return c < 0;
  if (a.rank != b.rank) return a.rank < b.rank;
  if (a.staff != b.staff) return a.staff < b.staff;
  if (int c = compare_optional(a.step, b.step)) return c < 0;
  if (a.stem != b.stem) return a.stem < b.stem;
  if (a.labels != b.labels) return a.labels < b.labels;
  return a.print < b.print;
}

void collect_tokens(const Element& e, std::vector<const Token*>& out) {
  if (const auto* t = std::get_if<Token>(&e)) {
    out.push_back(t);
    return;
  }
  for (const auto& child : std::get<Node>(e).children) collect_tokens(child, out);
}

SortKey make_key(const Element& e, const Vocabulary& vocab) {
  SortKey key;
  key.onset = effective_onset(e);
  const auto* node = std::get_if<Node>(&e);
  key.rank = node ? rank_of(*node, vocab) : kTokenRank;

  std::vector<const Token*> tokens;
  collect_tokens(e, tokens);
  for (const Token* t : tokens) key.staff = std::min(key.staff, t->position.staff);
  for (const Token* t : tokens) {
    if (t->position.staff == key.staff && t->position.step &&
        (!key.step || *t->position.step < *key.step)) {
      key.step = t->position.step;
    }
  }
  for (const Token* t : tokens) {
    if (t->label == "stem_up") { key.stem = 0; break; }
    if (t->label == "stem_down") { key.stem = 2; break; }
  }
  key.labels.reserve(tokens.size());
  for (const Token* t : tokens) key.labels.push_back(t->label);
  key.print = fingerprint(e);
  return key;
}

void sort_elements(std::vector<Element>& elements, const Vocabulary& vocab) {
  std::vector<SortKey> keys;
  keys.reserve(elements.size());
  for (const auto& e : elements) keys.push_back(make_key(e, vocab));
  std::vector<std::size_t> order(elements.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return key_less(keys[a], keys[b]); });
  std::vector<Element> sorted;
  sorted.reserve(elements.size());
  for (std::size_t i : order) sorted.push_back(std::move(elements[i]));
  elements = std::move(sorted);
}

void canonicalize_node(Node& node, const Vocabulary& vocab) {
  if (node.kind == NodeKind::Chord && !node.onset) {
    throw ValidationError("onset-required", node.id, "chord without onset");
  }
  for (auto& child : node.children) {
    if (auto* sub = std::get_if<Node>(&child)) canonicalize_node(*sub, vocab);
  }
  sort_elements(node.children, vocab);
}

void print_element(const Element& e, std::string& out) {
  if (const auto* t = std::get_if<Token>(&e)) {
    out += "T(";
    out += t->id;
    out += '|';
    out += t->label;
    out += '|';
    out += std::to_string(t->position.staff);
    out += '|';
    if (t->position.step) out += std::to_string(*t->position.step);
    out += '|';
    if (t->pair_id) out += *t->pair_id;
    out += '|';
    if (t->numeric_value) out += std::to_string(*t->numeric_value);
    out += t->orphan ? "|o)" : "|)";
    return;
  }
  const Node& n = std::get<Node>(e);
  out += "N(";
  out += kind_name(n.kind);
  out += '|';
  out += n.id;
  out += '|';
  if (n.onset) out += to_string(*n.onset);
  out += '|';
  if (n.staff) out += std::to_string(*n.staff);
  out += n.synthetic ? "|s" : "|";
  for (const auto& child : n.children) print_element(child, out);
  out += ')';
}

}  // namespace

std::string fingerprint(const Element& element) {
  std::string out;
  print_element(element, out);
  return out;
}

Measure canonicalize(Measure measure, const Vocabulary& vocab) {
  for (const auto& node : measure.children) {
    if (!node.onset) {
      throw ValidationError("onset-required", node.id.empty() ? measure.id : node.id,
                            std::string("top-level ") + std::string(kind_name(node.kind)) +
                                " without onset");
    }
  }
  std::vector<Element> elements;
  elements.reserve(measure.children.size());
  for (auto& node : measure.children) {
    canonicalize_node(node, vocab);
    elements.emplace_back(std::move(node));
  }
  sort_elements(elements, vocab);
  measure.children.clear();
  for (auto& e : elements) measure.children.push_back(std::move(std::get<Node>(e)));
  return measure;
}

Work canonicalize(Work work, const Vocabulary& vocab) {
  for (auto& part : work.parts) {
    for (auto& m : part.measures) m = canonicalize(std::move(m), vocab);
  }
  return work;
}

bool is_canonical(const Measure& measure, const Vocabulary& vocab) {
  return canonicalize(measure, vocab) == measure;
}

}  // namespace mtn
