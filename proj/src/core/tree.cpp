#include "mtn/tree.hpp"

#include <unordered_map>

#include "mtn/error.hpp"

namespace mtn {

TerminalMultiset extract_terminals(const Measure& measure) {
  TerminalMultiset out;
  for_each_token(measure, [&](const Token& t) { ++out[t.label]; });
  return out;
}

int LabeledTree::add(std::string label, int parent, std::string source_id) {
  const int index = static_cast<int>(nodes_.size());
  TreeNode node;
  node.label = std::move(label);
  node.parent = parent;
  node.source_id = std::move(source_id);
  nodes_.push_back(std::move(node));
  if (parent >= 0) nodes_[static_cast<std::size_t>(parent)].children.push_back(index);
  return index;
}

std::vector<std::string> LabeledTree::preorder_labels() const {
  std::vector<std::string> out;
  out.reserve(nodes_.size());
  for (const auto& n : nodes_) out.push_back(n.label);
  return out;
}

std::string LabeledTree::bracket() const {
  if (nodes_.empty()) return "{}";
  std::string out;
  auto emit = [&](auto&& self, int i) -> void {
    out += '{';
    out += nodes_[static_cast<std::size_t>(i)].label;
    for (int c : nodes_[static_cast<std::size_t>(i)].children) self(self, c);
    out += '}';
  };
  emit(emit, 0);
  return out;
}

namespace {

struct Projector {
  LabeledTree tree;
  ProjectionMode mode;
  const Vocabulary& vocab;
  std::unordered_map<const Node*, RationalTime> durations;

  void node(const Node& n, int parent, const Node* timed_owner) {
    const int index = tree.add(std::string(kind_name(n.kind)), parent, n.id);
    const Node* owner = (n.kind == NodeKind::Chord || n.kind == NodeKind::Rest) ? &n : timed_owner;
    for (const auto& c : n.children) {
      if (const auto* t = std::get_if<Token>(&c)) {
        token(*t, index, owner);
      } else {
        node(std::get<Node>(c), index, owner);
      }
    }
  }

  void token(const Token& t, int parent, const Node* owner) {
    const int index = tree.add(t.label, parent, t.id);
    if (mode != ProjectionMode::Semantic || !owner) return;
    const TokenClass* tc = vocab.find(t.label);
    if (!tc) return;
    const bool head = tc->category == TokenCategory::Notehead;
    const bool rest = tc->category == TokenCategory::Rest;
    if (!head && !rest) return;
    SemanticNote note;
    note.position = t.position;
    note.onset = owner->onset.value_or(RationalTime(0));
    auto it = durations.find(owner);
    note.duration = it == durations.end() ? RationalTime(0) : it->second;
    note.is_rest = rest;
    note.head = t.label;
    note.source_id = t.id;
    tree[static_cast<std::size_t>(index)].note = std::move(note);
  }
};

}  // namespace

LabeledTree project_tree(const Measure& measure, ProjectionMode mode, const Vocabulary& vocab,
                         std::span<const OpenTuplet> open) {
  Projector p{LabeledTree{}, mode, vocab, {}};
  if (mode == ProjectionMode::Semantic) {
    try {
      for (const auto& ev : timed_events(measure, vocab, open)) p.durations[ev.node] = ev.duration;
    } catch (const Error&) {
      // malformed predictions keep zero durations
      p.durations.clear();
    }
  }
  const int root = p.tree.add("measure", -1, measure.id);
  for (const auto& n : measure.children) p.node(n, root, nullptr);
  return std::move(p.tree);
}

std::vector<SemanticNote> semantic_notes(const LabeledTree& tree) {
  std::vector<SemanticNote> out;
  for (const auto& n : tree.nodes()) {
    if (n.note) out.push_back(*n.note);
  }
  return out;
}

}  // namespace mtn
