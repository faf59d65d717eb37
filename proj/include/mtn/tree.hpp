#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mtn/model.hpp"
#include "mtn/timing.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn {

using TerminalMultiset = std::map<std::string, std::size_t>;

/// Every token label of the measure with multiplicity.
TerminalMultiset extract_terminals(const Measure& measure);

/// Note tuple: graphical pitch, onset, duration. Rests share one pitch.
struct SemanticNote {
  StaffPosition position;
  RationalTime onset;
  RationalTime duration;
  bool is_rest = false;
  std::string head;  // notehead or rest label
  std::string source_id;

  bool operator==(const SemanticNote&) const = default;
};

struct TreeNode {
  std::string label;
  int parent = -1;
  std::vector<int> children;
  std::string source_id;
  std::optional<SemanticNote> note;  // semantic projection, notehead/rest leaves
};

/// Ordered labeled tree, nodes stored in pre-order (index 0 is the root).
/// An empty tree (no nodes at all) stands for a missing prediction.
class LabeledTree {
 public:
  int add(std::string label, int parent, std::string source_id = {});

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const TreeNode& operator[](std::size_t i) const { return nodes_[i]; }
  TreeNode& operator[](std::size_t i) { return nodes_[i]; }
  std::span<const TreeNode> nodes() const { return nodes_; }

  /// Labels in pre-order.
  std::vector<std::string> preorder_labels() const;
  /// Compact bracket notation, e.g. "{measure{rest{rest_quarter}}}".
  std::string bracket() const;

 private:
  std::vector<TreeNode> nodes_;
};

enum class ProjectionMode { Structural, Semantic };

/// Root "measure", internal nodes labeled by kind name, leaves by token
/// label. In semantic mode notehead and rest leaves also carry their note
/// tuple; positions and onsets never enter labels.
LabeledTree project_tree(const Measure& measure, ProjectionMode mode,
                         const Vocabulary& vocab = Vocabulary::standard(),
                         std::span<const OpenTuplet> open = {});

/// Notes carried by a semantic tree, in pre-order.
std::vector<SemanticNote> semantic_notes(const LabeledTree& tree);

}  // namespace mtn
