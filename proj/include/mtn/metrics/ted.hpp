#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "mtn/rational.hpp"
#include "mtn/tree.hpp"

namespace mtn::metrics {

/// Edit costs in half units, so the partial substitution (0.5) stays an
/// integer and the dynamic program is exact.
class CostModel {
 public:
  virtual ~CostModel() = default;
  virtual std::int64_t relabel(const TreeNode& from, const TreeNode& to) const = 0;
  virtual std::int64_t remove(const TreeNode&) const { return 2; }
  virtual std::int64_t insert(const TreeNode&) const { return 2; }
};

/// Unit costs: relabel/delete/insert cost 1, equal labels match for free.
class UnitCost final : public CostModel {
 public:
  std::int64_t relabel(const TreeNode& from, const TreeNode& to) const override;
};

/// Unit costs, except notehead-to-notehead substitution costs 0.5 when
/// exactly one of staff, step or notehead type differs.
class SemanticCost final : public CostModel {
 public:
  std::int64_t relabel(const TreeNode& from, const TreeNode& to) const override;
};

/// Cost of substituting one semantic node by another: 0, 1/2 or 1.
Exact semantic_cost(const TreeNode& a, const TreeNode& b);

enum class EditKind { Match, Substitute, Delete, Insert };

struct EditOp {
  EditKind kind;
  int from = -1;  // pre-order index in the source tree, -1 for inserts
  int to = -1;    // pre-order index in the target tree, -1 for deletes
  std::int64_t half_cost = 0;
};

struct EditScript {
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  /// Mapped (source, target) pairs, equal or substituted, in source pre-order.
  std::vector<std::pair<int, int>> mapping;
  /// Source-side operations in source pre-order, then inserts in target order.
  std::vector<EditOp> ops;
  std::int64_t half_cost = 0;

  Exact cost() const { return Exact(half_cost, 2); }
};

/// Ordered tree edit distance (Zhang & Shasha keyroot decomposition) with
/// an optimal mapping recovered by backtracking. Ties prefer the mapping of
/// a pair over a deletion, and a deletion over an insertion, evaluated in an
/// orientation fixed by tree content: swapping the arguments transposes the
/// script exactly.
EditScript tree_edit_distance(const LabeledTree& source, const LabeledTree& target,
                              const CostModel& costs);

/// Human readable listing of an edit script.
std::string describe(const EditScript& script, const LabeledTree& source,
                     const LabeledTree& target);

}  // namespace mtn::metrics
