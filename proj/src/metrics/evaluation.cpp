#include "mtn/metrics/evaluation.hpp"

#include "mtn/error.hpp"
#include "mtn/tree.hpp"

namespace mtn::metrics {

Exact ter(const LabeledTree& predicted, const LabeledTree& truth) {
  if (truth.empty()) throw Error("TER needs a non-empty truth tree");
  const auto script = tree_edit_distance(predicted, truth, UnitCost{});
  return script.cost() / Exact(truth.size());
}

Exact ter(const Measure* predicted, const Measure& truth, const Vocabulary& vocab) {
  const LabeledTree pred_tree =
      predicted ? project_tree(*predicted, ProjectionMode::Structural, vocab) : LabeledTree{};
  return ter(pred_tree, project_tree(truth, ProjectionMode::Structural, vocab));
}

PairReport evaluate_pair(const Measure* predicted, const Measure& truth,
                         const TierSelection& tiers, const Vocabulary& vocab) {
  PairReport r;
  if (tiers.tier1) r.tier1 = tier1(predicted, truth);
  if (tiers.tier2) {
    const LabeledTree p =
        predicted ? project_tree(*predicted, ProjectionMode::Structural, vocab) : LabeledTree{};
    const LabeledTree g = project_tree(truth, ProjectionMode::Structural, vocab);
    const auto script = tree_edit_distance(p, g, UnitCost{});
    r.truth_nodes = g.size();
    r.structural_half_cost = script.half_cost;
    r.substitutions = script.substitutions;
    r.deletions = script.deletions;
    r.insertions = script.insertions;
  }
  if (tiers.tier3) {
    const LabeledTree p =
        predicted ? project_tree(*predicted, ProjectionMode::Semantic, vocab) : LabeledTree{};
    const LabeledTree g = project_tree(truth, ProjectionMode::Semantic, vocab);
    const auto script = tree_edit_distance(p, g, SemanticCost{});
    r.semantic_half_cost = script.half_cost;
    r.tier3 = tier3(script, p, g);
    if (!tiers.tier2) r.truth_nodes = g.size();
  }
  return r;
}

void CorpusMetrics::add(const PairReport& r) {
  ++pairs;
  tier1.merge(r.tier1);
  truth_nodes += r.truth_nodes;
  structural_half_cost += r.structural_half_cost;
  substitutions += r.substitutions;
  deletions += r.deletions;
  insertions += r.insertions;
  semantic_half_cost += r.semantic_half_cost;
  tier3.merge(r.tier3);
}

void CorpusMetrics::merge(const CorpusMetrics& o) {
  pairs += o.pairs;
  tier1.merge(o.tier1);
  truth_nodes += o.truth_nodes;
  structural_half_cost += o.structural_half_cost;
  substitutions += o.substitutions;
  deletions += o.deletions;
  insertions += o.insertions;
  semantic_half_cost += o.semantic_half_cost;
  tier3.merge(o.tier3);
}

Exact CorpusMetrics::ter() const {
  if (truth_nodes == 0) return 0;
  return Exact(structural_half_cost, 2) / Exact(truth_nodes);
}

Exact CorpusMetrics::extended_ter() const {
  if (truth_nodes == 0) return 0;
  return Exact(semantic_half_cost, 2) / Exact(truth_nodes);
}

CorpusMetrics accumulate(std::span<const PairReport> reports) {
  if (reports.empty()) throw Error("cannot accumulate an empty corpus report");
  CorpusMetrics out;
  for (const auto& r : reports) out.add(r);
  return out;
}

}  // namespace mtn::metrics
