#include "mtn/metrics/tier1.hpp"

#include <algorithm>

#include "mtn/error.hpp"

namespace mtn::metrics {

void Tier1Counts::merge(const Tier1Counts& other) {
  for (const auto& [label, c] : other.classes) {
    auto& mine = classes[label];
    mine.predicted += c.predicted;
    mine.truth += c.truth;
    mine.intersection += c.intersection;
  }
}

std::size_t Tier1Counts::truth_total() const {
  std::size_t n = 0;
  for (const auto& [_, c] : classes) n += c.truth;
  return n;
}

std::size_t Tier1Counts::predicted_total() const {
  std::size_t n = 0;
  for (const auto& [_, c] : classes) n += c.predicted;
  return n;
}

Tier1Counts tier1(const TerminalMultiset& predicted, const TerminalMultiset& truth) {
  Tier1Counts out;
  for (const auto& [label, n] : predicted) out.classes[label].predicted = n;
  for (const auto& [label, n] : truth) out.classes[label].truth = n;
  for (auto& [_, c] : out.classes) c.intersection = std::min(c.predicted, c.truth);
  return out;
}

Tier1Counts tier1(const Measure* predicted, const Measure& truth) {
  return tier1(predicted ? extract_terminals(*predicted) : TerminalMultiset{},
               extract_terminals(truth));
}

Rate Rate::of(const Exact& numerator, const Exact& denominator) {
  if (denominator == 0) return Rate{0, false};
  return Rate{numerator / denominator, true};
}

ClassMetrics class_metrics(const ClassCounts& c) {
  return {Rate::of(Exact(c.intersection), Exact(c.predicted)),
          Rate::of(Exact(c.intersection), Exact(c.truth))};
}

Tier1Summary tier1_aggregate(const Tier1Counts& counts) {
  const std::size_t total = counts.truth_total();
  if (total == 0) throw Error("tier 1 aggregate over a corpus without ground-truth tokens");
  Tier1Summary out;
  out.truth_total = total;
  for (const auto& [_, c] : counts.classes) {
    if (c.truth == 0) continue;
    const Exact weight(c.truth, total);
    const auto m = class_metrics(c);
    out.weighted_precision += weight * m.precision.value;
    out.weighted_recall += weight * m.recall.value;
  }
  return out;
}

}  // namespace mtn::metrics
