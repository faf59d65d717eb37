#pragma once

#include <cstddef>
#include <map>
#include <string>

#include "mtn/model.hpp"
#include "mtn/rational.hpp"
#include "mtn/tree.hpp"

namespace mtn::metrics {

struct ClassCounts {
  std::size_t predicted = 0;
  std::size_t truth = 0;
  std::size_t intersection = 0;  // multiset minimum

  bool operator==(const ClassCounts&) const = default;
};

struct Tier1Counts {
  std::map<std::string, ClassCounts> classes;

  void merge(const Tier1Counts& other);
  std::size_t truth_total() const;
  std::size_t predicted_total() const;
  bool operator==(const Tier1Counts&) const = default;
};

Tier1Counts tier1(const TerminalMultiset& predicted, const TerminalMultiset& truth);
/// A null prediction counts as an empty multiset.
Tier1Counts tier1(const Measure* predicted, const Measure& truth);

/// Rate with an explicit flag for the 0/0 case (reported as 0).
struct Rate {
  Exact value = 0;
  bool defined = false;

  static Rate of(const Exact& numerator, const Exact& denominator);
};

struct ClassMetrics {
  Rate precision;
  Rate recall;
};

ClassMetrics class_metrics(const ClassCounts& counts);

struct Tier1Summary {
  Exact weighted_precision;
  Exact weighted_recall;
  std::size_t truth_total = 0;
};

/// Per-class metrics averaged with weights G_c / sum(G). Throws Error when
/// the corpus has no ground-truth token.
Tier1Summary tier1_aggregate(const Tier1Counts& counts);

}  // namespace mtn::metrics
