#pragma once

#include <cstddef>
#include <cstdint>
#include <span>

#include "mtn/metrics/ted.hpp"
#include "mtn/metrics/tier1.hpp"
#include "mtn/metrics/tier3.hpp"
#include "mtn/model.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn::metrics {

struct TierSelection {
  bool tier1 = true;
  bool tier2 = true;
  bool tier3 = true;
};

/// Tree Error Rate: unit-cost edit distance over the truth node count. A
/// null prediction is the empty tree, so TER(null, m) = 1.
Exact ter(const LabeledTree& predicted, const LabeledTree& truth);
Exact ter(const Measure* predicted, const Measure& truth,
          const Vocabulary& vocab = Vocabulary::standard());

/// Everything one (prediction, truth) measure pair contributes to a corpus.
struct PairReport {
  Tier1Counts tier1;
  std::size_t truth_nodes = 0;
  std::int64_t structural_half_cost = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::int64_t semantic_half_cost = 0;
  Tier3Counts tier3;

  bool operator==(const PairReport&) const = default;
};

PairReport evaluate_pair(const Measure* predicted, const Measure& truth,
                         const TierSelection& tiers = {},
                         const Vocabulary& vocab = Vocabulary::standard());

/// Sums of numerators and denominators; every ratio is one division at the end.
struct CorpusMetrics {
  std::size_t pairs = 0;
  Tier1Counts tier1;
  std::size_t truth_nodes = 0;
  std::int64_t structural_half_cost = 0;
  std::size_t substitutions = 0;
  std::size_t deletions = 0;
  std::size_t insertions = 0;
  std::int64_t semantic_half_cost = 0;
  Tier3Counts tier3;

  void add(const PairReport& report);
  void merge(const CorpusMetrics& other);
  Exact ter() const;
  Exact extended_ter() const;

  bool operator==(const CorpusMetrics&) const = default;
};

/// Throws Error on an empty corpus.
CorpusMetrics accumulate(std::span<const PairReport> reports);

}  // namespace mtn::metrics
