#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "mtn/model.hpp"
#include "mtn/rational.hpp"

namespace mtn::harness {

struct CorpusStats {
  std::size_t works = 0;
  std::size_t measures = 0;
  std::size_t tokens = 0;
  std::map<std::string, std::size_t> classes;

  /// Exact share of one class; the shares of all classes sum to 1.
  Exact proportion(const std::string& label) const;
};

CorpusStats corpus_stats(std::span<const Work> works);

/// Class, Counts, Prop table sorted by count, with a Total row.
std::string stats_text(const CorpusStats& stats);

struct PerturbSpec {
  std::string from;
  std::string to;
  Exact fraction;  // share of `from` tokens to relabel, rounded down
  std::uint64_t seed = 0;
};

struct PerturbResult {
  std::size_t candidates = 0;
  std::size_t relabeled = 0;
};

/// Relabels floor(fraction * n) of the n `from` tokens across all works,
/// chosen by a seeded shuffle. Throws Error for labels outside the standard
/// vocabulary, a fraction outside [0, 1], or labels of different kinds
/// (positional vs. not).
PerturbResult perturb_labels(std::vector<Work>& works, const PerturbSpec& spec);

}  // namespace mtn::harness
