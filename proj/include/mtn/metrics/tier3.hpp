#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "mtn/metrics/ted.hpp"
#include "mtn/metrics/tier1.hpp"
#include "mtn/rational.hpp"
#include "mtn/tree.hpp"

namespace mtn::metrics {

/// Additive note-level counts; ratios are taken only after accumulation.
struct Tier3Counts {
  std::size_t truth_notes = 0;
  std::size_t predicted_notes = 0;
  std::size_t matched = 0;
  std::size_t pitch_equal = 0;  // (staff, step) tuple
  std::size_t step_equal = 0;
  std::size_t staff_equal = 0;
  std::size_t time_equal = 0;
  std::size_t duration_equal = 0;
  std::int64_t step_shift_sum = 0;
  std::int64_t staff_shift_sum = 0;
  Exact time_shift_sum = 0;

  void merge(const Tier3Counts& other);
  bool operator==(const Tier3Counts&) const = default;
};

/// Matching M = mapped pairs of the semantic edit script joining two
/// noteheads or two rests. Rests share one pitch, so a rest pair always
/// counts as pitch-, step- and staff-equal with zero shift.
Tier3Counts tier3(const EditScript& semantic_script, const LabeledTree& predicted,
                  const LabeledTree& truth);

struct Tier3Aggregate {
  std::size_t matched = 0;
  Rate mnr;
  Rate fpr;
  Rate pitch_precision;
  Rate step_precision;
  Rate staff_precision;
  Rate time_precision;
  Rate duration_precision;
  Rate average_pitch_shift;  // mean(step_p - step_g)
  Rate staff_shift;          // mean(staff_p - staff_g)
  Rate time_shift;           // mean(t_p - t_g)
};

Tier3Aggregate summarize(const Tier3Counts& counts);

}  // namespace mtn::metrics
