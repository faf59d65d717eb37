#pragma once

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mtn/model.hpp"

namespace mtn::harness {

struct Alignment {
  std::vector<std::pair<const Measure*, const Measure*>> pairs;  // (predicted, truth)
  std::vector<const Measure*> missed;                             // truth without prediction
  std::size_t discarded = 0;                                      // surplus predictions
  bool by_id = false;
};

/// Pairs predicted with truth measures, both in reading order. When any
/// predicted measure id matches a truth id the pairing is by id; otherwise
/// the lists are zipped. Surplus predictions are discarded, truth measures
/// left over are missed. Pairs follow truth order.
Alignment align_measures(std::span<const Measure* const> predicted, std::span<const Measure* const> truth);

}  // namespace mtn::harness
