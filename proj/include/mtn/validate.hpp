#pragma once

#include <string>
#include <vector>

#include "mtn/model.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn {

struct Violation {
  std::string rule;     // e.g. "chord-stem-count", "pair-multiplicity"
  std::string subject;  // id of the offending node/token/measure, or a path
  std::string message;

  bool operator==(const Violation&) const = default;
};

/// Checks every structural invariant of the format. Violations are data:
/// an empty result means the work is valid and serializable.
std::vector<Violation> validate(const Work& work, const Vocabulary& vocab = Vocabulary::standard());

/// Measure-local checks only (no work-level id or pair bookkeeping).
std::vector<Violation> validate_measure(const Measure& measure, int staff_count,
                                        const Vocabulary& vocab = Vocabulary::standard());

}  // namespace mtn
