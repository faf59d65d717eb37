#pragma once

#include <string>

#include "mtn/model.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn {

/// Sorts every sibling list of the measure into reading order:
///   1. onset from the start of the measure (absent first)
///   2. node class (Attributes, Directions, Rests, Note Groups, Barlines,
///      then inner kinds; tokens last)
///   3. staff position: upper staves first, lower steps first
///   4. first stem direction: up, none, down
///   5. token labels in pre-order, alphabetically
/// with a final content fingerprint so the order is total.
///
/// Throws ValidationError("onset-required") when a measure child or a chord
/// has no onset.
Measure canonicalize(Measure measure, const Vocabulary& vocab = Vocabulary::standard());
Work canonicalize(Work work, const Vocabulary& vocab = Vocabulary::standard());

bool is_canonical(const Measure& measure, const Vocabulary& vocab = Vocabulary::standard());

/// Deterministic content fingerprint of an element (ids included).
std::string fingerprint(const Element& element);

}  // namespace mtn
