#pragma once

#include <span>
#include <string>
#include <vector>

#include "mtn/model.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn {

/// `actual` notes in the time of `normal`.
struct TupletRatio {
  int actual = 1;
  int normal = 1;

  bool operator==(const TupletRatio&) const = default;
};

/// Conventional normal count for a printed tuplet number: the largest power
/// of two below it, except duplets which take the time of three.
int conventional_normal(int actual);

/// Tuplet still open where a measure begins (opened in an earlier measure).
struct OpenTuplet {
  std::string pair_id;
  TupletRatio ratio;
  int staff = 1;
};

/// Sounding length of a Chord or Rest:
///   base (black 1, white with stem 2, white without stem 4, breve 8, or the
///   rest class value), halved per flag and per enclosing beam, scaled by
///   (2 - 1/2^k) for k dots and by normal/actual for every active tuplet.
/// Grace and cue heads take no time. Throws VocabularyError for a node that
/// carries no recognised notehead or rest token.
RationalTime duration_of(const Node& chord_or_rest, std::span<const TupletRatio> active_tuplets,
                         int enclosing_beams = 0, const Vocabulary& vocab = Vocabulary::standard());

/// A chord or rest together with the context its duration depends on.
struct TimedEvent {
  const Node* node = nullptr;       // Chord or Rest
  std::size_t top_index = 0;        // index of the enclosing measure child
  int enclosing_beams = 0;
  std::vector<TupletRatio> tuplets;
  RationalTime duration;
};

/// Every chord and rest of the measure in reading order, with tuplet scope
/// resolved: a tuplet covers the elements of its own top-level chain and
/// later elements on the staff where it started, through the element that
/// carries its stop token.
std::vector<TimedEvent> timed_events(const Measure& measure,
                                     const Vocabulary& vocab = Vocabulary::standard(),
                                     std::span<const OpenTuplet> open = {});

/// Tuplets left open at the end of the measure, for chaining into the next.
std::vector<OpenTuplet> open_tuplets_after(const Measure& measure,
                                           std::span<const OpenTuplet> open = {},
                                           const Vocabulary& vocab = Vocabulary::standard());

/// Fills in every chord onset of each note group from the first chord (or
/// the group onset) and the running durations. Explicit onsets are checked;
/// a disagreement throws InconsistentOnsetError naming the chord.
Measure infer_onsets(Measure measure, const Vocabulary& vocab = Vocabulary::standard(),
                     std::span<const OpenTuplet> open = {});

/// Removes onsets that infer_onsets can reconstruct (all chords but the
/// first of each top-level note group).
Measure strip_inferrable_onsets(Measure measure);

}  // namespace mtn
