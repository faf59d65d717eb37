#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mtn/musicxml/diagnostics.hpp"
#include "mtn/rational.hpp"

namespace mtn::musicxml {

/// MusicXML clef: sign G, F, C or percussion, staff line 1..5 from the
/// bottom, and an octave transposition.
struct Clef {
  std::string sign = "G";
  int line = 2;
  int octave_change = 0;
  bool operator==(const Clef&) const = default;
};

/// Steps above the first ledger line below the staff. Treble C4, bass E2
/// and alto D3 sit on step 0. Throws ConversionError for an unknown sign.
int pitch_to_step(char letter, int octave, const Clef& clef);

/// Token label for the clef, e.g. "clef_G" or "clef_oct_F". Empty for
/// percussion clefs, which have no token class.
std::string clef_label(const Clef& clef);

/// Step of the line the clef sits on.
int clef_step(const Clef& clef);

/// Staff steps of the key-signature accidentals, in engraving order.
/// Positive fifths are sharps, negative flats.
std::vector<int> key_steps(int fifths, const Clef& clef);

/// Running time of one measure of one part.
struct ConversionContext {
  std::int64_t divisions = 0;  // MusicXML subdivisions of a quarter note
  RationalTime cursor;
  RationalTime measure_end;  // furthest point reached

  /// Quarter notes for a duration in divisions. Throws when divisions are unset.
  RationalTime to_quarters(std::int64_t duration, const std::string& path) const;
  /// Onset of an event at the cursor, which then advances by `duration`.
  RationalTime resolve_onset(std::int64_t duration, const std::string& path);
  void backup(std::int64_t duration, const std::string& path);
  void forward(std::int64_t duration, const std::string& path);
  void start_measure();
};

}  // namespace mtn::musicxml
