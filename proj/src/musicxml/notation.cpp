#include "mtn/musicxml/notation.hpp"

#include <algorithm>
#include <array>

namespace mtn::musicxml {

namespace {

int letter_index(char letter) {
  static constexpr std::string_view kLetters = "CDEFGAB";
  const auto pos = kLetters.find(letter);
  return pos == std::string_view::npos ? -1 : static_cast<int>(pos);
}

int diatonic(char letter, int octave) { return octave * 7 + letter_index(letter); }

// Diatonic index of the pitch written on the clef's line.
int reference(const Clef& clef) {
  int ref = 0;
  if (clef.sign == "G" || clef.sign == "percussion") {
    ref = diatonic('G', 4);
  } else if (clef.sign == "F") {
    ref = diatonic('F', 3);
  } else if (clef.sign == "C") {
    ref = diatonic('C', 4);
  } else {
    throw ConversionError("clef", "unsupported clef sign '" + clef.sign + "'");
  }
  return ref + 7 * clef.octave_change;
}

}  // namespace

int pitch_to_step(char letter, int octave, const Clef& clef) {
  if (letter_index(letter) < 0) {
    throw ConversionError("pitch", std::string("bad step letter '") + letter + "'");
  }
  const int line = clef.sign == "percussion" ? 2 : clef.line;
  return diatonic(letter, octave) - reference(clef) + 2 * line;
}

std::string clef_label(const Clef& clef) {
  reference(clef);  // rejects unknown signs
  if (clef.sign == "percussion") return {};
  if (clef.octave_change != 0 && (clef.sign == "G" || clef.sign == "F")) return "clef_oct_" + clef.sign;
  return "clef_" + clef.sign;
}

int clef_step(const Clef& clef) { return 2 * clef.line; }

std::vector<int> key_steps(int fifths, const Clef& clef) {
  static constexpr std::array<int, 7> kSharps{10, 7, 11, 8, 5, 9, 6};
  static constexpr std::array<int, 7> kFlats{6, 9, 5, 8, 4, 7, 3};
  const Clef treble;
  // Offset of the clef against treble for the same pitch class.
  const int shift = pitch_to_step('F', 5, clef) - pitch_to_step('F', 5, treble);
  const int offset = ((shift % 7) + 7 + 3) % 7 - 3;
  const auto& pattern = fifths >= 0 ? kSharps : kFlats;
  const int count = std::min(7, std::abs(fifths));
  std::vector<int> steps;
  for (int i = 0; i < count; ++i) {
    int s = pattern[static_cast<std::size_t>(i)] + offset;
    if (s > 11) s -= 7;
    if (s < 1) s += 7;
    steps.push_back(s);
  }
  return steps;
}

RationalTime ConversionContext::to_quarters(std::int64_t duration, const std::string& path) const {
  if (divisions <= 0) throw ConversionError(path, "duration before <divisions> is known");
  return RationalTime(duration, divisions);
}

RationalTime ConversionContext::resolve_onset(std::int64_t duration, const std::string& path) {
  const RationalTime onset = cursor;
  forward(duration, path);
  return onset;
}

void ConversionContext::backup(std::int64_t duration, const std::string& path) {
  const RationalTime next = cursor - to_quarters(duration, path);
  if (next < RationalTime(0)) throw ConversionError(path, "backup moves before the start of the measure");
  cursor = next;
}

void ConversionContext::forward(std::int64_t duration, const std::string& path) {
  cursor += to_quarters(duration, path);
  if (cursor < RationalTime(0)) throw ConversionError(path, "negative time position");
  measure_end = std::max(measure_end, cursor);
}

void ConversionContext::start_measure() {
  cursor = 0;
  measure_end = 0;
}

}  // namespace mtn::musicxml
