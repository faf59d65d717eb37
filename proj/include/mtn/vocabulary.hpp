#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "mtn/rational.hpp"

namespace mtn {

enum class TokenCategory {
  Notehead,
  Rest,
  Stem,
  Flag,
  Beam,
  Accidental,
  Dot,
  Articulation,  // staccato, accent, tenuto, caesura, arpeggiate, fermata
  Ornament,      // trill, turn, wavy_line
  Slur,
  Tie,
  Tuplet,
  Clef,
  TimeSig,
  Barline,
  Dynamic,
  Wedge,
  Marker,        // segno, coda
};

enum class SpannerEnd { None, Start, Stop };

enum class NoteheadShape { None, Black, White, Breve };

struct TokenClass {
  std::string label;
  TokenCategory category;
  bool positional = false;
  SpannerEnd spanner = SpannerEnd::None;
  bool numeric = false;          // carries numeric_value
  NoteheadShape shape = NoteheadShape::None;
  bool grace_or_cue = false;     // consumes no time
  std::optional<RationalTime> rest_duration;
};

/// Closed, extensible set of token classes. The standard set covers every
/// class reported in the reference corpus plus structural necessities
/// (time-signature digits, grace/cue white heads, short rests).
class Vocabulary {
 public:
  static const Vocabulary& standard();

  void add(TokenClass token_class);
  const TokenClass* find(std::string_view label) const;
  bool contains(std::string_view label) const { return find(label) != nullptr; }
  std::vector<std::string> labels() const;

 private:
  std::map<std::string, TokenClass, std::less<>> classes_;
};

/// True when both labels are spanner ends of the same family
/// (slur, tie, tuplet, wedge).
bool same_spanner_family(const TokenClass& a, const TokenClass& b);

}  // namespace mtn
