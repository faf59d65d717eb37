#include "mtn/vocabulary.hpp"

namespace mtn {

namespace {

TokenClass plain(std::string label, TokenCategory category, bool positional) {
  TokenClass tc;
  tc.label = std::move(label);
  tc.category = category;
  tc.positional = positional;
  return tc;
}

TokenClass notehead(std::string label, NoteheadShape shape, bool grace) {
  TokenClass tc = plain(std::move(label), TokenCategory::Notehead, true);
  tc.shape = shape;
  tc.grace_or_cue = grace;
  return tc;
}

TokenClass rest(std::string label, RationalTime duration) {
  TokenClass tc = plain(std::move(label), TokenCategory::Rest, false);
  tc.rest_duration = duration;
  return tc;
}

TokenClass spanner(std::string label, TokenCategory category, SpannerEnd end) {
  TokenClass tc = plain(std::move(label), category, false);
  tc.spanner = end;
  return tc;
}

Vocabulary build_standard() {
  Vocabulary v;
  using C = TokenCategory;
  using S = NoteheadShape;

  v.add(notehead("notehead_black", S::Black, false));
  v.add(notehead("notehead_white", S::White, false));
  v.add(notehead("notehead_breve", S::Breve, false));
  v.add(notehead("notehead_grace_black", S::Black, true));
  v.add(notehead("notehead_grace_white", S::White, true));
  v.add(notehead("notehead_cue_black", S::Black, true));
  v.add(notehead("notehead_cue_white", S::White, true));

  v.add(rest("rest_maxima", RationalTime(32)));
  v.add(rest("rest_long", RationalTime(16)));
  v.add(rest("rest_breve", RationalTime(8)));
  v.add(rest("rest_whole", RationalTime(4)));
  v.add(rest("rest_half", RationalTime(2)));
  v.add(rest("rest_quarter", RationalTime(1)));
  v.add(rest("rest_eighth", RationalTime(1, 2)));
  v.add(rest("rest_16th", RationalTime(1, 4)));
  v.add(rest("rest_32nd", RationalTime(1, 8)));
  v.add(rest("rest_64th", RationalTime(1, 16)));
  v.add(rest("rest_128th", RationalTime(1, 32)));

  v.add(plain("stem_up", C::Stem, false));
  v.add(plain("stem_down", C::Stem, false));
  v.add(plain("flag", C::Flag, false));
  v.add(plain("beam", C::Beam, false));

  for (const char* acc : {"accidental_sharp", "accidental_flat", "accidental_natural",
                          "accidental_double_sharp", "accidental_double_flat"}) {
    v.add(plain(acc, C::Accidental, true));
  }
  v.add(plain("dot", C::Dot, true));

  for (const char* art : {"staccato", "accent", "tenuto", "caesura", "arpeggiate", "fermata"}) {
    v.add(plain(art, C::Articulation, false));
  }
  for (const char* orn : {"trill", "turn", "wavy_line"}) {
    v.add(plain(orn, C::Ornament, false));
  }

  v.add(spanner("slur_start", C::Slur, SpannerEnd::Start));
  v.add(spanner("slur_stop", C::Slur, SpannerEnd::Stop));
  v.add(spanner("tied_start", C::Tie, SpannerEnd::Start));
  v.add(spanner("tied_stop", C::Tie, SpannerEnd::Stop));
  {
    TokenClass tc = spanner("tuplet_start", C::Tuplet, SpannerEnd::Start);
    tc.numeric = true;
    v.add(tc);
  }
  v.add(spanner("tuplet_stop", C::Tuplet, SpannerEnd::Stop));
  v.add(spanner("wedge_crescendo", C::Wedge, SpannerEnd::Start));
  v.add(spanner("wedge_diminuendo", C::Wedge, SpannerEnd::Start));
  v.add(spanner("wedge_stop", C::Wedge, SpannerEnd::Stop));

  for (const char* clef : {"clef_G", "clef_F", "clef_C", "clef_oct_G", "clef_oct_F"}) {
    v.add(plain(clef, C::Clef, true));
  }

  v.add(plain("timesig_common", C::TimeSig, false));
  v.add(plain("timesig_cut", C::TimeSig, false));
  {
    TokenClass tc = plain("timesig_number", C::TimeSig, true);
    tc.numeric = true;
    v.add(tc);
  }

  for (const char* bar : {"barline_tok_regular", "barline_tok_heavy", "repeat_forward",
                          "repeat_backward"}) {
    v.add(plain(bar, C::Barline, false));
  }

  for (const char* dyn :
       {"dyn_pppppp", "dyn_ppppp", "dyn_pppp", "dyn_ppp", "dyn_pp", "dyn_p", "dyn_mp", "dyn_mf",
        "dyn_f", "dyn_ff", "dyn_fff", "dyn_ffff", "dyn_fffff", "dyn_ffffff", "dyn_sf", "dyn_sfz",
        "dyn_sffz", "dyn_sfp", "dyn_fz", "dyn_rf", "dyn_rfz", "dyn_fp"}) {
    v.add(plain(dyn, C::Dynamic, false));
  }

  v.add(plain("segno", C::Marker, false));
  v.add(plain("coda", C::Marker, false));
  return v;
}

}  // namespace

const Vocabulary& Vocabulary::standard() {
  static const Vocabulary instance = build_standard();
  return instance;
}

void Vocabulary::add(TokenClass token_class) {
  auto label = token_class.label;
  classes_.insert_or_assign(std::move(label), std::move(token_class));
}

const TokenClass* Vocabulary::find(std::string_view label) const {
  auto it = classes_.find(label);
  return it == classes_.end() ? nullptr : &it->second;
}

std::vector<std::string> Vocabulary::labels() const {
  std::vector<std::string> out;
  out.reserve(classes_.size());
  for (const auto& [label, _] : classes_) out.push_back(label);
  return out;
}

bool same_spanner_family(const TokenClass& a, const TokenClass& b) {
  return a.spanner != SpannerEnd::None && b.spanner != SpannerEnd::None &&
         a.category == b.category;
}

}  // namespace mtn
