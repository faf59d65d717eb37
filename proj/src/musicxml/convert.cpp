#include "mtn/musicxml/convert.hpp"

#include <algorithm>
#include <charconv>
#include <map>
#include <set>

#include "mtn/canonical.hpp"
#include "mtn/io/xml_dom.hpp"
#include "mtn/musicxml/grouping.hpp"
#include "mtn/musicxml/notation.hpp"
#include "mtn/validate.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn::musicxml {

namespace {

using xml::Element;

struct MeasureRef {
  const Element* header;   // the <measure> element (number, implicit)
  const Element* content;  // element whose children are the music data
};

struct PartRef {
  std::string id;
  std::vector<MeasureRef> measures;
};

std::optional<std::int64_t> to_int(std::string_view text) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc() || ptr != end) return std::nullopt;
  return v;
}

// Durations may be written as decimals; only integral values are exact.
std::int64_t duration_of_element(const Element& e, const std::string& path) {
  const std::string text = e.child_text("duration");
  if (text.empty()) return 0;
  if (auto v = to_int(text)) return *v;
  throw ConversionError(path, "non-integral duration '" + text + "'");
}

int int_or(const std::string& text, int fallback) {
  if (text.empty()) return fallback;
  auto v = to_int(text);
  return v ? static_cast<int>(*v) : fallback;
}

std::string attr_or(const Element& e, std::string_view key, std::string fallback = {}) {
  const std::string* v = e.attribute(key);
  return v ? *v : fallback;
}

bool hidden(const Element& e) { return attr_or(e, "print-object") == "no"; }

int type_flags(const std::string& type) {
  static const std::map<std::string, int> kFlags{{"eighth", 1}, {"16th", 2},  {"32nd", 3},  {"64th", 4},
                                                 {"128th", 5},  {"256th", 6}, {"512th", 7}, {"1024th", 8}};
  const auto it = kFlags.find(type);
  return it == kFlags.end() ? 0 : it->second;
}

const std::map<RationalTime, std::string>& type_values() {
  static const std::map<RationalTime, std::string> kTypes{
      {RationalTime(8), "breve"},     {RationalTime(4), "whole"},      {RationalTime(2), "half"},
      {RationalTime(1), "quarter"},   {RationalTime(1, 2), "eighth"},  {RationalTime(1, 4), "16th"},
      {RationalTime(1, 8), "32nd"},   {RationalTime(1, 16), "64th"},   {RationalTime(1, 32), "128th"}};
  return kTypes;
}

// Note type and dot count for a printed length; false when inexact.
bool type_from_length(RationalTime q, std::string& type, int& dots) {
  const auto& types = type_values();
  type = "128th";
  RationalTime base(1, 32);
  for (auto it = types.rbegin(); it != types.rend(); ++it) {
    if (it->first <= q) {
      base = it->first;
      type = it->second;
      break;
    }
  }
  dots = 0;
  RationalTime total = base;
  RationalTime add = base / 2;
  while (dots < 3 && total + add <= q) {
    total += add;
    add /= 2;
    ++dots;
  }
  return total == q;
}

Token make_token(IdSource& ids, std::string label, int staff, std::optional<int> step = std::nullopt) {
  Token t;
  t.id = ids.token();
  t.label = std::move(label);
  t.position = {staff, step};
  return t;
}

Node make_node(IdSource& ids, NodeKind kind, std::optional<RationalTime> onset = std::nullopt) {
  Node n;
  n.kind = kind;
  n.id = ids.node();
  n.onset = onset;
  return n;
}

struct PendingChord {
  Node chord;
  std::string voice;
  std::map<int, BeamValue> beams;
  int flags = 0;
  int staff = 1;
  std::string stem;  // MusicXML stem text, empty when absent
  bool stemless = false;
  std::vector<int> steps;
};

class PartConverter {
 public:
  PartConverter(const PartRef& ref, IdSource& ids, Warnings& warnings, std::set<std::string>& measure_ids)
      : ref_(ref), ids_(ids), warnings_(warnings), measure_ids_(measure_ids) {}

  Part run(std::vector<std::string>& line_starts, std::vector<std::string>& page_starts,
           std::vector<std::string>& implicit) {
    Part part;
    part.id = ref_.id;
    for (std::size_t i = 0; i < ref_.measures.size(); ++i) {
      const MeasureRef& mref = ref_.measures[i];
      const std::string number = attr_or(*mref.header, "number", std::to_string(i + 1));
      std::string id = ref_.id + "-m" + number;
      for (int k = 2; measure_ids_.count(id); ++k) id = ref_.id + "-m" + number + "-" + std::to_string(k);
      measure_ids_.insert(id);
      path_ = ref_.id + "/m" + number;
      Measure m = measure(*mref.content, id);
      if (i == 0 || new_line_) {
        m.line_start = true;
        line_starts.push_back(id);
      }
      if (i == 0 || new_page_) page_starts.push_back(id);
      if (attr_or(*mref.header, "implicit") == "yes") implicit.push_back(id);
      part.measures.push_back(std::move(m));
    }
    const auto unclosed = spanners_.drain(warnings_, ref_.id);
    const std::set<std::string> orphans(unclosed.begin(), unclosed.end());
    for (auto& m : part.measures) {
      for_each_token(m, [&](Token& t) {
        if (orphans.count(t.id)) t.orphan = true;
      });
    }
    part.staff_count = staff_count_;
    return part;
  }

 private:
  void warn(const std::string& where, const std::string& message) { warnings_.push_back({where, message}); }

  const Clef& clef_for(int staff, const std::string& where) {
    auto it = clefs_.find(staff);
    if (it == clefs_.end()) {
      warn(where, "no clef on staff " + std::to_string(staff) + "; treble assumed");
      it = clefs_.emplace(staff, Clef{}).first;
    }
    return it->second;
  }

  int read_staff(const Element& e) {
    const int staff = std::max(1, int_or(e.child_text("staff"), 1));
    staff_count_ = std::max(staff_count_, staff);
    return staff;
  }

  Measure measure(const Element& content, const std::string& id) {
    ctx_.start_measure();
    new_line_ = new_page_ = false;
    top_.clear();
    chords_.clear();
    right_barlines_.clear();
    last_chord_.reset();
    std::map<std::string, int> counters;
    for (const auto& child : content.children) {
      const std::string where = path_ + "/" + child.name + "[" + std::to_string(++counters[child.name]) + "]";
      if (child.name == "note") {
        note(child, where);
      } else if (child.name == "attributes") {
        attributes(child, where);
      } else if (child.name == "backup") {
        ctx_.backup(duration_of_element(child, where), where);
        last_chord_.reset();
      } else if (child.name == "forward") {
        ctx_.forward(duration_of_element(child, where), where);
        last_chord_.reset();
      } else if (child.name == "direction") {
        direction(child, where);
      } else if (child.name == "barline") {
        barline(child, where);
      } else if (child.name == "print") {
        if (attr_or(child, "new-page") == "yes") new_page_ = new_line_ = true;
        if (attr_or(child, "new-system") == "yes") new_line_ = true;
      } else if (child.name == "sound" || child.name == "listening" || child.name == "bookmark" ||
                 child.name == "link") {
        // playback and navigation only
      } else {
        warn(where, "element not imported");
      }
    }
    for (const std::size_t index : right_barlines_) top_[index].onset = ctx_.measure_end;
    group_voices();
    Measure m;
    m.id = id;
    m.children = std::move(top_);
    top_.clear();
    return m;
  }

  // ---- attributes -------------------------------------------------------

  std::vector<int> target_staves(const Element& e) {
    if (const std::string* n = e.attribute("number")) return {std::max(1, int_or(*n, 1))};
    std::vector<int> all;
    for (int s = 1; s <= staff_count_; ++s) all.push_back(s);
    return all;
  }

  void attributes(const Element& attrs, const std::string& where) {
    std::map<int, Node> clefs, keys, times;
    for (const auto& c : attrs.children) {
      if (c.name == "staves") {
        staff_count_ = std::max(staff_count_, std::max(1, int_or(xml::trim(c.text), 1)));
      } else if (c.name == "divisions") {
        const auto d = to_int(xml::trim(c.text));
        if (!d || *d <= 0) throw ConversionError(where, "divisions must be a positive integer");
        ctx_.divisions = *d;
      }
    }
    for (const auto& c : attrs.children) {
      if (c.name != "clef") continue;
      const int staff = std::max(1, int_or(attr_or(c, "number"), 1));
      staff_count_ = std::max(staff_count_, staff);
      Clef clef;
      clef.sign = c.child_text("sign");
      const std::string line_text = c.child_text("line");
      const int default_line = clef.sign == "F" ? 4 : clef.sign == "C" ? 3 : 2;
      clef.line = int_or(line_text, default_line);
      clef.octave_change = int_or(c.child_text("clef-octave-change"), 0);
      std::string label;
      try {
        label = clef_label(clef);
      } catch (const ConversionError& e) {
        throw ConversionError(where + "/clef", e.what());
      }
      clefs_[staff] = clef;
      if (label.empty()) {
        warn(where + "/clef", "percussion clef has no token; positions follow the treble staff");
        continue;
      }
      if (hidden(c)) continue;
      Node n = make_node(ids_, NodeKind::Clef);
      n.children.emplace_back(make_token(ids_, label, staff, clef_step(clef)));
      clefs[staff] = std::move(n);
    }
    for (const auto& c : attrs.children) {
      if (c.name != "key") continue;
      const std::string fifths_text = c.child_text("fifths");
      if (fifths_text.empty()) {
        warn(where + "/key", "non-traditional key signature not imported");
        continue;
      }
      const int fifths = int_or(fifths_text, 0);
      for (int staff : target_staves(c)) {
        const int old = fifths_[staff];
        fifths_[staff] = fifths;
        if (hidden(c)) continue;
        const Clef& clef = clef_for(staff, where + "/key");
        Node n = make_node(ids_, NodeKind::Key);
        // cancel the accidentals the new signature drops
        const auto old_steps = key_steps(old, clef);
        const bool flip = (old > 0 && fifths < 0) || (old < 0 && fifths > 0);
        const std::size_t kept = flip ? 0 : static_cast<std::size_t>(std::min(std::abs(old), std::abs(fifths)));
        for (std::size_t i = kept; i < old_steps.size(); ++i) {
          n.children.emplace_back(make_token(ids_, "accidental_natural", staff, old_steps[i]));
        }
        const char* label = fifths > 0 ? "accidental_sharp" : "accidental_flat";
        for (int s : key_steps(fifths, clef)) n.children.emplace_back(make_token(ids_, label, staff, s));
        if (!n.children.empty()) keys[staff] = std::move(n);
      }
    }
    for (const auto& c : attrs.children) {
      if (c.name != "time") continue;
      if (c.child("senza-misura")) {
        warn(where + "/time", "senza-misura not imported");
        continue;
      }
      if (hidden(c)) continue;
      const std::string symbol = attr_or(c, "symbol");
      for (int staff : target_staves(c)) {
        Node n = make_node(ids_, NodeKind::TimeSig);
        if (symbol == "common" || symbol == "cut") {
          n.children.emplace_back(make_token(ids_, "timesig_" + symbol, staff));
        } else {
          const auto beats = c.children_named("beats");
          const auto types = c.children_named("beat-type");
          for (std::size_t i = 0; i < beats.size() && i < types.size(); ++i) {
            int value = 0;
            const std::string text = xml::trim(beats[i]->text);
            if (auto v = to_int(text)) {
              value = static_cast<int>(*v);
            } else {
              std::size_t start = 0;
              while (start <= text.size()) {
                const std::size_t plus = std::min(text.find('+', start), text.size());
                value += int_or(text.substr(start, plus - start), 0);
                start = plus + 1;
              }
              warn(where + "/time", "compound beats '" + text + "' written as their sum");
            }
            Token upper = make_token(ids_, "timesig_number", staff, 8);
            upper.numeric_value = value;
            Token lower = make_token(ids_, "timesig_number", staff, 4);
            lower.numeric_value = int_or(xml::trim(types[i]->text), 4);
            n.children.emplace_back(std::move(upper));
            n.children.emplace_back(std::move(lower));
          }
        }
        if (!n.children.empty()) times[staff] = std::move(n);
      }
    }
    for (const auto& c : attrs.children) {
      if (c.name != "divisions" && c.name != "staves" && c.name != "clef" && c.name != "key" &&
          c.name != "time") {
        warn(where + "/" + c.name, "attribute not imported");
      }
    }
    Node node = make_node(ids_, NodeKind::Attributes, ctx_.cursor);
    for (int staff = 1; staff <= staff_count_; ++staff) {
      Node as = make_node(ids_, NodeKind::AttrStaff);
      as.staff = staff;
      for (auto* table : {&clefs, &keys, &times}) {
        auto it = table->find(staff);
        if (it != table->end()) as.children.emplace_back(std::move(it->second));
      }
      if (!as.children.empty()) node.children.emplace_back(std::move(as));
    }
    if (!node.children.empty()) top_.push_back(std::move(node));
  }

  // ---- notes ------------------------------------------------------------

  void note(const Element& n, const std::string& where) {
    const bool is_chord = n.child("chord") != nullptr && last_chord_.has_value();
    const bool grace = n.child("grace") != nullptr;
    const bool cue = n.child("cue") != nullptr;
    const int staff = read_staff(n);
    const std::int64_t duration = grace ? 0 : duration_of_element(n, where);
    RationalTime onset;
    if (is_chord) {
      onset = last_onset_;
    } else if (grace) {
      onset = ctx_.cursor;
    } else {
      onset = ctx_.resolve_onset(duration, where);
    }
    if (hidden(n)) {
      warn(where, "invisible note not imported");
      return;
    }
    for (const auto* lyric : n.children_named("lyric")) {
      (void)lyric;
      warn(where + "/lyric", "lyrics not imported");
    }

    std::string type = n.child_text("type");
    int dots = static_cast<int>(n.children_named("dot").size());
    if (type.empty() && !grace && !(n.child("rest") && attr_or(*n.child("rest"), "measure") == "yes")) {
      RationalTime printed = ctx_.to_quarters(duration, where);
      if (const Element* tm = n.child("time-modification")) {
        printed *= RationalTime(std::max<std::int64_t>(1, int_or(tm->child_text("actual-notes"), 1)),
                                std::max<std::int64_t>(1, int_or(tm->child_text("normal-notes"), 1)));
      }
      int inferred_dots = 0;
      if (!type_from_length(printed, type, inferred_dots)) {
        warn(where, "duration has no exact note type; nearest shorter type used");
      } else {
        warn(where, "note type missing; inferred from duration");
      }
      if (dots == 0) dots = inferred_dots;
    }
    if (type.empty()) type = "eighth";  // grace without type

    if (const Element* rest = n.child("rest")) {
      rest_note(n, *rest, where, onset, staff, type, dots);
      last_chord_.reset();
      return;
    }

    int step = 6;
    if (const Element* pitch = n.child("pitch")) {
      const std::string letter = pitch->child_text("step");
      try {
        step = pitch_to_step(letter.empty() ? '?' : letter[0], int_or(pitch->child_text("octave"), 4),
                             clef_for(staff, where));
      } catch (const ConversionError& e) {
        throw ConversionError(where + "/pitch", e.what());
      }
    } else if (const Element* unpitched = n.child("unpitched")) {
      const std::string letter = unpitched->child_text("display-step");
      if (letter.empty()) {
        warn(where + "/unpitched", "no display position; staff middle line used");
      } else {
        step = pitch_to_step(letter[0], int_or(unpitched->child_text("display-octave"), 4),
                             clef_for(staff, where));
      }
    } else {
      warn(where, "note without pitch; staff middle line used");
    }

    bool stemless = false;
    std::string shape = "black";
    if (type == "whole") {
      shape = "white";
      stemless = true;
    } else if (type == "half") {
      shape = "white";
    } else if (type == "breve" || type == "long" || type == "maxima") {
      shape = "breve";
      stemless = true;
      if (type != "breve") warn(where, "note type '" + type + "' drawn as a breve");
    }
    std::string head;
    if (grace || cue) {
      head = std::string(grace ? "notehead_grace_" : "notehead_cue_") + (shape == "black" ? "black" : "white");
    } else {
      head = "notehead_" + shape;
    }
    const std::string notehead_kind = n.child_text("notehead");
    if (!notehead_kind.empty() && notehead_kind != "normal") {
      warn(where + "/notehead", "notehead shape '" + notehead_kind + "' drawn as normal");
    }

    Node note = make_node(ids_, NodeKind::Note);
    note.children.emplace_back(make_token(ids_, head, staff, step));
    if (const Element* acc = n.child("accidental")) {
      static const std::map<std::string, std::string> kAccidentals{
          {"sharp", "accidental_sharp"},          {"flat", "accidental_flat"},
          {"natural", "accidental_natural"},      {"double-sharp", "accidental_double_sharp"},
          {"sharp-sharp", "accidental_double_sharp"}, {"flat-flat", "accidental_double_flat"},
          {"double-flat", "accidental_double_flat"}};
      const auto it = kAccidentals.find(xml::trim(acc->text));
      if (it == kAccidentals.end()) {
        warn(where + "/accidental", "accidental '" + xml::trim(acc->text) + "' not imported");
      } else {
        note.children.emplace_back(make_token(ids_, it->second, staff, step));
      }
    }
    const int dot_step = step % 2 == 0 ? step + 1 : step;
    for (int d = 0; d < dots; ++d) note.children.emplace_back(make_token(ids_, "dot", staff, dot_step));
    const std::string pitch_key = pitch_identity(n, staff);
    for (auto& t : notations(n, where, staff, onset, pitch_key)) note.children.emplace_back(std::move(t));

    if (is_chord) {
      PendingChord& pc = chords_[*last_chord_];
      pc.steps.push_back(step);
      pc.chord.children.emplace_back(std::move(note));
      return;
    }
    PendingChord pc;
    pc.chord = make_node(ids_, NodeKind::Chord, onset);
    pc.chord.children.emplace_back(std::move(note));
    pc.voice = n.child_text("voice");
    if (pc.voice.empty()) pc.voice = "1";
    pc.staff = staff;
    pc.flags = type_flags(type);
    pc.stem = n.child_text("stem");
    pc.stemless = stemless;
    pc.steps.push_back(step);
    static const std::map<std::string, BeamValue> kBeams{{"begin", BeamValue::Begin},
                                                         {"continue", BeamValue::Continue},
                                                         {"end", BeamValue::End},
                                                         {"forward hook", BeamValue::ForwardHook},
                                                         {"backward hook", BeamValue::BackwardHook}};
    for (const auto* beam : n.children_named("beam")) {
      const auto it = kBeams.find(xml::trim(beam->text));
      if (it == kBeams.end()) continue;
      pc.beams[std::max(1, int_or(attr_or(*beam, "number"), 1))] = it->second;
    }
    chords_.push_back(std::move(pc));
    last_chord_ = chords_.size() - 1;
    last_onset_ = onset;
  }

  static std::string pitch_identity(const Element& n, int staff) {
    if (const Element* p = n.child("pitch")) {
      return p->child_text("step") + p->child_text("alter") + "/" + p->child_text("octave");
    }
    return "staff" + std::to_string(staff);
  }

  void rest_note(const Element& n, const Element& rest, const std::string& where, RationalTime onset,
                 int staff, std::string type, int dots) {
    static const std::set<std::string> kRests{"maxima", "long", "breve", "whole", "half", "quarter",
                                              "eighth", "16th",  "32nd",  "64th",  "128th"};
    if (attr_or(rest, "measure") == "yes") {
      type = "whole";
      dots = 0;
    }
    if (!kRests.count(type)) {
      warn(where, "rest type '" + type + "' drawn as a 128th rest");
      type = "128th";
    }
    Node r = make_node(ids_, NodeKind::Rest, onset);
    r.children.emplace_back(make_token(ids_, "rest_" + type, staff));
    for (int d = 0; d < dots; ++d) r.children.emplace_back(make_token(ids_, "dot", staff, 7));
    for (auto& t : notations(n, where, staff, onset, "rest")) r.children.emplace_back(std::move(t));
    top_.push_back(std::move(r));
  }

  struct SpanEvent {
    std::string family;  // slur, tied, tuplet
    std::string key;
    bool start;
    int value = 0;
  };

  std::vector<Token> notations(const Element& n, const std::string& where, int staff, RationalTime onset,
                               const std::string& pitch_key) {
    std::vector<Token> out;
    std::vector<SpanEvent> spans;
    int counter = 0;
    for (const auto* notations : n.children_named("notations")) {
      const std::string base = where + "/notations[" + std::to_string(++counter) + "]";
      for (const auto& c : notations->children) {
        const std::string at = base + "/" + c.name;
        const std::string type = attr_or(c, "type");
        const std::string number = attr_or(c, "number", "1");
        if (c.name == "tied" || c.name == "slur" || c.name == "tuplet") {
          if (type != "start" && type != "stop") {
            if (type != "continue") warn(at, "spanner type '" + type + "' not imported");
            continue;
          }
          SpanEvent ev;
          ev.family = c.name;
          ev.key = c.name + ":" + (c.name == "tied" ? pitch_key + ":" : "") + number;
          ev.start = type == "start";
          if (c.name == "tuplet" && ev.start) {
            int actual = 0;
            if (const Element* ta = c.child("tuplet-actual")) actual = int_or(ta->child_text("tuplet-number"), 0);
            if (actual <= 0) {
              if (const Element* tm = n.child("time-modification")) actual = int_or(tm->child_text("actual-notes"), 0);
            }
            ev.value = actual > 0 ? actual : 3;
          }
          spans.push_back(std::move(ev));
        } else if (c.name == "articulations") {
          for (const auto& a : c.children) {
            if (a.name == "staccato" || a.name == "accent" || a.name == "tenuto" || a.name == "caesura") {
              out.push_back(make_token(ids_, a.name, staff));
            } else {
              warn(at + "/" + a.name, "articulation not imported");
            }
          }
        } else if (c.name == "fermata") {
          out.push_back(make_token(ids_, "fermata", staff));
        } else if (c.name == "arpeggiate") {
          out.push_back(make_token(ids_, "arpeggiate", staff));
        } else if (c.name == "ornaments") {
          for (const auto& o : c.children) {
            if (o.name == "trill-mark") {
              out.push_back(make_token(ids_, "trill", staff));
            } else if (o.name == "turn") {
              out.push_back(make_token(ids_, "turn", staff));
            } else if (o.name == "wavy-line") {
              if (attr_or(o, "type") == "start") out.push_back(make_token(ids_, "wavy_line", staff));
            } else {
              warn(at + "/" + o.name, "ornament not imported");
            }
          }
        } else if (c.name == "dynamics") {
          dynamics(c, at, staff, onset);
        } else {
          warn(at, "notation not imported");
        }
      }
    }
    // stops first, so a note may close and reopen the same number
    for (int pass = 0; pass < 2; ++pass) {
      for (const auto& ev : spans) {
        if (ev.start != (pass == 1)) continue;
        Token t = make_token(ids_, ev.family + (ev.start ? "_start" : "_stop"), staff);
        if (ev.start) {
          t.pair_id = spanners_.start(ev.key, t.id, ids_, warnings_, where);
          if (ev.family == "tuplet") t.numeric_value = ev.value;
        } else {
          auto end = spanners_.stop(ev.key, ids_, warnings_, where);
          t.pair_id = end.pair_id;
          t.orphan = end.orphan;
        }
        out.push_back(std::move(t));
      }
    }
    return out;
  }

  // ---- directions and barlines ------------------------------------------

  void add_direction(Token t, RationalTime onset) {
    Node d = make_node(ids_, NodeKind::Direction, onset);
    d.children.emplace_back(std::move(t));
    top_.push_back(std::move(d));
  }

  void dynamics(const Element& dyn, const std::string& where, int staff, RationalTime onset) {
    for (const auto& mark : dyn.children) {
      const std::string label = "dyn_" + mark.name;
      if (mark.name == "other-dynamics" || !Vocabulary::standard().contains(label)) {
        warn(where + "/" + mark.name, "dynamic not imported");
        continue;
      }
      add_direction(make_token(ids_, label, staff), onset);
    }
  }

  void direction(const Element& dir, const std::string& where) {
    const int staff = read_staff(dir);
    RationalTime onset = ctx_.cursor;
    if (const Element* offset = dir.child("offset")) {
      const auto v = to_int(xml::trim(offset->text));
      if (v) onset += ctx_.to_quarters(*v, where);
      if (onset < RationalTime(0)) {
        warn(where + "/offset", "offset before the measure start; clamped to 0");
        onset = 0;
      }
    }
    int counter = 0;
    for (const auto* type : dir.children_named("direction-type")) {
      const std::string base = where + "/direction-type[" + std::to_string(++counter) + "]";
      for (const auto& c : type->children) {
        const std::string at = base + "/" + c.name;
        if (c.name == "dynamics") {
          dynamics(c, at, staff, onset);
        } else if (c.name == "wedge") {
          const std::string kind = attr_or(c, "type");
          const std::string key = "wedge:" + attr_or(c, "number", "1");
          if (kind == "crescendo" || kind == "diminuendo") {
            Token t = make_token(ids_, "wedge_" + kind, staff);
            t.pair_id = spanners_.start(key, t.id, ids_, warnings_, at);
            add_direction(std::move(t), onset);
          } else if (kind == "stop") {
            Token t = make_token(ids_, "wedge_stop", staff);
            auto end = spanners_.stop(key, ids_, warnings_, at);
            t.pair_id = end.pair_id;
            t.orphan = end.orphan;
            add_direction(std::move(t), onset);
          } else if (kind != "continue") {
            warn(at, "wedge type '" + kind + "' not imported");
          }
        } else if (c.name == "segno" || c.name == "coda") {
          add_direction(make_token(ids_, c.name, staff), onset);
        } else {
          warn(at, "direction not imported");
        }
      }
    }
  }

  void barline(const Element& bar, const std::string& where) {
    const std::string location = attr_or(bar, "location", "right");
    std::vector<Token> tokens;
    const Element* repeat = bar.child("repeat");
    const std::string style = bar.child_text("bar-style");
    if (repeat) {
      const std::string dir = attr_or(*repeat, "direction");
      tokens.push_back(make_token(ids_, dir == "forward" ? "repeat_forward" : "repeat_backward", 1));
    } else if (style == "light-heavy" || style == "heavy-light" || style == "heavy-heavy" || style == "heavy") {
      tokens.push_back(make_token(ids_, "barline_tok_heavy", 1));
    } else if (style.empty() || style == "regular" || style == "light-light") {
      tokens.push_back(make_token(ids_, "barline_tok_regular", 1));
    } else if (style != "none") {
      warn(where + "/bar-style", "bar style '" + style + "' drawn as regular");
      tokens.push_back(make_token(ids_, "barline_tok_regular", 1));
    }
    for (const auto& c : bar.children) {
      if (c.name == "fermata") {
        tokens.push_back(make_token(ids_, "fermata", 1));
      } else if (c.name != "bar-style" && c.name != "repeat") {
        warn(where + "/" + c.name, "barline element not imported");
      }
    }
    if (tokens.empty()) return;
    Node b = make_node(ids_, NodeKind::Barline);
    for (auto& t : tokens) b.children.emplace_back(std::move(t));
    if (location == "left") {
      b.onset = RationalTime(0);
    } else if (location == "middle") {
      b.onset = ctx_.cursor;
    } else {
      b.onset = ctx_.cursor;
      right_barlines_.push_back(top_.size());
    }
    top_.push_back(std::move(b));
  }

  // ---- grouping ---------------------------------------------------------

  void finish_stem(PendingChord& pc) {
    std::string dir = pc.stem;
    if (dir == "none" || pc.stemless) return;
    if (dir != "up" && dir != "down") {
      if (!dir.empty()) warnings_.push_back({path_ + "/" + pc.chord.id, "stem '" + dir + "' inferred instead"});
      int far = pc.steps.front();
      for (int s : pc.steps) {
        if (std::abs(s - 6) > std::abs(far - 6)) far = s;
      }
      dir = far < 6 ? "up" : "down";
    }
    Node stem = make_node(ids_, NodeKind::Stem);
    stem.children.emplace_back(make_token(ids_, "stem_" + dir, pc.staff));
    pc.chord.children.insert(pc.chord.children.begin(), std::move(stem));
  }

  void group_voices() {
    std::vector<std::string> order;
    std::map<std::string, std::vector<BeamedChord>> voices;
    for (auto& pc : chords_) {
      finish_stem(pc);
      if (!voices.count(pc.voice)) order.push_back(pc.voice);
      voices[pc.voice].push_back({std::move(pc.chord), std::move(pc.beams), pc.flags, pc.staff});
    }
    for (const auto& v : order) {
      for (auto& g : build_groups(std::move(voices[v]), ids_, warnings_, path_)) top_.push_back(std::move(g));
    }
    chords_.clear();
  }

  const PartRef& ref_;
  IdSource& ids_;
  Warnings& warnings_;
  std::set<std::string>& measure_ids_;
  std::string path_;
  ConversionContext ctx_;
  std::map<int, Clef> clefs_;
  std::map<int, int> fifths_;
  int staff_count_ = 1;
  SpannerTable spanners_;
  bool new_line_ = false;
  bool new_page_ = false;
  std::vector<Node> top_;
  std::vector<PendingChord> chords_;
  std::vector<std::size_t> right_barlines_;
  std::optional<std::size_t> last_chord_;
  RationalTime last_onset_;
};

std::vector<PartRef> collect_parts(const Element& root) {
  std::vector<std::string> order;
  if (const Element* list = root.child("part-list")) {
    for (const auto* sp : list->children_named("score-part")) order.push_back(attr_or(*sp, "id"));
  }
  std::map<std::string, PartRef> parts;
  auto part = [&](const std::string& id) -> PartRef& {
    if (!parts.count(id) && std::find(order.begin(), order.end(), id) == order.end()) order.push_back(id);
    PartRef& p = parts[id];
    p.id = id;
    return p;
  };
  if (root.name == "score-partwise") {
    for (const auto* p : root.children_named("part")) {
      PartRef& ref = part(attr_or(*p, "id", "P1"));
      for (const auto* m : p->children_named("measure")) ref.measures.push_back({m, m});
    }
  } else if (root.name == "score-timewise") {
    for (const auto* m : root.children_named("measure")) {
      for (const auto* p : m->children_named("part")) part(attr_or(*p, "id", "P1")).measures.push_back({m, p});
    }
  } else {
    throw ConversionError(root.name, "not a score-partwise or score-timewise document");
  }
  std::vector<PartRef> out;
  for (const auto& id : order) {
    auto it = parts.find(id);
    if (it != parts.end()) out.push_back(std::move(it->second));
  }
  return out;
}

std::string title_of(const Element& root) {
  if (const Element* work = root.child("work")) {
    std::string t = work->child_text("work-title");
    if (!t.empty()) return t;
  }
  return root.child_text("movement-title");
}

}  // namespace

Conversion convert_score(std::string_view bytes, const ConvertOptions& options) {
  Element root;
  try {
    root = xml::parse(bytes);
  } catch (const xml::SyntaxError& e) {
    throw ConversionError("document", e.what());
  }
  Conversion out;
  out.work.work_id = options.work_id.empty() ? title_of(root) : options.work_id;
  if (out.work.work_id.empty()) out.work.work_id = "work";
  IdSource ids;
  std::set<std::string> measure_ids;
  for (const auto& ref : collect_parts(root)) {
    PartConverter conv(ref, ids, out.warnings, measure_ids);
    out.work.parts.push_back(conv.run(out.line_starts, out.page_starts, out.implicit_measures));
  }
  out.work = canonicalize(std::move(out.work));
  if (options.inject_line_starts) out.work = inject_line_starts(std::move(out.work), out.line_starts);
  const auto violations = validate(out.work);
  if (!violations.empty()) {
    const auto& v = violations.front();
    throw ConversionError(v.subject, "converted work is invalid: " + v.rule + ": " + v.message);
  }
  return out;
}

}  // namespace mtn::musicxml
