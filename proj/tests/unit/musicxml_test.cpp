#include <doctest.h>

#include <fstream>
#include <sstream>

#include "mtn/canonical.hpp"
#include "mtn/io/mtn_xml.hpp"
#include "mtn/musicxml/convert.hpp"
#include "mtn/musicxml/grouping.hpp"
#include "mtn/musicxml/notation.hpp"
#include "mtn/validate.hpp"
#include "support/builders.hpp"

using namespace mtn;
using namespace mtn::musicxml;

namespace {

std::string fixture(const std::string& name) {
  std::ifstream in(std::string(MTN_SOURCE_DIR) + "/tests/fixtures/musicxml/" + name);
  REQUIRE(in);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string partwise(const std::string& measures) {
  return "<?xml version=\"1.0\"?><score-partwise version=\"3.1\">"
         "<part-list><score-part id=\"P1\"/></part-list><part id=\"P1\">" +
         measures + "</part></score-partwise>";
}

const char* kAttrs =
    "<attributes><divisions>2</divisions><key><fifths>0</fifths></key>"
    "<time><beats>2</beats><beat-type>4</beat-type></time>"
    "<clef><sign>G</sign><line>2</line></clef></attributes>";

std::string quarter(const char* step, int octave) {
  return std::string("<note><pitch><step>") + step + "</step><octave>" + std::to_string(octave) +
         "</octave></pitch><duration>2</duration><voice>1</voice><type>quarter</type></note>";
}

std::vector<RationalTime> chord_onsets(const Measure& m) {
  std::vector<RationalTime> out;
  for (const auto& n : m.children) {
    for_each_node(n, [&](const Node& sub) {
      if (sub.kind == NodeKind::Chord) out.push_back(*sub.onset);
    });
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::size_t count_label(const Work& w, const std::string& label) {
  std::size_t n = 0;
  for (const auto& p : w.parts) {
    for (const auto& m : p.measures) {
      for_each_token(m, [&](const Token& t) { n += t.label == label; });
    }
  }
  return n;
}

Node bare_chord(const std::string& id, RationalTime onset) {
  return testing::chord(id, onset, "stem_up", {testing::note(id + "n", "notehead_black", 1, 4)});
}

std::size_t beams_in(const Node& g) {
  std::size_t n = 0;
  for (const auto& c : g.children) {
    if (const auto* t = std::get_if<Token>(&c)) n += t->label == "beam";
  }
  return n;
}

std::vector<const Node*> subgroups(const Node& g) {
  std::vector<const Node*> out;
  for (const auto& c : g.children) {
    const auto* n = std::get_if<Node>(&c);
    if (n && n->kind == NodeKind::NoteGroup) out.push_back(n);
  }
  return out;
}

}  // namespace

TEST_CASE("pitch to staff step") {
  const Clef treble{"G", 2, 0};
  const Clef bass{"F", 4, 0};
  const Clef alto{"C", 3, 0};
  CHECK(pitch_to_step('C', 4, treble) == 0);
  CHECK(pitch_to_step('E', 4, treble) == 2);
  CHECK(pitch_to_step('F', 5, treble) == 10);
  CHECK(pitch_to_step('A', 3, bass) == 10);
  CHECK(pitch_to_step('G', 2, bass) == 2);
  CHECK(pitch_to_step('E', 2, bass) == 0);
  CHECK(pitch_to_step('C', 4, alto) == 6);
  CHECK(pitch_to_step('D', 3, alto) == 0);
  CHECK(pitch_to_step('C', 5, Clef{"G", 2, -1}) == 7 + 7);
  CHECK_THROWS_AS(pitch_to_step('C', 4, Clef{"X", 2, 0}), ConversionError);
}

TEST_CASE("clef tokens and key signatures") {
  CHECK(clef_label(Clef{"G", 2, 0}) == "clef_G");
  CHECK(clef_label(Clef{"percussion", 3, 0}).empty());
  CHECK(clef_step(Clef{"G", 2, 0}) == 4);
  CHECK(clef_step(Clef{"F", 4, 0}) == 8);
  CHECK(key_steps(2, Clef{"G", 2, 0}) == std::vector<int>{10, 7});
  CHECK(key_steps(-1, Clef{"G", 2, 0}) == std::vector<int>{6});
  CHECK(key_steps(2, Clef{"F", 4, 0}) == std::vector<int>{8, 5});
  CHECK(key_steps(0, Clef{"G", 2, 0}).empty());
  for (int f = -7; f <= 7; ++f) {
    for (const int s : key_steps(f, Clef{"C", 3, 0})) {
      CHECK(s >= 1);
      CHECK(s <= 11);
    }
  }
}

TEST_CASE("onset resolution in divisions") {
  ConversionContext ctx;
  ctx.divisions = 480;
  CHECK(ctx.resolve_onset(480, "p") == RationalTime(0));
  CHECK(ctx.cursor == RationalTime(1));

  ConversionContext triplets;
  triplets.divisions = 24;
  triplets.resolve_onset(8, "p");
  triplets.resolve_onset(8, "p");
  CHECK(triplets.resolve_onset(8, "p") == RationalTime(2, 3));
  CHECK(triplets.to_quarters(16, "p") == RationalTime(2, 3));
  triplets.backup(24, "p");
  CHECK(triplets.cursor == RationalTime(0));
  CHECK(triplets.measure_end == RationalTime(1));
  CHECK_THROWS_AS(triplets.backup(1, "p"), ConversionError);

  ConversionContext unset;
  CHECK_THROWS_AS(unset.to_quarters(1, "p"), ConversionError);
}

TEST_CASE("beam levels become nested groups") {
  IdSource ids;
  Warnings warnings;
  std::vector<BeamedChord> chords;
  const std::vector<std::map<int, BeamValue>> beams = {
      {{1, BeamValue::Begin}, {2, BeamValue::Begin}},
      {{1, BeamValue::Continue}, {2, BeamValue::End}},
      {{1, BeamValue::Continue}, {2, BeamValue::Begin}},
      {{1, BeamValue::End}, {2, BeamValue::End}}};
  for (std::size_t i = 0; i < beams.size(); ++i) {
    chords.push_back({bare_chord("c" + std::to_string(i), RationalTime(i, 4)), beams[i], 2, 1});
  }
  const auto groups = build_groups(chords, ids, warnings, "m1");
  CHECK(warnings.empty());
  REQUIRE(groups.size() == 1);
  CHECK(beams_in(groups[0]) == 1);
  const auto inner = subgroups(groups[0]);
  REQUIRE(inner.size() == 2);
  for (const Node* g : inner) {
    CHECK(beams_in(*g) == 1);
    CHECK(g->children.size() == 3);
  }
  std::size_t flags = 0;
  for_each_token(groups[0], [&](const Token& t) { flags += t.label == "flag"; });
  CHECK(flags == 0);
}

TEST_CASE("unbeamed chords are flagged singletons") {
  IdSource ids;
  Warnings warnings;
  std::vector<BeamedChord> chords = {{bare_chord("q", RationalTime(0)), {}, 0, 1},
                                     {bare_chord("e", RationalTime(1)), {}, 1, 1}};
  const auto groups = build_groups(chords, ids, warnings, "m1");
  REQUIRE(groups.size() == 2);
  CHECK(beams_in(groups[0]) == 0);
  CHECK(groups[0].onset == RationalTime(0));
  std::size_t flags = 0;
  for_each_token(groups[1], [&](const Token& t) { flags += t.label == "flag"; });
  CHECK(flags == 1);
}

TEST_CASE("eighth pair shares one beam") {
  IdSource ids;
  Warnings warnings;
  std::vector<BeamedChord> chords = {
      {bare_chord("a", RationalTime(0)), {{1, BeamValue::Begin}}, 1, 1},
      {bare_chord("b", RationalTime(1, 2)), {{1, BeamValue::End}}, 1, 1}};
  const auto groups = build_groups(chords, ids, warnings, "m1");
  REQUIRE(groups.size() == 1);
  CHECK(beams_in(groups[0]) == 1);
  CHECK(subgroups(groups[0]).empty());
}

TEST_CASE("dangling beam values are dropped with a warning") {
  IdSource ids;
  Warnings warnings;
  std::vector<BeamedChord> chords = {{bare_chord("a", RationalTime(0)), {{1, BeamValue::End}}, 1, 1}};
  const auto groups = build_groups(chords, ids, warnings, "m1");
  CHECK(groups.size() == 1);
  CHECK(beams_in(groups[0]) == 0);
  CHECK_FALSE(warnings.empty());
}

TEST_CASE("spanner table pairing") {
  IdSource ids;
  Warnings warnings;
  SpannerTable table;
  const auto outer = table.start("slur/1", "t1", ids, warnings, "a");
  const auto inner = table.start("slur/2", "t2", ids, warnings, "b");
  CHECK(outer != inner);
  CHECK(table.stop("slur/2", ids, warnings, "c").pair_id == inner);
  CHECK(table.stop("slur/1", ids, warnings, "d").pair_id == outer);
  CHECK(table.empty());
  CHECK(warnings.empty());

  const auto orphan = table.stop("slur/1", ids, warnings, "e");
  CHECK(orphan.orphan);
  CHECK(orphan.pair_id != outer);
  CHECK(warnings.size() == 1);

  table.start("tie/C4", "t9", ids, warnings, "f");
  CHECK(table.drain(warnings, "end") == std::vector<std::string>{"t9"});
  CHECK(table.empty());
}

TEST_CASE("treble C4 lands on the first ledger line") {
  const auto c = convert_score(fixture("single_c4.musicxml"));
  CHECK(c.work.work_id == "single-c4");
  std::vector<Token> heads;
  for_each_token(c.work.parts.at(0).measures.at(0), [&](const Token& t) {
    if (t.label == "notehead_black") heads.push_back(t);
  });
  REQUIRE(heads.size() == 1);
  CHECK(heads[0].position.step == 0);
  CHECK(c.warnings.empty());
}

TEST_CASE("voices resolve against backup and forward") {
  const auto c = convert_score(fixture("two_voices.musicxml"));
  const auto onsets = chord_onsets(c.work.parts.at(0).measures.at(0));
  const std::vector<RationalTime> expected = {RationalTime(0), RationalTime(1), RationalTime(3, 2),
                                              RationalTime(2), RationalTime(2)};
  CHECK(onsets == expected);
}

TEST_CASE("tuplet onsets stay exact") {
  const auto c = convert_score(fixture("tuplets.musicxml"));
  const auto onsets = chord_onsets(c.work.parts.at(0).measures.at(0));
  const std::vector<RationalTime> expected = {RationalTime(0),    RationalTime(1, 3),
                                              RationalTime(2, 3), RationalTime(1),
                                              RationalTime(5, 3), RationalTime(7, 3)};
  CHECK(onsets == expected);
  CHECK(count_label(c.work, "tuplet_start") == 2);
  CHECK(count_label(c.work, "tuplet_stop") == 2);
}

TEST_CASE("sixteenth runs nest inside the primary beam") {
  const auto c = convert_score(fixture("beams.musicxml"));
  const Measure& m1 = c.work.parts.at(0).measures.at(0);
  const Node* run = nullptr;
  for (const auto& n : m1.children) {
    if (n.kind == NodeKind::NoteGroup && n.onset == RationalTime(0)) run = &n;
  }
  REQUIRE(run);
  CHECK(beams_in(*run) == 1);
  const auto inner = subgroups(*run);
  REQUIRE(inner.size() == 2);
  CHECK(beams_in(*inner[0]) == 1);
  CHECK(beams_in(*inner[1]) == 1);
  CHECK(count_label(c.work, "notehead_black") == 9);
}

TEST_CASE("spanners pair across measures") {
  const auto c = convert_score(fixture("spanners.musicxml"));
  std::map<std::string, std::vector<std::string>> by_pair;
  for (const auto& m : c.work.parts.at(0).measures) {
    for_each_token(m, [&](const Token& t) {
      if (t.pair_id) by_pair[*t.pair_id].push_back(t.label);
    });
  }
  CHECK(by_pair.size() == 4);
  for (const auto& [id, labels] : by_pair) CHECK(labels.size() == 2);
  CHECK(count_label(c.work, "slur_start") == 2);
  CHECK(count_label(c.work, "dyn_p") == 1);
  CHECK(count_label(c.work, "dyn_f") == 1);
  CHECK(count_label(c.work, "fermata") == 1);
  CHECK(c.warnings.size() == 1);
}

TEST_CASE("timewise and partwise agree") {
  auto a = convert_score(fixture("single_c4.musicxml"));
  auto b = convert_score(fixture("timewise.musicxml"));
  CHECK(serialize_work(a.work) == serialize_work(b.work));
}

TEST_CASE("conversion is deterministic and a serialization fixed point") {
  for (const char* name : {"beams.musicxml", "piano.musicxml", "spanners.musicxml", "tuplets.musicxml",
                           "two_voices.musicxml", "whole_rest.musicxml"}) {
    CAPTURE(name);
    const std::string bytes = fixture(name);
    const auto first = convert_score(bytes);
    const auto second = convert_score(bytes);
    const std::string s = serialize_work(first.work);
    CHECK(s == serialize_work(second.work));
    CHECK(serialize_work(parse_work(s).work) == s);
    CHECK(validate(first.work).empty());
  }
}

TEST_CASE("piano system breaks restate clef and key") {
  const auto c = convert_score(fixture("piano.musicxml"));
  CHECK(c.line_starts == std::vector<std::string>{"P1-m1", "P1-m3"});
  const Measure* m3 = find_measure(c.work, "P1-m3");
  REQUIRE(m3);
  CHECK(m3->line_start);
  std::size_t synthetic = 0;
  for (const auto& n : m3->children) synthetic += n.synthetic;
  CHECK(synthetic == 1);
  const Measure* m1 = find_measure(c.work, "P1-m1");
  for (const auto& n : m1->children) CHECK_FALSE(n.synthetic);
}

TEST_CASE("line start injection") {
  const std::string four = std::string(kAttrs) + quarter("C", 5) + quarter("D", 5);
  std::string measures;
  for (int i = 1; i <= 6; ++i) {
    measures += "<measure number=\"" + std::to_string(i) + "\">" + (i == 1 ? four : quarter("C", 5) + quarter("D", 5)) +
                "</measure>";
  }
  ConvertOptions raw;
  raw.inject_line_starts = false;
  const Work plain = convert_score(partwise(measures), raw).work;

  CHECK(inject_line_starts(plain, {}) == plain);

  const std::vector<std::string> ids = {"P1-m1", "P1-m5"};
  const Work injected = inject_line_starts(plain, ids);
  CHECK(inject_line_starts(injected, ids) == injected);
  const Measure* m5 = find_measure(injected, "P1-m5");
  REQUIRE(m5);
  CHECK(m5->line_start);
  std::vector<std::string> labels;
  for_each_token(*m5, [&](const Token& t) { labels.push_back(t.label); });
  CHECK(std::count(labels.begin(), labels.end(), "clef_G") == 1);
  std::size_t clefs_m1 = 0;
  for_each_token(*find_measure(injected, "P1-m1"), [&](const Token& t) { clefs_m1 += t.label == "clef_G"; });
  CHECK(clefs_m1 == 1);
  CHECK(validate(injected).empty());

  const std::vector<std::string> bad = {"P1-m99"};
  CHECK_THROWS_AS(inject_line_starts(plain, bad), ConversionError);
}

TEST_CASE("conversion failures") {
  const std::string no_divisions = partwise("<measure number=\"1\">" + quarter("C", 4) + "</measure>");
  CHECK_THROWS_AS(convert_score(no_divisions), ConversionError);
  const std::string early_backup = partwise(std::string("<measure number=\"1\">") + kAttrs + quarter("C", 4) +
                                            "<backup><duration>4</duration></backup></measure>");
  CHECK_THROWS_AS(convert_score(early_backup), ConversionError);
  CHECK_THROWS_AS(convert_score("<not-a-score/>"), ConversionError);
  CHECK_THROWS_AS(convert_score("<score-partwise"), ConversionError);
}

TEST_CASE("every visible pitched note yields one notehead") {
  std::string measures = std::string("<measure number=\"1\">") + kAttrs + quarter("C", 4) + quarter("G", 4) +
                         "</measure><measure number=\"2\">" + quarter("A", 4) +
                         "<note><rest/><duration>2</duration><voice>1</voice><type>quarter</type></note>"
                         "</measure>";
  const auto c = convert_score(partwise(measures));
  CHECK(count_label(c.work, "notehead_black") == 3);
  CHECK(count_label(c.work, "rest_quarter") == 1);
}
