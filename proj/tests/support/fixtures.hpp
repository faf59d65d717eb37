#pragma once

#include "builders.hpp"
#include "mtn/canonical.hpp"

namespace mtn::testing {

/// measure -> rest -> rest_quarter (3 nodes)
inline Measure single_rest_measure() {
  return canonicalize(measure("m1", {rest("r1", 0, "rest_quarter")}));
}

/// measure -> {rest -> rest_quarter, barline -> barline_tok_regular} (5 nodes)
inline Measure five_node_measure() {
  return canonicalize(measure("m1", {rest("r1", 0, "rest_quarter"), barline("b1", 1)}));
}

/// Treble clef, one-sharp key, 4/4, then a quarter and two beamed eighths.
inline Measure attributes_and_group_measure(const std::string& prefix = "") {
  auto p = [&](const char* s) { return prefix + s; };
  Node attrs = node(NodeKind::Attributes, p("a1"), RationalTime(0),
                    {attr_staff(p("as1"), 1,
                                {node(NodeKind::Clef, p("c1"), std::nullopt,
                                      {tok(p("t1"), "clef_G", 1, 4)}),
                                 node(NodeKind::Key, p("k1"), std::nullopt,
                                      {tok(p("t2"), "accidental_sharp", 1, 10)}),
                                 node(NodeKind::TimeSig, p("ts1"), std::nullopt,
                                      {numeric(p("t3"), "timesig_number", 4, 1, 8),
                                       numeric(p("t4"), "timesig_number", 4, 1, 4)})})});
  Node quarter = group(p("g1"), RationalTime(0),
                       {chord(p("ch1"), 0, "stem_up", {note(p("n1"), "notehead_black", 1, 4)})});
  Node eighths = group(p("g2"), RationalTime(1),
                       {tok(p("bm1"), "beam"),
                        chord(p("ch2"), 1, "stem_down", {note(p("n2"), "notehead_black", 1, 7)}),
                        chord(p("ch3"), RationalTime(3, 2), "stem_down",
                              {note(p("n3"), "notehead_black", 1, 8)})});
  return canonicalize(measure(p("m1"), {eighths, quarter, attrs}));
}

/// Two beamed eighths: 2 noteheads, 2 stems, 1 beam.
inline Measure beamed_eighths_measure() {
  return canonicalize(measure(
      "m1", {group("g1", RationalTime(0),
                   {tok("bm", "beam"),
                    chord("c1", 0, "stem_up", {note("n1", "notehead_black", 1, 4)}),
                    chord("c2", RationalTime(1, 2), "stem_up", {note("n2", "notehead_black", 1, 5)})})}));
}

}  // namespace mtn::testing
