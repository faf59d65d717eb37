#pragma once

#include <random>
#include <string>
#include <vector>

#include "builders.hpp"
#include "mtn/canonical.hpp"
#include "mtn/tree.hpp"

namespace mtn::testing {

/// Random ordered tree with `size` nodes over a small alphabet; nodes are
/// appended on the rightmost path so storage stays in pre-order.
inline LabeledTree random_tree(std::mt19937& rng, int size, int alphabet = 3) {
  LabeledTree t;
  if (size <= 0) return t;
  std::uniform_int_distribution<int> letter(0, alphabet - 1);
  auto label = [&] { return std::string(1, static_cast<char>('a' + letter(rng))); };
  std::vector<int> path{t.add(label(), -1)};
  for (int i = 1; i < size; ++i) {
    std::uniform_int_distribution<std::size_t> depth(0, path.size() - 1);
    path.resize(depth(rng) + 1);
    path.push_back(t.add(label(), path.back()));
  }
  return t;
}

/// Generates structurally valid random works.
class WorkGenerator {
 public:
  explicit WorkGenerator(unsigned seed) : rng_(seed) {}

  Work work(int measures = 3) {
    Work w;
    w.work_id = "rw" + std::to_string(serial_++);
    Part p;
    p.id = "P1";
    p.staff_count = pick(1, 3);
    staves_ = p.staff_count;
    for (int i = 0; i < measures; ++i) p.measures.push_back(measure(i));
    w.parts.push_back(std::move(p));
    add_spanners(w);
    for (auto& m : w.parts.front().measures) m = canonicalize(std::move(m));
    return w;
  }

 private:
  int pick(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }
  bool chance(double p) { return std::bernoulli_distribution(p)(rng_); }
  std::string id(const char* prefix) { return prefix + std::to_string(next_id_++); }
  RationalTime onset() {
    const int den = chance(0.3) ? 3 : 2;
    return RationalTime(pick(0, 4 * den - 1), den);
  }

  Measure measure(int index) {
    Measure m;
    m.id = id("m");
    m.line_start = index == 0 || chance(0.2);
    if (index == 0 || chance(0.3)) m.children.push_back(attributes());
    const int events = pick(0, 5);
    for (int e = 0; e < events; ++e) {
      const int what = pick(0, 9);
      if (what < 2) {
        m.children.push_back(rest(id("r"), onset(), chance(0.5) ? "rest_quarter" : "rest_eighth",
                                  pick(1, staves_)));
      } else if (what < 3) {
        static const char* dyns[] = {"dyn_p", "dyn_f", "dyn_mf", "segno"};
        m.children.push_back(node(NodeKind::Direction, id("d"), onset(),
                                  {tok(id("t"), dyns[pick(0, 3)], pick(1, staves_))}));
      } else {
        m.children.push_back(note_group(onset(), 0));
      }
    }
    if (chance(0.3)) m.children.push_back(barline(id("b"), 4, chance(0.5) ? "barline_tok_regular" : "barline_tok_heavy"));
    return m;
  }

  Node attributes() {
    std::vector<Element> staves;
    for (int s = 1; s <= staves_; ++s) {
      if (s > 1 && chance(0.5)) continue;
      std::vector<Element> kids;
      kids.emplace_back(node(NodeKind::Clef, id("c"), std::nullopt,
                             {tok(id("t"), chance(0.5) ? "clef_G" : "clef_F", s, chance(0.5) ? 4 : 8)}));
      if (chance(0.5)) {
        std::vector<Element> accs;
        for (int k = 0, n = pick(1, 3); k < n; ++k) {
          accs.emplace_back(tok(id("t"), "accidental_sharp", s, pick(4, 10)));
        }
        kids.emplace_back(node(NodeKind::Key, id("k"), std::nullopt, std::move(accs)));
      }
      if (chance(0.4)) {
        kids.emplace_back(node(NodeKind::TimeSig, id("ts"), std::nullopt,
                               {numeric(id("t"), "timesig_number", pick(2, 6), s, 8),
                                numeric(id("t"), "timesig_number", 4, s, 4)}));
      }
      staves.emplace_back(attr_staff(id("as"), s, std::move(kids)));
    }
    return node(NodeKind::Attributes, id("a"), RationalTime(0), std::move(staves));
  }

  Node note_group(RationalTime start, int depth) {
    std::vector<Element> kids;
    const bool beamed = chance(0.5);
    if (beamed) kids.emplace_back(tok(id("t"), "beam", pick(1, staves_)));
    RationalTime t = start;
    for (int c = 0, n = beamed ? pick(1, 3) : 1; c < n; ++c) {
      if (depth == 0 && beamed && chance(0.2)) {
        kids.emplace_back(note_group(t, depth + 1));
      } else {
        kids.emplace_back(make_chord(t));
      }
      t += RationalTime(1, 2);
    }
    return group(id("g"), depth == 0 ? std::optional<RationalTime>(start) : std::nullopt,
                 std::move(kids));
  }

  Node make_chord(RationalTime t) {
    std::vector<Node> notes;
    static const char* heads[] = {"notehead_black", "notehead_white", "notehead_grace_black"};
    const std::string head = heads[pick(0, 2)];
    for (int k = 0, n = pick(1, 2); k < n; ++k) {
      const int staff = pick(1, staves_);
      const int step = pick(-2, 14);
      std::vector<Token> mods;
      if (chance(0.2)) mods.push_back(tok(id("t"), "accidental_flat", staff, step));
      if (chance(0.2)) mods.push_back(tok(id("t"), "dot", staff, step | 1));
      if (chance(0.2)) mods.push_back(tok(id("t"), "staccato", staff));
      notes.push_back(note(id("n"), head, staff, step, std::move(mods)));
    }
    std::optional<std::string> stem;
    if (chance(0.8)) stem = chance(0.5) ? "stem_up" : "stem_down";
    return chord(id("ch"), t, stem, std::move(notes), stem && chance(0.3) ? 1 : 0);
  }

  // Attach slurs, ties and wedges between random elements, across measures.
  void add_spanners(Work& w) {
    std::vector<Node*> notes;
    std::vector<Measure*> measures;
    for (auto& m : w.parts.front().measures) {
      measures.push_back(&m);
      for (auto& top : m.children) collect_notes(top, notes);
    }
    for (std::size_t i = 0; i + 1 < notes.size(); ++i) {
      if (!chance(0.3)) continue;
      const std::size_t j = static_cast<std::size_t>(pick(static_cast<int>(i) + 1,
                                                          static_cast<int>(notes.size()) - 1));
      const bool tie = chance(0.3);
      const std::string pair = id("p");
      notes[i]->children.emplace_back(paired(id("t"), tie ? "tied_start" : "slur_start", pair));
      notes[j]->children.emplace_back(paired(id("t"), tie ? "tied_stop" : "slur_stop", pair));
    }
    if (!notes.empty() && chance(0.3)) {
      Token orphan = paired(id("t"), "slur_stop", id("p"));
      orphan.orphan = true;
      notes.front()->children.emplace_back(orphan);
    }
    if (measures.size() >= 2 && chance(0.5)) {
      const std::string pair = id("p");
      measures.front()->children.push_back(node(NodeKind::Direction, id("d"), RationalTime(1),
                                                {paired(id("t"), "wedge_crescendo", pair)}));
      measures.back()->children.push_back(node(NodeKind::Direction, id("d"), RationalTime(2),
                                               {paired(id("t"), "wedge_stop", pair)}));
    }
  }

  static void collect_notes(Node& n, std::vector<Node*>& out) {
    if (n.kind == NodeKind::Note) out.push_back(&n);
    for (auto& c : n.children) {
      if (auto* sub = std::get_if<Node>(&c)) collect_notes(*sub, out);
    }
  }

  std::mt19937 rng_;
  int serial_ = 0;
  int next_id_ = 0;
  int staves_ = 1;
};

}  // namespace mtn::testing
