#include <doctest.h>

#include <algorithm>
#include <random>

#include "mtn/canonical.hpp"
#include "mtn/error.hpp"
#include "mtn/metrics/evaluation.hpp"
#include "mtn/metrics/ted.hpp"
#include "mtn/metrics/tier1.hpp"
#include "mtn/metrics/tier3.hpp"
#include "support/fixtures.hpp"
#include "support/generators.hpp"
#include "support/ted_oracle.hpp"

using namespace mtn;
using namespace mtn::metrics;
using namespace mtn::testing;

namespace {

std::int64_t unit_cost(const LabeledTree& a, const LabeledTree& b) {
  return tree_edit_distance(a, b, UnitCost{}).half_cost;
}

// Checks that a mapping is one-to-one and preserves ancestry and order.
bool valid_mapping(const EditScript& s, const LabeledTree& a, const LabeledTree& b) {
  auto is_anc = [](const LabeledTree& t, int x, int y) {
    for (int p = t[static_cast<std::size_t>(y)].parent; p >= 0; p = t[static_cast<std::size_t>(p)].parent) {
      if (p == x) return true;
    }
    return false;
  };
  for (std::size_t i = 0; i < s.mapping.size(); ++i) {
    for (std::size_t j = 0; j < s.mapping.size(); ++j) {
      if (i == j) continue;
      const auto [a1, b1] = s.mapping[i];
      const auto [a2, b2] = s.mapping[j];
      if (a1 == a2 || b1 == b2) return false;
      if (is_anc(a, a1, a2) != is_anc(b, b1, b2)) return false;
      if ((a1 < a2) != (b1 < b2)) return false;
    }
  }
  return true;
}

// Cost implied by a mapping, recomputed from scratch.
std::int64_t mapping_cost(const EditScript& s, const LabeledTree& a, const LabeledTree& b,
                          const CostModel& costs) {
  std::vector<bool> ma(a.size()), mb(b.size());
  std::int64_t total = 0;
  for (auto [x, y] : s.mapping) {
    ma[static_cast<std::size_t>(x)] = mb[static_cast<std::size_t>(y)] = true;
    total += costs.relabel(a[static_cast<std::size_t>(x)], b[static_cast<std::size_t>(y)]);
  }
  for (std::size_t i = 0; i < a.size(); ++i) if (!ma[i]) total += costs.remove(a[i]);
  for (std::size_t j = 0; j < b.size(); ++j) if (!mb[j]) total += costs.insert(b[j]);
  return total;
}

Measure relabel_first(Measure m, const std::string& from, const std::string& to) {
  bool done = false;
  for_each_token(m, [&](Token& t) {
    if (!done && t.label == from) {
      t.label = to;
      done = true;
    }
  });
  REQUIRE(done);
  return m;
}

}  // namespace

TEST_CASE("edit distance matches the exhaustive oracle on small trees") {
  std::mt19937 rng(42);
  std::uniform_int_distribution<int> size(0, 8);
  UnitCost unit;
  for (int i = 0; i < 600; ++i) {
    LabeledTree a = random_tree(rng, size(rng));
    LabeledTree b = random_tree(rng, size(rng));
    EditScript s = tree_edit_distance(a, b, unit);
    CHECK(s.half_cost == BruteForceTed(a, b, unit).half_cost());
    CHECK(valid_mapping(s, a, b));
    CHECK(mapping_cost(s, a, b, unit) == s.half_cost);
    CHECK(2 * static_cast<std::int64_t>(s.substitutions + s.deletions + s.insertions) == s.half_cost);
    EditScript back = tree_edit_distance(b, a, unit);
    std::vector<std::pair<int, int>> transposed;
    for (auto [x, y] : back.mapping) transposed.emplace_back(y, x);
    std::sort(transposed.begin(), transposed.end());
    CHECK(transposed == s.mapping);
    CHECK(back.deletions == s.insertions);
  }
}

TEST_CASE("edit distance is a metric under unit costs") {
  std::mt19937 rng(8);
  std::uniform_int_distribution<int> size(0, 9);
  for (int i = 0; i < 300; ++i) {
    LabeledTree a = random_tree(rng, size(rng), 4);
    LabeledTree b = random_tree(rng, size(rng), 4);
    LabeledTree c = random_tree(rng, size(rng), 4);
    const auto ab = unit_cost(a, b);
    CHECK(ab == unit_cost(b, a));
    CHECK(unit_cost(a, a) == 0);
    CHECK(unit_cost(a, c) <= ab + unit_cost(b, c));
    if (ab == 0) CHECK(a.preorder_labels() == b.preorder_labels());
  }
}

TEST_CASE("identical trees map onto themselves") {
  LabeledTree t = project_tree(attributes_and_group_measure(), ProjectionMode::Structural);
  EditScript s = tree_edit_distance(t, t, UnitCost{});
  CHECK(s.half_cost == 0);
  REQUIRE(s.mapping.size() == t.size());
  for (std::size_t i = 0; i < t.size(); ++i) {
    CHECK(s.mapping[i] == std::pair<int, int>(static_cast<int>(i), static_cast<int>(i)));
  }
}

TEST_CASE("root-only source costs one insertion per descendant") {
  LabeledTree b = project_tree(attributes_and_group_measure(), ProjectionMode::Structural);
  LabeledTree a;
  a.add("measure", -1);
  EditScript s = tree_edit_distance(a, b, UnitCost{});
  CHECK(s.cost() == Exact(static_cast<long>(b.size() - 1)));
  CHECK(s.insertions == b.size() - 1);
  CHECK(s.substitutions == 0);
  CHECK(s.deletions == 0);
}

TEST_CASE("a tie prefers substitution over delete plus insert") {
  LabeledTree a, b;
  a.add("x", a.add("r", -1));
  b.add("y", b.add("r", -1));
  EditScript s = tree_edit_distance(a, b, UnitCost{});
  CHECK(s.substitutions == 1);
  CHECK(s.deletions == 0);
  CHECK(s.insertions == 0);
  CHECK(describe(s, a, b).find("substitute") != std::string::npos);
}

TEST_CASE("TER boundaries") {
  Measure truth = five_node_measure();
  CHECK(ter(&truth, truth) == 0);
  CHECK(ter(nullptr, truth) == 1);

  Measure pred = relabel_first(truth, "rest_quarter", "rest_half");
  CHECK(ter(&pred, truth) == Exact(1, 5));
  CHECK(to_decimal(ter(&pred, truth), 3) == "0.200");

  WorkGenerator gen(31);
  for (int i = 0; i < 20; ++i) {
    const Work w = gen.work();
    for (const auto& m : w.parts.front().measures) {
      CHECK(ter(&m, m) == 0);
      CHECK(ter(nullptr, m) == 1);
    }
  }
}

TEST_CASE("semantic cost") {
  LabeledTree t;
  auto head = [&](int staff, int step, const std::string& label) {
    TreeNode n;
    n.label = label;
    n.note = SemanticNote{{staff, step}, 0, 1, false, label, "x"};
    return n;
  };
  CHECK(semantic_cost(head(1, 4, "notehead_black"), head(1, 4, "notehead_black")) == 0);
  CHECK(semantic_cost(head(1, 4, "notehead_black"), head(1, 5, "notehead_black")) == Exact(1, 2));
  CHECK(semantic_cost(head(1, 4, "notehead_black"), head(2, 4, "notehead_black")) == Exact(1, 2));
  CHECK(semantic_cost(head(1, 4, "notehead_black"), head(1, 4, "notehead_white")) == Exact(1, 2));
  CHECK(semantic_cost(head(1, 4, "notehead_black"), head(2, 5, "notehead_black")) == 1);
  CHECK(semantic_cost(head(1, 4, "notehead_black"), head(1, 5, "notehead_white")) == 1);
  TreeNode stem;
  stem.label = "stem_up";
  TreeNode other;
  other.label = "stem_down";
  CHECK(semantic_cost(stem, other) == 1);
  CHECK(semantic_cost(stem, stem) == 0);
}

TEST_CASE("a one-step pitch change costs one half in the semantic tree") {
  Measure truth = attributes_and_group_measure();
  Measure pred = truth;
  for_each_token(pred, [](Token& t) {
    if (t.id == "n2.h") t.position.step = *t.position.step + 1;
  });
  PairReport same = evaluate_pair(&truth, truth);
  PairReport moved = evaluate_pair(&pred, truth);
  CHECK(moved.semantic_half_cost - same.semantic_half_cost == 1);
  CHECK(moved.structural_half_cost == 0);
  const auto agg = summarize(moved.tier3);
  const auto base = summarize(same.tier3);
  CHECK(base.step_precision.value - agg.step_precision.value == Exact(1, static_cast<long>(agg.matched)));
  CHECK(agg.average_pitch_shift.value == Exact(1, 3));
}

TEST_CASE("tier1 per-class counts") {
  SUBCASE("identical multisets") {
    Measure m = attributes_and_group_measure();
    for (const auto& [label, c] : tier1(&m, m).classes) {
      const auto cm = class_metrics(c);
      CHECK(cm.precision.value == 1);
      CHECK(cm.recall.value == 1);
    }
  }
  SUBCASE("multiset minimum") {
    auto counts = tier1(TerminalMultiset{{"notehead_black", 3}, {"stem_up", 2}},
                        TerminalMultiset{{"notehead_black", 3}, {"stem_up", 3}});
    const auto stems = class_metrics(counts.classes.at("stem_up"));
    CHECK(stems.precision.value == 1);
    CHECK(stems.recall.value == Exact(2, 3));
    CHECK(counts.classes.at("stem_up").intersection == 2);
  }
  SUBCASE("empty prediction") {
    Measure m = beamed_eighths_measure();
    auto counts = tier1(nullptr, m);
    for (const auto& [label, c] : counts.classes) {
      const auto cm = class_metrics(c);
      CHECK(cm.recall.value == 0);
      CHECK(cm.recall.defined);
      CHECK(cm.precision.value == 0);
      CHECK_FALSE(cm.precision.defined);
    }
  }
}

TEST_CASE("tier1 aggregation weights by truth frequency") {
  Tier1Counts one;
  one.classes["beam"] = {4, 5, 3};
  const auto single = tier1_aggregate(one);
  CHECK(single.weighted_recall == Exact(3, 5));
  CHECK(single.weighted_precision == Exact(3, 4));

  Tier1Counts two;
  two.classes["a"] = {90, 90, 90};
  two.classes["b"] = {0, 10, 0};
  CHECK(tier1_aggregate(two).weighted_recall == Exact(9, 10));

  CHECK_THROWS_AS(tier1_aggregate(Tier1Counts{}), Error);
}

TEST_CASE("tier3 on perfect and shifted predictions") {
  Measure truth = canonicalize(measure(
      "m", {group("g", RationalTime(0),
                  {tok("b", "beam"),
                   chord("c1", 0, "stem_up", {note("n1", "notehead_black", 1, 4)}),
                   chord("c2", RationalTime(1, 2), "stem_up", {note("n2", "notehead_black", 1, 5)}),
                   chord("c3", 1, "stem_up", {note("n3", "notehead_black", 1, 6)}),
                   chord("c4", RationalTime(3, 2), "stem_up", {note("n4", "notehead_black", 1, 7)})})}));
  SUBCASE("perfect") {
    const auto agg = summarize(evaluate_pair(&truth, truth).tier3);
    CHECK(agg.matched == 4);
    CHECK(agg.mnr.value == 0);
    CHECK(agg.fpr.value == 0);
    CHECK(agg.pitch_precision.value == 1);
    CHECK(agg.time_precision.value == 1);
    CHECK(agg.average_pitch_shift.value == 0);
    CHECK(agg.time_shift.value == 0);
  }
  SUBCASE("one note a step high") {
    Measure pred = truth;
    for_each_token(pred, [](Token& t) {
      if (t.id == "n3.h") t.position.step = 7;
    });
    const auto agg = summarize(evaluate_pair(&pred, truth).tier3);
    CHECK(agg.matched == 4);
    CHECK(agg.step_precision.value == Exact(3, 4));
    CHECK(agg.average_pitch_shift.value == Exact(1, 4));
    // Swapping the roles negates the shift exactly.
    const auto back = summarize(evaluate_pair(&truth, pred).tier3);
    CHECK(back.average_pitch_shift.value == Exact(-1, 4));
  }
  SUBCASE("missing and extra notes") {
    const auto missed = summarize(evaluate_pair(nullptr, truth).tier3);
    CHECK(missed.mnr.value == 1);
    CHECK(missed.matched == 0);
    CHECK_FALSE(missed.pitch_precision.defined);
    CHECK_FALSE(missed.fpr.defined);
  }
}

TEST_CASE("tier3 rates stay in range and shifts negate on swap") {
  WorkGenerator gen(123);
  for (int i = 0; i < 30; ++i) {
    const Work a = gen.work(2);
    const Work b = gen.work(2);
    for (std::size_t k = 0; k < 2; ++k) {
      const Measure& ma = a.parts[0].measures[k];
      const Measure& mb = b.parts[0].measures[k];
      const auto ab = summarize(evaluate_pair(&ma, mb).tier3);
      for (const Rate* r : {&ab.mnr, &ab.fpr, &ab.pitch_precision, &ab.step_precision, &ab.staff_precision,
                            &ab.time_precision, &ab.duration_precision}) {
        CHECK(r->value >= 0);
        CHECK(r->value <= 1);
      }
      const auto ba = summarize(evaluate_pair(&mb, ma).tier3);
      CHECK(ab.matched == ba.matched);
      CHECK(ab.average_pitch_shift.value == -ba.average_pitch_shift.value);
      CHECK(ab.time_shift.value == -ba.time_shift.value);
      CHECK(ab.staff_shift.value == -ba.staff_shift.value);
    }
  }
}

TEST_CASE("corpus accumulation is a ratio of sums") {
  PairReport small, large;
  small.truth_nodes = 10;
  small.structural_half_cost = 20;
  large.truth_nodes = 90;
  large.structural_half_cost = 0;
  std::vector<PairReport> reports{small, large};
  CHECK(accumulate(reports).ter() == Exact(1, 10));

  Measure m = attributes_and_group_measure();
  Measure p = relabel_first(m, "stem_up", "stem_down");
  std::vector<PairReport> one{evaluate_pair(&p, m)};
  CHECK(accumulate(one).ter() == ter(&p, m));

  CHECK_THROWS_AS(accumulate(std::span<const PairReport>{}), Error);
}

TEST_CASE("accumulation ignores iteration order") {
  WorkGenerator gen(9);
  std::vector<PairReport> reports;
  for (int i = 0; i < 10; ++i) {
    const Work a = gen.work(1);
    const Work b = gen.work(1);
    reports.push_back(evaluate_pair(&a.parts[0].measures[0], b.parts[0].measures[0]));
  }
  const CorpusMetrics forward = accumulate(reports);
  std::mt19937 rng(3);
  for (int k = 0; k < 5; ++k) {
    std::shuffle(reports.begin(), reports.end(), rng);
    CHECK(accumulate(reports) == forward);
  }
}
