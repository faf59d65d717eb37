#include "mtn/metrics/tier3.hpp"

namespace mtn::metrics {

void Tier3Counts::merge(const Tier3Counts& o) {
  truth_notes += o.truth_notes;
  predicted_notes += o.predicted_notes;
  matched += o.matched;
  pitch_equal += o.pitch_equal;
  step_equal += o.step_equal;
  staff_equal += o.staff_equal;
  time_equal += o.time_equal;
  duration_equal += o.duration_equal;
  step_shift_sum += o.step_shift_sum;
  staff_shift_sum += o.staff_shift_sum;
  time_shift_sum += o.time_shift_sum;
}

Tier3Counts tier3(const EditScript& script, const LabeledTree& predicted,
                  const LabeledTree& truth) {
  Tier3Counts c;
  for (const auto& n : predicted.nodes()) c.predicted_notes += n.note.has_value();
  for (const auto& n : truth.nodes()) c.truth_notes += n.note.has_value();
  for (const auto& [p, g] : script.mapping) {
    const auto& np = predicted[static_cast<std::size_t>(p)].note;
    const auto& ng = truth[static_cast<std::size_t>(g)].note;
    if (!np || !ng || np->is_rest != ng->is_rest) continue;
    ++c.matched;
    if (np->is_rest) {
      ++c.pitch_equal;
      ++c.step_equal;
      ++c.staff_equal;
    } else {
      const auto& pp = np->position;
      const auto& pg = ng->position;
      const bool step_eq = pp.step == pg.step;
      c.step_equal += step_eq;
      c.staff_equal += pp.staff == pg.staff;
      c.pitch_equal += step_eq && pp.staff == pg.staff;
      c.step_shift_sum += pp.step.value_or(0) - pg.step.value_or(0);
      c.staff_shift_sum += pp.staff - pg.staff;
    }
    c.time_equal += np->onset == ng->onset;
    c.duration_equal += np->duration == ng->duration;
    c.time_shift_sum += to_exact(np->onset - ng->onset);
  }
  return c;
}

Tier3Aggregate summarize(const Tier3Counts& c) {
  Tier3Aggregate a;
  const Exact m(c.matched);
  a.matched = c.matched;
  a.mnr = Rate::of(Exact(c.truth_notes - c.matched), Exact(c.truth_notes));
  a.fpr = Rate::of(Exact(c.predicted_notes - c.matched), Exact(c.predicted_notes));
  a.pitch_precision = Rate::of(Exact(c.pitch_equal), m);
  a.step_precision = Rate::of(Exact(c.step_equal), m);
  a.staff_precision = Rate::of(Exact(c.staff_equal), m);
  a.time_precision = Rate::of(Exact(c.time_equal), m);
  a.duration_precision = Rate::of(Exact(c.duration_equal), m);
  a.average_pitch_shift = Rate::of(Exact(c.step_shift_sum), m);
  a.staff_shift = Rate::of(Exact(c.staff_shift_sum), m);
  a.time_shift = Rate::of(c.time_shift_sum, m);
  return a;
}

}  // namespace mtn::metrics
