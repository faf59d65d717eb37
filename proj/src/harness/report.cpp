#include "mtn/harness/report.hpp"

#include <algorithm>

#include <json.hpp>

namespace mtn::harness {

using nlohmann::ordered_json;

namespace {

ordered_json rate_json(const metrics::Rate& r) {
  ordered_json j;
  j["value"] = to_string(r.value);
  j["defined"] = r.defined;
  return j;
}

struct Row {
  std::string label;
  metrics::ClassCounts counts;
};

std::vector<Row> rows_by_count(const metrics::Tier1Counts& t1) {
  std::vector<Row> rows;
  for (const auto& [label, c] : t1.classes) rows.push_back({label, c});
  std::stable_sort(rows.begin(), rows.end(),
                   [](const Row& a, const Row& b) { return a.counts.truth > b.counts.truth; });
  return rows;
}

std::string pad(std::string s, std::size_t width, bool left = false) {
  if (s.size() >= width) return s;
  const std::string fill(width - s.size(), ' ');
  return left ? s + fill : fill + s;
}

std::string rate_text(const metrics::Rate& r, int digits = 3) {
  return r.defined ? to_decimal(r.value, digits) : "n/a";
}

}  // namespace

std::string report_json(const EvalReport& r) {
  ordered_json j;
  j["schema"] = kReportSchema;
  j["tool"] = {{"name", kToolName}, {"version", kToolVersion}};
  ordered_json tiers = ordered_json::array();
  if (r.config.tiers.tier1) tiers.push_back(1);
  if (r.config.tiers.tier2) tiers.push_back(2);
  if (r.config.tiers.tier3) tiers.push_back(3);
  j["config"] = {{"tiers", tiers},
                 {"ignore_synthetic_attributes", r.config.ignore_synthetic_attributes},
                 {"matched_only", r.config.matched_only},
                 {"partition", r.config.partition}};
  j["config_fingerprint"] = r.fingerprint;
  j["coverage"] = {{"value", to_string(r.coverage())},
                   {"pages", r.pages},
                   {"missed_pages", r.missed_pages},
                   {"truth_measures", r.truth_measures},
                   {"predicted_measures", r.predicted_measures},
                   {"matched_pairs", r.matched_pairs()},
                   {"missed_measures", r.missed_measures},
                   {"discarded_measures", r.discarded_measures},
                   {"unreadable_files", r.unreadable_files}};
  const auto& m = r.metrics;
  if (r.config.tiers.tier1) {
    ordered_json classes = ordered_json::array();
    const std::size_t total = m.tier1.truth_total();
    for (const auto& row : rows_by_count(m.tier1)) {
      const auto cm = metrics::class_metrics(row.counts);
      classes.push_back({{"label", row.label},
                         {"precision", rate_json(cm.precision)},
                         {"recall", rate_json(cm.recall)},
                         {"counts", row.counts.truth},
                         {"predicted", row.counts.predicted},
                         {"intersection", row.counts.intersection},
                         {"proportion", rate_json(metrics::Rate::of(Exact(row.counts.truth), Exact(total)))}});
    }
    ordered_json t1;
    t1["classes"] = classes;
    if (total > 0) {
      const auto s = metrics::tier1_aggregate(m.tier1);
      t1["total"] = {{"precision", to_string(s.weighted_precision)},
                     {"recall", to_string(s.weighted_recall)},
                     {"counts", total},
                     {"predicted", m.tier1.predicted_total()}};
    } else {
      t1["total"] = nullptr;
    }
    j["tier1"] = t1;
  }
  if (r.config.tiers.tier2) {
    j["tier2"] = {{"ter", to_string(m.ter())},
                  {"cost", to_string(Exact(m.structural_half_cost, 2))},
                  {"truth_nodes", m.truth_nodes},
                  {"substitutions", m.substitutions},
                  {"deletions", m.deletions},
                  {"insertions", m.insertions}};
  }
  if (r.config.tiers.tier3) {
    const auto s = metrics::summarize(m.tier3);
    j["tier3"] = {{"extended_ter", to_string(m.extended_ter())},
                  {"truth_notes", m.tier3.truth_notes},
                  {"predicted_notes", m.tier3.predicted_notes},
                  {"matched", s.matched},
                  {"mnr", rate_json(s.mnr)},
                  {"fpr", rate_json(s.fpr)},
                  {"pitch_precision", rate_json(s.pitch_precision)},
                  {"step_precision", rate_json(s.step_precision)},
                  {"staff_precision", rate_json(s.staff_precision)},
                  {"time_precision", rate_json(s.time_precision)},
                  {"duration_precision", rate_json(s.duration_precision)},
                  {"pitch_shift", rate_json(s.average_pitch_shift)},
                  {"staff_shift", rate_json(s.staff_shift)},
                  {"time_shift", rate_json(s.time_shift)}};
  }
  j["warnings"] = r.warnings;
  return j.dump(2) + "\n";
}

std::string report_text(const EvalReport& r) {
  std::string out;
  out += "Coverage: " + std::to_string(r.matched_pairs()) + "/" + std::to_string(r.truth_measures) +
         " measures (" + to_decimal(r.coverage(), 3) + ")";
  if (r.discarded_measures) out += ", " + std::to_string(r.discarded_measures) + " discarded";
  out += "\n";
  const auto& m = r.metrics;
  if (r.config.tiers.tier1) {
    const auto rows = rows_by_count(m.tier1);
    std::size_t width = 5;
    for (const auto& row : rows) width = std::max(width, row.label.size());
    const std::size_t total = m.tier1.truth_total();
    out += "\n" + pad("Class", width, true) + pad("Precision", 11) + pad("Recall", 8) + pad("Counts", 10) +
           pad("Prop", 8) + "\n";
    for (const auto& row : rows) {
      const auto cm = metrics::class_metrics(row.counts);
      out += pad(row.label, width, true) + pad(rate_text(cm.precision), 11) + pad(rate_text(cm.recall), 8) +
             pad(std::to_string(row.counts.truth), 10) +
             pad(rate_text(metrics::Rate::of(Exact(row.counts.truth), Exact(total)), 4), 8) + "\n";
    }
    if (total > 0) {
      const auto s = metrics::tier1_aggregate(m.tier1);
      out += pad("Total", width, true) + pad(to_decimal(s.weighted_precision, 3), 11) +
             pad(to_decimal(s.weighted_recall, 3), 8) + pad(std::to_string(total), 10) +
             pad(to_decimal(Exact(1), 4), 8) + "\n";
    }
  }
  if (r.config.tiers.tier2 || r.config.tiers.tier3) {
    std::vector<std::pair<std::string, std::string>> cols;
    if (r.config.tiers.tier2) cols.emplace_back("TER", to_decimal(m.ter(), 3));
    if (r.config.tiers.tier3) {
      const auto s = metrics::summarize(m.tier3);
      cols.emplace_back("Ext. TER", to_decimal(m.extended_ter(), 3));
      cols.emplace_back("MNR", rate_text(s.mnr));
      cols.emplace_back("FPR", rate_text(s.fpr));
      cols.emplace_back("Time Prec", rate_text(s.time_precision));
      cols.emplace_back("Pitch Prec", rate_text(s.pitch_precision));
      cols.emplace_back("Step Prec", rate_text(s.step_precision));
      cols.emplace_back("Staff Prec", rate_text(s.staff_precision));
      cols.emplace_back("Time Shift", rate_text(s.time_shift));
      cols.emplace_back("Pitch Shift", rate_text(s.average_pitch_shift));
      cols.emplace_back("Staff Shift", rate_text(s.staff_shift));
    }
    std::string head, values;
    for (const auto& [name, value] : cols) {
      const std::size_t w = std::max(name.size(), value.size()) + 2;
      head += pad(name, w);
      values += pad(value, w);
    }
    out += "\n" + head + "\n" + values + "\n";
  }
  if (!r.warnings.empty()) out += "\n" + std::to_string(r.warnings.size()) + " warning(s)\n";
  return out;
}

}  // namespace mtn::harness
