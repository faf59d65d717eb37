#include "mtn/harness/evaluate.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <thread>

#include "mtn/harness/align.hpp"
#include "mtn/io/mtn_xml.hpp"

namespace mtn::harness {

std::string config_fingerprint(const EvalConfig& c) {
  std::string text = std::string(kReportSchema) + ";tiers=";
  if (c.tiers.tier1) text += "1";
  if (c.tiers.tier2) text += "2";
  if (c.tiers.tier3) text += "3";
  text += ";ignore_synthetic=" + std::to_string(c.ignore_synthetic_attributes);
  text += ";matched_only=" + std::to_string(c.matched_only);
  text += ";partition=" + c.partition;
  std::uint64_t h = 14695981039346656037ull;
  for (const unsigned char ch : text) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Corpus load_corpus(const std::string& root, const std::vector<std::string>& files) {
  Corpus out;
  for (const auto& file : files) {
    const std::filesystem::path path = std::filesystem::path(root) / file;
    std::ifstream in(path, std::ios::binary);
    if (!in) {
      out.unreadable[file] = "cannot open " + path.string();
      continue;
    }
    std::ostringstream s;
    s << in.rdbuf();
    try {
      out.works.emplace(file, parse_work(s.str()).work);
    } catch (const Error& e) {
      out.unreadable[file] = path.string() + ": " + e.what();
    }
  }
  return out;
}

Exact EvalReport::coverage() const {
  if (truth_measures == 0) return 0;
  return Exact(matched_pairs()) / Exact(truth_measures);
}

Measure without_synthetic(const Measure& measure) {
  Measure out = measure;
  std::erase_if(out.children, [](const Node& n) { return n.synthetic; });
  return out;
}

namespace {

struct Task {
  const Measure* predicted = nullptr;  // null for a missed measure
  const Measure* truth = nullptr;
};

metrics::PairReport run_task(const Task& t, const EvalConfig& config) {
  metrics::TierSelection tiers = config.tiers;
  if (!t.predicted && config.matched_only) tiers.tier2 = tiers.tier3 = false;
  if (!config.ignore_synthetic_attributes || !tiers.tier1) {
    return metrics::evaluate_pair(t.predicted, *t.truth, tiers);
  }
  const bool tier1 = tiers.tier1;
  tiers.tier1 = false;
  metrics::PairReport r = metrics::evaluate_pair(t.predicted, *t.truth, tiers);
  if (tier1) {
    const Measure g = without_synthetic(*t.truth);
    if (t.predicted) {
      const Measure p = without_synthetic(*t.predicted);
      r.tier1 = metrics::tier1(&p, g);
    } else {
      r.tier1 = metrics::tier1(nullptr, g);
    }
  }
  return r;
}

std::vector<metrics::PairReport> run_all(const std::vector<Task>& tasks, const EvalConfig& config) {
  std::vector<metrics::PairReport> out(tasks.size());
  const unsigned workers = std::max(1u, std::min<unsigned>(config.jobs, static_cast<unsigned>(tasks.size())));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  auto work = [&] {
    for (std::size_t i = next++; i < tasks.size() && !failed; i = next++) {
      try {
        out[i] = run_task(tasks[i], config);
      } catch (...) {
        if (!failed.exchange(true)) failure = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (failure) std::rethrow_exception(failure);
  return out;
}

std::vector<const Measure*> all_measures(const Work& w) {
  std::vector<const Measure*> out;
  for (const auto& p : w.parts) {
    for (const auto& m : p.measures) out.push_back(&m);
  }
  return out;
}

}  // namespace

EvalReport evaluate_corpus(const Corpus& predicted, const Corpus& truth, const CorpusManifest& manifest,
                           const EvalConfig& config) {
  EvalReport report;
  report.config = config;
  report.fingerprint = config_fingerprint(config);
  std::vector<Task> tasks;
  for (const auto& file : manifest.files()) {
    std::vector<const ManifestEntry*> entries;
    for (const ManifestEntry* e : manifest.entries_for(file)) {
      if (config.partition.empty() || e->partition == config.partition) entries.push_back(e);
    }
    if (entries.empty()) continue;
    if (const auto bad = truth.unreadable.find(file); bad != truth.unreadable.end()) {
      ++report.unreadable_files;
      report.warnings.push_back("truth skipped: " + bad->second);
      continue;
    }
    const auto t = truth.works.find(file);
    if (t == truth.works.end()) throw EvalError("manifest file '" + file + "' is not in the truth corpus");
    std::vector<const Measure*> truth_measures;
    for (const ManifestEntry* e : entries) {
      if (t->second.work_id != e->work) {
        throw EvalError("manifest work '" + e->work + "' does not match '" + t->second.work_id + "' in " + file);
      }
      for (const auto& id : e->measures) {
        const Measure* m = find_measure(t->second, id);
        if (!m) throw EvalError("manifest measure '" + id + "' is not in " + file);
        truth_measures.push_back(m);
      }
    }
    report.pages += entries.size();
    report.truth_measures += truth_measures.size();

    std::vector<const Measure*> predicted_measures;
    if (const auto p = predicted.works.find(file); p != predicted.works.end()) {
      predicted_measures = all_measures(p->second);
    } else {
      report.missed_pages += entries.size();
      if (const auto bad = predicted.unreadable.find(file); bad != predicted.unreadable.end()) {
        ++report.unreadable_files;
        report.warnings.push_back("prediction unreadable: " + bad->second);
      } else {
        report.warnings.push_back("no prediction for " + file);
      }
    }
    report.predicted_measures += predicted_measures.size();
    const Alignment a = align_measures(predicted_measures, truth_measures);
    report.discarded_measures += a.discarded;
    report.missed_measures += a.missed.size();
    // truth order, so the reduction below is independent of scheduling
    std::map<const Measure*, const Measure*> partner;
    for (const auto& [p, g] : a.pairs) partner[g] = p;
    for (const Measure* g : truth_measures) {
      const auto it = partner.find(g);
      tasks.push_back({it == partner.end() ? nullptr : it->second, g});
    }
  }
  for (const auto& r : run_all(tasks, config)) report.metrics.add(r);
  return report;
}

EvalReport evaluate_corpus(const std::string& predicted_root, const std::string& truth_root,
                           const CorpusManifest& manifest, const EvalConfig& config) {
  const auto files = manifest.files();
  return evaluate_corpus(load_corpus(predicted_root, files), load_corpus(truth_root, files), manifest, config);
}

}  // namespace mtn::harness
