#include "mtn/harness/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

#include "mtn/harness/align.hpp"
#include "mtn/harness/evaluate.hpp"
#include "mtn/harness/manifest.hpp"
#include "mtn/harness/report.hpp"
#include "mtn/harness/stats.hpp"
#include "mtn/io/mtn_xml.hpp"
#include "mtn/metrics/ted.hpp"
#include "mtn/musicxml/convert.hpp"
#include "mtn/tree.hpp"

namespace mtn::cli {

namespace fs = std::filesystem;

namespace {

/// I/O or format failure; maps to exit code 2.
class CliError : public Error {
 public:
  using Error::Error;
};

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw CliError("cannot read " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_file(const fs::path& path, const std::string& bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw CliError("cannot write " + path.string());
  out << bytes;
  if (!out.flush()) throw CliError("cannot write " + path.string());
}

bool is_work_file(const fs::path& p) {
  const std::string name = p.filename().string();
  return name.size() > 8 && name.ends_with(".mtn.xml");
}

/// Work files below `dir`, sorted, relative to `dir`.
std::vector<fs::path> work_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw CliError(dir.string() + " is not a directory");
  std::vector<fs::path> out;
  for (const auto& e : fs::recursive_directory_iterator(dir)) {
    if (e.is_regular_file() && is_work_file(e.path())) out.push_back(fs::relative(e.path(), dir));
  }
  std::sort(out.begin(), out.end());
  return out;
}

Work load_work(const fs::path& path) {
  try {
    return parse_work(read_file(path)).work;
  } catch (const ParseError& e) {
    throw CliError(path.string() + ":" + e.what());
  }
}

std::string stem_of(const fs::path& p) {
  std::string name = p.filename().string();
  for (const char* ext : {".musicxml", ".xml"}) {
    if (name.size() > std::strlen(ext) && name.ends_with(ext)) return name.substr(0, name.size() - std::strlen(ext));
  }
  return p.stem().string();
}

struct ConvertArgs {
  std::vector<std::string> inputs;
  std::string out_dir;
  std::string manifest;
  std::string partition = "test";
  bool no_line_starts = false;
  unsigned jobs = 1;
};

struct Converted {
  std::optional<musicxml::Conversion> conversion;
  std::string error;
};

Converted convert_one(const std::string& input, const ConvertArgs& a) {
  musicxml::ConvertOptions options;
  options.work_id = stem_of(input);
  options.inject_line_starts = !a.no_line_starts;
  try {
    return {musicxml::convert_score(read_file(input), options), {}};
  } catch (const musicxml::ConversionError& e) {
    return {std::nullopt, input + ": " + e.path() + ": " + e.what()};
  } catch (const Error& e) {
    return {std::nullopt, e.what()};
  }
}

int convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  std::vector<Converted> results(a.inputs.size());
  std::atomic<std::size_t> next{0};
  auto work = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) results[i] = convert_one(a.inputs[i], a);
  };
  std::vector<std::thread> pool;
  for (unsigned w = 1; w < std::min<std::size_t>(a.jobs, results.size()); ++w) pool.emplace_back(work);
  work();
  for (auto& t : pool) t.join();

  harness::CorpusManifest manifest;
  int status = kExitOk;
  for (std::size_t k = 0; k < results.size(); ++k) {
    const std::string& input = a.inputs[k];
    if (!results[k].conversion) {
      err << results[k].error << "\n";
      status = kExitError;
      continue;
    }
    const musicxml::Conversion& c = *results[k].conversion;
    const std::string stem = stem_of(input);
    for (const auto& w : c.warnings) err << input << ": warning: " << w.path << ": " << w.message << "\n";
    const std::string file = harness::work_file_name(stem);
    write_file(fs::path(a.out_dir) / file, serialize_work(c.work));
    out << input << " -> " << (fs::path(a.out_dir) / file).string() << "\n";

    if (c.work.parts.empty()) continue;
    // pages follow the first part's page breaks; other parts join them by index
    const auto& first = c.work.parts.front();
    std::vector<std::size_t> page_of(first.measures.size(), 0);
    std::size_t page = 0;
    for (std::size_t i = 0; i < first.measures.size(); ++i) {
      if (i > 0 && std::find(c.page_starts.begin(), c.page_starts.end(), first.measures[i].id) !=
                        c.page_starts.end()) {
        ++page;
      }
      page_of[i] = page;
    }
    for (std::size_t p = 0; p <= page; ++p) {
      harness::ManifestEntry e;
      e.work = c.work.work_id;
      e.page = stem + "-p" + std::to_string(p + 1);
      e.partition = a.partition;
      e.file = file;
      for (std::size_t i = 0; i < page_of.size(); ++i) {
        if (page_of[i] != p) continue;
        for (const auto& part : c.work.parts) {
          if (i < part.measures.size()) e.measures.push_back(part.measures[i].id);
        }
      }
      if (p == page) {
        for (const auto& part : c.work.parts) {
          for (std::size_t i = page_of.size(); i < part.measures.size(); ++i) e.measures.push_back(part.measures[i].id);
        }
      }
      manifest.entries.push_back(std::move(e));
    }
  }
  if (!a.manifest.empty()) write_file(a.manifest, harness::write_manifest(manifest));
  return status;
}

struct ValidateArgs {
  std::vector<std::string> inputs;
  std::string max_onset;
};

int validate_files(const ValidateArgs& a, std::ostream& out, std::ostream& err) {
  std::optional<RationalTime> bound;
  if (!a.max_onset.empty()) {
    RationalTime b;
    if (!parse_rational(a.max_onset, b)) throw CliError("--max-onset expects a fraction, got '" + a.max_onset + "'");
    bound = b;
  }
  int status = kExitOk;
  for (const auto& input : a.inputs) {
    ParsedWork parsed;
    try {
      parsed = parse_work(read_file(input));
    } catch (const ParseError& e) {
      err << input << ":" << e.what() << "\n";
      if (e.kind() == ParseErrorKind::Validation) {
        status = std::max(status, kExitViolations);
      } else {
        status = kExitError;
      }
      continue;
    }
    for (const auto& v : parsed.violations) out << input << ": " << v.rule << " [" << v.subject << "]: " << v.message << "\n";
    if (!parsed.violations.empty()) status = std::max(status, kExitViolations);
    if (bound) {
      for (const auto& p : parsed.work.parts) {
        for (const auto& m : p.measures) {
          for (const auto& n : m.children) {
            for_each_node(n, [&](const Node& sub) {
              if (sub.onset && *sub.onset > *bound) {
                err << input << ": warning: onset " << to_string(*sub.onset) << " of '" << sub.id << "' in "
                    << m.id << " exceeds " << to_string(*bound) << "\n";
              }
            });
          }
        }
      }
    }
    if (parsed.violations.empty()) out << input << ": ok" << (parsed.reordered ? " (not in canonical order)" : "") << "\n";
  }
  return status;
}

int stats(const std::vector<std::string>& dirs, std::ostream& out) {
  std::vector<Work> works;
  for (const auto& d : dirs) {
    for (const auto& rel : work_files(d)) works.push_back(load_work(fs::path(d) / rel));
  }
  out << harness::stats_text(harness::corpus_stats(works));
  return kExitOk;
}

struct EvaluateArgs {
  std::string pred;
  std::string truth;
  std::string manifest;
  std::string tiers = "1,2,3";
  std::string output;
  std::string partition;
  bool ignore_synthetic = false;
  bool matched_only = false;
  unsigned jobs = 1;
};

metrics::TierSelection parse_tiers(const std::string& text) {
  metrics::TierSelection t{false, false, false};
  std::stringstream s(text);
  std::string item;
  while (std::getline(s, item, ',')) {
    if (item == "1") {
      t.tier1 = true;
    } else if (item == "2") {
      t.tier2 = true;
    } else if (item == "3") {
      t.tier3 = true;
    } else {
      throw CliError("--tiers expects a list drawn from 1,2,3, got '" + text + "'");
    }
  }
  if (!t.tier1 && !t.tier2 && !t.tier3) throw CliError("--tiers selects nothing");
  return t;
}

int evaluate(const EvaluateArgs& a, std::ostream& out, std::ostream& err) {
  harness::EvalConfig config;
  config.tiers = parse_tiers(a.tiers);
  config.ignore_synthetic_attributes = a.ignore_synthetic;
  config.matched_only = a.matched_only;
  config.partition = a.partition;
  config.jobs = std::max(1u, a.jobs);
  const auto manifest = harness::read_manifest_file(a.manifest);
  const auto report = harness::evaluate_corpus(a.pred, a.truth, manifest, config);
  for (const auto& w : report.warnings) err << "warning: " << w << "\n";
  const std::string json = harness::report_json(report);
  if (a.output.empty()) {
    out << json;
  } else {
    write_file(a.output, json);
    out << harness::report_text(report);
  }
  return kExitOk;
}

struct DiffArgs {
  std::string pred;
  std::string truth;
  bool semantic = false;
};

int diff(const DiffArgs& a, std::ostream& out) {
  const Work pred = load_work(a.pred);
  const Work truth = load_work(a.truth);
  std::vector<const Measure*> p, g;
  for (const auto& part : pred.parts) {
    for (const auto& m : part.measures) p.push_back(&m);
  }
  for (const auto& part : truth.parts) {
    for (const auto& m : part.measures) g.push_back(&m);
  }
  const auto alignment = harness::align_measures(p, g);
  const auto mode = a.semantic ? ProjectionMode::Semantic : ProjectionMode::Structural;
  const metrics::UnitCost unit;
  const metrics::SemanticCost semantic;
  const metrics::CostModel& costs = a.semantic ? static_cast<const metrics::CostModel&>(semantic) : unit;
  std::size_t subs = 0, dels = 0, ins = 0;
  Exact total = 0;
  for (const auto& [pm, gm] : alignment.pairs) {
    const LabeledTree pt = project_tree(*pm, mode);
    const LabeledTree gt = project_tree(*gm, mode);
    const auto script = metrics::tree_edit_distance(pt, gt, costs);
    if (script.half_cost == 0) continue;
    out << "measure " << gm->id << ": cost " << to_string(script.cost()) << "\n";
    out << metrics::describe(script, pt, gt);
    subs += script.substitutions;
    dels += script.deletions;
    ins += script.insertions;
    total += script.cost();
  }
  for (const Measure* gm : alignment.missed) {
    const LabeledTree gt = project_tree(*gm, mode);
    out << "measure " << gm->id << ": missing (" << gt.size() << " insertions)\n";
    ins += gt.size();
    total += Exact(gt.size());
  }
  if (alignment.discarded) out << alignment.discarded << " predicted measure(s) discarded\n";
  out << subs << " substitution(s), " << dels << " deletion(s), " << ins << " insertion(s), cost "
      << to_string(total) << "\n";
  return kExitOk;
}

struct PerturbArgs {
  std::string input;
  std::string output;
  std::string from = "notehead_black";
  std::string to = "notehead_white";
  std::string fraction = "1/10";
  std::uint64_t seed = 1;
};

int perturb(const PerturbArgs& a, std::ostream& out) {
  Exact fraction;
  if (!parse_exact(a.fraction, fraction)) throw CliError("--fraction expects a fraction, got '" + a.fraction + "'");
  const auto files = work_files(a.input);
  std::vector<Work> works;
  for (const auto& rel : files) works.push_back(load_work(fs::path(a.input) / rel));
  const auto r = harness::perturb_labels(works, {a.from, a.to, fraction, a.seed});
  for (std::size_t i = 0; i < files.size(); ++i) write_file(fs::path(a.output) / files[i], serialize_work(works[i]));
  out << "relabeled " << r.relabeled << " of " << r.candidates << " " << a.from << " tokens as " << a.to << "\n";
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Music tree notation toolkit: import, validation and evaluation", "mtn"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(harness::kToolVersion));

  ConvertArgs conv;
  auto* c = app.add_subcommand("convert", "Import MusicXML scores as .mtn.xml works");
  c->add_option("inputs", conv.inputs, "MusicXML files")->required();
  c->add_option("-o,--output", conv.out_dir, "Output directory")->required();
  c->add_option("--manifest", conv.manifest, "Write a JSON-lines corpus manifest");
  c->add_option("--partition", conv.partition, "Partition tag for manifest entries");
  c->add_flag("--no-line-starts", conv.no_line_starts, "Do not restate clef and key at system starts");
  c->add_option("-j,--jobs", conv.jobs, "Worker threads")->check(CLI::PositiveNumber);

  ValidateArgs val;
  auto* v = app.add_subcommand("validate", "Check .mtn.xml works against the format rules");
  v->add_option("inputs", val.inputs, "Work files")->required();
  v->add_option("--max-onset", val.max_onset, "Warn about onsets beyond this many quarter notes");

  std::vector<std::string> stat_dirs;
  auto* s = app.add_subcommand("stats", "Token class histogram of a corpus");
  s->add_option("dirs", stat_dirs, "Corpus directories")->required();

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "Evaluate predictions against ground truth");
  e->add_option("--pred", ev.pred, "Prediction corpus directory")->required();
  e->add_option("--truth", ev.truth, "Ground-truth corpus directory")->required();
  e->add_option("--manifest", ev.manifest, "JSON-lines manifest of the truth corpus")->required();
  e->add_option("--tiers", ev.tiers, "Tiers to compute, e.g. 1,2,3");
  e->add_flag("--ignore-synthetic-attributes", ev.ignore_synthetic, "Leave injected line-start attributes out of Tier 1");
  e->add_flag("--matched-only", ev.matched_only, "Leave missed measures out of Tiers 2 and 3");
  e->add_option("--partition", ev.partition, "Only evaluate manifest entries of this partition");
  e->add_option("-j,--jobs", ev.jobs, "Worker threads")->check(CLI::PositiveNumber);
  e->add_option("-o,--output", ev.output, "Write the JSON report here and print tables");

  DiffArgs df;
  auto* d = app.add_subcommand("diff", "Print the edit script between two works");
  d->add_option("pred", df.pred, "Predicted work")->required();
  d->add_option("truth", df.truth, "Ground-truth work")->required();
  d->add_flag("--semantic", df.semantic, "Use semantic trees and costs");

  PerturbArgs pt;
  auto* p = app.add_subcommand("perturb", "Copy a corpus with a share of one token class relabeled");
  p->add_option("--input", pt.input, "Corpus directory")->required();
  p->add_option("-o,--output", pt.output, "Output directory")->required();
  p->add_option("--from", pt.from, "Label to replace");
  p->add_option("--to", pt.to, "Replacement label");
  p->add_option("--fraction", pt.fraction, "Share of tokens to relabel, e.g. 1/10");
  p->add_option("--seed", pt.seed, "Selection seed");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    if (ex.get_exit_code() == 0) {
      app.exit(ex, out, err);
      return kExitOk;
    }
    err << ex.what() << "\n\n" << app.help();
    return kExitError;
  }

  try {
    if (*c) return convert(conv, out, err);
    if (*v) return validate_files(val, out, err);
    if (*s) return stats(stat_dirs, out);
    if (*e) return evaluate(ev, out, err);
    if (*d) return diff(df, out);
    if (*p) return perturb(pt, out);
  } catch (const Error& ex) {
    err << "mtn: " << ex.what() << "\n";
    return kExitError;
  } catch (const fs::filesystem_error& ex) {
    err << "mtn: " << ex.what() << "\n";
    return kExitError;
  }
  return kExitError;
}

}  // namespace mtn::cli
