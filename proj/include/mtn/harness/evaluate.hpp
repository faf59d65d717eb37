#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "mtn/error.hpp"
#include "mtn/harness/manifest.hpp"
#include "mtn/metrics/evaluation.hpp"
#include "mtn/model.hpp"

namespace mtn::harness {

inline constexpr const char* kReportSchema = "mtn-eval-report/1";
inline constexpr const char* kToolName = "mtn";
inline constexpr const char* kToolVersion = "1.0.0";

class EvalError : public Error {
 public:
  using Error::Error;
};

struct EvalConfig {
  metrics::TierSelection tiers;
  bool ignore_synthetic_attributes = false;  // Tier 1 skips injected line-start attributes
  bool matched_only = false;                 // missed measures stay out of Tiers 2 and 3
  std::string partition;                     // empty: every manifest entry
  unsigned jobs = 1;                         // does not affect results
};

/// FNV-1a over every result-affecting field of the config and the schema.
std::string config_fingerprint(const EvalConfig& config);

/// Works keyed by file name relative to the corpus root.
struct Corpus {
  std::map<std::string, Work> works;
  std::map<std::string, std::string> unreadable;  // file -> reason
};

/// Loads the listed files below `root`. Files that are missing or do not
/// parse are recorded as unreadable rather than thrown.
Corpus load_corpus(const std::string& root, const std::vector<std::string>& files);

struct EvalReport {
  EvalConfig config;
  std::string fingerprint;
  std::size_t pages = 0;
  std::size_t missed_pages = 0;  // prediction file absent or unreadable
  std::size_t truth_measures = 0;
  std::size_t predicted_measures = 0;
  std::size_t missed_measures = 0;
  std::size_t discarded_measures = 0;
  std::size_t unreadable_files = 0;
  metrics::CorpusMetrics metrics;
  std::vector<std::string> warnings;

  std::size_t matched_pairs() const { return truth_measures - missed_measures; }
  /// Matched pairs over truth measures; 0 for an empty corpus.
  Exact coverage() const;
};

/// Aligns every manifest page and evaluates all measure pairs, spread over
/// `config.jobs` workers. The reduction runs in manifest order, so the
/// report does not depend on the worker count. Throws EvalError when the
/// manifest names a measure or work the truth file lacks.
EvalReport evaluate_corpus(const Corpus& predicted, const Corpus& truth, const CorpusManifest& manifest,
                           const EvalConfig& config);

EvalReport evaluate_corpus(const std::string& predicted_root, const std::string& truth_root,
                           const CorpusManifest& manifest, const EvalConfig& config);

/// Measure without synthetic attribute nodes.
Measure without_synthetic(const Measure& measure);

}  // namespace mtn::harness
