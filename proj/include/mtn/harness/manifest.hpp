#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "mtn/error.hpp"

namespace mtn::harness {

class ManifestError : public Error {
 public:
  using Error::Error;
};

/// One page of one work: its measures in top-down reading order.
struct ManifestEntry {
  std::string work;
  std::string page;
  std::vector<std::string> measures;
  std::string partition;  // e.g. "train" or "test"; may be empty
  std::string file;       // work file relative to the corpus root

  bool operator==(const ManifestEntry&) const = default;
};

struct CorpusManifest {
  std::vector<ManifestEntry> entries;

  /// Entries of one work file, in manifest order.
  std::vector<const ManifestEntry*> entries_for(std::string_view file) const;
  /// Distinct work files in order of first appearance.
  std::vector<std::string> files() const;

  bool operator==(const CorpusManifest&) const = default;
};

/// Default work file for a work id.
std::string work_file_name(std::string_view work_id);

/// JSON lines, one object per page:
/// {"work": ..., "page": ..., "measures": [...], "partition": ..., "file": ...}.
/// "partition" and "file" are optional. Blank lines are skipped. Throws
/// ManifestError with the line number on malformed lines, duplicate pages,
/// or a measure listed twice within a work.
CorpusManifest parse_manifest(std::string_view jsonl);
std::string write_manifest(const CorpusManifest& manifest);
CorpusManifest read_manifest_file(const std::string& path);

}  // namespace mtn::harness
