#include "mtn/harness/manifest.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace mtn::harness {

using nlohmann::json;

std::vector<const ManifestEntry*> CorpusManifest::entries_for(std::string_view file) const {
  std::vector<const ManifestEntry*> out;
  for (const auto& e : entries) {
    if (e.file == file) out.push_back(&e);
  }
  return out;
}

std::vector<std::string> CorpusManifest::files() const {
  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& e : entries) {
    if (seen.insert(e.file).second) out.push_back(e.file);
  }
  return out;
}

std::string work_file_name(std::string_view work_id) { return std::string(work_id) + ".mtn.xml"; }

namespace {

std::string required_string(const json& obj, const char* key, int line) {
  const auto it = obj.find(key);
  if (it == obj.end() || !it->is_string() || it->get<std::string>().empty()) {
    throw ManifestError("manifest line " + std::to_string(line) + ": missing string field '" + key + "'");
  }
  return it->get<std::string>();
}

std::string optional_string(const json& obj, const char* key, int line) {
  const auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return {};
  if (!it->is_string()) {
    throw ManifestError("manifest line " + std::to_string(line) + ": field '" + key + "' is not a string");
  }
  return it->get<std::string>();
}

}  // namespace

CorpusManifest parse_manifest(std::string_view jsonl) {
  CorpusManifest out;
  std::set<std::pair<std::string, std::string>> pages;
  std::set<std::pair<std::string, std::string>> measures;
  std::istringstream in{std::string(jsonl)};
  std::string text;
  int line = 0;
  while (std::getline(in, text)) {
    ++line;
    if (text.find_first_not_of(" \t\r") == std::string::npos) continue;
    json obj;
    try {
      obj = json::parse(text);
    } catch (const json::parse_error& e) {
      throw ManifestError("manifest line " + std::to_string(line) + ": " + e.what());
    }
    if (!obj.is_object()) throw ManifestError("manifest line " + std::to_string(line) + ": not an object");
    ManifestEntry e;
    e.work = required_string(obj, "work", line);
    e.page = required_string(obj, "page", line);
    e.partition = optional_string(obj, "partition", line);
    e.file = optional_string(obj, "file", line);
    if (e.file.empty()) e.file = work_file_name(e.work);
    const auto m = obj.find("measures");
    if (m == obj.end() || !m->is_array()) {
      throw ManifestError("manifest line " + std::to_string(line) + ": missing array field 'measures'");
    }
    for (const auto& id : *m) {
      if (!id.is_string()) throw ManifestError("manifest line " + std::to_string(line) + ": measure id is not a string");
      e.measures.push_back(id.get<std::string>());
      if (!measures.insert({e.work, e.measures.back()}).second) {
        throw ManifestError("manifest line " + std::to_string(line) + ": measure '" + e.measures.back() +
                            "' listed twice for work '" + e.work + "'");
      }
    }
    if (!pages.insert({e.work, e.page}).second) {
      throw ManifestError("manifest line " + std::to_string(line) + ": duplicate page '" + e.page + "'");
    }
    out.entries.push_back(std::move(e));
  }
  return out;
}

std::string write_manifest(const CorpusManifest& manifest) {
  std::string out;
  for (const auto& e : manifest.entries) {
    nlohmann::ordered_json obj;
    obj["work"] = e.work;
    obj["page"] = e.page;
    obj["measures"] = e.measures;
    if (!e.partition.empty()) obj["partition"] = e.partition;
    if (e.file != work_file_name(e.work)) obj["file"] = e.file;
    out += obj.dump() + "\n";
  }
  return out;
}

CorpusManifest read_manifest_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ManifestError("cannot read manifest '" + path + "'");
  std::ostringstream s;
  s << in.rdbuf();
  return parse_manifest(s.str());
}

}  // namespace mtn::harness
