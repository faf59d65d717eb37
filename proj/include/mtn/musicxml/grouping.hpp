#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "mtn/model.hpp"
#include "mtn/musicxml/diagnostics.hpp"

namespace mtn::musicxml {

/// Work-unique identifiers in document order.
class IdSource {
 public:
  std::string token() { return "t" + std::to_string(++tokens_); }
  std::string node() { return "n" + std::to_string(++nodes_); }
  std::string pair() { return "p" + std::to_string(++pairs_); }

 private:
  int tokens_ = 0;
  int nodes_ = 0;
  int pairs_ = 0;
};

enum class BeamValue { Begin, Continue, End, ForwardHook, BackwardHook };

/// A chord of one voice with its MusicXML beam values by beam level.
struct BeamedChord {
  Node chord;
  std::map<int, BeamValue> beams;
  int flags = 0;  // flags the note type needs when no beam is drawn
  int staff = 1;
};

/// Beam level-1 spans become outer groups, deeper begin..end runs and hooks
/// nested groups; a run covering all chords of its parent adds a beam to the
/// parent instead. Unbeamed chords become singleton groups and receive their
/// flags. Dangling beam values are dropped with a warning.
std::vector<Node> build_groups(std::vector<BeamedChord> chords, IdSource& ids, Warnings& warnings,
                               const std::string& path);

/// Open start/stop spanners keyed by family and MusicXML number (or pitch
/// for ties).
class SpannerTable {
 public:
  struct End {
    std::string pair_id;
    bool orphan = false;  // stop without start
  };

  /// Fresh pair id for a start; `token_id` is remembered for open reports.
  std::string start(const std::string& key, const std::string& token_id, IdSource& ids,
                    Warnings& warnings, const std::string& path);
  End stop(const std::string& key, IdSource& ids, Warnings& warnings, const std::string& path);

  /// Token ids of starts never closed; the table is emptied.
  std::vector<std::string> drain(Warnings& warnings, const std::string& path);
  bool empty() const { return open_.empty(); }

 private:
  struct Open {
    std::string pair_id;
    std::string token_id;
    std::string path;
  };
  std::map<std::string, Open> open_;
  std::vector<std::string> abandoned_;  // starts replaced by a second start
};

}  // namespace mtn::musicxml
