#include "mtn/musicxml/grouping.hpp"

#include <utility>

namespace mtn::musicxml {

namespace {

struct Run {
  std::size_t lo;
  std::size_t hi;  // inclusive
};

std::optional<BeamValue> at_level(const BeamedChord& c, int level) {
  const auto it = c.beams.find(level);
  if (it == c.beams.end()) return std::nullopt;
  return it->second;
}

class Builder {
 public:
  Builder(std::vector<BeamedChord>& chords, IdSource& ids, Warnings& warnings, const std::string& path)
      : chords_(chords), ids_(ids), warnings_(warnings), path_(path) {}

  std::vector<Node> build() {
    std::vector<Node> out;
    for (const auto& seg : top_segments()) {
      if (seg.beamed) {
        Node g = group(seg.run, 1);
        g.onset = chords_[seg.run.lo].chord.onset;
        out.push_back(std::move(g));
      } else {
        out.push_back(singleton(seg.run.lo));
      }
    }
    return out;
  }

 private:
  struct Segment {
    Run run;
    bool beamed;
  };

  void warn(std::size_t chord, const std::string& message) {
    warnings_.push_back({path_ + "/" + chords_[chord].chord.id, message});
  }

  std::vector<Segment> top_segments() {
    std::vector<Segment> segs;
    std::optional<std::size_t> open;
    auto close = [&](std::size_t hi) {
      if (hi == *open) {
        warn(*open, "beam spans a single chord; dropped");
        chords_[*open].beams.clear();
        segs.push_back({{*open, *open}, false});
      } else {
        segs.push_back({{*open, hi}, true});
      }
      open.reset();
    };
    for (std::size_t i = 0; i < chords_.size(); ++i) {
      const auto v = at_level(chords_[i], 1);
      if (open) {
        if (v == BeamValue::Continue) continue;
        if (v == BeamValue::End) {
          close(i);
          continue;
        }
        warn(i, "beam not terminated before this chord");
        close(i - 1);
      }
      if (v == BeamValue::Begin) {
        open = i;
      } else {
        if (v) {
          warn(i, "dangling beam value; dropped");
          chords_[i].beams.clear();
        }
        segs.push_back({{i, i}, false});
      }
    }
    if (open) {
      warn(chords_.size() - 1, "beam not terminated at measure end");
      close(chords_.size() - 1);
    }
    return segs;
  }

  // Runs at `level` inside [lo, hi]: begin..end spans and single hooks.
  std::vector<Run> runs(Run range, int level) {
    constexpr std::size_t kNone = static_cast<std::size_t>(-1);
    std::vector<Run> out;
    std::size_t open = kNone;
    for (std::size_t i = range.lo; i <= range.hi; ++i) {
      const auto v = at_level(chords_[i], level);
      if (open != kNone) {
        if (v == BeamValue::Continue) continue;
        if (v == BeamValue::End) {
          out.push_back({open, i});
          open = kNone;
          continue;
        }
        warn(i, "secondary beam not terminated");
        out.push_back({open, i - 1});
        open = kNone;
      }
      if (v == BeamValue::Begin) {
        open = i;
      } else if (v == BeamValue::ForwardHook || v == BeamValue::BackwardHook) {
        out.push_back({i, i});
      } else if (v) {
        warn(i, "dangling secondary beam; dropped");
      }
    }
    if (open != kNone) {
      warn(range.hi, "secondary beam not terminated");
      out.push_back({open, range.hi});
    }
    return out;
  }

  Token beam_token(std::size_t chord) {
    Token t;
    t.id = ids_.token();
    t.label = "beam";
    t.position = {chords_[chord].staff, std::nullopt};
    return t;
  }

  Node group(Run range, int level) {
    Node g;
    g.kind = NodeKind::NoteGroup;
    g.id = ids_.node();
    g.children.emplace_back(beam_token(range.lo));
    std::vector<Run> inner = runs(range, ++level);
    while (inner.size() == 1 && inner[0].lo == range.lo && inner[0].hi == range.hi) {
      g.children.emplace_back(beam_token(range.lo));
      inner = runs(range, ++level);
    }
    std::size_t next = 0;
    for (std::size_t i = range.lo; i <= range.hi;) {
      if (next < inner.size() && inner[next].lo == i) {
        g.children.emplace_back(group(inner[next], level));
        i = inner[next++].hi + 1;
      } else {
        g.children.emplace_back(std::move(chords_[i].chord));
        ++i;
      }
    }
    return g;
  }

  Node singleton(std::size_t index) {
    BeamedChord& c = chords_[index];
    for (auto& e : c.chord.children) {
      auto* stem = std::get_if<Node>(&e);
      if (!stem || stem->kind != NodeKind::Stem) continue;
      for (int f = 0; f < c.flags; ++f) {
        Token t;
        t.id = ids_.token();
        t.label = "flag";
        t.position = {c.staff, std::nullopt};
        stem->children.emplace_back(std::move(t));
      }
    }
    Node g;
    g.kind = NodeKind::NoteGroup;
    g.id = ids_.node();
    g.onset = c.chord.onset;
    g.children.emplace_back(std::move(c.chord));
    return g;
  }

  std::vector<BeamedChord>& chords_;
  IdSource& ids_;
  Warnings& warnings_;
  const std::string& path_;
};

}  // namespace

std::vector<Node> build_groups(std::vector<BeamedChord> chords, IdSource& ids, Warnings& warnings,
                               const std::string& path) {
  return Builder(chords, ids, warnings, path).build();
}

std::string SpannerTable::start(const std::string& key, const std::string& token_id, IdSource& ids,
                                Warnings& warnings, const std::string& path) {
  auto it = open_.find(key);
  if (it != open_.end()) {
    warnings.push_back({it->second.path, "spanner restarted before it was stopped"});
    abandoned_.push_back(it->second.token_id);
    open_.erase(it);
  }
  std::string pair = ids.pair();
  open_.emplace(key, Open{pair, token_id, path});
  return pair;
}

SpannerTable::End SpannerTable::stop(const std::string& key, IdSource& ids, Warnings& warnings,
                                     const std::string& path) {
  auto it = open_.find(key);
  if (it == open_.end()) {
    warnings.push_back({path, "spanner stop without a start"});
    return {ids.pair(), true};
  }
  End end{it->second.pair_id, false};
  open_.erase(it);
  return end;
}

std::vector<std::string> SpannerTable::drain(Warnings& warnings, const std::string& path) {
  std::vector<std::string> ids = std::move(abandoned_);
  abandoned_.clear();
  for (const auto& [key, open] : open_) {
    warnings.push_back({open.path.empty() ? path : open.path, "spanner never stopped"});
    ids.push_back(open.token_id);
  }
  open_.clear();
  return ids;
}

}  // namespace mtn::musicxml
