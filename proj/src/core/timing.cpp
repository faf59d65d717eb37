#include "mtn/timing.hpp"

#include <algorithm>
#include <climits>
#include <optional>

#include "mtn/error.hpp"

namespace mtn {

int conventional_normal(int actual) {
  if (actual <= 1) return 1;
  if (actual == 2) return 3;
  int normal = 1;
  while (normal * 2 < actual) normal *= 2;
  return normal;
}

namespace {

std::size_t count_label(const Node& node, std::string_view label) {
  std::size_t n = 0;
  for (const auto& c : node.children) {
    if (const auto* t = std::get_if<Token>(&c); t && t->label == label) ++n;
  }
  return n;
}

RationalTime apply_dots(RationalTime base, std::size_t dots) {
  // base * (2 - 1/2^k)
  std::int64_t pow = std::int64_t{1} << dots;
  return base * RationalTime(2 * pow - 1, pow);
}

struct OpenEntry {
  std::string pair_id;
  TupletRatio ratio;
  int staff = 1;
  std::optional<std::size_t> chain;
};

int min_staff(const Node& node) {
  int staff = INT_MAX;
  for_each_token(node, [&](const Token& t) { staff = std::min(staff, t.position.staff); });
  return staff == INT_MAX ? 1 : staff;
}

class Walker {
 public:
  Walker(const Vocabulary& vocab, std::span<const OpenTuplet> open, bool compute_durations)
      : vocab_(vocab), compute_(compute_durations) {
    for (const auto& o : open) entries_.push_back({o.pair_id, o.ratio, o.staff, std::nullopt});
  }

  void run(const Measure& m) {
    for (std::size_t i = 0; i < m.children.size(); ++i) {
      const Node& node = m.children[i];
      if (node.kind == NodeKind::Rest) {
        event(node, i, 0);
      } else if (node.kind == NodeKind::NoteGroup) {
        group(node, i, 0);
      }
    }
  }

  std::vector<TimedEvent> events;
  std::vector<OpenEntry> entries_;

 private:
  void group(const Node& g, std::size_t top, int beams) {
    beams += static_cast<int>(count_label(g, "beam"));
    for (const auto& c : g.children) {
      const auto* sub = std::get_if<Node>(&c);
      if (!sub) continue;
      if (sub->kind == NodeKind::Chord) {
        event(*sub, top, beams);
      } else if (sub->kind == NodeKind::NoteGroup) {
        group(*sub, top, beams);
      }
    }
  }

  void event(const Node& node, std::size_t top, int beams) {
    const int staff = min_staff(node);
    std::vector<std::string> stops;
    for_each_token(node, [&](const Token& t) {
      if (t.label == "tuplet_start" && t.pair_id) {
        const int actual = t.numeric_value.value_or(3);
        entries_.push_back({*t.pair_id, {actual, conventional_normal(actual)}, staff, top});
      } else if (t.label == "tuplet_stop" && t.pair_id) {
        stops.push_back(*t.pair_id);
      }
    });
    TimedEvent ev;
    ev.node = &node;
    ev.top_index = top;
    ev.enclosing_beams = beams;
    for (const auto& e : entries_) {
      if (e.chain == top || e.staff == staff) ev.tuplets.push_back(e.ratio);
    }
    if (compute_) ev.duration = duration_of(node, ev.tuplets, beams, vocab_);
    events.push_back(std::move(ev));
    for (const auto& pair : stops) {
      std::erase_if(entries_, [&](const OpenEntry& e) { return e.pair_id == pair; });
    }
  }

  const Vocabulary& vocab_;
  bool compute_;
};

template <typename NodeT, typename Fn>
void visit_chain(NodeT& group, Fn&& fn) {
  for (auto& c : group.children) {
    auto* sub = std::get_if<Node>(&c);
    if (!sub) continue;
    if (sub->kind == NodeKind::Chord) {
      fn(*sub);
    } else if (sub->kind == NodeKind::NoteGroup) {
      visit_chain(*sub, fn);
    }
  }
}

}  // namespace

RationalTime duration_of(const Node& node, std::span<const TupletRatio> active_tuplets,
                         int enclosing_beams, const Vocabulary& vocab) {
  RationalTime value;
  if (node.kind == NodeKind::Rest) {
    const TokenClass* rest_class = nullptr;
    for (const auto& c : node.children) {
      const auto* t = std::get_if<Token>(&c);
      if (!t) continue;
      const TokenClass* tc = vocab.find(t->label);
      if (!tc) throw VocabularyError(t->label);
      if (tc->category == TokenCategory::Rest) rest_class = tc;
    }
    if (!rest_class || !rest_class->rest_duration) {
      throw VocabularyError(node.id.empty() ? "<rest without rest token>" : node.id);
    }
    value = apply_dots(*rest_class->rest_duration, count_label(node, "dot"));
  } else if (node.kind == NodeKind::Chord) {
    const Node* first_note = nullptr;
    const Node* stem = nullptr;
    for (const auto& c : node.children) {
      const auto* sub = std::get_if<Node>(&c);
      if (!sub) continue;
      if (sub->kind == NodeKind::Note && !first_note) first_note = sub;
      if (sub->kind == NodeKind::Stem && !stem) stem = sub;
    }
    const TokenClass* head = nullptr;
    if (first_note) {
      for (const auto& c : first_note->children) {
        const auto* t = std::get_if<Token>(&c);
        if (!t) continue;
        const TokenClass* tc = vocab.find(t->label);
        if (!tc) throw VocabularyError(t->label);
        if (tc->category == TokenCategory::Notehead) head = tc;
      }
    }
    if (!head) throw VocabularyError(node.id.empty() ? "<chord without notehead>" : node.id);
    if (head->grace_or_cue) return RationalTime(0);
    switch (head->shape) {
      case NoteheadShape::Black: value = 1; break;
      case NoteheadShape::White: value = stem ? 2 : 4; break;
      case NoteheadShape::Breve: value = 8; break;
      case NoteheadShape::None: throw VocabularyError(head->label);
    }
    const std::size_t flags = stem ? count_label(*stem, "flag") : 0;
    const auto halvings = static_cast<std::int64_t>(flags) + enclosing_beams;
    value /= RationalTime(std::int64_t{1} << halvings);
    value = apply_dots(value, count_label(*first_note, "dot"));
  } else {
    throw ValidationError("duration-kind", node.id,
                          std::string(kind_name(node.kind)) + " has no duration");
  }
  for (const auto& ratio : active_tuplets) {
    value *= RationalTime(ratio.normal, ratio.actual);
  }
  return value;
}

std::vector<TimedEvent> timed_events(const Measure& measure, const Vocabulary& vocab,
                                     std::span<const OpenTuplet> open) {
  Walker w(vocab, open, true);
  w.run(measure);
  return std::move(w.events);
}

std::vector<OpenTuplet> open_tuplets_after(const Measure& measure,
                                           std::span<const OpenTuplet> open,
                                           const Vocabulary& vocab) {
  Walker w(vocab, open, false);
  w.run(measure);
  std::vector<OpenTuplet> out;
  for (const auto& e : w.entries_) out.push_back({e.pair_id, e.ratio, e.staff});
  return out;
}

Measure infer_onsets(Measure measure, const Vocabulary& vocab, std::span<const OpenTuplet> open) {
  Walker w(vocab, open, true);
  w.run(measure);
  // events are in the same order visit_chain walks the copy below
  std::size_t cursor = 0;
  for (std::size_t i = 0; i < measure.children.size(); ++i) {
    Node& top = measure.children[i];
    if (top.kind == NodeKind::Rest) {
      ++cursor;
      continue;
    }
    if (top.kind != NodeKind::NoteGroup) continue;
    std::optional<RationalTime> next = top.onset;
    visit_chain(top, [&](Node& chord) {
      const TimedEvent& ev = w.events[cursor++];
      if (!next) {
        if (!chord.onset) {
          throw InconsistentOnsetError(chord.id, "first chord of a group has no onset");
        }
        next = chord.onset;
      }
      if (chord.onset && *chord.onset != *next) {
        throw InconsistentOnsetError(chord.id, "explicit " + to_string(*chord.onset) +
                                                   " but inferred " + to_string(*next));
      }
      chord.onset = *next;
      *next += ev.duration;
    });
  }
  return measure;
}

Measure strip_inferrable_onsets(Measure measure) {
  for (auto& top : measure.children) {
    if (top.kind != NodeKind::NoteGroup) continue;
    bool first = true;
    visit_chain(top, [&](Node& chord) {
      if (!first) chord.onset.reset();
      first = false;
    });
  }
  return measure;
}

}  // namespace mtn
