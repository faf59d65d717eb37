#include "mtn/validate.hpp"

#include <map>
#include <set>

#include "mtn/canonical.hpp"
#include "mtn/error.hpp"

namespace mtn {

namespace {

class Checker {
 public:
  Checker(const Vocabulary& vocab, int staff_count, std::vector<Violation>& out)
      : vocab_(vocab), staff_count_(staff_count), out_(out) {}

  void measure(const Measure& m) {
    measure_id_ = m.id;
    for (std::size_t i = 0; i < m.children.size(); ++i) {
      const Node& node = m.children[i];
      const std::string path = m.id + "/" + std::string(kind_name(node.kind)) + "[" +
                               std::to_string(i) + "]";
      switch (node.kind) {
        case NodeKind::Attributes:
        case NodeKind::Direction:
        case NodeKind::Rest:
        case NodeKind::NoteGroup:
        case NodeKind::Barline:
          break;
        default:
          report("child-kind", subject(node, path),
                 std::string(kind_name(node.kind)) + " cannot appear directly in a measure");
      }
      if (!node.onset) {
        report("onset-required", subject(node, path), "top-level node needs an onset");
      }
      check_node(node, path, true);
    }
    if (structurally_sound_) {
      bool canonical = false;
      try {
        canonical = is_canonical(m, vocab_);
      } catch (const ValidationError&) {
        canonical = true;  // already reported as onset-required
      }
      if (!canonical) report("canonical-order", m.id, "children are not in reading order");
    }
  }

 private:
  static std::string subject(const Node& node, const std::string& path) {
    return node.id.empty() ? path : node.id;
  }

  void report(std::string rule, std::string subj, std::string message) {
    out_.push_back({std::move(rule), std::move(subj), std::move(message)});
  }

  void check_token(const Token& t, const std::string& path) {
    const std::string subj = t.id.empty() ? path : t.id;
    if (t.id.empty()) report("id-required", subj, "token without id");
    const TokenClass* tc = vocab_.find(t.label);
    if (!tc) {
      report("unknown-label", subj, "label '" + t.label + "' is not in the vocabulary");
      return;
    }
    if (t.position.staff < 1 || t.position.staff > staff_count_) {
      report("staff-range", subj,
             "staff " + std::to_string(t.position.staff) + " outside 1.." +
                 std::to_string(staff_count_));
    }
    if (tc->positional && !t.position.step) {
      report("position-required", subj, t.label + " needs a staff step");
    }
    if (!tc->positional && t.position.step) {
      report("position-forbidden", subj, t.label + " is positionless");
    }
    const bool paired = tc->spanner != SpannerEnd::None;
    if (paired && !t.pair_id) report("pair-id-required", subj, t.label + " needs a pair id");
    if (!paired && t.pair_id) report("pair-id-forbidden", subj, t.label + " is not a spanner");
    if (!paired && t.orphan) report("orphan-forbidden", subj, t.label + " is not a spanner");
    if (tc->numeric && !t.numeric_value) {
      report("numeric-value", subj, t.label + " needs a numeric value");
    }
    if (!tc->numeric && t.numeric_value) {
      report("numeric-value", subj, t.label + " carries no numeric value");
    }
    if (tc->numeric && t.numeric_value && *t.numeric_value < 1) {
      report("numeric-value", subj, "numeric value must be positive");
    }
  }

  const TokenClass* token_class(const Element& e) const {
    const auto* t = std::get_if<Token>(&e);
    return t ? vocab_.find(t->label) : nullptr;
  }

  bool token_in(const Element& e, std::initializer_list<TokenCategory> cats) const {
    const TokenClass* tc = token_class(e);
    if (!tc) return is_token(e);  // unknown labels are reported separately
    for (auto c : cats) {
      if (tc->category == c) return true;
    }
    return false;
  }

  bool node_of(const Element& e, std::initializer_list<NodeKind> kinds) const {
    const auto* n = std::get_if<Node>(&e);
    if (!n) return false;
    for (auto k : kinds) {
      if (n->kind == k) return true;
    }
    return false;
  }

  void bad_child(const Node& parent, const std::string& subj, const Element& child) {
    std::string what = is_token(child) ? "token " + std::get<Token>(child).label
                                       : std::string(kind_name(std::get<Node>(child).kind));
    report("child-kind", subj,
           what + " is not allowed inside " + std::string(kind_name(parent.kind)));
    structurally_sound_ = false;
  }

  std::size_t count_tokens(const Node& node, std::initializer_list<TokenCategory> cats) const {
    std::size_t n = 0;
    for (const auto& c : node.children) {
      if (is_token(c) && token_class(c) && token_in(c, cats)) ++n;
    }
    return n;
  }

  void check_node(const Node& node, const std::string& path, bool top_level) {
    const std::string subj = subject(node, path);
    if (node.onset && *node.onset < RationalTime(0)) report("onset-negative", subj, "onset below zero");
    if (!top_level && node.onset && node.kind != NodeKind::Chord) {
      report("onset-forbidden", subj, "only measure children and chords carry onsets");
    }
    if (node.kind == NodeKind::Chord && !node.onset) {
      report("onset-required", subj, "every chord needs an onset");
    }
    if (node.kind == NodeKind::AttrStaff) {
      if (!node.staff) {
        report("staff-required", subj, "attr_staff needs a staff number");
      } else if (*node.staff < 1 || *node.staff > staff_count_) {
        report("staff-range", subj, "attr_staff staff outside the part");
      }
    } else if (node.staff) {
      report("staff-forbidden", subj, "only attr_staff carries a staff number");
    }
    if (node.synthetic && !(top_level && node.kind == NodeKind::Attributes)) {
      report("synthetic-forbidden", subj, "only top-level attributes may be synthetic");
    }

    using C = TokenCategory;
    using K = NodeKind;
    auto allow = [&](auto&& pred) {
      for (const auto& child : node.children) {
        if (!pred(child)) bad_child(node, subj, child);
      }
    };
    switch (node.kind) {
      case K::Attributes:
        allow([&](const Element& e) { return node_of(e, {K::AttrStaff}); });
        if (node.children.empty()) report("empty-node", subj, "attributes without staves");
        break;
      case K::AttrStaff:
        allow([&](const Element& e) { return node_of(e, {K::Clef, K::Key, K::TimeSig}); });
        if (node.children.empty()) report("empty-node", subj, "attr_staff without changes");
        break;
      case K::Clef:
        allow([&](const Element& e) { return token_in(e, {C::Clef}); });
        if (node.children.size() != 1) report("token-count", subj, "clef needs exactly one token");
        break;
      case K::Key:
        allow([&](const Element& e) { return token_in(e, {C::Accidental}); });
        if (node.children.empty()) report("empty-node", subj, "key without accidentals");
        break;
      case K::TimeSig:
        allow([&](const Element& e) { return token_in(e, {C::TimeSig}); });
        if (node.children.empty()) report("empty-node", subj, "time_sig without tokens");
        break;
      case K::Barline:
        allow([&](const Element& e) {
          if (!is_token(e)) return false;
          const TokenClass* tc = token_class(e);
          return !tc || tc->category == C::Barline || tc->label == "fermata";
        });
        if (node.children.empty()) report("empty-node", subj, "barline without tokens");
        break;
      case K::Direction:
        allow([&](const Element& e) { return token_in(e, {C::Dynamic, C::Wedge, C::Marker}); });
        if (node.children.size() != 1) {
          report("token-count", subj, "direction needs exactly one directive token");
        }
        break;
      case K::NoteGroup: {
        allow([&](const Element& e) {
          return node_of(e, {K::NoteGroup, K::Chord}) || token_in(e, {C::Beam});
        });
        bool has_content = false;
        for (const auto& c : node.children) has_content = has_content || is_node(c);
        if (!has_content) report("empty-node", subj, "note_group without chords");
        break;
      }
      case K::Chord: {
        allow([&](const Element& e) { return node_of(e, {K::Stem, K::Note}); });
        std::size_t stems = 0;
        std::size_t notes = 0;
        for (const auto& c : node.children) {
          if (node_of(c, {K::Stem})) ++stems;
          if (node_of(c, {K::Note})) ++notes;
        }
        if (stems > 1) report("chord-stem-count", subj, "chord has more than one stem");
        if (notes < 1) report("chord-note-count", subj, "chord has no notes");
        break;
      }
      case K::Stem:
        allow([&](const Element& e) { return token_in(e, {C::Stem, C::Flag}); });
        if (count_tokens(node, {C::Stem}) != 1) {
          report("token-count", subj, "stem needs exactly one direction token");
        }
        break;
      case K::Note:
        allow([&](const Element& e) {
          return token_in(e, {C::Notehead, C::Accidental, C::Dot, C::Articulation, C::Ornament,
                              C::Slur, C::Tie, C::Tuplet});
        });
        if (count_tokens(node, {C::Notehead}) != 1) {
          report("token-count", subj, "note needs exactly one notehead");
        }
        break;
      case K::Rest:
        allow([&](const Element& e) {
          return token_in(e, {C::Rest, C::Dot, C::Articulation, C::Slur, C::Tuplet});
        });
        if (count_tokens(node, {C::Rest}) != 1) {
          report("token-count", subj, "rest needs exactly one rest token");
        }
        break;
    }

    for (std::size_t i = 0; i < node.children.size(); ++i) {
      const auto& child = node.children[i];
      std::string child_path = path + "/" +
                               (is_token(child) ? std::string("token")
                                                : std::string(kind_name(std::get<Node>(child).kind))) +
                               "[" + std::to_string(i) + "]";
      if (const auto* t = std::get_if<Token>(&child)) {
        check_token(*t, child_path);
      } else {
        check_node(std::get<Node>(child), child_path, false);
      }
    }
  }

  const Vocabulary& vocab_;
  int staff_count_;
  std::vector<Violation>& out_;
  std::string measure_id_;
  bool structurally_sound_ = true;
};

}  // namespace

std::vector<Violation> validate_measure(const Measure& measure, int staff_count,
                                        const Vocabulary& vocab) {
  std::vector<Violation> out;
  Checker(vocab, staff_count, out).measure(measure);
  return out;
}

std::vector<Violation> validate(const Work& work, const Vocabulary& vocab) {
  std::vector<Violation> out;
  std::set<std::string> measure_ids;
  std::set<std::string> element_ids;

  struct PairUse {
    std::vector<const Token*> tokens;
  };
  std::map<std::string, PairUse> pairs;

  auto note_id = [&](const std::string& id) {
    if (id.empty()) return;
    if (!element_ids.insert(id).second) out.push_back({"duplicate-id", id, "id used twice"});
  };

  for (const auto& part : work.parts) {
    if (part.staff_count < 1) {
      out.push_back({"staff-count", part.id, "part needs at least one staff"});
    }
    for (const auto& m : part.measures) {
      if (m.id.empty()) out.push_back({"id-required", part.id, "measure without id"});
      if (!m.id.empty() && !measure_ids.insert(m.id).second) {
        out.push_back({"duplicate-measure-id", m.id, "measure id used twice"});
      }
      auto local = validate_measure(m, std::max(part.staff_count, 1), vocab);
      out.insert(out.end(), local.begin(), local.end());
      for (const auto& node : m.children) {
        for_each_node(node, [&](const Node& n) { note_id(n.id); });
      }
      for_each_token(m, [&](const Token& t) {
        note_id(t.id);
        if (t.pair_id) pairs[*t.pair_id].tokens.push_back(&t);
      });
    }
  }

  for (const auto& [pair_id, use] : pairs) {
    const auto& toks = use.tokens;
    bool any_orphan = false;
    for (const Token* t : toks) any_orphan = any_orphan || t->orphan;
    if (any_orphan) {
      if (toks.size() != 1) {
        out.push_back({"pair-multiplicity", pair_id,
                       "orphan pair id must occur exactly once, found " +
                           std::to_string(toks.size())});
      }
      continue;
    }
    if (toks.size() != 2) {
      out.push_back({"pair-multiplicity", pair_id,
                     "pair id must occur exactly twice, found " + std::to_string(toks.size())});
      continue;
    }
    const TokenClass* a = vocab.find(toks[0]->label);
    const TokenClass* b = vocab.find(toks[1]->label);
    if (!a || !b) continue;
    const bool one_each = (a->spanner == SpannerEnd::Start && b->spanner == SpannerEnd::Stop) ||
                          (a->spanner == SpannerEnd::Stop && b->spanner == SpannerEnd::Start);
    if (!one_each || !same_spanner_family(*a, *b)) {
      out.push_back({"pair-kind", pair_id,
                     "pair must join one start and one stop of the same spanner family"});
    }
  }
  return out;
}

}  // namespace mtn
