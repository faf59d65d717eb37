#include "mtn/metrics/ted.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace mtn::metrics {

std::int64_t UnitCost::relabel(const TreeNode& from, const TreeNode& to) const {
  return from.label == to.label ? 0 : 2;
}

namespace {

bool is_notehead(const TreeNode& n) { return n.note && !n.note->is_rest; }

int semantic_mismatches(const TreeNode& a, const TreeNode& b) {
  const auto& pa = a.note->position;
  const auto& pb = b.note->position;
  return (pa.staff != pb.staff) + (pa.step != pb.step) + (a.label != b.label);
}

}  // namespace

std::int64_t SemanticCost::relabel(const TreeNode& from, const TreeNode& to) const {
  if (is_notehead(from) && is_notehead(to)) {
    const int diff = semantic_mismatches(from, to);
    return diff == 0 ? 0 : diff == 1 ? 1 : 2;
  }
  return from.label == to.label ? 0 : 2;
}

Exact semantic_cost(const TreeNode& a, const TreeNode& b) {
  return Exact(SemanticCost{}.relabel(a, b), 2);
}

namespace {

void finish(EditScript& s) {
  std::sort(s.mapping.begin(), s.mapping.end());
  // source-side operations in source pre-order, then inserts in target order
  std::sort(s.ops.begin(), s.ops.end(), [](const EditOp& l, const EditOp& r) {
    const bool li = l.kind == EditKind::Insert;
    const bool ri = r.kind == EditKind::Insert;
    if (li != ri) return ri;
    return li ? l.to < r.to : l.from < r.from;
  });
}

// Pre-order structure, labels and note tuples: everything the cost models see.
std::string orientation_key(const LabeledTree& t) {
  std::ostringstream out;
  for (const auto& n : t.nodes()) {
    out << n.parent << ' ' << n.label;
    if (n.note) {
      out << ' ' << n.note->position.staff << ':' << n.note->position.step.value_or(-1000) << ':'
          << to_string(n.note->onset) << ':' << to_string(n.note->duration) << ':' << n.note->is_rest;
    }
    out << '\n';
  }
  return out.str();
}

class SwappedCost final : public CostModel {
 public:
  explicit SwappedCost(const CostModel& inner) : inner_(inner) {}
  std::int64_t relabel(const TreeNode& from, const TreeNode& to) const override {
    return inner_.relabel(to, from);
  }
  std::int64_t remove(const TreeNode& n) const override { return inner_.insert(n); }
  std::int64_t insert(const TreeNode& n) const override { return inner_.remove(n); }

 private:
  const CostModel& inner_;
};

// Post-order view of a pre-order tree, 1-based as in the classic algorithm.
struct Indexed {
  std::vector<int> post_to_pre;  // [1..n]
  std::vector<int> lml;          // leftmost leaf descendant, post-order id
  std::vector<int> keyroots;

  explicit Indexed(const LabeledTree& t) {
    const int n = static_cast<int>(t.size());
    post_to_pre.assign(static_cast<std::size_t>(n) + 1, -1);
    lml.assign(static_cast<std::size_t>(n) + 1, 0);
    if (n == 0) return;
    std::vector<int> pre_to_post(static_cast<std::size_t>(n), 0);
    int counter = 0;
    // iterative post-order
    std::vector<std::pair<int, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
      auto& [node, next_child] = stack.back();
      const auto& kids = t[static_cast<std::size_t>(node)].children;
      if (next_child < kids.size()) {
        int child = kids[next_child++];
        stack.emplace_back(child, 0);
      } else {
        const int post = ++counter;
        post_to_pre[static_cast<std::size_t>(post)] = node;
        pre_to_post[static_cast<std::size_t>(node)] = post;
        lml[static_cast<std::size_t>(post)] =
            kids.empty() ? post : lml[static_cast<std::size_t>(pre_to_post[static_cast<std::size_t>(kids.front())])];
        stack.pop_back();
      }
    }
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    for (int k = n; k >= 1; --k) {
      const int l = lml[static_cast<std::size_t>(k)];
      if (!seen[static_cast<std::size_t>(l)]) {
        seen[static_cast<std::size_t>(l)] = true;
        keyroots.push_back(k);
      }
    }
    std::sort(keyroots.begin(), keyroots.end());
  }
};

class Solver {
 public:
  Solver(const LabeledTree& a, const LabeledTree& b, const CostModel& costs)
      : a_(a), b_(b), ia_(a), ib_(b), costs_(costs),
        n1_(static_cast<int>(a.size())), n2_(static_cast<int>(b.size())),
        fd_(static_cast<std::size_t>(n1_ + 1) * static_cast<std::size_t>(n2_ + 1), 0),
        td_(fd_.size(), 0) {
    del_.assign(static_cast<std::size_t>(n1_) + 1, 0);
    ins_.assign(static_cast<std::size_t>(n2_) + 1, 0);
    for (int x = 1; x <= n1_; ++x) del_[static_cast<std::size_t>(x)] = costs_.remove(node_a(x));
    for (int y = 1; y <= n2_; ++y) ins_[static_cast<std::size_t>(y)] = costs_.insert(node_b(y));
  }

  EditScript run() {
    EditScript script;
    if (n1_ == 0 || n2_ == 0) {
      for (int x = 1; x <= n1_; ++x) record_delete(script, x);
      for (int y = 1; y <= n2_; ++y) record_insert(script, y);
      return script;
    }
    for (int i : ia_.keyroots) {
      for (int j : ib_.keyroots) forest(i, j);
    }
    backtrack(script);
    return script;
  }

 private:
  const TreeNode& node_a(int post) const {
    return a_[static_cast<std::size_t>(ia_.post_to_pre[static_cast<std::size_t>(post)])];
  }
  const TreeNode& node_b(int post) const {
    return b_[static_cast<std::size_t>(ib_.post_to_pre[static_cast<std::size_t>(post)])];
  }
  std::int64_t& fd(int x, int y) {
    return fd_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n2_ + 1) + static_cast<std::size_t>(y)];
  }
  std::int64_t& td(int x, int y) {
    return td_[static_cast<std::size_t>(x) * static_cast<std::size_t>(n2_ + 1) + static_cast<std::size_t>(y)];
  }
  int lml_a(int x) const { return ia_.lml[static_cast<std::size_t>(x)]; }
  int lml_b(int y) const { return ib_.lml[static_cast<std::size_t>(y)]; }
  std::int64_t ren(int x, int y) const { return costs_.relabel(node_a(x), node_b(y)); }

  void forest(int i, int j) {
    const int li = lml_a(i);
    const int lj = lml_b(j);
    fd(li - 1, lj - 1) = 0;
    for (int x = li; x <= i; ++x) fd(x, lj - 1) = fd(x - 1, lj - 1) + del_[static_cast<std::size_t>(x)];
    for (int y = lj; y <= j; ++y) fd(li - 1, y) = fd(li - 1, y - 1) + ins_[static_cast<std::size_t>(y)];
    for (int x = li; x <= i; ++x) {
      for (int y = lj; y <= j; ++y) {
        const std::int64_t del = fd(x - 1, y) + del_[static_cast<std::size_t>(x)];
        const std::int64_t ins = fd(x, y - 1) + ins_[static_cast<std::size_t>(y)];
        if (lml_a(x) == li && lml_b(y) == lj) {
          fd(x, y) = std::min({del, ins, fd(x - 1, y - 1) + ren(x, y)});
          td(x, y) = fd(x, y);
        } else {
          fd(x, y) = std::min({del, ins, fd(lml_a(x) - 1, lml_b(y) - 1) + td(x, y)});
        }
      }
    }
  }

  void backtrack(EditScript& script) {
    std::vector<std::pair<int, int>> pending{{n1_, n2_}};
    while (!pending.empty()) {
      auto [ri, rj] = pending.back();
      pending.pop_back();
      forest(ri, rj);
      const int li = lml_a(ri);
      const int lj = lml_b(rj);
      int x = ri;
      int y = rj;
      while (x >= li || y >= lj) {
        if (x >= li && y >= lj) {
          if (lml_a(x) == li && lml_b(y) == lj) {
            const std::int64_t r = ren(x, y);
            if (fd(x, y) == fd(x - 1, y - 1) + r) {
              record_pair(script, x, y, r);
              --x;
              --y;
              continue;
            }
          } else if (fd(x, y) == fd(lml_a(x) - 1, lml_b(y) - 1) + td(x, y)) {
            pending.emplace_back(x, y);
            const int nx = lml_a(x) - 1;
            y = lml_b(y) - 1;
            x = nx;
            continue;
          }
        }
        if (x >= li && fd(x, y) == fd(x - 1, y) + del_[static_cast<std::size_t>(x)]) {
          record_delete(script, x);
          --x;
          continue;
        }
        if (y >= lj && fd(x, y) == fd(x, y - 1) + ins_[static_cast<std::size_t>(y)]) {
          record_insert(script, y);
          --y;
          continue;
        }
        throw std::logic_error("tree edit distance backtracking lost the optimal path");
      }
    }
  }

  void record_pair(EditScript& s, int x, int y, std::int64_t cost) {
    const int from = ia_.post_to_pre[static_cast<std::size_t>(x)];
    const int to = ib_.post_to_pre[static_cast<std::size_t>(y)];
    s.ops.push_back({cost == 0 ? EditKind::Match : EditKind::Substitute, from, to, cost});
    s.mapping.emplace_back(from, to);
    if (cost != 0) ++s.substitutions;
    s.half_cost += cost;
  }
  void record_delete(EditScript& s, int x) {
    const int from = ia_.post_to_pre[static_cast<std::size_t>(x)];
    s.ops.push_back({EditKind::Delete, from, -1, del_[static_cast<std::size_t>(x)]});
    ++s.deletions;
    s.half_cost += del_[static_cast<std::size_t>(x)];
  }
  void record_insert(EditScript& s, int y) {
    const int to = ib_.post_to_pre[static_cast<std::size_t>(y)];
    s.ops.push_back({EditKind::Insert, -1, to, ins_[static_cast<std::size_t>(y)]});
    ++s.insertions;
    s.half_cost += ins_[static_cast<std::size_t>(y)];
  }

  const LabeledTree& a_;
  const LabeledTree& b_;
  Indexed ia_;
  Indexed ib_;
  const CostModel& costs_;
  int n1_;
  int n2_;
  std::vector<std::int64_t> fd_;
  std::vector<std::int64_t> td_;
  std::vector<std::int64_t> del_;
  std::vector<std::int64_t> ins_;
};

}  // namespace

EditScript tree_edit_distance(const LabeledTree& source, const LabeledTree& target,
                              const CostModel& costs) {
  // Equal-cost mappings are resolved in one fixed orientation, so swapping
  // the arguments yields exactly the transposed script.
  if (orientation_key(target) < orientation_key(source)) {
    const SwappedCost swapped(costs);
    EditScript s = Solver(target, source, swapped).run();
    std::swap(s.deletions, s.insertions);
    for (auto& [a, b] : s.mapping) std::swap(a, b);
    for (auto& op : s.ops) {
      std::swap(op.from, op.to);
      if (op.kind == EditKind::Delete) {
        op.kind = EditKind::Insert;
      } else if (op.kind == EditKind::Insert) {
        op.kind = EditKind::Delete;
      }
    }
    finish(s);
    return s;
  }
  EditScript s = Solver(source, target, costs).run();
  finish(s);
  return s;
}

std::string describe(const EditScript& script, const LabeledTree& source,
                     const LabeledTree& target) {
  std::ostringstream out;
  auto label_a = [&](int i) { return source[static_cast<std::size_t>(i)].label; };
  auto label_b = [&](int i) { return target[static_cast<std::size_t>(i)].label; };
  auto id_suffix = [](const TreeNode& n) {
    return n.source_id.empty() ? std::string() : " (" + n.source_id + ")";
  };
  for (const auto& op : script.ops) {
    switch (op.kind) {
      case EditKind::Match:
        break;
      case EditKind::Substitute:
        out << "substitute " << label_a(op.from) << id_suffix(source[static_cast<std::size_t>(op.from)])
            << " -> " << label_b(op.to) << id_suffix(target[static_cast<std::size_t>(op.to)]);
        if (op.half_cost != 2) out << " [cost " << to_string(Exact(op.half_cost, 2)) << "]";
        out << '\n';
        break;
      case EditKind::Delete:
        out << "delete " << label_a(op.from) << id_suffix(source[static_cast<std::size_t>(op.from)])
            << '\n';
        break;
      case EditKind::Insert:
        out << "insert " << label_b(op.to) << id_suffix(target[static_cast<std::size_t>(op.to)])
            << '\n';
        break;
    }
  }
  return out.str();
}

}  // namespace mtn::metrics
