#include "mtn/harness/align.hpp"

#include <map>
#include <string_view>

namespace mtn::harness {

Alignment align_measures(std::span<const Measure* const> predicted, std::span<const Measure* const> truth) {
  Alignment out;
  std::map<std::string_view, const Measure*> by_id;
  for (const Measure* p : predicted) {
    if (!p->id.empty()) by_id.emplace(p->id, p);
  }
  for (const Measure* g : truth) {
    if (by_id.count(g->id)) {
      out.by_id = true;
      break;
    }
  }
  if (out.by_id) {
    std::size_t used = 0;
    for (const Measure* g : truth) {
      const auto it = by_id.find(g->id);
      if (it == by_id.end()) {
        out.missed.push_back(g);
      } else {
        out.pairs.emplace_back(it->second, g);
        ++used;
      }
    }
    out.discarded = predicted.size() - used;
    return out;
  }
  const std::size_t n = std::min(predicted.size(), truth.size());
  for (std::size_t i = 0; i < n; ++i) out.pairs.emplace_back(predicted[i], truth[i]);
  for (std::size_t i = n; i < truth.size(); ++i) out.missed.push_back(truth[i]);
  out.discarded = predicted.size() - n;
  return out;
}

}  // namespace mtn::harness
