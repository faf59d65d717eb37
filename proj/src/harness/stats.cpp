#include "mtn/harness/stats.hpp"

#include <algorithm>
#include <random>

#include "mtn/error.hpp"
#include "mtn/vocabulary.hpp"

namespace mtn::harness {

Exact CorpusStats::proportion(const std::string& label) const {
  if (tokens == 0) return 0;
  const auto it = classes.find(label);
  return it == classes.end() ? Exact(0) : Exact(it->second) / Exact(tokens);
}

CorpusStats corpus_stats(std::span<const Work> works) {
  CorpusStats s;
  for (const auto& w : works) {
    ++s.works;
    for (const auto& p : w.parts) {
      for (const auto& m : p.measures) {
        ++s.measures;
        for_each_token(m, [&](const Token& t) {
          ++s.classes[t.label];
          ++s.tokens;
        });
      }
    }
  }
  return s;
}

std::string stats_text(const CorpusStats& s) {
  std::vector<std::pair<std::string, std::size_t>> rows(s.classes.begin(), s.classes.end());
  std::stable_sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) { return a.second > b.second; });
  std::size_t width = 5;
  for (const auto& r : rows) width = std::max(width, r.first.size());
  auto line = [&](const std::string& label, const std::string& count, const std::string& prop) {
    return label + std::string(width - label.size(), ' ') + std::string(10 - std::min<std::size_t>(10, count.size()), ' ') +
           count + std::string(8 - std::min<std::size_t>(8, prop.size()), ' ') + prop + "\n";
  };
  std::string out = std::to_string(s.works) + " works, " + std::to_string(s.measures) + " measures, " +
                    std::to_string(s.tokens) + " tokens\n\n";
  out += line("Class", "Counts", "Prop");
  Exact sum = 0;
  for (const auto& [label, count] : rows) {
    const Exact prop = s.proportion(label);
    sum += prop;
    out += line(label, std::to_string(count), to_decimal(prop, 4));
  }
  out += line("Total", std::to_string(s.tokens), to_decimal(sum, 4));
  return out;
}

PerturbResult perturb_labels(std::vector<Work>& works, const PerturbSpec& spec) {
  const auto& vocab = Vocabulary::standard();
  const TokenClass* from = vocab.find(spec.from);
  const TokenClass* to = vocab.find(spec.to);
  if (!from) throw VocabularyError(spec.from);
  if (!to) throw VocabularyError(spec.to);
  if (from->positional != to->positional) {
    throw Error("cannot relabel '" + spec.from + "' as '" + spec.to + "': different token kinds");
  }
  if (spec.fraction < 0 || spec.fraction > 1) throw Error("perturbation fraction must lie in [0, 1]");
  std::vector<Token*> pool;
  for (auto& w : works) {
    for (auto& p : w.parts) {
      for (auto& m : p.measures) {
        for_each_token(m, [&](Token& t) {
          if (t.label == spec.from) pool.push_back(&t);
        });
      }
    }
  }
  PerturbResult r;
  r.candidates = pool.size();
  const Exact wanted = spec.fraction * Exact(pool.size());
  r.relabeled = static_cast<std::size_t>(boost::multiprecision::numerator(wanted) /
                                         boost::multiprecision::denominator(wanted));
  std::mt19937_64 rng(spec.seed);
  for (std::size_t i = 0; i < r.relabeled; ++i) {
    std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
    std::swap(pool[i], pool[pick(rng)]);
    pool[i]->label = spec.to;
  }
  return r;
}

}  // namespace mtn::harness
