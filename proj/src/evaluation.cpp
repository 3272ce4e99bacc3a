#include "smtlab/evaluation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

namespace smtlab {

BleuReport bleu(const std::vector<std::vector<std::string>>& hypotheses,
                const std::vector<std::vector<std::string>>& references) {
  if (hypotheses.size() != references.size())
    throw std::invalid_argument("bleu: hypothesis/reference count mismatch");
  if (hypotheses.empty()) throw std::invalid_argument("bleu: empty corpus");

  BleuReport rep;
  std::array<size_t, 4> matched = {0, 0, 0, 0}, total = {0, 0, 0, 0};

  using Ngram = std::vector<std::string>;
  for (size_t s = 0; s < hypotheses.size(); ++s) {
    const auto& hyp = hypotheses[s];
    const auto& ref = references[s];
    rep.hypothesis_length += hyp.size();
    rep.reference_length += ref.size();
    for (size_t n = 1; n <= 4; ++n) {
      if (hyp.size() < n) continue;
      std::map<Ngram, size_t> ref_counts, hyp_counts;
      for (size_t i = 0; i + n <= ref.size(); ++i)
        ++ref_counts[Ngram(ref.begin() + i, ref.begin() + i + n)];
      for (size_t i = 0; i + n <= hyp.size(); ++i)
        ++hyp_counts[Ngram(hyp.begin() + i, hyp.begin() + i + n)];
      total[n - 1] += hyp.size() - n + 1;
      for (const auto& [gram, c] : hyp_counts) {
        auto it = ref_counts.find(gram);
        if (it != ref_counts.end()) matched[n - 1] += std::min(c, it->second);
      }
    }
  }

  for (size_t n = 0; n < 4; ++n)
    rep.precisions[n] = total[n] > 0 ? static_cast<double>(matched[n]) / total[n] : 0.0;

  if (rep.hypothesis_length == 0) {
    rep.brevity_penalty = 0.0;
    rep.bleu = 0.0;
    return rep;
  }
  rep.brevity_penalty =
      rep.hypothesis_length > rep.reference_length
          ? 1.0
          : std::exp(1.0 - static_cast<double>(rep.reference_length) / rep.hypothesis_length);

  // Geometric mean over the orders the hypothesis corpus can realize;
  // short corpora are judged on the n-gram sizes they actually contain.
  bool zero = false;
  double log_sum = 0.0;
  int used = 0;
  for (size_t n = 0; n < 4; ++n) {
    if (total[n] == 0) continue;
    ++used;
    if (rep.precisions[n] <= 0.0) {
      zero = true;
      break;
    }
    log_sum += std::log(rep.precisions[n]);
  }
  rep.bleu = (zero || used == 0) ? 0.0 : rep.brevity_penalty * std::exp(log_sum / used) * 100.0;
  return rep;
}

TimingReport time_decode(double cpu_seconds, double wall_seconds, size_t sentence_count,
                         const TimingReport* baseline) {
  TimingReport t;
  t.cpu_seconds = cpu_seconds;
  t.wall_seconds = wall_seconds;
  t.per_sentence_ms = sentence_count > 0 ? cpu_seconds * 1000.0 / sentence_count : 0.0;
  if (baseline && baseline->cpu_seconds > 0.0) t.relative = cpu_seconds / baseline->cpu_seconds;
  return t;
}

}  // namespace smtlab
