#ifndef SMTLAB_EVALUATION_HPP
#define SMTLAB_EVALUATION_HPP

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace smtlab {

struct BleuReport {
  double bleu = 0.0;  // percentage in [0, 100]
  std::array<double, 4> precisions = {0, 0, 0, 0};
  double brevity_penalty = 0.0;
  size_t hypothesis_length = 0;
  size_t reference_length = 0;
};

// Corpus-level BLEU, n <= 4, single reference, no smoothing.
BleuReport bleu(const std::vector<std::vector<std::string>>& hypotheses,
                const std::vector<std::vector<std::string>>& references);

struct TimingReport {
  double cpu_seconds = 0.0;  // user+system, decoding only (model load excluded)
  double wall_seconds = 0.0;
  double per_sentence_ms = 0.0;
  std::optional<double> relative;  // multiple of the baseline run
};

TimingReport time_decode(double cpu_seconds, double wall_seconds, size_t sentence_count,
                         const TimingReport* baseline = nullptr);

}  // namespace smtlab

#endif
