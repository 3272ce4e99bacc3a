#ifndef SMTLAB_WEIGHTS_HPP
#define SMTLAB_WEIGHTS_HPP

#include <array>
#include <string>

namespace smtlab {

// Log-linear weights. Tuning is out of scope; defaults are fixed and
// configurable.
struct FeatureWeights {
  double lm = 0.5;
  std::array<double, 4> table = {0.2, 0.2, 0.2, 0.2};  // phi(s|t), lex(s|t), phi(t|s), lex(t|s)
  double phrase_penalty = 0.2;
  double word_penalty = -1.0;

  static FeatureWeights load(const std::string& path);  // `key = value` lines
};

}  // namespace smtlab

#endif
