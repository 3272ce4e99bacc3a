#ifndef SMTLAB_DECODER_HPP
#define SMTLAB_DECODER_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "smtlab/markup.hpp"
#include "smtlab/ngram_lm.hpp"
#include "smtlab/translation_model.hpp"
#include "smtlab/weights.hpp"

namespace smtlab {

enum class SearchAlgorithm { stack, cube_pruning };

struct DecoderConfig {
  SearchAlgorithm algorithm = SearchAlgorithm::stack;
  int stack_size = 100;   // ss, histogram pruning per stack
  int table_limit = 20;   // tl, options per source span
  int pop_limit = 1000;   // pl, cube pruning pops per stack
  int max_phrase_length = 7;
  double oov_log_penalty = -10.0;  // log10, applied to all four table features
  FeatureWeights weights;
};

struct DecodeStats {
  uint64_t hypotheses_expanded = 0;
  uint64_t recombinations = 0;
  uint64_t pruned = 0;

  DecodeStats& operator+=(const DecodeStats& o);
};

// One step of the back-trace: the phrase option applied over a source
// span.
struct DerivationStep {
  int span_begin = 0;
  int span_end = 0;
  PhraseOption option;
};

struct DecodeResult {
  FlatSentence target;
  double score = 0.0;  // weighted model score incl. sentence-end LM term
  DecodeStats stats;
  std::vector<DerivationStep> derivation;
};

DecodeResult decode_stack(const FlatSentence& source, const PhraseTable& table,
                          const NGramModel& lm, const DecoderConfig& config);
DecodeResult decode_cube(const FlatSentence& source, const PhraseTable& table,
                         const NGramModel& lm, const DecoderConfig& config);
DecodeResult decode_sentence(const FlatSentence& source, const PhraseTable& table,
                             const NGramModel& lm, const DecoderConfig& config);

// Re-sums features along the back-trace; used to validate reported
// scores.
double recompute_score(const FlatSentence& source, const DecodeResult& result,
                       const NGramModel& lm, const DecoderConfig& config);

struct CorpusDecodeResult {
  std::vector<DecodeResult> outputs;  // input order
  std::vector<std::string> errors;    // per-sentence, empty when ok
  DecodeStats stats;
  double cpu_seconds = 0.0;   // user+system, decoding only
  double wall_seconds = 0.0;
};

CorpusDecodeResult decode_corpus(const std::vector<FlatSentence>& sentences,
                                 const PhraseTable& table, const NGramModel& lm,
                                 const DecoderConfig& config, int threads = 1);

}  // namespace smtlab

#endif
