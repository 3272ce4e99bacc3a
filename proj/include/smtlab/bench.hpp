#ifndef SMTLAB_BENCH_HPP
#define SMTLAB_BENCH_HPP

#include <string>
#include <vector>

#include "smtlab/decoder.hpp"
#include "smtlab/evaluation.hpp"
#include "smtlab/markup.hpp"
#include "smtlab/ngram_lm.hpp"
#include "smtlab/segmentation.hpp"
#include "smtlab/translation_model.hpp"

namespace smtlab {

struct ExperimentSpec {
  std::string train_source;
  std::string train_target;
  std::string test_source;
  std::string test_reference;

  SegmentationScheme scheme = SegmentationScheme::word();
  FormatSpec format;

  int lm_order = 10;
  double lm_discount = 0.75;
  int em_iterations = 5;
  int max_phrase_length = 7;
  FeatureWeights weights;

  std::vector<std::string> sweep_labels;
  std::string baseline_label = "word-level";
};

// Plain-text `key = value` format with `[section]` headers.
ExperimentSpec parse_experiment_spec(const std::string& path);

// Sweep labels: "default", "tl=N", "ss=N" (stack decoding), "pl=N"
// (cube pruning); whitespace-separated combinations with an optional
// leading "stack"/"cube" are accepted.
DecoderConfig config_from_label(const std::string& label, const ExperimentSpec& spec);

struct TrainedModels {
  PhraseTable table;
  NGramModel lm;
};

TrainedModels train_models(const std::vector<FlatSentence>& source,
                           const std::vector<FlatSentence>& target, int lm_order,
                           double lm_discount, int em_iterations, int max_phrase_length);

struct BenchRow {
  std::string label;
  bool ok = true;
  std::string error;
  BleuReport bleu;
  TimingReport timing;
};

struct BenchReport {
  std::string scheme;
  std::string format;
  size_t train_pairs = 0;
  size_t test_sentences = 0;
  std::string date;
  std::vector<BenchRow> rows;  // baseline first
};

BenchReport run_bench(const ExperimentSpec& spec);

// Aligned plain-text table shaped like the accuracy/relative-time
// reports this tool exists to produce.
std::string render_table(const BenchReport& report);
// Machine-readable `key<TAB>value` lines.
std::string render_tsv(const BenchReport& report);

std::vector<std::string> read_lines(const std::string& path);

// Segments and flattens a word-level corpus. The word scheme maps each
// word to one token and applies no markers.
std::vector<FlatSentence> prepare_corpus(const std::vector<std::string>& lines,
                                         const SegmentationScheme& scheme, const FormatSpec& format);

// Inverse of prepare_corpus on decoder output: back to words.
std::vector<std::string> flat_to_words(const FlatSentence& tokens, const SegmentationScheme& scheme,
                                       const FormatSpec& format);

}  // namespace smtlab

#endif
