#ifndef SMTLAB_TRANSLATION_MODEL_HPP
#define SMTLAB_TRANSLATION_MODEL_HPP

#include <array>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "smtlab/markup.hpp"
#include "smtlab/weights.hpp"

namespace smtlab {

struct AlignmentMatrix {
  int source_len = 0;
  int target_len = 0;
  std::set<std::pair<int, int>> links;  // (source index, target index)
};

// t(target|source) lexical probabilities; the empty string is the NULL
// source token.
using LexTable = std::unordered_map<std::string, std::unordered_map<std::string, double>>;

constexpr const char* kNullToken = "";

struct Model1Result {
  LexTable ttable;
  std::vector<AlignmentMatrix> alignments;  // Viterbi links, NULL links dropped
  std::vector<double> log_likelihood_per_iteration;
  int skipped_pairs = 0;  // empty-sided pairs
};

// IBM Model 1 EM with uniform initialization and a NULL source word.
Model1Result train_model1(
    const std::vector<std::pair<FlatSentence, FlatSentence>>& parallel, int iterations = 5);

AlignmentMatrix grow_diag_final_and(const AlignmentMatrix& forward, const AlignmentMatrix& backward);

struct PhrasePair {
  std::vector<std::string> source;
  std::vector<std::string> target;
  std::set<std::pair<int, int>> links;  // re-indexed to the block
};

std::vector<PhrasePair> extract_phrases(const FlatSentence& source, const FlatSentence& target,
                                        const AlignmentMatrix& alignment, int max_len = 7);

struct PhraseOption {
  std::vector<std::string> target;
  // log10 of phi(s|t), lex(s|t), phi(t|s), lex(t|s)
  std::array<double, 4> features = {0, 0, 0, 0};
  double phrase_penalty = 0.0;  // log10(e), Moses convention

  double weighted_score(const FeatureWeights& w) const;
  std::string target_string() const;
};

class PhraseTable {
 public:
  using Entry = std::vector<PhraseOption>;

  void add(const std::vector<std::string>& source, PhraseOption option);
  const Entry* lookup(const std::vector<std::string>& source) const;
  const Entry* lookup_joined(const std::string& joined) const;

  size_t size() const { return entries_.size(); }
  const std::unordered_map<std::string, Entry>& entries() const { return entries_; }
  std::unordered_map<std::string, Entry>& entries() { return entries_; }

 private:
  std::unordered_map<std::string, Entry> entries_;  // key: tokens joined by ' '
};

// Relative-frequency phrase probabilities in both directions plus
// alignment-averaged lexical weights.
PhraseTable score_table(const std::vector<PhrasePair>& pairs, const LexTable& forward_lex,
                        const LexTable& backward_lex);

// Keeps the top tl options per source by weighted table score,
// ties broken lexicographically by target string.
PhraseTable prune(const PhraseTable& table, int table_limit, const FeatureWeights& weights);

// Moses text format: `source ||| target ||| p1 p2 p3 p4 p5`, plain
// probabilities.
void save_table(const PhraseTable& table, const std::string& path);
PhraseTable load_table(const std::string& path);

}  // namespace smtlab

#endif
