#ifndef SMTLAB_NGRAM_LM_HPP
#define SMTLAB_NGRAM_LM_HPP

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

namespace smtlab {

// Interpolated Kneser-Ney backoff model over subword tokens, stored in
// ARPA form (log10 probabilities and backoff weights). Immutable once
// built; safe for concurrent scoring.
class NGramModel {
 public:
  using WordId = uint32_t;

  static constexpr const char* kUnk = "<unk>";
  static constexpr const char* kBos = "<s>";
  static constexpr const char* kEos = "</s>";

  NGramModel() = default;

  int order() const { return order_; }
  size_t vocab_size() const { return vocab_.size(); }

  WordId unk_id() const { return unk_; }
  WordId bos_id() const { return bos_; }
  WordId eos_id() const { return eos_; }

  // Unknown tokens map to <unk>.
  WordId word_id(const std::string& token) const;
  const std::string& word_string(WordId id) const { return vocab_[id]; }

  // Backoff query: log10 P(word | context), context truncated to the
  // last order-1 ids.
  double log_prob(const std::vector<WordId>& context, WordId word) const;

  // log10 probability of the sentence padded with <s>/</s>.
  double score(const std::vector<std::string>& tokens) const;

  // Incremental scoring for the decoder. State holds at most order-1 ids.
  using State = std::vector<WordId>;
  State begin_state() const { return {bos_}; }
  double score_token(State& state, WordId word) const;
  double end_score(const State& state) const;  // log10 P(</s> | state)

  // All ids a model may predict (vocabulary minus <s>); used by
  // normalization checks.
  std::vector<WordId> predicted_ids() const;

  static NGramModel train(const std::vector<std::vector<std::string>>& corpus, int order,
                          double discount = 0.75, double unk_floor_count = 1.0);

  void save_arpa(const std::string& path) const;
  static NGramModel load_arpa(const std::string& path);

 private:
  struct Entry {
    double log_prob = 0.0;
    double log_backoff = 0.0;
    bool has_backoff = false;
  };

  struct KeyHash {
    size_t operator()(const std::vector<WordId>& v) const;
  };
  using Table = std::unordered_map<std::vector<WordId>, Entry, KeyHash>;

  WordId intern(const std::string& token);
  const Entry* find(const std::vector<WordId>& ngram) const;

  int order_ = 0;
  std::vector<std::string> vocab_;
  std::unordered_map<std::string, WordId> ids_;
  WordId unk_ = 0, bos_ = 0, eos_ = 0;
  std::vector<Table> tables_;  // tables_[k-1] holds k-grams
};

}  // namespace smtlab

#endif
