#include "smtlab/decoder.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <stdexcept>
#include <thread>
#include <unordered_map>
#include <unordered_set>

#include <sys/resource.h>

namespace smtlab {

DecodeStats& DecodeStats::operator+=(const DecodeStats& o) {
  hypotheses_expanded += o.hypotheses_expanded;
  recombinations += o.recombinations;
  pruned += o.pruned;
  return *this;
}

namespace {

struct SpanOption {
  int begin = 0;
  int end = 0;
  const PhraseOption* option = nullptr;
  double step_score = 0.0;  // weighted table features + penalties, no LM
};

struct Hyp {
  double score = 0.0;
  NGramModel::State lm_state;
  std::string target_str;
  std::shared_ptr<const Hyp> prev;
  const SpanOption* applied = nullptr;
};
using HypPtr = std::shared_ptr<const Hyp>;

// Deterministic ordering: higher score first, ties by target string.
bool better(const HypPtr& a, const HypPtr& b) {
  if (a->score != b->score) return a->score > b->score;
  return a->target_str < b->target_str;
}

struct StateHash {
  size_t operator()(const NGramModel::State& v) const {
    size_t h = 1469598103934665603ull;
    for (auto w : v) {
      h ^= w;
      h *= 1099511628211ull;
    }
    return h;
  }
};

class Stack {
 public:
  void insert(HypPtr h, DecodeStats& stats) {
    auto it = by_state_.find(h->lm_state);
    if (it == by_state_.end()) {
      by_state_.emplace(h->lm_state, hyps_.size());
      hyps_.push_back(std::move(h));
      return;
    }
    ++stats.recombinations;
    if (better(h, hyps_[it->second])) hyps_[it->second] = std::move(h);
  }

  void histogram_prune(int keep, DecodeStats& stats) {
    sort();
    if (static_cast<int>(hyps_.size()) > keep) {
      stats.pruned += hyps_.size() - keep;
      hyps_.resize(keep);
      reindex();
    }
  }

  void sort() { std::sort(hyps_.begin(), hyps_.end(), better); }

  const std::vector<HypPtr>& hyps() const { return hyps_; }
  bool empty() const { return hyps_.empty(); }

 private:
  void reindex() {
    by_state_.clear();
    for (size_t k = 0; k < hyps_.size(); ++k) by_state_.emplace(hyps_[k]->lm_state, k);
  }

  std::vector<HypPtr> hyps_;
  std::unordered_map<NGramModel::State, size_t, StateHash> by_state_;
};

class SearchContext {
 public:
  SearchContext(const FlatSentence& source, const PhraseTable& table, const NGramModel& lm,
                const DecoderConfig& config)
      : source_(source), lm_(lm), config_(config) {
    const int n = static_cast<int>(source.size());
    span_options_.resize(n);
    for (int i = 0; i < n; ++i) {
      for (int j = i + 1; j <= std::min(n, i + config.max_phrase_length); ++j) {
        std::vector<std::string> span(source.begin() + i, source.begin() + j);
        const PhraseTable::Entry* entry = table.lookup(span);
        std::vector<SpanOption> opts;
        if (entry) {
          for (const auto& o : *entry) opts.push_back(make_option(i, j, &o));
        } else if (j == i + 1) {
          // OOV pass-through: copy the source token with a fixed penalty.
          auto owned = std::make_unique<PhraseOption>();
          owned->target = {source[i]};
          owned->features = {config.oov_log_penalty, config.oov_log_penalty,
                             config.oov_log_penalty, config.oov_log_penalty};
          owned->phrase_penalty = std::log10(std::exp(1.0));
          opts.push_back(make_option(i, j, owned.get()));
          oov_options_.push_back(std::move(owned));
        }
        std::sort(opts.begin(), opts.end(), [](const SpanOption& a, const SpanOption& b) {
          if (a.step_score != b.step_score) return a.step_score > b.step_score;
          return a.option->target_string() < b.option->target_string();
        });
        if (static_cast<int>(opts.size()) > config.table_limit) opts.resize(config.table_limit);
        span_options_[i].push_back(std::move(opts));
      }
    }
  }

  const std::vector<SpanOption>& options(int i, int j) const {
    return span_options_[i][j - i - 1];
  }
  int max_end(int i) const {
    return i + static_cast<int>(span_options_[i].size());
  }

  HypPtr initial() const {
    auto h = std::make_shared<Hyp>();
    h->lm_state = lm_.begin_state();
    return h;
  }

  // Applies an option to a hypothesis: step score plus weighted LM
  // increments.
  HypPtr extend(const HypPtr& from, const SpanOption& so, DecodeStats& stats) const {
    ++stats.hypotheses_expanded;
    auto h = std::make_shared<Hyp>();
    h->prev = from;
    h->applied = &so;
    h->lm_state = from->lm_state;
    double lm_inc = 0.0;
    for (const auto& tok : so.option->target)
      lm_inc += lm_.score_token(h->lm_state, lm_.word_id(tok));
    h->score = from->score + so.step_score + config_.weights.lm * lm_inc;
    h->target_str = from->target_str;
    for (const auto& tok : so.option->target) {
      if (!h->target_str.empty()) h->target_str += ' ';
      h->target_str += tok;
    }
    return h;
  }

  double final_score(const HypPtr& h) const {
    return h->score + config_.weights.lm * lm_.end_score(h->lm_state);
  }

  DecodeResult finish(const std::vector<HypPtr>& final_stack, DecodeStats stats) const {
    const HypPtr* best = nullptr;
    double best_score = 0.0;
    for (const auto& h : final_stack) {
      const double s = final_score(h);
      if (!best || s > best_score || (s == best_score && h->target_str < (*best)->target_str)) {
        best = &h;
        best_score = s;
      }
    }
    DecodeResult res;
    res.stats = stats;
    if (!best) throw std::runtime_error("decoder: empty final stack");
    res.score = best_score;
    res.target = split_tokens((*best)->target_str);
    for (const Hyp* h = best->get(); h && h->applied; h = h->prev.get())
      res.derivation.push_back({h->applied->begin, h->applied->end, *h->applied->option});
    std::reverse(res.derivation.begin(), res.derivation.end());
    return res;
  }

 private:
  SpanOption make_option(int i, int j, const PhraseOption* o) const {
    SpanOption so;
    so.begin = i;
    so.end = j;
    so.option = o;
    so.step_score = o->weighted_score(config_.weights) +
                    config_.weights.word_penalty * static_cast<double>(o->target.size());
    return so;
  }

  const FlatSentence& source_;
  const NGramModel& lm_;
  const DecoderConfig& config_;
  std::vector<std::vector<std::vector<SpanOption>>> span_options_;  // [i][j-i-1]
  std::vector<std::unique_ptr<PhraseOption>> oov_options_;
};

}  // namespace

DecodeResult decode_stack(const FlatSentence& source, const PhraseTable& table,
                          const NGramModel& lm, const DecoderConfig& config) {
  SearchContext ctx(source, table, lm, config);
  const int n = static_cast<int>(source.size());
  DecodeStats stats;
  std::vector<Stack> stacks(n + 1);
  stacks[0].insert(ctx.initial(), stats);
  for (int i = 0; i < n; ++i) {
    stacks[i].histogram_prune(config.stack_size, stats);
    for (const auto& hyp : stacks[i].hyps()) {
      for (int j = i + 1; j <= ctx.max_end(i); ++j) {
        for (const auto& so : ctx.options(i, j)) stacks[j].insert(ctx.extend(hyp, so, stats), stats);
      }
    }
  }
  stacks[n].sort();
  return ctx.finish(stacks[n].hyps(), stats);
}

DecodeResult decode_cube(const FlatSentence& source, const PhraseTable& table,
                         const NGramModel& lm, const DecoderConfig& config) {
  SearchContext ctx(source, table, lm, config);
  const int n = static_cast<int>(source.size());
  DecodeStats stats;
  std::vector<Stack> stacks(n + 1);
  stacks[0].insert(ctx.initial(), stats);

  struct Cand {
    HypPtr hyp;
    int cube;
    int a, b;
  };
  struct Worse {
    bool operator()(const Cand& x, const Cand& y) const {
      if (x.hyp->score != y.hyp->score) return x.hyp->score < y.hyp->score;
      return x.hyp->target_str > y.hyp->target_str;
    }
  };

  for (int j = 1; j <= n; ++j) {
    // One cube per source start: axis A is the (sorted) predecessor
    // stack, axis B the span's translation options.
    struct Cube {
      const std::vector<HypPtr>* hyps;
      const std::vector<SpanOption>* opts;
    };
    std::vector<Cube> cubes;
    for (int i = std::max(0, j - config.max_phrase_length); i < j; ++i) {
      if (j > ctx.max_end(i)) continue;
      const auto& opts = ctx.options(i, j);
      if (opts.empty() || stacks[i].empty()) continue;
      cubes.push_back({&stacks[i].hyps(), &opts});
    }
    std::priority_queue<Cand, std::vector<Cand>, Worse> pq;
    std::vector<std::unordered_set<uint64_t>> seen(cubes.size());
    auto push = [&](int c, int a, int b) {
      const auto& cube = cubes[c];
      if (a >= static_cast<int>(cube.hyps->size()) || b >= static_cast<int>(cube.opts->size()))
        return;
      const uint64_t key = (static_cast<uint64_t>(a) << 32) | static_cast<uint32_t>(b);
      if (!seen[c].insert(key).second) return;
      pq.push({ctx.extend((*cube.hyps)[a], (*cube.opts)[b], stats), c, a, b});
    };
    for (size_t c = 0; c < cubes.size(); ++c) push(static_cast<int>(c), 0, 0);
    int pops = 0;
    while (pops < config.pop_limit && !pq.empty()) {
      Cand cand = pq.top();
      pq.pop();
      ++pops;
      stacks[j].insert(std::move(cand.hyp), stats);
      push(cand.cube, cand.a + 1, cand.b);
      push(cand.cube, cand.a, cand.b + 1);
    }
    stacks[j].sort();
  }
  return ctx.finish(stacks[n].hyps(), stats);
}

DecodeResult decode_sentence(const FlatSentence& source, const PhraseTable& table,
                             const NGramModel& lm, const DecoderConfig& config) {
  return config.algorithm == SearchAlgorithm::stack ? decode_stack(source, table, lm, config)
                                                    : decode_cube(source, table, lm, config);
}

double recompute_score(const FlatSentence& source, const DecodeResult& result,
                       const NGramModel& lm, const DecoderConfig& config) {
  (void)source;
  double total = 0.0;
  FlatSentence target;
  for (const auto& step : result.derivation) {
    total += step.option.weighted_score(config.weights);
    total += config.weights.word_penalty * static_cast<double>(step.option.target.size());
    for (const auto& tok : step.option.target) target.push_back(tok);
  }
  total += config.weights.lm * lm.score(target);
  return total;
}

CorpusDecodeResult decode_corpus(const std::vector<FlatSentence>& sentences,
                                 const PhraseTable& table, const NGramModel& lm,
                                 const DecoderConfig& config, int threads) {
  CorpusDecodeResult res;
  res.outputs.resize(sentences.size());
  res.errors.resize(sentences.size());

  struct rusage before {}, after {};
  getrusage(RUSAGE_SELF, &before);
  const auto wall_start = std::chrono::steady_clock::now();

  auto worker = [&](size_t first) {
    for (size_t k = first; k < sentences.size(); k += static_cast<size_t>(std::max(threads, 1))) {
      try {
        res.outputs[k] = decode_sentence(sentences[k], table, lm, config);
      } catch (const std::exception& e) {
        res.errors[k] = e.what();
      }
    }
  };
  if (threads <= 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int t = 0; t < threads; ++t) pool.emplace_back(worker, static_cast<size_t>(t));
    for (auto& t : pool) t.join();
  }

  getrusage(RUSAGE_SELF, &after);
  const auto wall_end = std::chrono::steady_clock::now();
  auto tv_seconds = [](const timeval& a, const timeval& b) {
    return (b.tv_sec - a.tv_sec) + (b.tv_usec - a.tv_usec) / 1e6;
  };
  res.cpu_seconds = tv_seconds(before.ru_utime, after.ru_utime) +
                    tv_seconds(before.ru_stime, after.ru_stime);
  res.wall_seconds = std::chrono::duration<double>(wall_end - wall_start).count();
  for (const auto& out : res.outputs) res.stats += out.stats;
  return res;
}

}  // namespace smtlab
