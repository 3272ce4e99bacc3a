#include "smtlab/translation_model.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace smtlab {

namespace {
constexpr double kProbFloor = 1e-12;

double lex_lookup(const LexTable& t, const std::string& given, const std::string& word) {
  auto it = t.find(given);
  if (it == t.end()) return kProbFloor;
  auto jt = it->second.find(word);
  if (jt == it->second.end()) return kProbFloor;
  return std::max(jt->second, kProbFloor);
}

std::string join(const std::vector<std::string>& tokens) {
  std::string out;
  for (size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}
}  // namespace

// ---------------------------------------------------------------------------
// IBM Model 1

Model1Result train_model1(const std::vector<std::pair<FlatSentence, FlatSentence>>& parallel,
                          int iterations) {
  if (parallel.empty()) throw std::invalid_argument("train_model1: empty corpus");
  if (iterations < 1) throw std::invalid_argument("train_model1: iterations must be >= 1");

  Model1Result res;
  std::vector<size_t> usable;
  std::set<std::string> target_vocab;
  for (size_t p = 0; p < parallel.size(); ++p) {
    const auto& [src, tgt] = parallel[p];
    if (src.empty() || tgt.empty()) {
      ++res.skipped_pairs;
      continue;
    }
    usable.push_back(p);
    for (const auto& t : tgt) target_vocab.insert(t);
  }
  if (usable.empty()) throw std::invalid_argument("train_model1: no non-empty sentence pairs");

  const double uniform = 1.0 / static_cast<double>(target_vocab.size());
  LexTable& t = res.ttable;

  auto prob = [&](const std::string& e, const std::string& f) -> double {
    auto it = t.find(e);
    if (it == t.end()) return uniform;
    auto jt = it->second.find(f);
    return jt == it->second.end() ? uniform : jt->second;
  };

  for (int iter = 0; iter < iterations; ++iter) {
    LexTable counts;
    std::unordered_map<std::string, double> totals;
    double log_likelihood = 0.0;
    for (size_t p : usable) {
      const auto& [src, tgt] = parallel[p];
      for (const auto& f : tgt) {
        double z = prob(kNullToken, f);
        for (const auto& e : src) z += prob(e, f);
        log_likelihood += std::log10(z / (src.size() + 1.0));
        const double null_p = prob(kNullToken, f) / z;
        counts[kNullToken][f] += null_p;
        totals[kNullToken] += null_p;
        for (const auto& e : src) {
          const double w = prob(e, f) / z;
          counts[e][f] += w;
          totals[e] += w;
        }
      }
    }
    res.log_likelihood_per_iteration.push_back(log_likelihood);
    LexTable next;
    for (auto& [e, row] : counts) {
      const double total = totals[e];
      for (auto& [f, c] : row) next[e][f] = c / total;
    }
    t = std::move(next);
  }

  // Viterbi links: per target word the best source word (or NULL, in
  // which case no link is recorded). Ties go to the leftmost source.
  res.alignments.resize(parallel.size());
  for (size_t p = 0; p < parallel.size(); ++p) {
    const auto& [src, tgt] = parallel[p];
    AlignmentMatrix& a = res.alignments[p];
    a.source_len = static_cast<int>(src.size());
    a.target_len = static_cast<int>(tgt.size());
    if (src.empty() || tgt.empty()) continue;
    for (int j = 0; j < a.target_len; ++j) {
      double best = prob(kNullToken, tgt[j]);
      int best_i = -1;
      for (int i = 0; i < a.source_len; ++i) {
        const double pij = prob(src[i], tgt[j]);
        if (pij > best) {
          best = pij;
          best_i = i;
        }
      }
      if (best_i >= 0) a.links.emplace(best_i, j);
    }
  }
  return res;
}

// ---------------------------------------------------------------------------
// grow-diag-final-and symmetrization

AlignmentMatrix grow_diag_final_and(const AlignmentMatrix& forward, const AlignmentMatrix& backward) {
  if (forward.source_len != backward.source_len || forward.target_len != backward.target_len)
    throw std::invalid_argument("grow_diag_final_and: dimension mismatch");

  AlignmentMatrix out;
  out.source_len = forward.source_len;
  out.target_len = forward.target_len;

  std::set<std::pair<int, int>> uni;
  for (const auto& l : forward.links) uni.insert(l);
  for (const auto& l : backward.links) uni.insert(l);
  for (const auto& l : forward.links)
    if (backward.links.count(l)) out.links.insert(l);

  std::vector<bool> s_aligned(out.source_len, false), t_aligned(out.target_len, false);
  for (const auto& [i, j] : out.links) {
    s_aligned[i] = true;
    t_aligned[j] = true;
  }

  static constexpr int kNeighbors[8][2] = {{-1, 0}, {0, -1}, {1, 0},  {0, 1},
                                           {-1, -1}, {-1, 1}, {1, -1}, {1, 1}};
  bool added = true;
  while (added) {
    added = false;
    for (const auto& [i, j] : std::set<std::pair<int, int>>(out.links)) {
      for (const auto& d : kNeighbors) {
        const int ni = i + d[0], nj = j + d[1];
        if (ni < 0 || nj < 0 || ni >= out.source_len || nj >= out.target_len) continue;
        if (!uni.count({ni, nj})) continue;
        if (out.links.count({ni, nj})) continue;
        if (s_aligned[ni] && t_aligned[nj]) continue;
        out.links.emplace(ni, nj);
        s_aligned[ni] = true;
        t_aligned[nj] = true;
        added = true;
      }
    }
  }

  for (const auto& [i, j] : uni) {
    if (!s_aligned[i] && !t_aligned[j]) {
      out.links.emplace(i, j);
      s_aligned[i] = true;
      t_aligned[j] = true;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phrase extraction

std::vector<PhrasePair> extract_phrases(const FlatSentence& source, const FlatSentence& target,
                                        const AlignmentMatrix& alignment, int max_len) {
  if (max_len < 1) throw std::invalid_argument("extract_phrases: max_len must be >= 1");
  const int ls = static_cast<int>(source.size());
  const int lt = static_cast<int>(target.size());

  std::vector<bool> t_aligned(lt, false);
  for (const auto& [i, j] : alignment.links) t_aligned[j] = true;

  std::vector<PhrasePair> out;
  for (int i1 = 0; i1 < ls; ++i1) {
    for (int i2 = i1; i2 < ls && i2 - i1 + 1 <= max_len; ++i2) {
      int tmin = lt, tmax = -1;
      for (const auto& [i, j] : alignment.links) {
        if (i >= i1 && i <= i2) {
          tmin = std::min(tmin, j);
          tmax = std::max(tmax, j);
        }
      }
      if (tmax < 0) continue;  // no aligned word inside the block
      bool consistent = true;
      for (const auto& [i, j] : alignment.links) {
        if (j >= tmin && j <= tmax && (i < i1 || i > i2)) {
          consistent = false;
          break;
        }
      }
      if (!consistent) continue;
      // Extend over unaligned target edges.
      for (int j1 = tmin; j1 >= 0 && (j1 == tmin || !t_aligned[j1]); --j1) {
        for (int j2 = tmax; j2 < lt && (j2 == tmax || !t_aligned[j2]); ++j2) {
          if (j2 - j1 + 1 > max_len) break;
          PhrasePair pp;
          pp.source.assign(source.begin() + i1, source.begin() + i2 + 1);
          pp.target.assign(target.begin() + j1, target.begin() + j2 + 1);
          for (const auto& [i, j] : alignment.links)
            if (i >= i1 && i <= i2) pp.links.emplace(i - i1, j - j1);
          out.push_back(std::move(pp));
        }
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Phrase table

double PhraseOption::weighted_score(const FeatureWeights& w) const {
  double s = w.phrase_penalty * phrase_penalty;
  for (size_t f = 0; f < features.size(); ++f) s += w.table[f] * features[f];
  return s;
}

std::string PhraseOption::target_string() const { return join(target); }

void PhraseTable::add(const std::vector<std::string>& source, PhraseOption option) {
  entries_[join(source)].push_back(std::move(option));
}

const PhraseTable::Entry* PhraseTable::lookup(const std::vector<std::string>& source) const {
  return lookup_joined(join(source));
}

const PhraseTable::Entry* PhraseTable::lookup_joined(const std::string& joined) const {
  auto it = entries_.find(joined);
  return it == entries_.end() ? nullptr : &it->second;
}

namespace {

void sort_options(std::vector<PhraseOption>& options) {
  std::sort(options.begin(), options.end(), [](const PhraseOption& a, const PhraseOption& b) {
    double sa = a.phrase_penalty, sb = b.phrase_penalty;
    for (size_t f = 0; f < a.features.size(); ++f) {
      sa += a.features[f];
      sb += b.features[f];
    }
    if (sa != sb) return sa > sb;
    return a.target_string() < b.target_string();
  });
}

double lex_weight(const std::vector<std::string>& predicted, const std::vector<std::string>& given,
                  const std::set<std::pair<int, int>>& links, bool predicted_is_target,
                  const LexTable& table) {
  // Average over aligned mates; unaligned words use the NULL column.
  double product = 1.0;
  for (int k = 0; k < static_cast<int>(predicted.size()); ++k) {
    double sum = 0.0;
    int mates = 0;
    for (const auto& [i, j] : links) {
      const int self = predicted_is_target ? j : i;
      const int other = predicted_is_target ? i : j;
      if (self == k) {
        sum += lex_lookup(table, given[other], predicted[k]);
        ++mates;
      }
    }
    product *= mates > 0 ? sum / mates : lex_lookup(table, kNullToken, predicted[k]);
  }
  return std::max(product, kProbFloor);
}

}  // namespace

PhraseTable score_table(const std::vector<PhrasePair>& pairs, const LexTable& forward_lex,
                        const LexTable& backward_lex) {
  if (pairs.empty()) throw std::invalid_argument("score_table: no extracted phrase pairs");

  struct PairStats {
    double count = 0.0;
    double best_lex_tgs = 0.0;  // lex(t|s)
    double best_lex_sgt = 0.0;  // lex(s|t)
    const PhrasePair* sample = nullptr;
  };
  std::map<std::pair<std::string, std::string>, PairStats> stats;
  std::map<std::string, double> src_count, tgt_count;

  for (const auto& pp : pairs) {
    const std::string s = join(pp.source), t = join(pp.target);
    auto& st = stats[{s, t}];
    st.count += 1.0;
    st.sample = &pp;
    src_count[s] += 1.0;
    tgt_count[t] += 1.0;
    st.best_lex_tgs = std::max(
        st.best_lex_tgs, lex_weight(pp.target, pp.source, pp.links, true, forward_lex));
    st.best_lex_sgt = std::max(
        st.best_lex_sgt, lex_weight(pp.source, pp.target, pp.links, false, backward_lex));
  }

  PhraseTable table;
  for (const auto& [key, st] : stats) {
    const auto& [s, t] = key;
    PhraseOption opt;
    opt.target = st.sample->target;
    opt.features[0] = std::log10(std::max(st.count / tgt_count[t], kProbFloor));  // phi(s|t)
    opt.features[1] = std::log10(st.best_lex_sgt);
    opt.features[2] = std::log10(std::max(st.count / src_count[s], kProbFloor));  // phi(t|s)
    opt.features[3] = std::log10(st.best_lex_tgs);
    opt.phrase_penalty = std::log10(std::exp(1.0));
    table.add(st.sample->source, std::move(opt));
  }
  for (auto& [src, options] : table.entries()) sort_options(options);
  return table;
}

PhraseTable prune(const PhraseTable& table, int table_limit, const FeatureWeights& weights) {
  if (table_limit < 1) throw std::invalid_argument("prune: table_limit must be >= 1");
  PhraseTable out = table;
  for (auto& [src, options] : out.entries()) {
    std::sort(options.begin(), options.end(),
              [&weights](const PhraseOption& a, const PhraseOption& b) {
                const double sa = a.weighted_score(weights), sb = b.weighted_score(weights);
                if (sa != sb) return sa > sb;
                return a.target_string() < b.target_string();
              });
    if (options.size() > static_cast<size_t>(table_limit)) options.resize(table_limit);
  }
  return out;
}

void save_table(const PhraseTable& table, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write phrase table: " + path);
  out << std::setprecision(17);
  std::map<std::string, const PhraseTable::Entry*> sorted;
  for (const auto& [src, options] : table.entries()) sorted.emplace(src, &options);
  for (const auto& [src, options] : sorted) {
    for (const auto& opt : *options) {
      out << src << " ||| " << opt.target_string() << " |||";
      for (double f : opt.features) out << " " << std::pow(10.0, f);
      out << " " << std::pow(10.0, opt.phrase_penalty) << "\n";
    }
  }
}

PhraseTable load_table(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open phrase table: " + path);
  PhraseTable table;
  std::string line;
  int lineno = 0;
  const std::string sep = " ||| ";
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const size_t p1 = line.find(sep);
    const size_t p2 = p1 == std::string::npos ? std::string::npos : line.find(sep, p1 + sep.size());
    if (p1 == std::string::npos || p2 == std::string::npos)
      throw std::runtime_error("phrase table parse error at " + path + ":" + std::to_string(lineno) +
                               ": expected two ' ||| ' separators");
    const std::string src = line.substr(0, p1);
    const std::string tgt = line.substr(p1 + sep.size(), p2 - p1 - sep.size());
    std::istringstream feats(line.substr(p2 + sep.size()));
    PhraseOption opt;
    opt.target = split_tokens(tgt);
    double p;
    for (size_t f = 0; f < opt.features.size(); ++f) {
      if (!(feats >> p) || p <= 0.0)
        throw std::runtime_error("phrase table parse error at " + path + ":" +
                                 std::to_string(lineno) + ": bad feature column");
      opt.features[f] = std::log10(p);
    }
    if (!(feats >> p) || p <= 0.0)
      throw std::runtime_error("phrase table parse error at " + path + ":" + std::to_string(lineno) +
                               ": missing phrase penalty column");
    opt.phrase_penalty = std::log10(p);
    table.entries()[src].push_back(std::move(opt));
  }
  for (auto& [src, options] : table.entries()) sort_options(options);
  return table;
}

FeatureWeights FeatureWeights::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open weights file: " + path);
  FeatureWeights w;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    const size_t eq = line.find('=');
    if (eq == std::string::npos) continue;
    std::istringstream key_s(line.substr(0, eq)), val_s(line.substr(eq + 1));
    std::string key;
    double val;
    if (!(key_s >> key) || !(val_s >> val))
      throw std::runtime_error("weights parse error at " + path + ":" + std::to_string(lineno));
    if (key == "lm") {
      w.lm = val;
    } else if (key == "phrase_penalty") {
      w.phrase_penalty = val;
    } else if (key == "word_penalty") {
      w.word_penalty = val;
    } else if (key.rfind("table", 0) == 0 && key.size() == 6 && key[5] >= '1' && key[5] <= '4') {
      w.table[key[5] - '1'] = val;
    } else {
      throw std::runtime_error("weights parse error at " + path + ":" + std::to_string(lineno) +
                               ": unknown key " + key);
    }
  }
  return w;
}

}  // namespace smtlab
