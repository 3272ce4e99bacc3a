#include "smtlab/ngram_lm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace smtlab {

namespace {
constexpr double kBosLogProb = -99.0;  // <s> is context-only, ARPA convention
}

size_t NGramModel::KeyHash::operator()(const std::vector<WordId>& v) const {
  size_t h = 1469598103934665603ull;
  for (WordId w : v) {
    h ^= w;
    h *= 1099511628211ull;
  }
  return h;
}

NGramModel::WordId NGramModel::intern(const std::string& token) {
  auto it = ids_.find(token);
  if (it != ids_.end()) return it->second;
  const WordId id = static_cast<WordId>(vocab_.size());
  vocab_.push_back(token);
  ids_.emplace(token, id);
  return id;
}

NGramModel::WordId NGramModel::word_id(const std::string& token) const {
  auto it = ids_.find(token);
  return it == ids_.end() ? unk_ : it->second;
}

const NGramModel::Entry* NGramModel::find(const std::vector<WordId>& ngram) const {
  const size_t k = ngram.size();
  if (k == 0 || k > tables_.size()) return nullptr;
  auto it = tables_[k - 1].find(ngram);
  return it == tables_[k - 1].end() ? nullptr : &it->second;
}

double NGramModel::log_prob(const std::vector<WordId>& context, WordId word) const {
  std::vector<WordId> ctx = context;
  if (static_cast<int>(ctx.size()) > order_ - 1)
    ctx.erase(ctx.begin(), ctx.end() - (order_ - 1));

  // Longest-match backoff: accumulate backoff weights of every context
  // longer than the matched one.
  for (size_t start = 0; start <= ctx.size(); ++start) {
    std::vector<WordId> ngram(ctx.begin() + start, ctx.end());
    ngram.push_back(word);
    if (const Entry* e = find(ngram)) {
      double lp = e->log_prob;
      for (size_t s = 0; s < start; ++s) {
        std::vector<WordId> sub(ctx.begin() + s, ctx.end());
        if (const Entry* c = find(sub); c && c->has_backoff) lp += c->log_backoff;
      }
      return lp;
    }
  }
  // Not even the unigram is stored: fall through to <unk>.
  double lp = 0.0;
  for (size_t s = 0; s < ctx.size(); ++s) {
    std::vector<WordId> sub(ctx.begin() + s, ctx.end());
    if (const Entry* c = find(sub); c && c->has_backoff) lp += c->log_backoff;
  }
  if (const Entry* e = find({unk_})) return lp + e->log_prob;
  return lp + kBosLogProb;
}

double NGramModel::score_token(State& state, WordId word) const {
  const double lp = log_prob(state, word);
  state.push_back(word);
  if (static_cast<int>(state.size()) > order_ - 1)
    state.erase(state.begin(), state.end() - (order_ - 1));
  return lp;
}

double NGramModel::end_score(const State& state) const { return log_prob(state, eos_); }

double NGramModel::score(const std::vector<std::string>& tokens) const {
  State state = begin_state();
  double total = 0.0;
  for (const auto& tok : tokens) total += score_token(state, word_id(tok));
  total += end_score(state);
  return total;
}

std::vector<NGramModel::WordId> NGramModel::predicted_ids() const {
  std::vector<WordId> out;
  for (WordId id = 0; id < vocab_.size(); ++id)
    if (id != bos_) out.push_back(id);
  return out;
}

// ---------------------------------------------------------------------------
// Training: interpolated Kneser-Ney with a single absolute discount.

NGramModel NGramModel::train(const std::vector<std::vector<std::string>>& corpus, int order,
                             double discount, double unk_floor_count) {
  if (corpus.empty()) throw std::invalid_argument("NGramModel::train: empty corpus");
  if (order < 1 || order > 16) throw std::invalid_argument("NGramModel::train: order out of range");
  if (discount <= 0.0 || discount >= 1.0)
    throw std::invalid_argument("NGramModel::train: discount must be in (0,1)");

  NGramModel m;
  m.order_ = order;
  m.unk_ = m.intern(kUnk);
  m.bos_ = m.intern(kBos);
  m.eos_ = m.intern(kEos);

  {
    std::set<std::string> seen;
    for (const auto& sent : corpus)
      for (const auto& tok : sent) seen.insert(tok);
    for (const auto& tok : seen) m.intern(tok);
  }

  using Key = std::vector<WordId>;
  using CountMap = std::unordered_map<Key, double, KeyHash>;
  std::vector<CountMap> raw(order);  // raw[k-1]: k-gram counts
  for (const auto& sent : corpus) {
    Key seq;
    seq.push_back(m.bos_);
    for (const auto& tok : sent) seq.push_back(m.word_id(tok));
    seq.push_back(m.eos_);
    for (int k = 1; k <= order; ++k)
      for (size_t i = 0; i + k <= seq.size(); ++i)
        raw[k - 1][Key(seq.begin() + i, seq.begin() + i + k)] += 1.0;
  }

  // Continuation counts: number of distinct left extensions.
  std::vector<CountMap> cont(order);
  for (int k = 1; k < order; ++k)
    for (const auto& [gram, c] : raw[k])  // (k+1)-grams
      cont[k - 1][Key(gram.begin() + 1, gram.end())] += 1.0;

  // Adjusted counts: raw at the highest order and for <s>-initial
  // n-grams (nothing can precede <s>), continuation elsewhere.
  auto adjusted = [&](const Key& g) -> double {
    const int k = static_cast<int>(g.size());
    const CountMap& src = (k == order || g.front() == m.bos_) ? raw[k - 1] : cont[k - 1];
    auto it = src.find(g);
    double c = it == src.end() ? 0.0 : it->second;
    if (k == 1 && g[0] == m.unk_) c += unk_floor_count;
    return c;
  };

  // Collect the stored n-gram set per order.
  std::vector<std::vector<Key>> stored(order);
  {
    std::set<Key> unigrams;
    for (WordId id = 0; id < m.vocab_.size(); ++id)
      if (id != m.bos_) unigrams.insert(Key{id});
    unigrams.insert(Key{m.bos_});
    stored[0].assign(unigrams.begin(), unigrams.end());
  }
  for (int k = 2; k <= order; ++k) {
    std::set<Key> grams;
    for (const auto& [g, c] : raw[k - 1]) grams.insert(g);
    stored[k - 1].assign(grams.begin(), grams.end());
  }

  // Context totals and type counts per order for the KN estimate.
  std::vector<CountMap> denom(order), types(order);
  for (int k = 1; k <= order; ++k) {
    for (const auto& key : stored[k - 1]) {
      if (k == 1 && key[0] == m.bos_) continue;
      const double a = adjusted(key);
      if (a <= 0.0) continue;
      Key ctx(key.begin(), key.end() - 1);
      denom[k - 1][ctx] += a;
      types[k - 1][ctx] += 1.0;
    }
  }

  const double uniform = 1.0 / static_cast<double>(m.vocab_.size() - 1);  // vocab minus <s>

  // Interpolated probability, recursing to the uniform base.
  std::function<double(const Key&)> interp = [&](const Key& g) -> double {
    const int k = static_cast<int>(g.size());
    Key ctx(g.begin(), g.end() - 1);
    auto dit = denom[k - 1].find(ctx);
    const double lower =
        k == 1 ? uniform : interp(Key(g.begin() + 1, g.end()));
    if (dit == denom[k - 1].end() || dit->second <= 0.0) return lower;
    const double total = dit->second;
    const double t = types[k - 1].at(ctx);
    const double a = adjusted(g);
    return std::max(a - discount, 0.0) / total + discount * t / total * lower;
  };

  m.tables_.assign(order, Table{});
  for (int k = 1; k <= order; ++k) {
    for (const auto& g : stored[k - 1]) {
      Entry e;
      if (k == 1 && g[0] == m.bos_)
        e.log_prob = kBosLogProb;
      else
        e.log_prob = std::log10(interp(g));
      m.tables_[k - 1].emplace(g, e);
    }
  }

  // Backoff weights, lowest order first, from the normalization
  // identity: bow(c) must make the full distribution sum to one.
  for (int k = 1; k < order; ++k) {
    std::map<Key, std::vector<Key>> by_context;
    for (const auto& [g, e] : m.tables_[k]) by_context[Key(g.begin(), g.end() - 1)].push_back(g);
    for (auto& [ctx, grams] : by_context) {
      double stored_mass = 0.0, lower_mass = 0.0;
      const Key shorter(ctx.begin() + 1, ctx.end());
      for (const auto& g : grams) {
        stored_mass += std::pow(10.0, m.tables_[k].at(g).log_prob);
        lower_mass += std::pow(10.0, m.log_prob(shorter, g.back()));
      }
      auto it = m.tables_[k - 1].find(ctx);
      if (it == m.tables_[k - 1].end()) continue;  // cannot happen for trained models
      const double num = 1.0 - stored_mass;
      const double den = 1.0 - lower_mass;
      it->second.has_backoff = true;
      if (num <= 0.0 || den <= 0.0)
        it->second.log_backoff = 0.0;
      else
        it->second.log_backoff = std::log10(num / den);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// ARPA serialization.

void NGramModel::save_arpa(const std::string& path) const {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write ARPA file: " + path);
  out << "\\data\\\n";
  for (int k = 1; k <= order_; ++k) out << "ngram " << k << "=" << tables_[k - 1].size() << "\n";
  out << std::setprecision(17);
  for (int k = 1; k <= order_; ++k) {
    out << "\n\\" << k << "-grams:\n";
    std::map<std::string, const Entry*> sorted;
    for (const auto& [g, e] : tables_[k - 1]) {
      std::string text;
      for (size_t i = 0; i < g.size(); ++i) {
        if (i) text += ' ';
        text += vocab_[g[i]];
      }
      sorted.emplace(std::move(text), &e);
    }
    for (const auto& [text, e] : sorted) {
      out << e->log_prob << "\t" << text;
      if (e->has_backoff) out << "\t" << e->log_backoff;
      out << "\n";
    }
  }
  out << "\n\\end\\\n";
}

NGramModel NGramModel::load_arpa(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ARPA file: " + path);

  NGramModel m;
  m.unk_ = m.intern(kUnk);
  m.bos_ = m.intern(kBos);
  m.eos_ = m.intern(kEos);

  auto fail = [&](int lineno, const std::string& msg) {
    throw std::runtime_error("ARPA parse error at " + path + ":" + std::to_string(lineno) + ": " + msg);
  };

  std::string line;
  int lineno = 0;
  // header
  bool in_data = false;
  std::vector<size_t> declared;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "\\data\\") {
      in_data = true;
      continue;
    }
    if (line.rfind("ngram ", 0) == 0) {
      if (!in_data) fail(lineno, "ngram count outside \\data\\ section");
      const size_t eq = line.find('=');
      if (eq == std::string::npos) fail(lineno, "malformed ngram count line");
      const int k = std::stoi(line.substr(6, eq - 6));
      const size_t count = std::stoul(line.substr(eq + 1));
      if (k != static_cast<int>(declared.size()) + 1) fail(lineno, "ngram orders out of sequence");
      declared.push_back(count);
      continue;
    }
    if (line.size() > 2 && line[0] == '\\' && line.find("-grams:") != std::string::npos) break;
    fail(lineno, "unexpected line before n-gram sections: " + line);
  }
  if (declared.empty()) fail(lineno, "missing \\data\\ section");
  m.order_ = static_cast<int>(declared.size());
  m.tables_.assign(m.order_, Table{});

  int current = 0;  // order of the section being read
  auto parse_section_header = [&](const std::string& l) -> int {
    return std::stoi(l.substr(1, l.find("-grams:") - 1));
  };
  if (!line.empty()) current = parse_section_header(line);

  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line == "\\end\\") {
      current = -1;
      break;
    }
    if (line[0] == '\\' && line.find("-grams:") != std::string::npos) {
      current = parse_section_header(line);
      if (current < 1 || current > m.order_) fail(lineno, "bad section order");
      continue;
    }
    if (current < 1) fail(lineno, "entry outside any n-gram section");
    std::istringstream fields(line);
    double lp;
    if (!(fields >> lp)) fail(lineno, "missing log probability");
    std::vector<WordId> gram;
    std::string tok;
    for (int i = 0; i < current; ++i) {
      if (!(fields >> tok)) fail(lineno, "too few tokens for " + std::to_string(current) + "-gram");
      gram.push_back(m.intern(tok));
    }
    Entry e;
    e.log_prob = lp;
    double bow;
    if (fields >> bow) {
      e.log_backoff = bow;
      e.has_backoff = true;
    }
    if (fields >> tok) fail(lineno, "trailing garbage");
    m.tables_[current - 1].emplace(std::move(gram), e);
  }
  if (current != -1) fail(lineno, "missing \\end\\");
  for (int k = 1; k <= m.order_; ++k)
    if (m.tables_[k - 1].size() != declared[k - 1])
      throw std::runtime_error("ARPA parse error in " + path + ": declared " +
                               std::to_string(declared[k - 1]) + " " + std::to_string(k) +
                               "-grams, found " + std::to_string(m.tables_[k - 1].size()));
  return m;
}

}  // namespace smtlab
