#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "smtlab/ngram_lm.hpp"

using namespace smtlab;

namespace {

using Corpus = std::vector<std::vector<std::string>>;

// Exhaustive per-context normalization: sum P(w | context) over the
// whole predictable vocabulary.
double context_sum(const NGramModel& m, const std::vector<NGramModel::WordId>& context) {
  double sum = 0.0;
  for (auto id : m.predicted_ids()) sum += std::pow(10.0, m.log_prob(context, id));
  return sum;
}

void check_all_contexts_normalized(const NGramModel& m, int depth_limit) {
  // every context made of vocabulary tokens up to the given length
  std::vector<std::vector<NGramModel::WordId>> contexts = {{}};
  std::vector<NGramModel::WordId> all_ids;
  for (NGramModel::WordId id = 0; id < m.vocab_size(); ++id) all_ids.push_back(id);
  for (int depth = 0; depth < depth_limit; ++depth) {
    std::vector<std::vector<NGramModel::WordId>> next;
    for (const auto& c : contexts) {
      CHECK(context_sum(m, c) == doctest::Approx(1.0).epsilon(1e-6));
      for (auto id : all_ids) {
        auto ext = c;
        ext.push_back(id);
        next.push_back(std::move(ext));
      }
    }
    contexts = std::move(next);
  }
  for (const auto& c : contexts) CHECK(context_sum(m, c) == doctest::Approx(1.0).epsilon(1e-6));
}

}  // namespace

TEST_CASE("unigram model normalizes") {
  const auto m = NGramModel::train({{"a", "a"}}, 1, 0.75);
  double sum = 0.0;
  for (auto id : m.predicted_ids()) sum += std::pow(10.0, m.log_prob({}, id));
  CHECK(sum == doctest::Approx(1.0).epsilon(1e-6));
  // hand-computed absolute-discount values
  CHECK(std::pow(10.0, m.log_prob({}, m.word_id("a"))) == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(std::pow(10.0, m.log_prob({}, m.eos_id())) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(std::pow(10.0, m.log_prob({}, m.unk_id())) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("bigram Kneser-Ney hand check") {
  const auto m = NGramModel::train({{"a", "b"}, {"a", "b"}}, 2, 0.75);
  const auto a = m.word_id("a");
  // P(b|a) = (2-.75)/2 + (.75/2) * Pc(b) with Pc(b)=0.25
  CHECK(std::pow(10.0, m.log_prob({a}, m.word_id("b"))) == doctest::Approx(0.71875).epsilon(1e-9));
  // P(</s>|a) backs off: bow(a) * Pc(</s>) = 0.375 * 0.25
  CHECK(std::pow(10.0, m.log_prob({a}, m.eos_id())) == doctest::Approx(0.09375).epsilon(1e-9));
  CHECK(m.log_prob({a}, m.word_id("b")) > m.log_prob({a}, m.eos_id()));
  check_all_contexts_normalized(m, 2);
}

TEST_CASE("normalization holds for every stored and unstored context") {
  check_all_contexts_normalized(NGramModel::train({{"a", "b", "a"}, {"b", "b"}}, 3), 2);
  check_all_contexts_normalized(NGramModel::train({{"x"}}, 2), 2);
  check_all_contexts_normalized(
      NGramModel::train({{"a", "b", "c", "a", "b"}, {"c", "c", "a"}, {"b"}}, 4), 2);
}

TEST_CASE("repeated sentence is the modal sequence of its length") {
  const Corpus corpus(8, {"a", "b", "c"});
  const auto m = NGramModel::train(corpus, 3);
  const double target = m.score({"a", "b", "c"});
  // brute force over all 3-token sequences from the predictable vocabulary
  std::vector<std::string> vocab;
  for (auto id : m.predicted_ids())
    if (id != m.eos_id() && id != m.unk_id()) vocab.push_back(m.word_string(id));
  double best = -1e18;
  for (const auto& x : vocab)
    for (const auto& y : vocab)
      for (const auto& z : vocab) best = std::max(best, m.score({x, y, z}));
  CHECK(target == doctest::Approx(best).epsilon(1e-12));
}

TEST_CASE("score basics") {
  const auto m = NGramModel::train({{"a", "b"}}, 2);
  // empty sentence scores only </s> after <s>
  CHECK(m.score({}) == doctest::Approx(m.log_prob({m.bos_id()}, m.eos_id())));
  CHECK(m.score({"a", "b"}) > m.score({"b", "a"}));
  CHECK(std::isfinite(m.score({"zzz"})));  // unseen token goes through <unk>
}

TEST_CASE("duplicating a sentence does not lower its score") {
  const Corpus base = {{"a", "b"}, {"c", "a"}, {"b", "c", "c"}};
  for (int order : {1, 2, 3}) {
    const auto m1 = NGramModel::train(base, order);
    Corpus doubled = base;
    doubled.push_back({"a", "b"});
    const auto m2 = NGramModel::train(doubled, order);
    CHECK(m2.score({"a", "b"}) >= m1.score({"a", "b"}) - 1e-12);
  }
}

TEST_CASE("train input validation") {
  CHECK_THROWS_AS(NGramModel::train({}, 2), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{"a"}}, 0), std::invalid_argument);
  CHECK_THROWS_AS(NGramModel::train({{"a"}}, 2, 1.5), std::invalid_argument);
}

TEST_CASE("ARPA round trip preserves scores") {
  std::mt19937 rng(5);
  std::uniform_int_distribution<int> len(1, 7), letter(0, 3);
  Corpus corpus;
  for (int i = 0; i < 50; ++i) {
    std::vector<std::string> sent;
    const int l = len(rng);
    for (int k = 0; k < l; ++k) sent.push_back(std::string(1, static_cast<char>('a' + letter(rng))));
    corpus.push_back(std::move(sent));
  }
  for (int order : {1, 2, 10}) {
    const auto m = NGramModel::train(corpus, order);
    const std::string path = "lm_roundtrip_" + std::to_string(order) + ".arpa";
    m.save_arpa(path);
    const auto loaded = NGramModel::load_arpa(path);
    CHECK(loaded.order() == order);
    double total_m = 0.0, total_l = 0.0;
    for (const auto& sent : corpus) {
      total_m += m.score(sent);
      total_l += loaded.score(sent);
      CHECK(loaded.score(sent) == doctest::Approx(m.score(sent)).epsilon(1e-12));
    }
    CHECK(total_l == doctest::Approx(total_m).epsilon(1e-12));
    std::remove(path.c_str());
  }
}

TEST_CASE("hand-written ARPA file loads") {
  const std::string path = "hand.arpa";
  {
    std::ofstream out(path);
    out << "\\data\\\n";
    out << "ngram 1=4\n";
    out << "\n\\1-grams:\n";
    out << "-0.60206\ta\n";          // 0.25
    out << "-0.60206\t</s>\n";
    out << "-0.60206\t<unk>\n";
    out << "-99\t<s>\n";
    out << "\n\\end\\\n";
  }
  const auto m = NGramModel::load_arpa(path);
  CHECK(m.order() == 1);
  CHECK(std::pow(10.0, m.log_prob({}, m.word_id("a"))) == doctest::Approx(0.25).epsilon(1e-4));
  CHECK(std::isfinite(m.score({"a", "a"})));
  std::remove(path.c_str());
}

TEST_CASE("malformed ARPA reports a line number") {
  const std::string path = "bad.arpa";
  {
    std::ofstream out(path);
    out << "\\data\\\n";
    out << "ngram 1=1\n";
    out << "\n\\1-grams:\n";
    out << "not_a_number a\n";
    out << "\\end\\\n";
  }
  CHECK_THROWS_WITH_AS(NGramModel::load_arpa(path), doctest::Contains(":5"), std::runtime_error);
  std::remove(path.c_str());
  CHECK_THROWS_AS(NGramModel::load_arpa("missing.arpa"), std::runtime_error);
}
