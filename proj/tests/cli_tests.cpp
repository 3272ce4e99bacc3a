#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "test_support.hpp"

namespace {

int run(const std::string& args) {
  const std::string cmd = std::string(SMTLAB_CLI_PATH) + " " + args;
  const int status = std::system(cmd.c_str());
  if (status < 0) return -1;
#ifdef _WIN32
  return status;
#else
  return WEXITSTATUS(status);
#endif
}

void write_lines(const std::string& path, const std::vector<std::string>& lines) {
  std::ofstream out(path);
  for (const auto& l : lines) out << l << "\n";
}

std::vector<std::string> slurp(const std::string& path) {
  std::ifstream in(path);
  REQUIRE(in.good());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

struct FileGuard {
  std::vector<std::string> paths;
  ~FileGuard() {
    for (const auto& p : paths) std::remove(p.c_str());
  }
};

}  // namespace

TEST_CASE("segment with the word scheme is the identity") {
  FileGuard g{{"cli_seg_in.txt", "cli_seg_out.txt"}};
  write_lines("cli_seg_in.txt", {"this is a test", "", "one"});
  CHECK(run("segment --input cli_seg_in.txt --output cli_seg_out.txt --scheme word") == 0);
  CHECK(slurp("cli_seg_out.txt") == std::vector<std::string>{"this is a test", "", "one"});
}

TEST_CASE("segment emits each marker format") {
  FileGuard g{{"cli_seg_in.txt", "cli_seg_out.txt"}};
  write_lines("cli_seg_in.txt", {"this is of data formats for"});
  CHECK(run("segment --input cli_seg_in.txt --output cli_seg_out.txt "
            "--scheme os --format boundary") == 0);
  CHECK(slurp("cli_seg_out.txt") ==
        std::vector<std::string>{"thi s_ i s_ o f_ da ta_ fo rma t s_ fo r_"});
  CHECK(run("segment --input cli_seg_in.txt --output cli_seg_out.txt "
            "--scheme os --format internal") == 0);
  CHECK(slurp("cli_seg_out.txt") ==
        std::vector<std::string>{"thi_ s i_ s o_ f da_ ta fo_ rma_ t_ s fo_ r"});
  CHECK(run("segment --input cli_seg_in.txt --output cli_seg_out.txt "
            "--scheme os --format space") == 0);
  CHECK(slurp("cli_seg_out.txt") ==
        std::vector<std::string>{"thi s _ i s _ o f _ da ta _ fo rma t s _ fo r"});
  // no format: plain subword stream
  CHECK(run("segment --input cli_seg_in.txt --output cli_seg_out.txt --scheme char") == 0);
  CHECK(slurp("cli_seg_out.txt") ==
        std::vector<std::string>{"t h i s i s o f d a t a f o r m a t s f o r"});
}

TEST_CASE("invocation and input errors exit with code 2") {
  FileGuard g{{"cli_a.txt", "cli_b.txt", "cli_out.txt"}};
  CHECK(run("segment --input no_such_file.txt --output cli_out.txt 2>/dev/null") == 2);
  write_lines("cli_a.txt", {"a b", "c"});
  write_lines("cli_b.txt", {"x y"});
  CHECK(run("train --train-source cli_a.txt --train-target cli_b.txt "
            "--table-out cli_t.txt --lm-out cli_l.arpa 2>/dev/null") == 2);
  // unknown flag is a parse error (CLI library convention, non-zero and not 1)
  CHECK(run("segment --bogus 2>/dev/null") != 0);
  CHECK(run("2>/dev/null") != 0);
}

TEST_CASE("train then decode round-trips a transparent corpus") {
  FileGuard g{{"cli_train.src", "cli_train.tgt", "cli_test.src", "cli_test.out",
               "cli_table.txt", "cli_lm.arpa"}};
  const auto corpus = smtlab::test::make_synthetic_corpus(120, 6, 3);
  write_lines("cli_train.src", corpus.train_source);
  write_lines("cli_train.tgt", corpus.train_target);
  write_lines("cli_test.src", corpus.test_source);

  CHECK(run("train --train-source cli_train.src --train-target cli_train.tgt "
            "--table-out cli_table.txt --lm-out cli_lm.arpa --lm-order 3 --iterations 4 "
            "2>/dev/null") == 0);
  CHECK(slurp("cli_table.txt").size() > 0);

  for (const char* search : {"stack", "cube"}) {
    CHECK(run(std::string("decode --input cli_test.src --table cli_table.txt --lm cli_lm.arpa "
                          "--output cli_test.out --search ") +
              search + " --threads 2 2>/dev/null") == 0);
    const auto out = slurp("cli_test.out");
    REQUIRE(out.size() == corpus.test_source.size());
    for (const auto& line : out) CHECK(!line.empty());
  }
}

TEST_CASE("decoding an empty corpus yields an empty output file") {
  FileGuard g{{"cli_empty.src", "cli_empty.out", "cli_table.txt", "cli_lm.arpa"}};
  write_lines("cli_empty.src", {});
  write_lines("cli_train_min.src", {"a", "a b", "b"});
  write_lines("cli_train_min.tgt", {"x", "x y", "y"});
  FileGuard g2{{"cli_train_min.src", "cli_train_min.tgt"}};
  REQUIRE(run("train --train-source cli_train_min.src --train-target cli_train_min.tgt "
              "--table-out cli_table.txt --lm-out cli_lm.arpa --lm-order 2 2>/dev/null") == 0);
  CHECK(run("decode --input cli_empty.src --table cli_table.txt --lm cli_lm.arpa "
            "--output cli_empty.out 2>/dev/null") == 0);
  CHECK(slurp("cli_empty.out").empty());
}

TEST_CASE("bench prints the sweep table and writes report files") {
  FileGuard g{{"cli_bench_train.src", "cli_bench_train.tgt", "cli_bench_test.src",
               "cli_bench_test.ref", "cli_bench.ini", "cli_bench_stdout.txt",
               "cli_report.txt", "cli_report.tsv"}};
  const auto corpus = smtlab::test::make_synthetic_corpus(120, 5, 9);
  write_lines("cli_bench_train.src", corpus.train_source);
  write_lines("cli_bench_train.tgt", corpus.train_target);
  write_lines("cli_bench_test.src", corpus.test_source);
  write_lines("cli_bench_test.ref", corpus.test_target);
  write_lines("cli_bench.ini",
              {"[corpus]", "train_source = cli_bench_train.src",
               "train_target = cli_bench_train.tgt", "test_source = cli_bench_test.src",
               "test_reference = cli_bench_test.ref", "[model]", "scheme = os",
               "format = boundary", "lm_order = 3", "iterations = 3", "[sweep]",
               "configs = default, tl=5, pl=100"});
  CHECK(run("bench --spec cli_bench.ini --out-prefix cli_report > cli_bench_stdout.txt "
            "2>/dev/null") == 0);
  std::ostringstream all;
  for (const auto& line : slurp("cli_bench_stdout.txt")) all << line << "\n";
  const std::string table = all.str();
  CHECK(table.find("BLEU") != std::string::npos);
  CHECK(table.find("relative") != std::string::npos);
  CHECK(table.find("word-level") != std::string::npos);
  CHECK(table.find("tl=5") != std::string::npos);
  CHECK(!slurp("cli_report.txt").empty());
  CHECK(!slurp("cli_report.tsv").empty());
  CHECK(run("bench --spec no_such_spec.ini 2>/dev/null") == 2);
}
