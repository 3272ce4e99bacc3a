// smtlab: segment / train / decode / bench front end for the subword
// phrase-based SMT laboratory.
//
// Exit codes: 0 success, 1 row-level failures in a bench run,
// 2 invocation or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "smtlab/bench.hpp"

namespace {

using namespace smtlab;

struct SchemeFlags {
  std::string scheme = "word";
  std::string script = "latin";
  std::string classes_file;
  std::string format = "none";
  std::string marker = "_";
  std::string boundary_side = "last";

  void attach(CLI::App* cmd) {
    cmd->add_option("--scheme", scheme, "Segmentation scheme: word|char|os")
        ->check(CLI::IsMember({"word", "char", "character", "os"}));
    cmd->add_option("--script", script, "Built-in class table: latin|devanagari")
        ->check(CLI::IsMember({"latin", "devanagari"}));
    cmd->add_option("--classes", classes_file, "Class table file (U+XXXX<TAB>class lines)");
    cmd->add_option("--format", format, "Marker format: none|boundary|internal|space")
        ->check(CLI::IsMember({"none", "boundary", "internal", "space"}));
    cmd->add_option("--marker", marker, "Marker code point (default _)");
    cmd->add_option("--boundary-side", boundary_side, "Marked subword for boundary format")
        ->check(CLI::IsMember({"first", "last"}));
  }

  SegmentationScheme make_scheme() const {
    CharacterClassTable table;
    if (!classes_file.empty())
      table = CharacterClassTable::load(classes_file);
    else if (script == "devanagari")
      table = CharacterClassTable::devanagari();
    else
      table = CharacterClassTable::latin();
    if (scheme == "word") return SegmentationScheme::word();
    if (scheme == "char" || scheme == "character") return SegmentationScheme::character(table);
    return SegmentationScheme::orthographic_syllable(table);
  }

  FormatSpec make_format() const {
    FormatSpec f;
    f.marker = marker;
    f.boundary_side = boundary_side == "first" ? BoundarySide::first : BoundarySide::last;
    if (format == "boundary") f.kind = MarkupKind::boundary_marker;
    if (format == "internal") f.kind = MarkupKind::internal_marker;
    if (format == "space" || format == "none") f.kind = MarkupKind::space_marker;
    return f;
  }
};

struct DecoderFlags {
  std::string search = "stack";
  int stack_size = 100;
  int table_limit = 20;
  int pop_limit = 1000;
  int max_phrase_len = 7;
  double oov_penalty = -10.0;
  std::string weights_file;

  void attach(CLI::App* cmd) {
    cmd->add_option("--search", search, "Search algorithm: stack|cube")
        ->check(CLI::IsMember({"stack", "cube"}));
    cmd->add_option("--stack-size", stack_size, "Beam size per stack (ss)");
    cmd->add_option("--table-limit", table_limit, "Translation options per source phrase (tl)");
    cmd->add_option("--cube-pop-limit", pop_limit, "Cube pruning pops per stack (pl)");
    cmd->add_option("--max-phrase-len", max_phrase_len, "Maximum source phrase length");
    cmd->add_option("--oov-penalty", oov_penalty, "log10 feature value for OOV pass-through");
    cmd->add_option("--weights", weights_file, "Feature weights file (key = value lines)");
  }

  DecoderConfig make_config() const {
    DecoderConfig cfg;
    cfg.algorithm = search == "cube" ? SearchAlgorithm::cube_pruning : SearchAlgorithm::stack;
    cfg.stack_size = stack_size;
    cfg.table_limit = table_limit;
    cfg.pop_limit = pop_limit;
    cfg.max_phrase_length = max_phrase_len;
    cfg.oov_log_penalty = oov_penalty;
    if (!weights_file.empty()) cfg.weights = FeatureWeights::load(weights_file);
    return cfg;
  }
};

int cmd_segment(const std::string& input, const std::string& output, const SchemeFlags& flags) {
  const auto scheme = flags.make_scheme();
  const auto format = flags.make_format();
  const auto lines = read_lines(input);
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write output file: " + output);
  for (const auto& line : lines) {
    const SubwordSentence sent = segment_sentence(line, scheme);
    if (flags.format == "none") {
      // No marker: plain token stream (identity for the word scheme).
      FlatSentence tokens;
      for (const auto& word : sent.words)
        for (const auto& tok : word) tokens.push_back(tok);
      out << join_tokens(tokens) << "\n";
    } else {
      out << join_tokens(markup_encode(sent, format)) << "\n";
    }
  }
  return 0;
}

int cmd_train(const std::string& train_source, const std::string& train_target,
              const std::string& table_out, const std::string& lm_out, int lm_order,
              double discount, int iterations, int max_phrase_len) {
  const auto src_lines = read_lines(train_source);
  const auto tgt_lines = read_lines(train_target);
  if (src_lines.size() != tgt_lines.size()) {
    std::cerr << "smtlab train: line count mismatch: " << train_source << " has "
              << src_lines.size() << " lines, " << train_target << " has " << tgt_lines.size()
              << "\n";
    return 2;
  }
  std::vector<FlatSentence> src, tgt;
  for (const auto& l : src_lines) src.push_back(split_tokens(l));
  for (const auto& l : tgt_lines) tgt.push_back(split_tokens(l));
  const TrainedModels models =
      train_models(src, tgt, lm_order, discount, iterations, max_phrase_len);
  save_table(models.table, table_out);
  models.lm.save_arpa(lm_out);
  std::cerr << "smtlab train: " << models.table.size() << " source phrases, order-"
            << models.lm.order() << " LM over " << models.lm.vocab_size() << " tokens\n";
  return 0;
}

int cmd_decode(const std::string& input, const std::string& table_path, const std::string& lm_path,
               const std::string& output, const DecoderFlags& flags, int threads) {
  const PhraseTable table = load_table(table_path);
  const NGramModel lm = NGramModel::load_arpa(lm_path);
  const DecoderConfig cfg = flags.make_config();
  std::vector<FlatSentence> sentences;
  for (const auto& l : read_lines(input)) sentences.push_back(split_tokens(l));
  const CorpusDecodeResult run = decode_corpus(sentences, table, lm, cfg, threads);
  std::ofstream out(output);
  if (!out) throw std::runtime_error("cannot write output file: " + output);
  for (const auto& r : run.outputs) out << join_tokens(r.target) << "\n";
  int failures = 0;
  for (const auto& e : run.errors)
    if (!e.empty()) ++failures;
  std::cerr << "smtlab decode: " << sentences.size() << " sentences, "
            << run.stats.hypotheses_expanded << " hypotheses expanded, "
            << run.stats.recombinations << " recombinations, " << run.stats.pruned
            << " pruned, cpu " << run.cpu_seconds << "s, wall " << run.wall_seconds << "s";
  if (failures) std::cerr << ", " << failures << " sentence-level failures";
  std::cerr << "\n";
  return failures ? 1 : 0;
}

int cmd_bench(const std::string& spec_path, const std::string& out_prefix) {
  const ExperimentSpec spec = parse_experiment_spec(spec_path);
  const BenchReport report = run_bench(spec);
  const std::string table = render_table(report);
  std::cout << table;
  if (!out_prefix.empty()) {
    std::ofstream txt(out_prefix + ".txt");
    txt << table;
    std::ofstream tsv(out_prefix + ".tsv");
    tsv << render_tsv(report);
  }
  for (const auto& row : report.rows)
    if (!row.ok) return 1;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Subword phrase-based SMT laboratory"};
  app.require_subcommand(1);

  // segment
  auto* segment = app.add_subcommand("segment", "Segment a word-level corpus and flatten it");
  std::string seg_in, seg_out;
  SchemeFlags seg_flags;
  segment->add_option("--input", seg_in)->required();
  segment->add_option("--output", seg_out)->required();
  seg_flags.attach(segment);

  // train
  auto* train = app.add_subcommand("train", "Train phrase table and language model");
  std::string tr_src, tr_tgt, tr_table = "phrase-table.txt", tr_lm = "lm.arpa";
  int tr_order = 10, tr_iters = 5, tr_maxlen = 7;
  double tr_discount = 0.75;
  train->add_option("--train-source", tr_src)->required();
  train->add_option("--train-target", tr_tgt)->required();
  train->add_option("--table-out", tr_table);
  train->add_option("--lm-out", tr_lm);
  train->add_option("--lm-order", tr_order);
  train->add_option("--discount", tr_discount);
  train->add_option("--iterations", tr_iters);
  train->add_option("--max-phrase-len", tr_maxlen);

  // decode
  auto* decode = app.add_subcommand("decode", "Decode a flat corpus");
  std::string de_in, de_table, de_lm, de_out;
  int de_threads = 1;
  DecoderFlags de_flags;
  decode->add_option("--input", de_in)->required();
  decode->add_option("--table", de_table)->required();
  decode->add_option("--lm", de_lm)->required();
  decode->add_option("--output", de_out)->required();
  decode->add_option("--threads", de_threads);
  de_flags.attach(decode);

  // bench
  auto* bench = app.add_subcommand("bench", "Run a sweep experiment from a spec file");
  std::string be_spec, be_out;
  bench->add_option("--spec", be_spec)->required();
  bench->add_option("--out-prefix", be_out, "Write <prefix>.txt and <prefix>.tsv reports");

  CLI11_PARSE(app, argc, argv);

  try {
    if (segment->parsed()) return cmd_segment(seg_in, seg_out, seg_flags);
    if (train->parsed())
      return cmd_train(tr_src, tr_tgt, tr_table, tr_lm, tr_order, tr_discount, tr_iters, tr_maxlen);
    if (decode->parsed()) return cmd_decode(de_in, de_table, de_lm, de_out, de_flags, de_threads);
    if (bench->parsed()) return cmd_bench(be_spec, be_out);
  } catch (const std::exception& e) {
    std::cerr << "smtlab: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
