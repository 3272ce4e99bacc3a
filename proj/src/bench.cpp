#include "smtlab/bench.hpp"

#include <algorithm>
#include <cmath>
#include <ctime>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace smtlab {

std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

std::vector<FlatSentence> prepare_corpus(const std::vector<std::string>& lines,
                                         const SegmentationScheme& scheme,
                                         const FormatSpec& format) {
  std::vector<FlatSentence> out;
  out.reserve(lines.size());
  for (const auto& line : lines) {
    if (scheme.kind == SchemeKind::word) {
      out.push_back(split_tokens(line));
    } else {
      out.push_back(markup_encode(segment_sentence(line, scheme), format));
    }
  }
  return out;
}

std::vector<std::string> flat_to_words(const FlatSentence& tokens, const SegmentationScheme& scheme,
                                       const FormatSpec& format) {
  if (scheme.kind == SchemeKind::word) return tokens;
  return markup_decode(tokens, format).words;
}

// ---------------------------------------------------------------------------
// Spec file

namespace {

SegmentationScheme scheme_from_strings(const std::string& scheme, const std::string& script) {
  CharacterClassTable table;
  if (script.empty() || script == "latin") {
    table = CharacterClassTable::latin();
  } else if (script == "devanagari") {
    table = CharacterClassTable::devanagari();
  } else {
    table = CharacterClassTable::load(script);
  }
  if (scheme == "word") return SegmentationScheme::word();
  if (scheme == "character" || scheme == "char") return SegmentationScheme::character(table);
  if (scheme == "os" || scheme == "orthographic_syllable")
    return SegmentationScheme::orthographic_syllable(table);
  throw std::runtime_error("unknown segmentation scheme: " + scheme);
}

MarkupKind format_kind_from_string(const std::string& s) {
  if (s == "boundary") return MarkupKind::boundary_marker;
  if (s == "internal") return MarkupKind::internal_marker;
  if (s == "space") return MarkupKind::space_marker;
  throw std::runtime_error("unknown marker format: " + s);
}

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t");
  size_t b = s.find_last_not_of(" \t");
  return a == std::string::npos ? "" : s.substr(a, b - a + 1);
}

}  // namespace

ExperimentSpec parse_experiment_spec(const std::string& path) {
  ExperimentSpec spec;
  std::string section;
  std::string scheme_name = "word", script_name = "latin";
  const auto lines = read_lines(path);
  for (size_t ln = 0; ln < lines.size(); ++ln) {
    std::string line = lines[ln];
    const size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[' && line.back() == ']') {
      section = line.substr(1, line.size() - 2);
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("spec parse error at " + path + ":" + std::to_string(ln + 1) +
                               ": expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));

    if (section == "corpus") {
      if (key == "train_source") spec.train_source = value;
      else if (key == "train_target") spec.train_target = value;
      else if (key == "test_source") spec.test_source = value;
      else if (key == "test_reference") spec.test_reference = value;
      else throw std::runtime_error("spec: unknown corpus key " + key);
    } else if (section == "model") {
      if (key == "scheme") scheme_name = value;
      else if (key == "script") script_name = value;
      else if (key == "format") spec.format.kind = format_kind_from_string(value);
      else if (key == "marker") spec.format.marker = value;
      else if (key == "boundary_side")
        spec.format.boundary_side = value == "first" ? BoundarySide::first : BoundarySide::last;
      else if (key == "lm_order") spec.lm_order = std::stoi(value);
      else if (key == "discount") spec.lm_discount = std::stod(value);
      else if (key == "iterations") spec.em_iterations = std::stoi(value);
      else if (key == "max_phrase_length") spec.max_phrase_length = std::stoi(value);
      else throw std::runtime_error("spec: unknown model key " + key);
    } else if (section == "weights") {
      if (key == "lm") spec.weights.lm = std::stod(value);
      else if (key == "phrase_penalty") spec.weights.phrase_penalty = std::stod(value);
      else if (key == "word_penalty") spec.weights.word_penalty = std::stod(value);
      else if (key.rfind("table", 0) == 0 && key.size() == 6 && key[5] >= '1' && key[5] <= '4')
        spec.weights.table[key[5] - '1'] = std::stod(value);
      else throw std::runtime_error("spec: unknown weights key " + key);
    } else if (section == "sweep") {
      if (key == "baseline") {
        spec.baseline_label = value;
      } else if (key == "configs") {
        std::string item;
        std::istringstream ss(value);
        while (std::getline(ss, item, ',')) {
          item = trim(item);
          if (!item.empty()) spec.sweep_labels.push_back(item);
        }
      } else {
        throw std::runtime_error("spec: unknown sweep key " + key);
      }
    } else {
      throw std::runtime_error("spec: key outside a known section at " + path + ":" +
                               std::to_string(ln + 1));
    }
  }
  spec.scheme = scheme_from_strings(scheme_name, script_name);
  if (spec.sweep_labels.empty()) spec.sweep_labels.push_back("default");
  return spec;
}

DecoderConfig config_from_label(const std::string& label, const ExperimentSpec& spec) {
  DecoderConfig cfg;
  cfg.max_phrase_length = spec.max_phrase_length;
  cfg.weights = spec.weights;
  std::istringstream in(label);
  std::string tok;
  while (in >> tok) {
    if (tok == "default" || tok == "stack") {
      cfg.algorithm = SearchAlgorithm::stack;
    } else if (tok == "cube") {
      cfg.algorithm = SearchAlgorithm::cube_pruning;
    } else if (const size_t eq = tok.find('='); eq != std::string::npos) {
      const std::string key = tok.substr(0, eq);
      const int value = std::stoi(tok.substr(eq + 1));
      if (key == "tl") {
        cfg.table_limit = value;
      } else if (key == "ss") {
        cfg.algorithm = SearchAlgorithm::stack;
        cfg.stack_size = value;
      } else if (key == "pl") {
        cfg.algorithm = SearchAlgorithm::cube_pruning;
        cfg.pop_limit = value;
      } else {
        throw std::runtime_error("unknown sweep parameter: " + tok);
      }
    } else {
      throw std::runtime_error("unknown sweep label token: " + tok);
    }
  }
  return cfg;
}

TrainedModels train_models(const std::vector<FlatSentence>& source,
                           const std::vector<FlatSentence>& target, int lm_order,
                           double lm_discount, int em_iterations, int max_phrase_length) {
  if (source.size() != target.size())
    throw std::invalid_argument("train_models: source/target line counts differ");

  std::vector<std::pair<FlatSentence, FlatSentence>> fwd_pairs, bwd_pairs;
  fwd_pairs.reserve(source.size());
  bwd_pairs.reserve(source.size());
  for (size_t i = 0; i < source.size(); ++i) {
    fwd_pairs.emplace_back(source[i], target[i]);
    bwd_pairs.emplace_back(target[i], source[i]);
  }
  const Model1Result fwd = train_model1(fwd_pairs);
  const Model1Result bwd = train_model1(bwd_pairs);

  std::vector<PhrasePair> extracted;
  for (size_t i = 0; i < source.size(); ++i) {
    if (source[i].empty() || target[i].empty()) continue;
    AlignmentMatrix backward;  // transpose to source-major orientation
    backward.source_len = static_cast<int>(source[i].size());
    backward.target_len = static_cast<int>(target[i].size());
    for (const auto& [t, s] : bwd.alignments[i].links) backward.links.emplace(s, t);
    const AlignmentMatrix sym = grow_diag_final_and(fwd.alignments[i], backward);
    auto pairs = extract_phrases(source[i], target[i], sym, max_phrase_length);
    extracted.insert(extracted.end(), pairs.begin(), pairs.end());
  }

  TrainedModels models;
  models.table = score_table(extracted, fwd.ttable, bwd.ttable);
  models.lm = NGramModel::train(target, lm_order, lm_discount);
  return models;
}

// ---------------------------------------------------------------------------
// Bench runner

BenchReport run_bench(const ExperimentSpec& spec) {
  BenchReport report;
  report.scheme = scheme_label(spec.scheme);
  report.format = spec.scheme.kind == SchemeKind::word ? "none" : [&] {
    switch (spec.format.kind) {
      case MarkupKind::boundary_marker: return "boundary";
      case MarkupKind::internal_marker: return "internal";
      case MarkupKind::space_marker: return "space";
    }
    return "?";
  }();
  {
    std::time_t now = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%d", std::gmtime(&now));
    report.date = buf;
  }

  const auto train_src_lines = read_lines(spec.train_source);
  const auto train_tgt_lines = read_lines(spec.train_target);
  const auto test_src_lines = read_lines(spec.test_source);
  const auto test_ref_lines = read_lines(spec.test_reference);
  if (train_src_lines.size() != train_tgt_lines.size())
    throw std::runtime_error("train corpora line counts differ");
  if (test_src_lines.size() != test_ref_lines.size())
    throw std::runtime_error("test corpora line counts differ");
  report.train_pairs = train_src_lines.size();
  report.test_sentences = test_src_lines.size();

  std::vector<std::vector<std::string>> references;
  references.reserve(test_ref_lines.size());
  for (const auto& line : test_ref_lines) references.push_back(split_tokens(line));

  const SegmentationScheme word_scheme = SegmentationScheme::word();
  const FormatSpec no_format;

  // Word-level baseline.
  TimingReport baseline_timing;
  {
    BenchRow row;
    row.label = spec.baseline_label;
    const auto src = prepare_corpus(train_src_lines, word_scheme, no_format);
    const auto tgt = prepare_corpus(train_tgt_lines, word_scheme, no_format);
    const auto test = prepare_corpus(test_src_lines, word_scheme, no_format);
    const TrainedModels models = train_models(src, tgt, spec.lm_order, spec.lm_discount,
                                              spec.em_iterations, spec.max_phrase_length);
    DecoderConfig cfg = config_from_label("default", spec);
    const CorpusDecodeResult run = decode_corpus(test, models.table, models.lm, cfg, 1);
    std::vector<std::vector<std::string>> hyps;
    for (const auto& out : run.outputs) hyps.push_back(out.target);
    row.bleu = bleu(hyps, references);
    row.timing = time_decode(run.cpu_seconds, run.wall_seconds, test.size());
    baseline_timing = row.timing;
    baseline_timing.relative = 1.0;
    row.timing.relative = 1.0;
    report.rows.push_back(std::move(row));
  }

  // Sweep rows on the subword representation.
  const auto src = prepare_corpus(train_src_lines, spec.scheme, spec.format);
  const auto tgt = prepare_corpus(train_tgt_lines, spec.scheme, spec.format);
  const auto test = prepare_corpus(test_src_lines, spec.scheme, spec.format);
  TrainedModels models;
  bool models_ok = true;
  std::string models_error;
  try {
    models = train_models(src, tgt, spec.lm_order, spec.lm_discount, spec.em_iterations,
                          spec.max_phrase_length);
  } catch (const std::exception& e) {
    models_ok = false;
    models_error = e.what();
  }

  for (const auto& label : spec.sweep_labels) {
    BenchRow row;
    row.label = label;
    try {
      if (!models_ok) throw std::runtime_error("model training failed: " + models_error);
      const DecoderConfig cfg = config_from_label(label, spec);
      const CorpusDecodeResult run = decode_corpus(test, models.table, models.lm, cfg, 1);
      std::vector<std::vector<std::string>> hyps;
      for (const auto& out : run.outputs) hyps.push_back(flat_to_words(out.target, spec.scheme, spec.format));
      row.bleu = bleu(hyps, references);
      row.timing = time_decode(run.cpu_seconds, run.wall_seconds, test.size(), &baseline_timing);
    } catch (const std::exception& e) {
      row.ok = false;
      row.error = e.what();
    }
    report.rows.push_back(std::move(row));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rendering

std::string render_table(const BenchReport& report) {
  std::ostringstream out;
  out << "# scheme=" << report.scheme << " format=" << report.format
      << " train_pairs=" << report.train_pairs << " test_sentences=" << report.test_sentences
      << " date=" << report.date << "\n";
  out << std::left << std::setw(18) << "label" << std::right << std::setw(8) << "BLEU"
      << std::setw(8) << "p1" << std::setw(8) << "p2" << std::setw(8) << "p3" << std::setw(8)
      << "p4" << std::setw(8) << "BP" << std::setw(10) << "CPU_s" << std::setw(12) << "ms/sent"
      << std::setw(10) << "relative" << "\n";
  out << std::fixed;
  for (const auto& row : report.rows) {
    out << std::left << std::setw(18) << row.label << std::right;
    if (!row.ok) {
      out << "  ERROR: " << row.error << "\n";
      continue;
    }
    out << std::setprecision(2) << std::setw(8) << row.bleu.bleu;
    out << std::setprecision(4);
    for (double p : row.bleu.precisions) out << std::setw(8) << p;
    out << std::setw(8) << row.bleu.brevity_penalty;
    out << std::setprecision(3) << std::setw(10) << row.timing.cpu_seconds << std::setw(12)
        << row.timing.per_sentence_ms;
    if (row.timing.relative)
      out << std::setprecision(2) << std::setw(10) << *row.timing.relative;
    else
      out << std::setw(10) << "-";
    out << "\n";
  }
  return out.str();
}

std::string render_tsv(const BenchReport& report) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "meta.scheme\t" << report.scheme << "\n";
  out << "meta.format\t" << report.format << "\n";
  out << "meta.train_pairs\t" << report.train_pairs << "\n";
  out << "meta.test_sentences\t" << report.test_sentences << "\n";
  out << "meta.date\t" << report.date << "\n";
  for (const auto& row : report.rows) {
    const std::string p = "row." + row.label + ".";
    if (!row.ok) {
      out << p << "error\t" << row.error << "\n";
      continue;
    }
    out << p << "bleu\t" << row.bleu.bleu << "\n";
    for (size_t n = 0; n < 4; ++n)
      out << p << "p" << (n + 1) << "\t" << row.bleu.precisions[n] << "\n";
    out << p << "bp\t" << row.bleu.brevity_penalty << "\n";
    out << p << "cpu_seconds\t" << row.timing.cpu_seconds << "\n";
    out << p << "ms_per_sentence\t" << row.timing.per_sentence_ms << "\n";
    if (row.timing.relative) out << p << "relative\t" << *row.timing.relative << "\n";
  }
  return out.str();
}

}  // namespace smtlab
