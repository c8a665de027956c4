#include "newsreuse/cli.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "newsreuse/analysis.hpp"
#include "newsreuse/calibration.hpp"
#include "newsreuse/corpus.hpp"
#include "newsreuse/embedding.hpp"
#include "newsreuse/error.hpp"
#include "newsreuse/linguistic.hpp"
#include "newsreuse/log.hpp"
#include "newsreuse/matcher.hpp"
#include "newsreuse/reporting.hpp"

namespace newsreuse::cli {
namespace fs = std::filesystem;
namespace {

const fs::path& require_path(const fs::path& p, const char* flag) {
  if (p.empty()) throw Error(ErrorCode::FileNotFound, std::string("no ") + flag + " given");
  return p;
}

std::unique_ptr<EmbeddingProvider> make_provider(const Config& config) {
  if (config.provider == ProviderKind::Sidecar) {
    return std::make_unique<SidecarProvider>(config.sidecar_url, config.embed_dim);
  }
  return std::make_unique<HashEmbeddingProvider>(config.embed_dim);
}

std::string dump(const nlohmann::json& j) { return j.dump(2) + "\n"; }

void print_stats(std::ostream& out, const Corpus& corpus) {
  const auto& stats = corpus.stats();
  out << to_string(corpus.role()) << " articles: " << corpus.size() << "\n";
  for (const auto& [lang, n] : stats.per_language) out << "  language " << lang << ": " << n << "\n";
  for (const auto& [agency, n] : stats.per_agency) out << "  agency " << agency << ": " << n << "\n";
}

struct Inputs {
  Corpus target;
  Corpus source;
};

Inputs load_inputs(const Config& config) {
  auto target = load_corpus(require_path(config.target_path, "--target"), Role::Target, config.language_set);
  auto source = load_corpus(require_path(config.source_path, "--source"), Role::Source, config.language_set);
  return {std::move(target), std::move(source)};
}

void write_heatmap(const std::vector<MatchRecord>& attributed, const Corpus& corpus, const Segmentation& seg,
                   const Config& config, const fs::path& dir) {
  const std::string stem = std::string("heatmap_") + std::string(to_string(corpus.role()));
  if (corpus.size() == 0) {
    log::warn(stem + " skipped: corpus is empty");
    return;
  }
  const auto heatmap = heatmap_matrix(attributed, corpus, seg, corpus.role());
  emit_heatmap_svg(heatmap, dir / (stem + ".svg"), HeatmapStyle{config.heatmap_max, config.heatmap_divider});
  write_text_file(dir / (stem + ".json"), dump(to_json(heatmap)));
}

// Everything downstream of the match set; shared by run and report.
void write_reports(const MatchSet& set, const Inputs& in, const Segmentation& target_seg,
                   const Segmentation& source_seg, const Config& config, const fs::path& dir) {
  const auto attributed = set.attributed();

  emit_accounting(set, dir / "accounting.csv");

  const auto table = build_position_table(attributed, target_seg, source_seg);
  write_text_file(dir / "position.csv", position_csv(table));

  nlohmann::json chi;
  try {
    chi = to_json(chi_square_independence(table));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::DegenerateTable) throw;
    log::warn(e.what());
    chi = {{"error", std::string(to_string(e.code()))}, {"message", e.message()}};
  }
  write_text_file(dir / "chi_square.json", dump(chi));

  write_text_file(dir / "pr.json", dump(to_json(classify_pr(attributed))));
  write_text_file(dir / "reuse_rates.json", dump(to_json(reuse_rates(set, in.target, in.source))));

  write_heatmap(attributed, in.target, target_seg, config, dir);
  write_heatmap(attributed, in.source, source_seg, config, dir);

  const auto stopwords = config.stopwords_path.empty() ? default_stopwords() : load_stopwords(config.stopwords_path);
  const auto terms = term_frequencies(attributed, target_seg, config.top_k_sentences, stopwords);
  write_text_file(dir / "terms.json", dump(to_json(std::span<const TermFrequency>(terms))));
}

void print_accounting(std::ostream& out, const MatchSet& set) {
  const auto& a = set.accounting;
  out << "raw matches: " << a.raw.pairs << "\n"
      << "true matches: " << a.true_matches.pairs << "\n"
      << "earliest matches: " << a.earliest.pairs << "\n"
      << "false positives: " << a.false_positives.pairs << "\n";
}

}  // namespace

const std::vector<std::string>& run_artifacts() {
  static const std::vector<std::string> kNames{
      "matches.jsonl",       "match_summary.json",  "accounting.csv",      "position.csv",
      "chi_square.json",     "pr.json",             "reuse_rates.json",    "heatmap_target.svg",
      "heatmap_target.json", "heatmap_source.svg",  "heatmap_source.json", "terms.json",
      "vectors.emb1",        "vectors.emb1.meta.json"};
  return kNames;
}

int cmd_ingest(const Config& config, std::ostream& out) {
  const auto in = load_inputs(config);
  print_stats(out, in.target);
  print_stats(out, in.source);
  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    write_corpus(in.target, config.out_dir / "target.jsonl");
    write_corpus(in.source, config.out_dir / "source.jsonl");
  }
  return 0;
}

int cmd_run(const Config& config, std::ostream& out) {
  config.validate();
  const auto in = load_inputs(config);
  const auto provider = make_provider(config);

  std::unique_ptr<Annotator> annotator;
  if (config.annotations_path.empty()) {
    annotator = std::make_unique<HeuristicAnnotator>();
  } else {
    annotator = std::make_unique<ExternalAnnotations>(ExternalAnnotations::load(config.annotations_path));
  }

  PipelineOptions options;
  options.threshold = config.threshold;
  options.parallelism = config.parallelism;
  options.max_batch = config.max_batch;
  options.filter_sources = config.filter_sources;
  const auto result = match_pipeline(in.target, in.source, *provider, *annotator, options);

  const fs::path& dir = config.out_dir;
  fs::create_directories(dir);
  write_match_jsonl(result.matches, dir / "matches.jsonl");
  write_text_file(dir / "match_summary.json", dump(summary_json(result.matches)));
  write_reports(result.matches, in, result.target_sentences, result.source_sentences, config, dir);
  store_write(result.vectors, dir / "vectors.emb1");

  out << "eligible target sentences: " << result.eligible_target_sentences << "\n"
      << "blocks: " << result.blocks << "\n"
      << "comparisons: " << result.comparisons << "\n";
  print_accounting(out, result.matches);
  return 0;
}

int cmd_report(const Config& config, std::ostream& out) {
  const auto in = load_inputs(config);
  const fs::path matches = config.matches_path.empty() ? config.out_dir / "matches.jsonl" : config.matches_path;

  double threshold = config.threshold;
  const auto summary_path = matches.parent_path() / "match_summary.json";
  if (std::ifstream summary(summary_path); summary) {
    try {
      threshold = nlohmann::json::parse(summary).at("threshold").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::BadRecord, summary_path.string() + ": " + e.what());
    }
  }
  const auto set = read_match_jsonl(matches, threshold);

  fs::create_directories(config.out_dir);
  write_reports(set, in, segment_corpus(in.target), segment_corpus(in.source), config, config.out_dir);
  print_accounting(out, set);
  return 0;
}

int cmd_calibrate(const Config& config, std::ostream& out, std::ostream& err) {
  const auto group_by = parse_group_by(config.group_by);
  const auto pairs = load_pairs(require_path(config.pairs_path, "--pairs"));
  const auto provider = make_provider(config);
  const auto scores = score_pairs(pairs, *provider, config.parallelism, default_splitter(), config.max_batch);
  const auto rows = aggregate(scores, group_by);
  const auto csv_text = calibration_csv(rows);

  if (!config.out_dir.empty()) {
    fs::create_directories(config.out_dir);
    write_text_file(config.out_dir / "calibration.csv", csv_text);
  }
  out << csv_text;
  try {
    const double t = derive_threshold(rows);
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", t);
    out << "recommended threshold: " << buf << "\n";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoSeparation) throw;
    err << "warning: " << e.what() << "\n";
  }
  return 0;
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Cross-lingual news text reuse detection", "newsreuse"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path;
  std::optional<double> threshold, heatmap_max;
  std::optional<std::string> provider, sidecar_url, out_dir, target, source, annotations, stopwords, pairs,
      group_by, matches, divider;
  std::optional<std::size_t> parallelism, top_k, embed_dim;
  bool filter_sources = false;

  app.add_option("--config", config_path, "JSON config file");
  app.add_option("--threshold", threshold, "Similarity threshold in (0, 1)");
  app.add_option("--provider", provider, "Embedding provider")->check(CLI::IsMember({"builtin", "sidecar"}));
  app.add_option("--sidecar-url", sidecar_url, "Sidecar base URL");
  app.add_option("--embed-dim", embed_dim, "Embedding dimension");
  app.add_option("--out-dir", out_dir, "Output directory");
  app.add_option("--parallelism", parallelism, "Worker threads");
  app.add_option("--heatmap-max", heatmap_max, "Upper end of the heatmap colour scale");
  app.add_option("--heatmap-divider", divider, "RFC 3339 instant marked on the heatmaps");
  app.add_option("--top-k-sentences", top_k, "Sentences feeding the term frequencies");
  app.add_option("--target", target, "Target corpus JSONL");
  app.add_option("--source", source, "Source corpus JSONL");
  app.add_option("--annotations", annotations, "Precomputed POS annotations JSONL");
  app.add_option("--stopwords", stopwords, "Stopword list, one per line");
  app.add_option("--pairs", pairs, "Calibration pairs JSONL");
  app.add_option("--group-by", group_by, "Calibration grouping")->check(CLI::IsMember({"language", "paraphrase"}));
  app.add_option("--matches", matches, "Existing matches.jsonl for report");
  app.add_flag("--filter-sources", filter_sources, "Apply the eligibility filter to sources too");

  auto* ingest = app.add_subcommand("ingest", "Validate and normalise both corpora");
  auto* run_cmd = app.add_subcommand("run", "Full pipeline");
  auto* calibrate = app.add_subcommand("calibrate", "Threshold calibration on paraphrase pairs");
  auto* report = app.add_subcommand("report", "Rebuild reports from an existing match set");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::ConversionError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ValidationError& e) {
    err << "error: " << e.what() << "\n";
    return 3;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return 2;
  }

  try {
    Config config = config_path.empty() ? Config{} : load_config(config_path);
    if (threshold) config.threshold = *threshold;
    if (provider) config.provider = *provider == "sidecar" ? ProviderKind::Sidecar : ProviderKind::Builtin;
    if (sidecar_url) config.sidecar_url = *sidecar_url;
    if (embed_dim) config.embed_dim = *embed_dim;
    if (out_dir) config.out_dir = *out_dir;
    if (parallelism) config.parallelism = *parallelism;
    if (heatmap_max) config.heatmap_max = *heatmap_max;
    if (top_k) config.top_k_sentences = *top_k;
    if (target) config.target_path = *target;
    if (source) config.source_path = *source;
    if (annotations) config.annotations_path = *annotations;
    if (stopwords) config.stopwords_path = *stopwords;
    if (pairs) config.pairs_path = *pairs;
    if (group_by) config.group_by = *group_by;
    if (matches) config.matches_path = *matches;
    if (filter_sources) config.filter_sources = true;
    if (divider) {
      try {
        config.heatmap_divider = parse_rfc3339(*divider);
      } catch (const Error& e) {
        throw Error(ErrorCode::BadConfig, std::string("--heatmap-divider: ") + e.message());
      }
    }
    config.validate();

    if (ingest->parsed()) return cmd_ingest(config, out);
    if (run_cmd->parsed()) return cmd_run(config, out);
    if (calibrate->parsed()) return cmd_calibrate(config, out, err);
    if (report->parsed()) return cmd_report(config, out);
    return 2;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const fs::filesystem_error& e) {
    err << "error: " << e.what() << "\n";
    return exit_code(ErrorCode::Io);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 5;
  }
}

}  // namespace newsreuse::cli
