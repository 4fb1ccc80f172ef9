// Command-line front end: one subcommand per pipeline stage.
//
// Exit codes: 0 ok, 1 other failure, 2 usage/configuration, 3 input
// format, 4 missing dictionary, 5 empty split side.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "mkg/chemlex.hpp"
#include "mkg/complete.hpp"
#include "mkg/embed.hpp"
#include "mkg/error.hpp"
#include "mkg/evalharness.hpp"
#include "mkg/graph.hpp"
#include "mkg/ingest.hpp"
#include "mkg/resolve.hpp"
#include "mkg/text.hpp"
#include "mkg/transe.hpp"

namespace fs = std::filesystem;
using mkg::Error;
using mkg::ErrorKind;
using mkg::Label;

namespace {

constexpr int kOther = 1;
constexpr int kConfig = 2;
constexpr int kInput = 3;
constexpr int kNoDictionary = 4;
constexpr int kEmptySplit = 5;

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::FileUnreadable:
    case ErrorKind::MalformedPattern:
    case ErrorKind::WeightsNotNormalized:
    case ErrorKind::InvalidEps:
    case ErrorKind::InvalidMinPts:
    case ErrorKind::WrongLabelClass:
    case ErrorKind::UnknownDomain:
    case ErrorKind::UnknownNode:
      return kConfig;
    case ErrorKind::MalformedSyntax:
    case ErrorKind::MalformedFile:
    case ErrorKind::MissingDoi:
    case ErrorKind::MissingYear:
    case ErrorKind::UnknownLabel:
    case ErrorKind::DictionaryConflict:
    case ErrorKind::DoiMismatch:
    case ErrorKind::NoCoreLabel:
      return kInput;
    case ErrorKind::MissingDictionary:
      return kNoDictionary;
    case ErrorKind::EmptySplit:
    case ErrorKind::EmptyValidationGraph:
    case ErrorKind::EmptyGraph:
      return kEmptySplit;
    default:
      return kOther;
  }
}

void require_file(const std::string& path) {
  if (!path.empty() && !fs::exists(path)) {
    throw Error(ErrorKind::FileUnreadable, "no such file: " + path);
  }
}

// Resolved option values of a subcommand, written beside its main output.
void write_snapshot(const CLI::App& sub, const fs::path& output) {
  nlohmann::ordered_json j;
  j["subcommand"] = sub.get_name();
  for (const CLI::Option* opt : sub.get_options()) {
    const std::string name = opt->get_single_name();
    if (name == "help" || name.empty()) continue;
    const auto& res = opt->results();
    if (opt->get_expected_max() > 1 || (res.size() > 1)) {
      j[name] = res;
    } else if (!res.empty()) {
      j[name] = res.front();
    } else if (opt->get_type_size() == 0) {
      j[name] = opt->count() > 0;
    } else {
      j[name] = opt->get_default_str();
    }
  }
  fs::path path = output;
  if (fs::is_directory(output)) path = output / "run";
  std::ofstream out(path.string() + ".config.json");
  out << j.dump(2) << '\n';
}

Label parse_label(const std::string& s) { return mkg::label_of(s); }

std::vector<mkg::ExtractionRecord> read_records(const std::string& path) {
  auto corpus = mkg::load_corpus(fs::path(path));
  if (corpus.records.empty() && !corpus.rejects.empty()) {
    throw Error(ErrorKind::MalformedFile, path + ": no valid record", corpus.rejects.front().line);
  }
  return std::move(corpus.records);
}

struct EmbedOptions {
  std::string mode = "trigram";
  std::size_t dim = 100;
  std::uint64_t seed = 42;
  std::string cache;

  void attach(CLI::App* sub) {
    sub->add_option("--embedding", mode, "trigram or corpus")
        ->check(CLI::IsMember({"trigram", "corpus"}))
        ->capture_default_str();
    sub->add_option("--dim", dim, "Embedding dimension")->capture_default_str();
    sub->add_option("--seed", seed, "Embedding seed")->capture_default_str();
    sub->add_option("--embed-cache", cache, "Embedding cache file");
  }

  mkg::embed::Embedder build(const std::vector<mkg::ExtractionRecord>& records) const {
    mkg::embed::EmbedConfig cfg;
    cfg.dim = dim;
    cfg.seed = seed;
    if (mode == "trigram") return mkg::embed::Embedder(cfg);
    std::vector<std::string> docs;
    for (const auto& r : records) {
      std::string doc = r.text;
      for (const auto& [label, values] : r.entities) {
        for (const auto& v : values) doc += " " + v;
      }
      for (const auto& b : r.applications) doc += " " + b.value;
      docs.push_back(std::move(doc));
    }
    const auto hash = mkg::embed::Embedder::hash_corpus(docs, cfg);
    if (!cache.empty()) {
      if (auto cached = mkg::embed::Embedder::load_cache(cache, hash, seed, dim)) {
        return std::move(*cached);
      }
    }
    auto e = mkg::embed::Embedder::train(docs, cfg);
    if (!cache.empty()) e.save_cache(cache);
    return e;
  }
};

std::pair<Label, std::string> parse_node_ref(const std::string& s) {
  const auto eq = s.find('=');
  if (eq == std::string::npos) {
    throw Error(ErrorKind::InvalidArgument, "expected Label=value, got " + s);
  }
  return {parse_label(s.substr(0, eq)), s.substr(eq + 1)};
}

mkg::graph::NodeId resolve_node(const mkg::graph::GraphStore& store, const std::string& ref) {
  const auto [label, value] = parse_node_ref(ref);
  auto id = store.find(label, value);
  if (!id) throw Error(ErrorKind::UnknownNode, "no node " + ref);
  return *id;
}

void save_store(const mkg::graph::GraphStore& store, const std::string& path) {
  if (fs::path(path).extension() == ".nt") {
    mkg::graph::export_rdf(store, path);
  } else {
    mkg::graph::export_csv(store, path);
  }
}

void print_stats(const mkg::graph::GraphStore& store) {
  const auto s = store.stats();
  std::cout << "nodes: " << s.node_count << "\nedges: " << s.edge_count << '\n';
  for (const auto& [l, n] : s.per_label) std::cout << "  " << mkg::to_string(l) << ": " << n << '\n';
  for (const auto& [r, n] : s.per_relation) std::cout << "  " << mkg::to_string(r) << ": " << n << '\n';
}

std::vector<mkg::eval::PredictedPair> read_predictions(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, path);
  std::vector<mkg::eval::PredictedPair> out;
  std::string line;
  std::vector<std::string> cells;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line_no == 1) continue;
    if (line.empty()) continue;
    if (!mkg::text::csv_split(line, cells) || cells.size() < 3) {
      throw Error(ErrorKind::MalformedFile, path + ": bad prediction row", line_no);
    }
    out.push_back({parse_label(cells[0]), cells[1], cells[2]});
  }
  return out;
}

mkg::complete::CompletionParams params_from(const std::string& path) {
  if (path.empty()) return {};
  return mkg::complete::load_params(path);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Materials knowledge graph toolkit"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);
  std::function<void()> action;

  // ---- ingest
  std::string in_path, out_path, rejects_path;
  auto* ingest = app.add_subcommand("ingest", "Parse extraction JSONL into normalized records");
  ingest->add_option("--in", in_path, "Raw JSONL")->required();
  ingest->add_option("--out", out_path, "Record JSONL")->required();
  ingest->add_option("--rejects", rejects_path, "Rejected lines (TSV)");
  ingest->callback([&] {
    action = [&] {
      require_file(in_path);
      const auto corpus = mkg::load_corpus(fs::path(in_path));
      if (corpus.records.empty() && !corpus.rejects.empty()) {
        throw Error(ErrorKind::MalformedFile, "no valid record", corpus.rejects.front().line);
      }
      mkg::write_records(out_path, corpus.records);
      if (!rejects_path.empty()) {
        std::ofstream rej(rejects_path);
        rej << "line\tmessage\n";
        for (const auto& r : corpus.rejects) rej << r.line << '\t' << r.message << '\n';
      }
      write_snapshot(*ingest, out_path);
      std::cout << "records: " << corpus.stats.record_count
                << "\nmerged: " << corpus.stats.merged_count
                << "\nrejected: " << corpus.stats.reject_count << '\n';
      for (const auto& [l, n] : corpus.stats.per_label_counts) {
        std::cout << "  " << mkg::to_string(l) << ": " << n << '\n';
      }
    };
  });

  // ---- dict-cluster
  std::string cluster_label = "Application";
  double eps = 0.25;
  std::size_t min_pts = 3;
  EmbedOptions cluster_embed;
  auto* dict_cluster = app.add_subcommand("dict-cluster", "Cluster one label's strings into a dictionary draft");
  dict_cluster->add_option("--in", in_path, "Record JSONL")->required();
  dict_cluster->add_option("--label", cluster_label, "STRICT label")->capture_default_str();
  dict_cluster->add_option("--eps", eps, "DBSCAN radius (cosine distance)")->capture_default_str();
  dict_cluster->add_option("--min-pts", min_pts, "DBSCAN minimum neighbourhood")->capture_default_str();
  dict_cluster->add_option("--out", out_path, "Cluster report TSV")->required();
  cluster_embed.attach(dict_cluster);
  dict_cluster->callback([&] {
    action = [&] {
      require_file(in_path);
      const Label label = parse_label(cluster_label);
      const auto records = read_records(in_path);
      std::vector<std::pair<std::string, Label>> entities;
      for (const auto& r : records) {
        if (label == Label::Application) {
          for (const auto& b : r.applications) entities.emplace_back(b.value, label);
        } else {
          for (const auto& v : r.values(label)) entities.emplace_back(v, label);
        }
      }
      const auto embedder = cluster_embed.build(records);
      const auto report = mkg::resolve::build_dictionary(entities, eps, min_pts, embedder);
      mkg::resolve::write_cluster_report(out_path, report);
      write_snapshot(*dict_cluster, out_path);
      std::cout << "strings: " << report.rows.size() << "\nclusters: " << report.cluster_count
                << "\nnoise: " << report.noise_count << '\n';
    };
  });

  // ---- dict-import
  std::string report_path, base_dict;
  auto* dict_import = app.add_subcommand("dict-import", "Turn a reviewed cluster report into dictionaries");
  dict_import->add_option("--report", report_path, "Cluster report TSV")->required();
  dict_import->add_option("--base", base_dict, "Existing dictionaries to extend");
  dict_import->add_option("--out", out_path, "Dictionary TSV")->required();
  dict_import->callback([&] {
    action = [&] {
      require_file(report_path);
      require_file(base_dict);
      mkg::resolve::Dictionaries dicts;
      if (!base_dict.empty()) dicts = mkg::resolve::load_dictionaries(base_dict);
      mkg::resolve::merge_dictionaries(dicts,
                                       mkg::resolve::import_report(mkg::resolve::load_cluster_report(report_path)));
      mkg::resolve::write_dictionaries(out_path, dicts);
      write_snapshot(*dict_import, out_path);
      for (const auto& [l, d] : dicts) {
        std::cout << mkg::to_string(l) << ": " << d.size() << " canonical terms\n";
      }
    };
  });

  // ---- resolve
  std::string dict_path, audit_path, lex_path, high_conf_path;
  std::vector<std::string> disabled;
  mkg::resolve::PipelineConfig pipeline;
  EmbedOptions resolve_embed;
  auto* resolve = app.add_subcommand("resolve", "Run the entity resolution cascade");
  resolve->add_option("--in", in_path, "Record JSONL")->required();
  resolve->add_option("--dict", dict_path, "Dictionary TSV");
  resolve->add_option("--out", out_path, "Graph-ready record JSONL")->required();
  resolve->add_option("--audit", audit_path, "Audit TSV");
  resolve->add_option("--tau-a", pipeline.tau_a, "Name/acronym pairing threshold")->capture_default_str();
  resolve->add_option("--tau-d", pipeline.tau_d, "Dictionary nearest-match threshold")->capture_default_str();
  resolve->add_option("--disable", disabled, "Stages to skip: ER-NF/A, ER-N/F, ER-ED");
  resolve->add_option("--lex", lex_path, "Formula lexer configuration");
  resolve->add_option("--export-high-confidence", high_conf_path, "Records needing no correction");
  resolve_embed.attach(resolve);
  resolve->callback([&] {
    action = [&] {
      require_file(in_path);
      require_file(dict_path);
      require_file(lex_path);
      for (const auto& d : disabled) {
        if (d == "ER-NF/A") pipeline.enable_nf_a = false;
        else if (d == "ER-N/F") pipeline.enable_n_f = false;
        else if (d == "ER-ED") pipeline.enable_ed = false;
        else throw Error(ErrorKind::InvalidArgument, "unknown stage " + d);
      }
      if (!lex_path.empty()) pipeline.lex = mkg::chemlex::load_lex_config(lex_path);
      if (!dict_path.empty()) pipeline.dictionaries = mkg::resolve::load_dictionaries(dict_path);
      const auto records = read_records(in_path);
      pipeline.embedder = resolve_embed.build(records);
      const auto result = mkg::resolve::apply_pipeline(records, pipeline);
      const auto ready = result.graph_ready();
      mkg::write_records(out_path, ready);
      if (!audit_path.empty()) mkg::resolve::write_audit(audit_path, result.audit);
      if (!high_conf_path.empty()) mkg::write_records(high_conf_path, result.high_confidence());
      write_snapshot(*resolve, out_path);
      std::map<std::string, std::size_t> actions;
      for (const auto& a : result.audit) {
        ++actions[std::string(mkg::resolve::to_string(a.stage)) + " " +
                  std::string(mkg::resolve::to_string(a.action))];
      }
      std::cout << "records: " << records.size() << "\ngraph-ready: " << ready.size()
                << "\naudit entries: " << result.audit.size() << '\n';
      for (const auto& [k, n] : actions) std::cout << "  " << k << ": " << n << '\n';
    };
  });

  // ---- build
  std::string store_path;
  bool append = false;
  auto* build = app.add_subcommand("build", "Build the graph store from resolved records");
  build->add_option("--in", in_path, "Resolved record JSONL")->required();
  build->add_option("--store", store_path, "Store directory (CSV) or .nt file")->required();
  build->add_flag("--append", append, "Extend an existing store");
  build->callback([&] {
    action = [&] {
      require_file(in_path);
      mkg::graph::GraphStore store;
      if (append && fs::exists(store_path)) store = mkg::graph::import_store(store_path);
      std::size_t skipped = 0;
      for (const auto& r : read_records(in_path)) {
        if (!r.has_core()) {
          ++skipped;
          continue;
        }
        store.insert_record(r);
      }
      save_store(store, store_path);
      write_snapshot(*build, store_path);
      print_stats(store);
      if (skipped) std::cout << "skipped (no core label): " << skipped << '\n';
    };
  });

  // ---- query
  std::string pattern;
  std::vector<std::string> prov;
  auto* query = app.add_subcommand("query", "Pattern match or provenance lookup");
  query->add_option("--store", store_path, "Graph store")->required();
  auto* pat_opt = query->add_option("--pattern", pattern, "Path pattern");
  auto* prov_opt = query->add_option("--provenance", prov, "Two nodes as Label=value")->expected(2);
  pat_opt->excludes(prov_opt);
  query->add_option("--out", out_path, "CSV output");
  query->callback([&] {
    action = [&] {
      require_file(store_path);
      const auto store = mkg::graph::import_store(store_path);
      std::ostringstream buf;
      if (!prov.empty()) {
        const auto dois = mkg::graph::provenance(store, resolve_node(store, prov[0]),
                                                 resolve_node(store, prov[1]));
        buf << "doi\n";
        for (const auto& d : dois) buf << mkg::text::csv_escape(d) << '\n';
      } else if (!pattern.empty()) {
        const auto parsed = mkg::graph::parse_pattern(pattern);
        const auto rows = mkg::graph::match_pattern(store, parsed);
        for (std::size_t i = 0; i < parsed.nodes.size(); ++i) buf << (i ? "," : "") << "n" << i;
        buf << '\n';
        for (const auto& b : rows) {
          for (std::size_t i = 0; i < b.size(); ++i) {
            const auto& n = store.node(b[i]);
            buf << (i ? "," : "")
                << mkg::text::csv_escape(std::string(mkg::to_string(n.label)) + "=" + n.value);
          }
          buf << '\n';
        }
      } else {
        throw Error(ErrorKind::InvalidArgument, "--pattern or --provenance is required");
      }
      if (out_path.empty()) {
        std::cout << buf.str();
      } else {
        std::ofstream(out_path) << buf.str();
        write_snapshot(*query, out_path);
      }
    };
  });

  // ---- export
  std::string format = "rdf";
  auto* exp = app.add_subcommand("export", "Export the store as N-Triples or CSV");
  exp->add_option("--store", store_path, "Graph store")->required();
  exp->add_option("--format", format, "rdf or csv")->check(CLI::IsMember({"rdf", "csv"}))->capture_default_str();
  exp->add_option("--out", out_path, "Output file (rdf) or directory (csv)")->required();
  exp->callback([&] {
    action = [&] {
      require_file(store_path);
      const auto store = mkg::graph::import_store(store_path);
      if (format == "rdf") mkg::graph::export_rdf(store, out_path);
      else mkg::graph::export_csv(store, out_path);
      write_snapshot(*exp, out_path);
      print_stats(store);
    };
  });

  // ---- predict
  std::size_t topk = 200;
  std::string params_path, method = "network";
  mkg::transe::TransEConfig transe_cfg;
  auto* predict = app.add_subcommand("predict", "Rank unlinked material-application pairs");
  predict->add_option("--store", store_path, "Graph store")->required();
  predict->add_option("--topk", topk, "Predictions to keep")->capture_default_str();
  predict->add_option("--params", params_path, "Completion parameters (key = value)");
  predict->add_option("--method", method, "network, t-only or transe")
      ->check(CLI::IsMember({"network", "t-only", "transe"}))
      ->capture_default_str();
  predict->add_option("--out", out_path, "Prediction CSV")->required();
  predict->add_option("--seed", transe_cfg.seed, "TransE seed")->capture_default_str();
  predict->add_option("--epochs", transe_cfg.epochs, "TransE epochs")->capture_default_str();
  predict->add_option("--transe-dim", transe_cfg.dim, "TransE dimension")->capture_default_str();
  predict->callback([&] {
    action = [&] {
      require_file(store_path);
      require_file(params_path);
      auto params = params_from(params_path);
      const auto store = mkg::graph::import_store(store_path);
      std::vector<mkg::complete::PredictionScore> preds;
      if (method == "transe") {
        const auto table = mkg::transe::train(store, transe_cfg);
        preds = mkg::transe::rank_candidates(store, table, topk);
      } else {
        if (method == "t-only") {
          params.alpha = 0.0;
          params.beta = 0.0;
          params.gamma = 1.0;
        }
        preds = mkg::complete::rank_candidates(store, params, topk);
      }
      mkg::complete::write_predictions(out_path, store, preds);
      write_snapshot(*predict, out_path);
      std::cout << "predictions: " << preds.size() << '\n';
    };
  });

  // ---- optimize
  std::string train_path, verify_path;
  mkg::complete::GridSpec grid;
  auto* optimize = app.add_subcommand("optimize", "Grid search over alpha, beta, gamma");
  optimize->add_option("--train", train_path, "Training graph")->required();
  optimize->add_option("--verify", verify_path, "Validation graph")->required();
  optimize->add_option("--step", grid.step, "Simplex grid step")->capture_default_str();
  optimize->add_option("--topk", grid.top_k, "List length scored")->capture_default_str();
  optimize->add_option("--k", grid.k, "Neighbours averaged by F")->capture_default_str();
  optimize->add_option("--out", out_path, "Parameter file")->required();
  optimize->callback([&] {
    action = [&] {
      require_file(train_path);
      require_file(verify_path);
      const auto result = mkg::complete::optimize_params(mkg::graph::import_store(train_path),
                                                         mkg::graph::import_store(verify_path), grid);
      mkg::complete::write_params(out_path, result.params);
      write_snapshot(*optimize, out_path);
      std::cout << std::setprecision(6) << "alpha: " << result.params.alpha
                << "\nbeta: " << result.params.beta << "\ngamma: " << result.params.gamma
                << "\nEn: " << result.en << "\ngrid points: " << result.evaluated << '\n';
    };
  });

  // ---- split
  int cutoff = 0, delta = 1;
  auto* split = app.add_subcommand("split", "Temporal split into training and validation graphs");
  split->add_option("--store", store_path, "Graph store")->required();
  split->add_option("--cutoff", cutoff, "First validation year")->required();
  split->add_option("--delta", delta, "Validation window in years")->capture_default_str();
  split->add_option("--train", train_path, "Training graph output")->required();
  split->add_option("--verify", verify_path, "Validation graph output")->required();
  bool split_empty = false;
  split->callback([&] {
    action = [&] {
      require_file(store_path);
      const auto s = mkg::eval::temporal_split(mkg::graph::import_store(store_path), cutoff, delta);
      save_store(s.g_tra, train_path);
      save_store(s.g_ver, verify_path);
      write_snapshot(*split, train_path);
      std::cout << "train edges: " << s.g_tra.triples().size()
                << "\nverify edges: " << s.g_ver.triples().size() << '\n';
      for (const auto& w : s.warnings) std::cerr << "warning: " << w << '\n';
      split_empty = s.has_empty_side();
    };
  });

  // ---- validate
  std::string preds_path, future_path, curve_method = "network";
  int horizon = 1;
  bool append_curve = false;
  auto* validate = app.add_subcommand("validate", "Share of predictions confirmed by later papers");
  validate->add_option("--preds", preds_path, "Prediction CSV")->required();
  validate->add_option("--future", future_path, "Graph holding the later years")->required();
  validate->add_option("--train", train_path, "Training graph; adds a random-pair row");
  validate->add_option("--cutoff", cutoff, "Cutoff year of the predictions")->required();
  validate->add_option("--horizon", horizon, "Years after the cutoff")->capture_default_str();
  validate->add_option("--method", curve_method, "Method name for the curve")->capture_default_str();
  validate->add_option("--out", out_path, "Curve CSV")->required();
  validate->add_flag("--append", append_curve, "Append rows to an existing curve CSV");
  validate->callback([&] {
    action = [&] {
      require_file(preds_path);
      require_file(future_path);
      require_file(train_path);
      if (horizon < 1) throw Error(ErrorKind::InvalidArgument, "horizon must be >= 1");
      const auto future = mkg::graph::import_store(future_path);
      const auto curve =
          mkg::eval::validate_predictions(read_predictions(preds_path), future, cutoff, horizon);
      std::vector<mkg::eval::CurveRow> rows;
      if (append_curve && fs::exists(out_path)) {
        std::ifstream in(out_path);
        std::string line;
        std::vector<std::string> cells;
        std::getline(in, line);
        while (std::getline(in, line)) {
          if (line.empty() || !mkg::text::csv_split(line, cells) || cells.size() != 4) continue;
          rows.push_back({cells[0], std::stoi(cells[1]), std::stoi(cells[2]), std::stod(cells[3])});
        }
      }
      const auto own = mkg::eval::curve_rows(curve_method, cutoff, curve);
      rows.insert(rows.end(), own.begin(), own.end());
      if (!train_path.empty()) {
        const auto train = mkg::graph::import_store(train_path);
        for (int h = 1; h <= horizon; ++h) {
          rows.push_back({"random", cutoff, h,
                          100.0 * mkg::eval::random_pair_baseline(train, future, cutoff, h)});
        }
      }
      mkg::eval::write_curves(out_path, rows);
      write_snapshot(*validate, out_path);
      std::cout << "predictions: " << curve.predictions << '\n';
      for (int h = 1; h <= horizon; ++h) {
        std::cout << "  +" << h << "y: " << std::fixed << std::setprecision(2)
                  << curve.percent[h - 1] << "%\n";
      }
    };
  });

  // ---- metrics
  std::string gold_path, pred_path, task_name = "all";
  auto* metrics = app.add_subcommand("metrics", "Precision, recall and F1 against gold records");
  metrics->add_option("--gold", gold_path, "Gold JSONL")->required();
  metrics->add_option("--pred", pred_path, "Predicted JSONL")->required();
  metrics->add_option("--task", task_name, "NER, RE, ER or all")
      ->check(CLI::IsMember({"NER", "RE", "ER", "all"}))
      ->capture_default_str();
  metrics->add_option("--out", out_path, "Metric CSV");
  metrics->callback([&] {
    action = [&] {
      require_file(gold_path);
      require_file(pred_path);
      const auto gold = read_records(gold_path);
      const auto pred = read_records(pred_path);
      std::ostringstream buf;
      buf << "task,tp,fp,fn,precision,recall,f1\n" << std::fixed << std::setprecision(6);
      for (auto task : mkg::eval::kAllTasks) {
        if (task_name != "all" && task_name != mkg::eval::to_string(task)) continue;
        const auto m = mkg::eval::prf1(gold, pred, task);
        buf << mkg::eval::to_string(task) << ',' << m.tp << ',' << m.fp << ',' << m.fn << ','
            << m.precision << ',' << m.recall << ',' << m.f1 << '\n';
      }
      std::cout << buf.str();
      if (!out_path.empty()) {
        std::ofstream(out_path) << buf.str();
        write_snapshot(*metrics, out_path);
      }
    };
  });

  // ---- ablate
  std::vector<std::string> ablate_stages = {"ER-NF/A", "ER-N/F", "ER-ED"};
  mkg::resolve::PipelineConfig ablate_cfg;
  EmbedOptions ablate_embed;
  auto* ablate = app.add_subcommand("ablate", "F1 change when one resolution stage is skipped");
  ablate->add_option("--in", in_path, "Raw record JSONL")->required();
  ablate->add_option("--gold", gold_path, "Gold JSONL")->required();
  ablate->add_option("--dict", dict_path, "Dictionary TSV")->required();
  ablate->add_option("--stage", ablate_stages, "Stages to ablate")->capture_default_str();
  ablate->add_option("--tau-a", ablate_cfg.tau_a)->capture_default_str();
  ablate->add_option("--tau-d", ablate_cfg.tau_d)->capture_default_str();
  ablate->add_option("--out", out_path, "Ablation CSV")->required();
  ablate_embed.attach(ablate);
  ablate->callback([&] {
    action = [&] {
      require_file(in_path);
      require_file(gold_path);
      require_file(dict_path);
      ablate_cfg.dictionaries = mkg::resolve::load_dictionaries(dict_path);
      const auto records = read_records(in_path);
      const auto gold = read_records(gold_path);
      ablate_cfg.embedder = ablate_embed.build(records);
      std::ofstream out(out_path);
      out << "stage,task,full_f1,ablated_f1,delta_f1\n" << std::fixed << std::setprecision(6);
      for (const auto& name : ablate_stages) {
        mkg::resolve::Stage stage;
        if (name == "ER-NF/A") stage = mkg::resolve::Stage::NfA;
        else if (name == "ER-N/F") stage = mkg::resolve::Stage::NF;
        else if (name == "ER-ED") stage = mkg::resolve::Stage::ED;
        else throw Error(ErrorKind::InvalidArgument, "unknown stage " + name);
        const auto rep = mkg::eval::ablate(records, gold, ablate_cfg, stage);
        for (auto task : mkg::eval::kAllTasks) {
          out << name << ',' << mkg::eval::to_string(task) << ',' << rep.full.at(task).f1 << ','
              << rep.ablated.at(task).f1 << ',' << rep.delta_f1.at(task) << '\n';
          std::cout << name << ' ' << mkg::eval::to_string(task) << " dF1 " << std::fixed
                    << std::setprecision(4) << rep.delta_f1.at(task) << '\n';
        }
      }
      write_snapshot(*ablate, out_path);
    };
  });

  // ---- sample
  std::size_t sample_n = 500;
  std::uint64_t sample_seed = 1;
  auto* sample = app.add_subcommand("sample", "Review sheet of uniformly sampled triples");
  sample->add_option("--store", store_path, "Graph store")->required();
  sample->add_option("--n", sample_n, "Triples to sample")->capture_default_str();
  sample->add_option("--seed", sample_seed, "Sampling seed")->capture_default_str();
  sample->add_option("--out", out_path, "Review sheet CSV")->required();
  sample->callback([&] {
    action = [&] {
      require_file(store_path);
      const auto store = mkg::graph::import_store(store_path);
      const auto picked = mkg::eval::sample_triples(store, sample_n, sample_seed);
      mkg::eval::write_review_sheet(out_path, store, picked);
      write_snapshot(*sample, out_path);
      std::cout << "sampled: " << picked.size() << '\n';
    };
  });

  // ---- trends
  std::string domain;
  int first_year = 0, last_year = 0;
  std::size_t top_n = 10;
  auto* trends = app.add_subcommand("trends", "Per-year top predictions within one domain");
  trends->add_option("--store", store_path, "Graph store")->required();
  trends->add_option("--domain", domain, "Domain value")->required();
  trends->add_option("--from", first_year, "First year")->required();
  trends->add_option("--to", last_year, "Last year")->required();
  trends->add_option("--topn", top_n, "Rows per year")->capture_default_str();
  trends->add_option("--params", params_path, "Completion parameters");
  trends->add_option("--out", out_path, "Trend CSV")->required();
  trends->callback([&] {
    action = [&] {
      require_file(store_path);
      require_file(params_path);
      if (last_year < first_year) throw Error(ErrorKind::InvalidArgument, "--to before --from");
      const auto table = mkg::eval::rank_trends(mkg::graph::import_store(store_path), domain,
                                                first_year, last_year, top_n,
                                                params_from(params_path));
      mkg::eval::write_trends(out_path, table);
      write_snapshot(*trends, out_path);
      for (std::size_t i = 0; i < table.years.size(); ++i) {
        std::cout << table.years[i] << ": " << table.rankings[i].size() << " predictions\n";
      }
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kConfig;
  }

  try {
    action();
  } catch (const Error& e) {
    std::cerr << "error [" << mkg::to_string(e.kind()) << "]: " << e.what();
    if (e.line()) std::cerr << " (line " << e.line() << ')';
    std::cerr << '\n';
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kOther;
  }
  return split_empty ? kEmptySplit : 0;
}
