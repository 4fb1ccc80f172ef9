#include "mkg/evalharness.hpp"

#include <algorithm>
#include <fstream>
#include <iomanip>

#include "mkg/error.hpp"
#include "mkg/rng.hpp"
#include "mkg/text.hpp"

namespace mkg::eval {

std::string_view to_string(Task task) {
  switch (task) {
    case Task::NER: return "NER";
    case Task::RE: return "RE";
    case Task::ER: return "ER";
  }
  return "";
}

MetricReport MetricReport::from_counts(Task task, std::size_t tp, std::size_t fp,
                                       std::size_t fn) {
  MetricReport r;
  r.task = task;
  r.tp = tp;
  r.fp = fp;
  r.fn = fn;
  r.precision = tp + fp == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fp);
  r.recall = tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn);
  r.f1 = r.precision + r.recall == 0.0
             ? 0.0
             : 2.0 * r.precision * r.recall / (r.precision + r.recall);
  return r;
}

std::set<std::string> task_items(const ExtractionRecord& record, Task task) {
  std::set<std::string> out;
  auto add = [&](Label label, const std::string& value, const std::string& anchor) {
    switch (task) {
      case Task::NER:
        out.insert(resolve::fold(value));
        break;
      case Task::RE:
        out.insert(std::string(to_string(label)) + '\x1f' + resolve::fold(value) + '\x1f' +
                   resolve::fold(anchor));
        break;
      case Task::ER:
        out.insert(std::string(to_string(label)) + '\x1f' + value + '\x1f' + anchor);
        break;
    }
  };
  for (const auto& [label, values] : record.entities) {
    for (const auto& v : values) add(label, v, "");
  }
  for (const auto& block : record.applications) {
    add(Label::Application, block.value, "");
    for (Label l : {Label::Domain, Label::Property, Label::Descriptor}) {
      for (const auto& v : block.nested(l)) add(l, v, block.value);
    }
  }
  out.erase("");
  return out;
}

MetricReport prf1(const std::vector<ExtractionRecord>& gold,
                  const std::vector<ExtractionRecord>& pred, Task task) {
  std::map<std::string, std::set<std::string>> gold_items;
  for (const auto& r : gold) {
    auto items = task_items(r, task);
    gold_items[r.doi].insert(items.begin(), items.end());
  }
  std::map<std::string, std::set<std::string>> pred_items;
  for (const auto& r : pred) {
    if (!gold_items.count(r.doi)) {
      throw Error(ErrorKind::DoiMismatch, "prediction for unknown DOI " + r.doi);
    }
    auto items = task_items(r, task);
    pred_items[r.doi].insert(items.begin(), items.end());
  }
  std::size_t tp = 0, fp = 0, fn = 0;
  for (const auto& [doi, g] : gold_items) {
    static const std::set<std::string> kNone;
    auto it = pred_items.find(doi);
    const auto& p = it == pred_items.end() ? kNone : it->second;
    for (const auto& item : p) {
      if (g.count(item)) ++tp;
      else ++fp;
    }
    for (const auto& item : g) {
      if (!p.count(item)) ++fn;
    }
  }
  return MetricReport::from_counts(task, tp, fp, fn);
}

SplitGraphs temporal_split(const GraphStore& store, int cutoff, int delta) {
  if (delta < 1) throw Error(ErrorKind::InvalidArgument, "prediction window must be >= 1");
  SplitGraphs s;
  s.cutoff = cutoff;
  s.delta = delta;
  s.g_tra = graph::subgraph(store, [&](const graph::Triple& t) {
    return t.earliest_year < cutoff;
  });
  s.g_ver = graph::subgraph(store, [&](const graph::Triple& t) {
    return t.earliest_year >= cutoff && t.earliest_year < cutoff + delta;
  });
  if (s.g_tra.triples().empty()) {
    s.warnings.push_back("no triples before " + std::to_string(cutoff));
  }
  if (s.g_ver.triples().empty()) {
    s.warnings.push_back("no triples in [" + std::to_string(cutoff) + ", " +
                         std::to_string(cutoff + delta) + ")");
  }
  return s;
}

std::vector<PredictedPair> to_pairs(const GraphStore& store,
                                    const std::vector<complete::PredictionScore>& preds) {
  std::vector<PredictedPair> out;
  out.reserve(preds.size());
  for (const auto& p : preds) {
    const auto& m = store.node(p.material);
    out.push_back({m.label, m.value, store.node(p.application).value});
  }
  return out;
}

namespace {

std::optional<int> link_year(const GraphStore& g, Label label, const std::string& material,
                             const std::string& application) {
  const auto m = g.find(label, material);
  const auto a = g.find(Label::Application, application);
  if (!m || !a) return std::nullopt;
  const auto idx = g.find_triple(*m, RelationKind::HAS_APPLICATION, *a);
  if (!idx) return std::nullopt;
  return g.triples()[*idx].earliest_year;
}

}  // namespace

ValidationCurve validate_predictions(const std::vector<PredictedPair>& preds,
                                     const GraphStore& future, int cutoff, int horizon) {
  ValidationCurve c;
  c.predictions = preds.size();
  std::vector<int> years;
  for (const auto& p : preds) {
    if (auto y = link_year(future, p.material_label, p.material, p.application)) {
      years.push_back(*y);
    }
  }
  for (int h = 1; h <= horizon; ++h) {
    const auto hits = static_cast<std::size_t>(
        std::count_if(years.begin(), years.end(), [&](int y) { return y < cutoff + h; }));
    c.hits.push_back(hits);
    c.percent.push_back(preds.empty() ? 0.0
                                      : 100.0 * static_cast<double>(hits) /
                                            static_cast<double>(preds.size()));
  }
  return c;
}

double random_pair_baseline(const GraphStore& train, const GraphStore& future, int cutoff,
                            int horizon) {
  const complete::ScoringContext ctx(train);
  std::size_t pairs = 0;
  std::size_t hits = 0;
  for (auto m : ctx.materials()) {
    const auto& mn = train.node(m);
    for (auto a : ctx.applications()) {
      if (ctx.linked(m, a)) continue;
      ++pairs;
      const auto y = link_year(future, mn.label, mn.value, train.node(a).value);
      if (y && *y >= cutoff && *y < cutoff + horizon) ++hits;
    }
  }
  return pairs == 0 ? 0.0 : static_cast<double>(hits) / static_cast<double>(pairs);
}

std::vector<CurveRow> curve_rows(const std::string& method, int cutoff,
                                 const ValidationCurve& curve) {
  std::vector<CurveRow> rows;
  for (std::size_t h = 0; h < curve.percent.size(); ++h) {
    rows.push_back({method, cutoff, static_cast<int>(h + 1), curve.percent[h]});
  }
  return rows;
}

void write_curves(const std::filesystem::path& path, const std::vector<CurveRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "method,cutoff,horizon_years,percent_reported\n" << std::fixed << std::setprecision(4);
  for (const auto& r : rows) {
    out << text::csv_escape(r.method) << ',' << r.cutoff << ',' << r.horizon_years << ','
        << r.percent_reported << '\n';
  }
}

AblationReport ablate(const std::vector<ExtractionRecord>& records,
                      const std::vector<ExtractionRecord>& gold,
                      const resolve::PipelineConfig& config,
                      std::optional<resolve::Stage> component) {
  AblationReport report;
  report.disabled = component;
  const auto full = resolve::apply_pipeline(records, config).records;

  resolve::PipelineConfig reduced = config;
  if (component) {
    switch (*component) {
      case resolve::Stage::NfA: reduced.enable_nf_a = false; break;
      case resolve::Stage::NF: reduced.enable_n_f = false; break;
      case resolve::Stage::ED: reduced.enable_ed = false; break;
    }
  }
  const auto ablated = resolve::apply_pipeline(records, reduced).records;
  for (Task task : kAllTasks) {
    report.full[task] = prf1(gold, full, task);
    report.ablated[task] = prf1(gold, ablated, task);
    report.delta_f1[task] = report.ablated[task].f1 - report.full[task].f1;
  }
  return report;
}

std::vector<std::size_t> sample_triples(const GraphStore& store, std::size_t n,
                                        std::uint64_t seed) {
  std::vector<std::size_t> eligible;
  const auto& triples = store.triples();
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Label h = store.node(triples[i].head).label;
    const Label t = store.node(triples[i].tail).label;
    if (h == Label::DOI || t == Label::DOI || h == Label::Domain || t == Label::Domain) continue;
    eligible.push_back(i);
  }
  if (eligible.size() < n) {
    throw Error(ErrorKind::NotEnoughTriples, "asked for " + std::to_string(n) + ", only " +
                                                 std::to_string(eligible.size()) + " eligible");
  }
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(eligible.size() - i));
    std::swap(eligible[i], eligible[j]);
  }
  eligible.resize(n);
  return eligible;
}

void write_review_sheet(const std::filesystem::path& path, const GraphStore& store,
                        const std::vector<std::size_t>& sample) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "head_label,head_value,relation,tail_label,tail_value,dois,entity_agree,"
         "relation_agree\n";
  for (std::size_t idx : sample) {
    const auto& t = store.triples().at(idx);
    const auto& h = store.node(t.head);
    const auto& tl = store.node(t.tail);
    std::string dois;
    for (const auto& d : t.dois) {
      if (!dois.empty()) dois.push_back('|');
      dois += d;
    }
    out << text::csv_escape(to_string(h.label)) << ',' << text::csv_escape(h.value) << ','
        << to_string(t.relation) << ',' << text::csv_escape(to_string(tl.label)) << ','
        << text::csv_escape(tl.value) << ',' << text::csv_escape(dois) << ",,\n";
  }
}

TrendTable rank_trends(const GraphStore& store, const std::string& domain, int first_year,
                       int last_year, std::size_t top_n,
                       const complete::CompletionParams& params) {
  params.validate();
  if (last_year < first_year) throw Error(ErrorKind::InvalidArgument, "empty year range");
  std::optional<std::string> domain_value;
  for (auto id : store.nodes_with_label(Label::Domain)) {
    if (text::iequals(store.node(id).value, domain)) domain_value = store.node(id).value;
  }
  if (!domain_value) throw Error(ErrorKind::UnknownDomain, domain);

  TrendTable table;
  table.domain = *domain_value;
  for (int y = first_year; y <= last_year; ++y) {
    table.years.push_back(y);
    const auto sub = graph::subgraph(store, [&](const graph::Triple& t) {
      return t.earliest_year <= y;
    });
    std::vector<complete::PredictionScore> preds;
    const auto dom = sub.find(Label::Domain, *domain_value);
    if (dom) {
      std::set<graph::NodeId> apps;
      for (std::size_t e : sub.in_edges(*dom)) {
        const auto& t = sub.triples()[e];
        if (t.relation == RelationKind::HAS_DOMAIN) apps.insert(t.head);
      }
      const complete::ScoringContext ctx(sub);
      for (auto m : ctx.materials()) {
        for (auto a : apps) {
          if (ctx.linked(m, a)) continue;
          complete::PredictionScore p;
          p.material = m;
          p.application = a;
          p.s = ctx.s(m, a, params.weights);
          p.f = ctx.f(m, a, params.weights, params.k);
          p.t = ctx.t(m, a);
          p.combined = std::clamp(params.alpha * p.s + params.beta * p.f + params.gamma * p.t,
                                  0.0, 1.0);
          preds.push_back(p);
        }
      }
      complete::sort_predictions(sub, preds);
      if (preds.size() > top_n) preds.resize(top_n);
    }
    std::vector<TrendEntry> entries;
    for (std::size_t i = 0; i < preds.size(); ++i) {
      const auto& m = sub.node(preds[i].material);
      TrendEntry e;
      e.rank = i + 1;
      e.material_label = m.label;
      e.material = m.value;
      e.application = sub.node(preds[i].application).value;
      e.score = preds[i].combined;
      e.reported_year = link_year(store, m.label, m.value, e.application);
      entries.push_back(std::move(e));
    }
    table.rankings.push_back(std::move(entries));
  }
  return table;
}

void write_trends(const std::filesystem::path& path, const TrendTable& table) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << "year,rank,material_label,material,application,score,reported_year";
  for (int y : table.years) out << ",reported_by_" << y;
  out << '\n' << std::fixed << std::setprecision(6);
  for (std::size_t i = 0; i < table.years.size(); ++i) {
    for (const auto& e : table.rankings[i]) {
      out << table.years[i] << ',' << e.rank << ',' << text::csv_escape(to_string(e.material_label))
          << ',' << text::csv_escape(e.material) << ',' << text::csv_escape(e.application) << ','
          << e.score << ',';
      if (e.reported_year) out << *e.reported_year;
      for (int y : table.years) out << ',' << (e.reported_by(y) ? "*" : "");
      out << '\n';
    }
  }
}

}  // namespace mkg::eval
