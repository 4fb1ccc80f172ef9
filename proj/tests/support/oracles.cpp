#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "mkg/ontology.hpp"
#include "mkg/resolve.hpp"
#include "mkg/transe.hpp"

namespace oracle {

namespace {

using mkg::ExtractionRecord;
using mkg::Label;
using mkg::eval::Task;

void push_unique(std::vector<std::string>& v, const std::string& s) {
  if (s.empty()) return;
  for (const auto& x : v) {
    if (x == s) return;
  }
  v.push_back(s);
}

std::string item(Task task, Label label, const std::string& value, const std::string& anchor) {
  const std::string sep(1, '\x1f');
  const std::string lab(mkg::to_string(label));
  if (task == Task::NER) return mkg::resolve::fold(value);
  if (task == Task::RE) {
    return lab + sep + mkg::resolve::fold(value) + sep + mkg::resolve::fold(anchor);
  }
  return lab + sep + value + sep + anchor;
}

void collect(const ExtractionRecord& r, Task task, std::vector<std::string>& out) {
  for (Label l : mkg::kAllLabels) {
    if (l == Label::Application) continue;
    for (const auto& v : r.values(l)) push_unique(out, item(task, l, v, ""));
  }
  for (const auto& b : r.applications) {
    push_unique(out, item(task, Label::Application, b.value, ""));
    for (const auto& v : b.domains) push_unique(out, item(task, Label::Domain, v, b.value));
    for (const auto& v : b.properties) push_unique(out, item(task, Label::Property, v, b.value));
    for (const auto& v : b.descriptors) {
      push_unique(out, item(task, Label::Descriptor, v, b.value));
    }
  }
}

bool contains(const std::vector<std::string>& v, const std::string& s) {
  return std::find(v.begin(), v.end(), s) != v.end();
}

double cosine_distance(const mkg::embed::Vector& a, const mkg::embed::Vector& b) {
  double dot = 0.0, na = 0.0, nb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    dot += a[i] * b[i];
    na += a[i] * a[i];
    nb += b[i] * b[i];
  }
  if (na == 0.0 || nb == 0.0) return 1.0;
  double c = dot / (std::sqrt(na) * std::sqrt(nb));
  c = std::clamp(c, -1.0, 1.0);
  return 1.0 - c;
}

}  // namespace

Counts prf1(const std::vector<ExtractionRecord>& gold, const std::vector<ExtractionRecord>& pred,
            Task task) {
  std::vector<std::string> dois;
  for (const auto& g : gold) push_unique(dois, g.doi);
  Counts c;
  for (const auto& doi : dois) {
    std::vector<std::string> g_items, p_items;
    for (const auto& g : gold) {
      if (g.doi == doi) collect(g, task, g_items);
    }
    for (const auto& p : pred) {
      if (p.doi == doi) collect(p, task, p_items);
    }
    for (const auto& x : p_items) (contains(g_items, x) ? c.tp : c.fp)++;
    for (const auto& x : g_items) {
      if (!contains(p_items, x)) c.fn++;
    }
  }
  c.precision = c.tp + c.fp ? double(c.tp) / double(c.tp + c.fp) : 0.0;
  c.recall = c.tp + c.fn ? double(c.tp) / double(c.tp + c.fn) : 0.0;
  c.f1 = c.precision + c.recall > 0.0
             ? 2.0 * c.precision * c.recall / (c.precision + c.recall)
             : 0.0;
  return c;
}

std::vector<int> dbscan(const std::vector<mkg::embed::Vector>& points, double eps,
                        std::size_t min_pts) {
  const std::size_t n = points.size();
  std::vector<std::vector<bool>> near(n, std::vector<bool>(n, false));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      near[i][j] = i == j || cosine_distance(points[i], points[j]) <= eps;
    }
  }
  std::vector<bool> core(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t count = 0;
    for (std::size_t j = 0; j < n; ++j) count += near[i][j];
    core[i] = count >= min_pts;
  }
  std::vector<std::size_t> parent(n);
  for (std::size_t i = 0; i < n; ++i) parent[i] = i;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (core[i] && core[j] && near[i][j]) {
        const std::size_t a = find(i), b = find(j);
        parent[std::max(a, b)] = std::min(a, b);
      }
    }
  }
  // Component roots are the minimum core index, so numbering by root
  // order is numbering by first core point.
  std::map<std::size_t, int> number;
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i] && !number.count(find(i))) {
      const int next = static_cast<int>(number.size());
      number[find(i)] = next;
    }
  }
  std::vector<int> labels(n, -1);
  for (std::size_t i = 0; i < n; ++i) {
    if (core[i]) {
      labels[i] = number[find(i)];
      continue;
    }
    for (std::size_t j = 0; j < n; ++j) {
      if (core[j] && near[i][j]) {
        const int c = number[find(j)];
        if (labels[i] == -1 || c < labels[i]) labels[i] = c;
      }
    }
  }
  return labels;
}

std::vector<int> canonical_labels(const std::vector<int>& labels) {
  std::map<int, int> remap;
  std::vector<int> out;
  for (int l : labels) {
    if (l < 0) {
      out.push_back(-1);
      continue;
    }
    if (!remap.count(l)) {
      const int next = static_cast<int>(remap.size());
      remap[l] = next;
    }
    out.push_back(remap[l]);
  }
  return out;
}

std::set<std::string> dois_by_scan(const mkg::graph::GraphStore& store, mkg::graph::NodeId id) {
  std::set<std::string> out;
  for (const auto& t : store.triples()) {
    if (t.head == id && t.relation == mkg::RelationKind::MENTIONED_IN) {
      out.insert(store.nodes()[t.tail].value);
    }
  }
  return out;
}

std::set<std::string> provenance_by_scan(const mkg::graph::GraphStore& store,
                                         mkg::graph::NodeId a, mkg::graph::NodeId b) {
  const auto x = dois_by_scan(store, a);
  const auto y = dois_by_scan(store, b);
  std::set<std::string> out;
  for (const auto& d : x) {
    if (y.count(d)) out.insert(d);
  }
  return out;
}

std::vector<EdgeKey> edge_keys(const mkg::graph::GraphStore& store) {
  std::vector<EdgeKey> out;
  for (const auto& t : store.triples()) {
    const auto& h = store.nodes()[t.head];
    const auto& d = store.nodes()[t.tail];
    std::string dois;
    for (const auto& x : t.dois) dois += x + "\n";
    out.emplace_back(std::string(mkg::to_string(h.label)), h.value,
                     std::string(mkg::to_string(t.relation)), std::string(mkg::to_string(d.label)),
                     d.value, dois, t.earliest_year);
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::pair<std::string, std::string>> node_keys(const mkg::graph::GraphStore& store) {
  std::vector<std::pair<std::string, std::string>> out;
  for (const auto& n : store.nodes()) out.emplace_back(std::string(mkg::to_string(n.label)), n.value);
  std::sort(out.begin(), out.end());
  return out;
}

std::array<std::vector<double>, 5> loss_gradient_fd(
    const std::vector<double>& h, const std::vector<double>& r, const std::vector<double>& t,
    const std::vector<double>& hn, const std::vector<double>& tn, double margin, double step) {
  std::array<std::vector<double>, 5> args{h, r, t, hn, tn};
  std::array<std::vector<double>, 5> grad;
  auto loss = [&](const std::array<std::vector<double>, 5>& a) {
    return mkg::transe::margin_loss(a[0], a[1], a[2], a[3], a[4], margin);
  };
  for (std::size_t k = 0; k < 5; ++k) {
    grad[k].resize(args[k].size());
    for (std::size_t i = 0; i < args[k].size(); ++i) {
      auto plus = args, minus = args;
      plus[k][i] += step;
      minus[k][i] -= step;
      grad[k][i] = (loss(plus) - loss(minus)) / (2.0 * step);
    }
  }
  return grad;
}

}  // namespace oracle
