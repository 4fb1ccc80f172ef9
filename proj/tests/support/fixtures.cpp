#include "fixtures.hpp"

#include <fstream>
#include <map>
#include <stdexcept>

#include "mkg/ontology.hpp"
#include "mkg/text.hpp"

namespace fixtures {

namespace {

using mkg::Label;
using mkg::Rng;

const std::vector<std::string> kFormulas = {"LiFePO4", "TiO2", "ZnO", "GaN", "MoS2",
                                            "CH3NH3PbI3", "Fe2O3", "BaTiO3"};
const std::vector<std::string> kNames = {"lithium iron phosphate", "titania", "zinc oxide",
                                         "gallium nitride", "molybdenum disulfide",
                                         "methylammonium lead iodide", "hematite"};
const std::vector<std::string> kAcronyms = {"LFP", "MAPI", "ZnO-NR", "MoS2-NS", "BTO"};
const std::vector<std::string> kProperties = {"band gap", "ionic conductivity", "high capacity",
                                              "thermal stability", "a,b \"quoted\"",
                                              "resistivity 10%"};
const std::vector<std::string> kDescriptors = {"nanorod", "thin film", "porous", "Ni–Co",
                                               "x|y", "<doped>"};
const std::vector<std::string> kPhases = {"olivine", "anatase", "wurtzite", "perovskite"};
const std::vector<std::string> kSyntheses = {"sol-gel", "hydrothermal", "spin coating"};
const std::vector<std::string> kCharacterizations = {"XRD", "SEM", "TEM", "Raman"};
const std::vector<std::string> kApplications = {"lithium-ion battery", "solar cell",
                                                "photocatalysis", "gas sensor", "LED"};
const std::vector<std::string> kDomains = {"energy", "electronics", "catalysis"};

const std::string& pick(Rng& rng, const std::vector<std::string>& pool) {
  return pool[rng.below(pool.size())];
}

void add_some(Rng& rng, mkg::ExtractionRecord& r, Label label,
              const std::vector<std::string>& pool, double p, std::size_t max) {
  if (!rng.chance(p)) return;
  const std::size_t n = 1 + rng.below(max);
  for (std::size_t i = 0; i < n; ++i) r.add(label, pick(rng, pool));
}

std::string perturb(Rng& rng, const std::string& s) {
  switch (rng.below(3)) {
    case 0: return mkg::text::to_lower(s) + "s";
    case 1: return s + " x";
    default: return "Q" + s;
  }
}

}  // namespace

std::string data_path(const std::string& name) { return std::string(MKG_DATA_DIR) + "/" + name; }

mkg::ExtractionRecord random_record(Rng& rng, std::size_t index) {
  mkg::ExtractionRecord r;
  r.doi = "10.1000/" + std::to_string(rng.below(3)) + (rng.chance(0.1) ? "(SICI)<x>|%" : "") +
          "." + std::to_string(index);
  r.year = 1995 + static_cast<int>(rng.below(25));
  do {
    add_some(rng, r, Label::Formula, kFormulas, 0.5, 2);
    add_some(rng, r, Label::Name, kNames, 0.5, 2);
    add_some(rng, r, Label::Acronym, kAcronyms, 0.4, 2);
  } while (!r.has_core());
  add_some(rng, r, Label::Property, kProperties, 0.6, 3);
  add_some(rng, r, Label::Descriptor, kDescriptors, 0.5, 2);
  add_some(rng, r, Label::StructurePhase, kPhases, 0.4, 1);
  add_some(rng, r, Label::Synthesis, kSyntheses, 0.4, 2);
  add_some(rng, r, Label::Characterization, kCharacterizations, 0.5, 3);
  add_some(rng, r, Label::Domain, kDomains, 0.1, 1);
  const std::size_t apps = rng.below(3);
  for (std::size_t i = 0; i < apps; ++i) {
    mkg::ApplicationBlock b;
    b.value = pick(rng, kApplications);
    bool dup = false;
    for (const auto& x : r.applications) dup = dup || x.value == b.value;
    if (dup) continue;
    if (rng.chance(0.5)) b.domains.push_back(pick(rng, kDomains));
    if (rng.chance(0.4)) b.properties.push_back(pick(rng, kProperties));
    if (rng.chance(0.3)) b.descriptors.push_back(pick(rng, kDescriptors));
    r.applications.push_back(b);
  }
  return r;
}

std::pair<std::vector<mkg::ExtractionRecord>, std::vector<mkg::ExtractionRecord>>
random_metric_fixture(Rng& rng) {
  std::vector<mkg::ExtractionRecord> gold, pred;
  const std::size_t n = 1 + rng.below(12);
  for (std::size_t i = 0; i < n; ++i) {
    auto g = random_record(rng, i);
    g.doi = "10.1/doc" + std::to_string(i);
    gold.push_back(g);
    if (rng.chance(0.15)) continue;  // no prediction for this paper
    mkg::ExtractionRecord p;
    p.doi = g.doi;
    p.year = g.year;
    for (const auto& [label, values] : g.entities) {
      for (const auto& v : values) {
        if (rng.chance(0.15)) continue;
        const bool relabel = rng.chance(0.1);
        const Label l = relabel ? mkg::kAllLabels[rng.below(mkg::kAllLabels.size())] : label;
        if (l == Label::Application) continue;
        p.add(l, rng.chance(0.15) ? perturb(rng, v) : (rng.chance(0.2) ? mkg::text::to_lower(v) : v));
      }
    }
    for (const auto& b : g.applications) {
      if (rng.chance(0.15)) continue;
      mkg::ApplicationBlock pb = b;
      if (rng.chance(0.2)) pb.value = perturb(rng, b.value);
      if (rng.chance(0.3) && !pb.properties.empty()) pb.properties.pop_back();
      if (rng.chance(0.2)) pb.descriptors.push_back(pick(rng, kDescriptors));
      p.applications.push_back(pb);
    }
    if (rng.chance(0.3)) p.add(Label::Property, pick(rng, kProperties));
    pred.push_back(p);
  }
  return {gold, pred};
}

mkg::graph::GraphStore random_scoring_graph(Rng& rng, std::size_t materials, std::size_t apps) {
  mkg::graph::GraphStore store;
  const std::vector<std::string> props = {"p0", "p1", "p2", "p3", "p4", "p5"};
  const std::vector<std::string> descs = {"d0", "d1", "d2", "d3"};
  const std::vector<std::string> others = {"o0", "o1", "o2"};
  for (std::size_t m = 0; m < materials; ++m) {
    const std::size_t records = 1 + rng.below(3);
    for (std::size_t k = 0; k < records; ++k) {
      mkg::ExtractionRecord r;
      r.doi = "10.9/m" + std::to_string(m) + "." + std::to_string(k);
      r.year = 2000 + static_cast<int>(rng.below(20));
      r.add(Label::Formula, "M" + std::to_string(m));
      add_some(rng, r, Label::Property, props, 0.7, 3);
      add_some(rng, r, Label::Descriptor, descs, 0.5, 2);
      add_some(rng, r, Label::StructurePhase, others, 0.3, 1);
      add_some(rng, r, Label::Synthesis, others, 0.3, 1);
      add_some(rng, r, Label::Characterization, others, 0.3, 1);
      if (rng.chance(0.5)) {
        mkg::ApplicationBlock b;
        b.value = "A" + std::to_string(rng.below(apps));
        if (rng.chance(0.7)) b.properties.push_back(pick(rng, props));
        if (rng.chance(0.4)) b.descriptors.push_back(pick(rng, descs));
        r.applications.push_back(b);
      }
      store.insert_record(r);
    }
  }
  return store;
}

ToyKg load_toy_kg() {
  std::ifstream in(data_path("toy_kg.tsv"));
  if (!in) throw std::runtime_error("toy_kg.tsv missing");
  ToyKg kg;
  std::map<std::string, std::uint32_t> ent, rel;
  auto id = [](std::map<std::string, std::uint32_t>& m, const std::string& k) {
    auto it = m.find(k);
    if (it != m.end()) return it->second;
    const auto next = static_cast<std::uint32_t>(m.size());
    m.emplace(k, next);
    return next;
  };
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = mkg::text::split(line, '\t');
    if (cells.size() != 3) throw std::runtime_error("bad toy_kg row: " + line);
    kg.triples.push_back({id(ent, cells[0]), id(rel, cells[1]), id(ent, cells[2])});
  }
  kg.entities = ent.size();
  kg.relations = rel.size();
  return kg;
}

std::vector<ResolutionCase> load_resolution_fixture() {
  std::ifstream in(data_path("resolution_fixture.tsv"));
  if (!in) throw std::runtime_error("resolution_fixture.tsv missing");
  std::vector<ResolutionCase> out;
  std::string line;
  std::getline(in, line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto cells = mkg::text::split(line, '\t');
    if (cells.size() != 3) throw std::runtime_error("bad fixture row: " + line);
    out.push_back({mkg::label_of(cells[0]), cells[1], cells[2]});
  }
  return out;
}

}  // namespace fixtures
