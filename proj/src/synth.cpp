#include "mkg/synth.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <tuple>

#include "mkg/error.hpp"
#include "mkg/rng.hpp"

namespace mkg::synth {

namespace {

struct Term {
  std::string canonical;
  std::vector<std::string> variants;
  std::string domain;
};

const std::vector<Term>& application_terms() {
  static const std::vector<Term> terms = {
      {"lithium-ion battery", {"Li-ion batteries", "lithium ion batteries"}, "energy"},
      {"supercapacitor", {"supercapacitors", "electrochemical capacitors"}, "energy"},
      {"solar cell", {"solar cells", "photovoltaic cells"}, "energy"},
      {"photocatalysis", {"photocatalytic degradation"}, "catalysis"},
      {"thin film transistor", {"TFTs", "thin-film transistors"}, "electronics"},
      {"gas sensor", {"gas sensors", "gas sensing"}, "environment"},
      {"hydrogen evolution reaction", {"hydrogen evolution", "HER catalysis"}, "catalysis"},
      {"fuel cell", {"fuel cells"}, "energy"},
      {"thermoelectric device", {"thermoelectric generators"}, "energy"},
      {"light-emitting diode", {"LEDs", "light emitting diodes"}, "electronics"},
      {"photodetector", {"photodetectors"}, "electronics"},
      {"spintronics", {"spintronic devices"}, "electronics"},
      {"sodium-ion battery", {"Na-ion batteries", "sodium ion batteries"}, "energy"},
      {"oxygen evolution reaction", {"oxygen evolution", "OER catalysis"}, "catalysis"},
      {"CO2 reduction", {"carbon dioxide reduction", "CO2 electroreduction"}, "catalysis"},
      {"magnetic storage", {"magnetic recording"}, "electronics"},
      {"drug delivery", {"drug carriers"}, "biomedical"},
      {"bioimaging", {"biological imaging"}, "biomedical"},
      {"water purification", {"water treatment"}, "environment"},
      {"corrosion protection", {"anticorrosion coatings"}, "environment"},
      {"hydrogen storage", {"H2 storage"}, "energy"},
      {"catalytic converter", {"automotive catalysts"}, "catalysis"},
      {"piezoelectric sensor", {"piezoelectric sensors"}, "electronics"},
      {"superconducting wire", {"superconducting cables"}, "electronics"},
      {"resistive memory", {"memristors", "resistive switching memory"}, "electronics"},
      {"thin films", {"thin film coatings"}, "electronics"},
  };
  return terms;
}

const std::vector<Term>& structure_terms() {
  static const std::vector<Term> terms = {
      {"perovskite", {"perovskite structure", "perovskite phase"}, ""},
      {"spinel", {"spinel phase", "spinel structure"}, ""},
      {"olivine", {"olivine structure"}, ""},
      {"wurtzite", {"wurtzite phase"}, ""},
      {"rock salt", {"rock-salt structure"}, ""},
      {"layered", {"layered structure"}, ""},
      {"anatase", {"anatase phase"}, ""},
      {"rutile", {"rutile phase"}, ""},
      {"fluorite", {"fluorite structure"}, ""},
      {"zinc blende", {"zincblende", "sphalerite"}, ""},
      {"pyrochlore", {"pyrochlore phase"}, ""},
      {"garnet", {"garnet structure"}, ""},
      {"hexagonal", {"hexagonal phase"}, ""},
      {"orthorhombic", {"orthorhombic phase"}, ""},
      {"monoclinic", {"monoclinic phase"}, ""},
      {"tetragonal", {"tetragonal phase"}, ""},
  };
  return terms;
}

const std::vector<Term>& synthesis_terms() {
  static const std::vector<Term> terms = {
      {"solution-processed", {"solution casting method", "solution processing"}, ""},
      {"sol-gel", {"sol-gel method", "sol gel route"}, ""},
      {"hydrothermal", {"hydrothermal synthesis", "hydrothermal method"}, ""},
      {"solid-state reaction", {"solid state synthesis", "ceramic method"}, ""},
      {"chemical vapor deposition", {"CVD", "chemical vapour deposition"}, ""},
      {"ball milling", {"mechanical milling", "high-energy ball milling"}, ""},
      {"co-precipitation", {"coprecipitation method"}, ""},
      {"spin coating", {"spin-coated"}, ""},
      {"sputtering", {"magnetron sputtering"}, ""},
      {"electrodeposition", {"electrochemical deposition"}, ""},
      {"pulsed laser deposition", {"PLD"}, ""},
      {"molecular beam epitaxy", {"MBE"}, ""},
      {"combustion synthesis", {"solution combustion"}, ""},
      {"solvothermal", {"solvothermal method"}, ""},
      {"atomic layer deposition", {"ALD"}, ""},
      {"microwave-assisted synthesis", {"microwave synthesis"}, ""},
  };
  return terms;
}

const std::vector<Term>& characterization_terms() {
  static const std::vector<Term> terms = {
      {"X-ray diffraction", {"XRD", "powder X-ray diffraction"}, ""},
      {"scanning electron microscopy", {"SEM"}, ""},
      {"transmission electron microscopy", {"TEM", "HRTEM"}, ""},
      {"X-ray photoelectron spectroscopy", {"XPS"}, ""},
      {"Raman spectroscopy", {"Raman", "Raman spectra"}, ""},
      {"cyclic voltammetry", {"CV measurements"}, ""},
      {"UV-vis spectroscopy", {"UV-Vis absorption"}, ""},
      {"thermogravimetric analysis", {"TGA"}, ""},
      {"BET analysis", {"BET", "nitrogen adsorption"}, ""},
      {"FTIR spectroscopy", {"FTIR", "infrared spectroscopy"}, ""},
      {"impedance spectroscopy", {"EIS", "electrochemical impedance spectroscopy"}, ""},
      {"photoluminescence", {"PL spectra"}, ""},
      {"atomic force microscopy", {"AFM"}, ""},
      {"neutron diffraction", {"neutron scattering"}, ""},
      {"Mossbauer spectroscopy", {"Mossbauer"}, ""},
      {"NMR spectroscopy", {"NMR", "solid-state NMR"}, ""},
  };
  return terms;
}

const std::vector<std::string> kPropertyAdjectives = {
    "high", "low", "tunable", "enhanced", "stable", "large", "fast", "superior"};
const std::vector<std::string> kPropertyNouns = {
    "ionic conductivity", "electronic conductivity", "specific capacity", "band gap",
    "surface area", "thermal stability", "magnetization", "hardness", "carrier mobility",
    "catalytic activity", "quantum efficiency", "dielectric constant", "porosity",
    "coercivity", "cycle stability", "rate capability", "photoresponse", "selectivity",
    "biocompatibility", "optical absorption"};
const std::vector<std::string> kDescriptors = {
    "nanostructured", "mesoporous", "doped", "core-shell", "nanosheet", "nanowire",
    "nanoparticle", "hierarchical", "single-crystal", "epitaxial", "two-dimensional",
    "hollow", "ultrathin", "flexible", "graphene-wrapped", "carbon-coated", "defect-rich",
    "high-entropy", "polycrystalline", "amorphous"};

struct Cation {
  const char* name;
  const char* symbol;
};
struct Anion {
  const char* name;
  const char* formula;
};
const std::vector<Cation> kCations = {
    {"lithium", "Li"},  {"sodium", "Na"},    {"potassium", "K"},  {"magnesium", "Mg"},
    {"calcium", "Ca"},  {"zinc", "Zn"},      {"copper", "Cu"},    {"nickel", "Ni"},
    {"cobalt", "Co"},   {"iron", "Fe"},      {"manganese", "Mn"}, {"titanium", "Ti"},
    {"vanadium", "V"},  {"chromium", "Cr"},  {"strontium", "Sr"}, {"barium", "Ba"},
    {"bismuth", "Bi"},  {"tin", "Sn"}};
const std::vector<Anion> kAnions = {
    {"oxide", "O3"},       {"phosphate", "PO4"}, {"sulfide", "S2"},   {"selenide", "Se2"},
    {"silicate", "SiO4"},  {"titanate", "TiO3"}, {"vanadate", "VO4"}, {"molybdate", "MoO4"},
    {"tungstate", "WO4"},  {"borate", "BO3"},    {"fluoride", "F3"},  {"niobate", "NbO3"}};

const std::vector<std::string> kGenericTerms = {"sample", "material", "composite", "catalyst"};

struct Material {
  std::string formula;
  std::string name;
  std::string acronym;
  std::size_t family = 0;
  int intro = 0;
  std::vector<std::string> properties;  // folded
  std::vector<std::string> descriptors;  // folded
  std::vector<std::size_t> structures;
  std::vector<std::size_t> syntheses;
  std::vector<std::size_t> characterizations;
  std::vector<std::pair<std::size_t, int>> links;  // application index, first year
};

struct Family {
  std::vector<std::size_t> applications;
  std::vector<std::string> properties;
  std::vector<std::string> descriptors;
  std::vector<std::size_t> structures;
  std::vector<std::size_t> syntheses;
  std::vector<std::size_t> characterizations;
};

std::string random_case(Rng& rng, const std::string& s) {
  switch (rng.below(3)) {
    case 0: return s;
    case 1: {
      std::string out = s;
      out[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(out[0])));
      return out;
    }
    default: {
      std::string out;
      bool start = true;
      for (char c : s) {
        out.push_back(start ? static_cast<char>(std::toupper(static_cast<unsigned char>(c))) : c);
        start = c == ' ';
      }
      return out;
    }
  }
}

std::string surface(Rng& rng, const Term& term, double variant_rate, std::size_t& variants) {
  if (!term.variants.empty() && rng.chance(variant_rate)) {
    ++variants;
    return term.variants[rng.below(term.variants.size())];
  }
  return rng.chance(0.3) ? random_case(rng, term.canonical) : term.canonical;
}

template <typename T>
std::vector<T> pick_subset(Rng& rng, const std::vector<T>& pool, double p, std::size_t at_least) {
  std::vector<T> out;
  for (const auto& x : pool) {
    if (rng.chance(p)) out.push_back(x);
  }
  while (out.size() < std::min(at_least, pool.size())) {
    const auto& x = pool[rng.below(pool.size())];
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  }
  return out;
}

// Initials of the name plus a suffix ending in a letter that is not an
// element symbol, so the formula grammar always rejects the acronym.
std::string acronym_for(const std::string& name, std::set<std::string>& used) {
  static const std::string kTail = "ADEGJLMQRTXZ";
  std::string initials;
  bool start = true;
  for (char c : name) {
    if (start && std::isalpha(static_cast<unsigned char>(c))) {
      initials.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
    }
    start = c == ' ';
  }
  for (char a : kTail) {
    if (used.insert(initials + a).second) return initials + a;
  }
  for (char a : kTail) {
    for (char b : kTail) {
      const std::string candidate = initials + a + b;
      if (used.insert(candidate).second) return candidate;
    }
  }
  throw Error(ErrorKind::InvalidArgument, "acronym space exhausted for " + name);
}

}  // namespace

resolve::Dictionaries default_dictionaries() {
  resolve::Dictionaries dicts;
  auto fill = [&](Label label, const std::vector<Term>& terms) {
    auto [it, fresh] = dicts.try_emplace(label, label);
    for (const auto& t : terms) {
      it->second.add(t.canonical);
      for (const auto& v : t.variants) it->second.add(t.canonical, v);
    }
  };
  fill(Label::Application, application_terms());
  fill(Label::StructurePhase, structure_terms());
  fill(Label::Synthesis, synthesis_terms());
  fill(Label::Characterization, characterization_terms());
  return dicts;
}

SynthCorpus generate(const SynthConfig& config) {
  const auto& apps = application_terms();
  if (config.families == 0 || config.materials_per_family == 0) {
    throw Error(ErrorKind::InvalidArgument, "need at least one family and one material");
  }
  if (config.families * 2 > apps.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "at most " + std::to_string(apps.size() / 2) + " families");
  }
  if (config.last_year - config.first_year < 4) {
    throw Error(ErrorKind::InvalidArgument, "timeline must span at least 5 years");
  }
  if (config.families * config.materials_per_family > kCations.size() * kCations.size() * 2) {
    throw Error(ErrorKind::InvalidArgument, "too many materials");
  }

  Rng rng(config.seed);
  SynthCorpus out;
  out.dictionaries = default_dictionaries();

  std::vector<std::string> property_pool;
  for (const auto& a : kPropertyAdjectives) {
    for (const auto& n : kPropertyNouns) property_pool.push_back(a + " " + n);
  }
  rng.shuffle(property_pool);
  std::vector<std::size_t> app_order(apps.size());
  for (std::size_t i = 0; i < app_order.size(); ++i) app_order[i] = i;
  rng.shuffle(app_order);

  std::vector<Family> families(config.families);
  std::size_t next_property = 0;
  for (std::size_t f = 0; f < families.size(); ++f) {
    Family& fam = families[f];
    fam.applications = {app_order[2 * f], app_order[2 * f + 1]};
    for (int i = 0; i < 4; ++i) fam.properties.push_back(property_pool[next_property++]);
    fam.descriptors = {kDescriptors[(2 * f) % kDescriptors.size()],
                       kDescriptors[(2 * f + 1) % kDescriptors.size()]};
    fam.structures = {f % structure_terms().size()};
    fam.syntheses = {(2 * f) % synthesis_terms().size(),
                     (2 * f + 1) % synthesis_terms().size()};
    fam.characterizations = {(3 * f) % characterization_terms().size(),
                             (3 * f + 1) % characterization_terms().size()};
  }

  const int span = config.last_year - config.first_year;
  std::vector<Material> materials;
  std::set<std::string> used_formulas;
  std::set<std::string> used_acronyms;
  for (std::size_t f = 0; f < families.size(); ++f) {
    const Family& fam = families[f];
    for (std::size_t i = 0; i < config.materials_per_family; ++i) {
      Material m;
      m.family = f;
      while (true) {
        const auto& c1 = kCations[rng.below(kCations.size())];
        const auto& c2 = kCations[rng.below(kCations.size())];
        const auto& an = kAnions[rng.below(kAnions.size())];
        if (std::string(c1.symbol) == c2.symbol) continue;
        const int count = 1 + static_cast<int>(rng.below(2));
        std::string formula = std::string(c1.symbol) + (count > 1 ? std::to_string(count) : "") +
                              c2.symbol + an.formula;
        if (!used_formulas.insert(formula).second) continue;
        m.formula = formula;
        m.name = std::string(count > 1 ? "di" : "") + c1.name + " " + c2.name + " " + an.name;
        break;
      }
      m.acronym = acronym_for(m.name, used_acronyms);
      // Two early members per family give later members something to resemble.
      m.intro = config.first_year +
                static_cast<int>(i < 2 ? rng.below(static_cast<std::uint64_t>(span / 4 + 1))
                                       : rng.below(static_cast<std::uint64_t>(span * 3 / 4)));
      for (const auto& p : pick_subset(rng, fam.properties, 0.75, 2)) {
        m.properties.push_back(resolve::fold(p));
      }
      if (rng.chance(0.5)) {
        m.properties.push_back(resolve::fold(property_pool[rng.below(property_pool.size())]));
      }
      for (const auto& d : pick_subset(rng, fam.descriptors, 0.6, 1)) {
        m.descriptors.push_back(resolve::fold(d));
      }
      m.structures = fam.structures;
      m.syntheses = pick_subset(rng, fam.syntheses, 0.5, 1);
      m.characterizations = pick_subset(rng, fam.characterizations, 0.6, 1);
      for (std::size_t a : fam.applications) {
        if (i >= 2 && rng.chance(0.15)) continue;
        const int gap = 1 + static_cast<int>(rng.below(i < 2 ? 3 : 8));
        m.links.emplace_back(a, std::min(m.intro + gap, config.last_year));
      }
      if (rng.chance(config.noise_link_rate * static_cast<double>(span))) {
        const std::size_t a = rng.below(apps.size());
        if (std::find(fam.applications.begin(), fam.applications.end(), a) ==
            fam.applications.end()) {
          const int y = m.intro + static_cast<int>(rng.below(
                                      static_cast<std::uint64_t>(config.last_year - m.intro + 1)));
          m.links.emplace_back(a, y);
        }
      }
      materials.push_back(std::move(m));
    }
  }

  struct Draft {
    int year;
    std::size_t material;
    std::size_t seq;
    ExtractionRecord raw;
    ExtractionRecord gold;
  };
  std::vector<Draft> drafts;
  for (std::size_t mi = 0; mi < materials.size(); ++mi) {
    const Material& m = materials[mi];
    std::size_t seq = 0;
    for (int year = m.intro; year <= config.last_year; ++year) {
      bool link_year = false;
      for (const auto& [a, y] : m.links) link_year = link_year || y == year;
      if (year != m.intro && !link_year && !rng.chance(config.record_rate)) continue;

      ExtractionRecord raw;
      ExtractionRecord gold;
      raw.year = gold.year = year;

      const bool formula_as_name = rng.chance(config.formula_as_name_rate);
      raw.add(formula_as_name ? Label::Name : Label::Formula, m.formula);
      gold.add(Label::Formula, m.formula);
      if (formula_as_name) ++out.tallies["formula_as_name"];
      const bool with_name = rng.chance(0.5);
      if (with_name) {
        raw.add(Label::Name, m.name);
        gold.add(Label::Name, m.name);
      }
      if (rng.chance(0.3)) {
        const bool as_name = rng.chance(config.acronym_as_name_rate / 0.3);
        raw.add(as_name ? Label::Name : Label::Acronym, m.acronym);
        gold.add(Label::Acronym, m.acronym);
        if (as_name) ++out.tallies["acronym_as_name"];
      } else if (with_name && rng.chance(config.text_acronym_rate)) {
        raw.text = "Here we report " + m.name + " (" + m.acronym + ") for the first time.";
        gold.text = raw.text;
        gold.add(Label::Acronym, m.acronym);
        ++out.tallies["acronym_from_text"];
      }
      if (rng.chance(config.generic_term_rate)) {
        raw.add(Label::Name, kGenericTerms[rng.below(kGenericTerms.size())]);
        ++out.tallies["generic_term"];
      }

      for (const auto& p : pick_subset(rng, m.properties, 0.6, 1)) {
        raw.add(Label::Property, random_case(rng, p));
        gold.add(Label::Property, p);
      }
      for (const auto& d : pick_subset(rng, m.descriptors, 0.5, 0)) {
        raw.add(Label::Descriptor, random_case(rng, d));
        gold.add(Label::Descriptor, d);
      }
      auto add_strict = [&](Label label, const std::vector<Term>& terms,
                            const std::vector<std::size_t>& chosen, double p) {
        for (std::size_t idx : pick_subset(rng, chosen, p, 0)) {
          const std::string s =
              surface(rng, terms[idx], config.variant_rate, out.tallies["strict_variant"]);
          raw.add(label, s);
          gold.add(label, terms[idx].canonical);
        }
      };
      add_strict(Label::StructurePhase, structure_terms(), m.structures, 0.5);
      add_strict(Label::Synthesis, synthesis_terms(), m.syntheses, 0.4);
      add_strict(Label::Characterization, characterization_terms(), m.characterizations, 0.4);

      for (const auto& [a, y] : m.links) {
        if (year < y || (year > y && !rng.chance(0.3))) continue;
        const Term& term = apps[a];
        ApplicationBlock rb;
        ApplicationBlock gb;
        rb.value = surface(rng, term, config.variant_rate, out.tallies["strict_variant"]);
        gb.value = term.canonical;
        if (rng.chance(0.7)) {
          rb.domains.push_back(term.domain);
          gb.domains.push_back(term.domain);
        }
        const auto& fam_props = families[m.family].properties;
        const bool own = std::find(families[m.family].applications.begin(),
                                   families[m.family].applications.end(),
                                   a) != families[m.family].applications.end();
        if (own && rng.chance(0.5)) {
          const std::string p = fam_props[rng.below(fam_props.size())];
          rb.properties.push_back(random_case(rng, p));
          gb.properties.push_back(resolve::fold(p));
        }
        raw.applications.push_back(std::move(rb));
        gold.applications.push_back(std::move(gb));
      }
      drafts.push_back({year, mi, seq++, std::move(raw), std::move(gold)});
    }
  }

  std::sort(drafts.begin(), drafts.end(), [](const Draft& a, const Draft& b) {
    return std::tie(a.year, a.material, a.seq) < std::tie(b.year, b.material, b.seq);
  });
  std::map<std::pair<std::string, std::string>, int> first_link;
  std::map<int, std::size_t> per_year;
  for (auto& d : drafts) {
    const std::size_t n = ++per_year[d.year];
    std::string counter = std::to_string(n);
    counter.insert(0, 5 - std::min<std::size_t>(5, counter.size()), '0');
    d.raw.doi = d.gold.doi = "10.5555/synth." + std::to_string(d.year) + "." + counter;
    for (const auto& b : d.gold.applications) {
      auto [it, fresh] = first_link.try_emplace({materials[d.material].formula, b.value}, d.year);
      if (!fresh) it->second = std::min(it->second, d.year);
    }
    out.records.push_back(std::move(d.raw));
    out.gold.push_back(std::move(d.gold));
  }
  for (const auto& [key, year] : first_link) out.links.push_back({key.first, key.second, year});
  out.tallies["records"] = out.records.size();
  out.tallies["materials"] = materials.size();
  out.tallies["links"] = out.links.size();
  return out;
}

}  // namespace mkg::synth
