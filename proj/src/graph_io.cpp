#include <fstream>
#include <sstream>

#include "mkg/error.hpp"
#include "mkg/graph.hpp"
#include "mkg/ntriples.hpp"
#include "mkg/text.hpp"

namespace mkg::graph {

namespace {

constexpr std::string_view kDoiPrefix = "urn:doi:";
constexpr std::string_view kEntityPrefix = "urn:mkg:";
constexpr std::string_view kClassPrefix = "urn:mkg:class:";
constexpr std::string_view kRelPrefix = "urn:mkg:rel:";
constexpr std::string_view kSourceProp = "urn:mkg:prop:source";
constexpr std::string_view kYearProp = "urn:mkg:prop:year";

bool keep_in_doi(unsigned char c) {
  if (c <= 0x20 || c >= 0x7F) return false;
  switch (c) {
    case '<': case '>': case '"': case '{': case '}': case '|':
    case '\\': case '^': case '`': case '%':
      return false;
    default:
      return true;
  }
}

// "Structure/Phase" -> "StructurePhase" so the label fits in one URN segment.
std::string label_token(Label label) {
  std::string out;
  for (char c : to_string(label)) {
    if (c != '/') out.push_back(c);
  }
  return out;
}

std::string class_uri(Label label) { return std::string(kClassPrefix) + label_token(label); }

bool starts_with(std::string_view s, std::string_view prefix) {
  return s.substr(0, prefix.size()) == prefix;
}

NodeKey parse_node_uri(const std::string& uri, std::size_t line_no) {
  if (starts_with(uri, kDoiPrefix)) {
    return {Label::DOI, text::percent_decode(uri.substr(kDoiPrefix.size()))};
  }
  if (starts_with(uri, kEntityPrefix)) {
    const std::string rest = uri.substr(kEntityPrefix.size());
    const auto colon = rest.find(':');
    if (colon != std::string::npos) {
      if (auto label = try_label_of(rest.substr(0, colon))) {
        std::string value = text::percent_decode(rest.substr(colon + 1));
        if (!value.empty()) return {*label, std::move(value)};
      }
    }
  }
  throw Error(ErrorKind::MalformedFile, "not a node URI: " + uri, line_no);
}

RelationKind parse_relation_uri(const std::string& uri, std::size_t line_no) {
  if (starts_with(uri, kRelPrefix)) {
    if (auto rel = try_relation_of(uri.substr(kRelPrefix.size()))) return *rel;
  }
  throw Error(ErrorKind::MalformedFile, "not a relation URI: " + uri, line_no);
}

std::filesystem::path sidecar_path(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".prov.nt");
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::FileUnreadable, path.string());
  return in;
}

template <typename Fn>
void for_each_statement(const std::filesystem::path& path, Fn&& fn) {
  auto in = open_in(path);
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    try {
      if (auto st = nt::parse_line(line, line_no)) fn(*st, line_no);
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::MalformedFile) throw;
      throw Error(ErrorKind::MalformedFile, path.filename().string() + ": " + e.what(),
                  line_no);
    }
  }
}

std::string join_dois(const std::set<std::string>& dois) {
  std::string out;
  for (const auto& d : dois) {
    if (!out.empty()) out.push_back('|');
    out += text::percent_encode(d, [](unsigned char c) { return c != '|'; });
  }
  return out;
}

std::set<std::string> split_dois(const std::string& field) {
  std::set<std::string> out;
  for (const auto& part : text::split(field, '|')) {
    if (!part.empty()) out.insert(text::percent_decode(part));
  }
  return out;
}

// Reads one CSV record, joining physical lines while a quote is open.
bool read_csv_record(std::istream& in, std::vector<std::string>& fields,
                     std::size_t& line_no) {
  std::string record;
  std::string line;
  bool any = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (any) record.push_back('\n');
    record += line;
    any = true;
    if (text::csv_split(record, fields)) return true;
  }
  if (any) throw Error(ErrorKind::MalformedFile, "unterminated quoted field", line_no);
  return false;
}

int parse_int(const std::string& s, std::size_t line_no) {
  std::size_t used = 0;
  int v = 0;
  try {
    v = std::stoi(s, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != s.size()) {
    throw Error(ErrorKind::MalformedFile, "not an integer: " + s, line_no);
  }
  return v;
}

}  // namespace

std::string node_uri(const Node& node) {
  if (node.label == Label::DOI) {
    return std::string(kDoiPrefix) + text::percent_encode(node.value, keep_in_doi);
  }
  return std::string(kEntityPrefix) + label_token(node.label) + ":" +
         text::percent_encode(node.value, text::is_unreserved);
}

std::string relation_uri(RelationKind relation) {
  return std::string(kRelPrefix) + std::string(to_string(relation));
}

void export_rdf(const GraphStore& store, const std::filesystem::path& path) {
  auto out = open_out(path);
  std::vector<std::string> uris;
  uris.reserve(store.nodes().size());
  for (const auto& n : store.nodes()) {
    uris.push_back(node_uri(n));
    out << nt::format({nt::iri(uris.back()), nt::iri(std::string(nt::kRdfType)),
                       nt::iri(class_uri(n.label))})
        << '\n';
  }
  for (const auto& t : store.triples()) {
    out << nt::format({nt::iri(uris[t.head]), nt::iri(relation_uri(t.relation)),
                       nt::iri(uris[t.tail])})
        << '\n';
  }

  auto prov = open_out(sidecar_path(path));
  for (const auto& [doi, year] : store.doi_years()) {
    prov << nt::format({nt::iri(node_uri({0, Label::DOI, doi})),
                        nt::iri(std::string(kYearProp)),
                        nt::literal(std::to_string(year), std::string(nt::kXsdInteger))})
         << '\n';
  }
  const auto& triples = store.triples();
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const Triple& t = triples[i];
    if (t.relation == RelationKind::MENTIONED_IN) continue;
    const nt::Term st = nt::blank("st" + std::to_string(i));
    prov << nt::format({st, nt::iri(std::string(nt::kRdfType)),
                        nt::iri(std::string(nt::kRdfStatement))})
         << '\n';
    prov << nt::format({st, nt::iri(std::string(nt::kRdfSubject)), nt::iri(uris[t.head])})
         << '\n';
    prov << nt::format({st, nt::iri(std::string(nt::kRdfPredicate)),
                        nt::iri(relation_uri(t.relation))})
         << '\n';
    prov << nt::format({st, nt::iri(std::string(nt::kRdfObject)), nt::iri(uris[t.tail])})
         << '\n';
    for (const auto& d : t.dois) {
      prov << nt::format({st, nt::iri(std::string(kSourceProp)),
                          nt::iri(node_uri({0, Label::DOI, d}))})
           << '\n';
    }
  }
}

GraphStore import_rdf(const std::filesystem::path& path) {
  struct Reified {
    std::string s, p, o;
    std::set<std::string> sources;
  };
  std::map<std::string, int> years;
  std::map<std::string, Reified> statements;
  for_each_statement(sidecar_path(path), [&](const nt::Statement& st, std::size_t line_no) {
    const std::string& pred = st.predicate.value;
    if (pred == kYearProp) {
      const auto key = parse_node_uri(st.subject.value, line_no);
      if (key.first != Label::DOI || st.object.kind != nt::TermKind::Literal) {
        throw Error(ErrorKind::MalformedFile, "bad year statement", line_no);
      }
      years[key.second] = parse_int(st.object.value, line_no);
      return;
    }
    if (st.subject.kind != nt::TermKind::Blank) {
      throw Error(ErrorKind::MalformedFile, "unexpected statement", line_no);
    }
    Reified& r = statements[st.subject.value];
    if (pred == nt::kRdfType) return;
    if (pred == nt::kRdfSubject) r.s = st.object.value;
    else if (pred == nt::kRdfPredicate) r.p = st.object.value;
    else if (pred == nt::kRdfObject) r.o = st.object.value;
    else if (pred == kSourceProp) r.sources.insert(parse_node_uri(st.object.value, line_no).second);
    else throw Error(ErrorKind::MalformedFile, "unknown predicate " + pred, line_no);
  });
  std::map<std::tuple<std::string, std::string, std::string>, std::set<std::string>> sources;
  for (auto& [id, r] : statements) {
    if (r.s.empty() || r.p.empty() || r.o.empty() || r.sources.empty()) {
      throw Error(ErrorKind::MalformedFile, "incomplete reified statement _:" + id);
    }
    sources[{r.s, r.p, r.o}] = std::move(r.sources);
  }

  GraphStore store;
  for (const auto& [doi, year] : years) store.note_doi_year(doi, year);
  auto year_of = [&](const std::string& doi, std::size_t line_no) {
    auto it = years.find(doi);
    if (it == years.end()) {
      throw Error(ErrorKind::MalformedFile, "no year for DOI " + doi, line_no);
    }
    return it->second;
  };
  for_each_statement(path, [&](const nt::Statement& st, std::size_t line_no) {
    if (st.subject.kind != nt::TermKind::Iri || st.object.kind != nt::TermKind::Iri) {
      throw Error(ErrorKind::MalformedFile, "expected IRIs", line_no);
    }
    const auto subject = parse_node_uri(st.subject.value, line_no);
    if (st.predicate.value == nt::kRdfType) {
      if (st.object.value != class_uri(subject.first)) {
        throw Error(ErrorKind::MalformedFile, "class does not match URI", line_no);
      }
      store.intern(subject.first, subject.second);
      return;
    }
    const auto relation = parse_relation_uri(st.predicate.value, line_no);
    const auto object = parse_node_uri(st.object.value, line_no);
    const auto h = store.find(subject.first, subject.second);
    const auto t = store.find(object.first, object.second);
    if (!h || !t) throw Error(ErrorKind::MalformedFile, "undeclared node", line_no);

    std::set<std::string> dois;
    if (relation == RelationKind::MENTIONED_IN) {
      dois.insert(object.second);
    } else {
      auto it = sources.find({st.subject.value, st.predicate.value, st.object.value});
      if (it == sources.end()) {
        throw Error(ErrorKind::MalformedFile, "no provenance for triple", line_no);
      }
      dois = it->second;
    }
    int earliest = year_of(*dois.begin(), line_no);
    for (const auto& d : dois) earliest = std::min(earliest, year_of(d, line_no));
    store.insert_edge(*h, relation, *t, dois, earliest);
  });
  return store;
}

void export_csv(const GraphStore& store, const std::filesystem::path& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::IoError, "cannot create " + dir.string());
  auto nodes = open_out(dir / "nodes.csv");
  nodes << "id,label,value\n";
  for (const auto& n : store.nodes()) {
    nodes << n.id << ',' << text::csv_escape(to_string(n.label)) << ','
          << text::csv_escape(n.value) << '\n';
  }
  auto edges = open_out(dir / "edges.csv");
  edges << "src_id,dst_id,relation,dois,earliest_year\n";
  for (const auto& t : store.triples()) {
    edges << t.head << ',' << t.tail << ',' << to_string(t.relation) << ','
          << text::csv_escape(join_dois(t.dois)) << ',' << t.earliest_year << '\n';
  }
}

GraphStore import_csv(const std::filesystem::path& dir) {
  GraphStore store;
  std::map<long long, NodeId> ids;
  std::vector<std::string> f;

  {
    auto in = open_in(dir / "nodes.csv");
    std::size_t line_no = 0;
    if (!read_csv_record(in, f, line_no) || f != std::vector<std::string>{"id", "label", "value"}) {
      throw Error(ErrorKind::MalformedFile, "nodes.csv: bad header", 1);
    }
    while (read_csv_record(in, f, line_no)) {
      if (f.size() == 1 && f[0].empty()) continue;
      if (f.size() != 3) throw Error(ErrorKind::MalformedFile, "nodes.csv: 3 fields expected", line_no);
      const auto label = try_label_of(f[1]);
      if (!label) throw Error(ErrorKind::MalformedFile, "nodes.csv: unknown label " + f[1], line_no);
      if (f[2].empty()) throw Error(ErrorKind::MalformedFile, "nodes.csv: empty value", line_no);
      bool created = false;
      const NodeId id = store.intern(*label, f[2], &created);
      if (!created || !ids.emplace(parse_int(f[0], line_no), id).second) {
        throw Error(ErrorKind::MalformedFile, "nodes.csv: duplicate node", line_no);
      }
    }
  }

  auto in = open_in(dir / "edges.csv");
  std::size_t line_no = 0;
  if (!read_csv_record(in, f, line_no) ||
      f != std::vector<std::string>{"src_id", "dst_id", "relation", "dois", "earliest_year"}) {
    throw Error(ErrorKind::MalformedFile, "edges.csv: bad header", 1);
  }
  while (read_csv_record(in, f, line_no)) {
    if (f.size() == 1 && f[0].empty()) continue;
    if (f.size() != 5) throw Error(ErrorKind::MalformedFile, "edges.csv: 5 fields expected", line_no);
    auto h = ids.find(parse_int(f[0], line_no));
    auto t = ids.find(parse_int(f[1], line_no));
    if (h == ids.end() || t == ids.end()) {
      throw Error(ErrorKind::MalformedFile, "edges.csv: unknown node id", line_no);
    }
    const auto relation = try_relation_of(f[2]);
    if (!relation) throw Error(ErrorKind::MalformedFile, "edges.csv: unknown relation " + f[2], line_no);
    const auto dois = split_dois(f[3]);
    if (dois.empty()) throw Error(ErrorKind::MalformedFile, "edges.csv: empty DOI set", line_no);
    store.insert_edge(h->second, *relation, t->second, dois, parse_int(f[4], line_no));
  }
  return store;
}

GraphStore import_store(const std::filesystem::path& path) {
  if (std::filesystem::is_directory(path)) return import_csv(path);
  if (path.extension() == ".nt") return import_rdf(path);
  if (!std::filesystem::exists(path)) throw Error(ErrorKind::FileUnreadable, path.string());
  throw Error(ErrorKind::MalformedFile, "unrecognized store format: " + path.string());
}

}  // namespace mkg::graph
