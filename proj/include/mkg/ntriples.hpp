#pragma once

// Minimal N-Triples reader/writer (IRIs, blank nodes, literals with an
// optional datatype or language tag).

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>

namespace mkg::nt {

enum class TermKind { Iri, Blank, Literal };

struct Term {
  TermKind kind = TermKind::Iri;
  std::string value;     // IRI without brackets, blank label without "_:", literal text
  std::string datatype;  // literal datatype IRI, may be empty
  std::string language;

  friend bool operator==(const Term&, const Term&) = default;
};

struct Statement {
  Term subject;
  Term predicate;
  Term object;

  friend bool operator==(const Statement&, const Statement&) = default;
};

inline constexpr std::string_view kRdfType =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#type";
inline constexpr std::string_view kRdfStatement =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#Statement";
inline constexpr std::string_view kRdfSubject =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#subject";
inline constexpr std::string_view kRdfPredicate =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#predicate";
inline constexpr std::string_view kRdfObject =
    "http://www.w3.org/1999/02/22-rdf-syntax-ns#object";
inline constexpr std::string_view kXsdInteger = "http://www.w3.org/2001/XMLSchema#integer";

Term iri(std::string value);
Term blank(std::string label);
Term literal(std::string text, std::string datatype = {});

// nullopt for blank and comment lines. Throws Error(MalformedFile, line_no).
std::optional<Statement> parse_line(std::string_view line, std::size_t line_no = 0);

std::string format(const Term& term);
// "<s> <p> <o> ." without newline.
std::string format(const Statement& statement);

}  // namespace mkg::nt
