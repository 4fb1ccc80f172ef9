#pragma once

// Grammar-based chemical formula recognizer and entity-kind classifier.
//
// Grammar (whitespace is never accepted):
//
//   formula    := segment (separator segment)*        separator: / @ -
//   segment    := body (dot coefficient? body)*       dot: '.' or U+00B7
//   body       := term+
//   term       := element count? | '(' body ')' count? | '[' body ']' count?
//   count      := digits ('.' digits)?  |  '.' digits
//   coefficient:= count
//
// Element symbols are tokenized longest-first against the periodic table.
// A '.' directly after a count that is followed by a digit continues the
// count ("Li0.5"), otherwise it is a hydrate dot.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mkg/ontology.hpp"

namespace mkg::chemlex {

struct LexConfig {
  // Admit deuterium / tritium ("D", "T") as element symbols.
  bool allow_isotopes = false;
  // Exact-string verdict overrides, consulted before any rule.
  std::map<std::string, Label> overrides = default_overrides();

  static std::map<std::string, Label> default_overrides();
};

// Reads "key = value" lines: `allow_isotopes = true|false` and
// `override <string> = Formula|Name|Acronym`. '#' starts a comment.
LexConfig load_lex_config(const std::string& path);

bool is_element_symbol(std::string_view symbol, const LexConfig& config = {});
std::size_t periodic_table_size();

struct Term {
  std::string symbol;      // empty for a bracketed group
  char open = 0;           // '(' or '[' for groups
  std::vector<Term> children;
  std::string count_text;  // verbatim subscript, may be empty

  bool is_group() const { return symbol.empty(); }
  double count() const;
};

struct Hydrate {
  std::string dot;          // "." or "·"
  std::string coefficient;  // verbatim, may be empty
  std::vector<Term> terms;
};

struct Segment {
  std::vector<Term> terms;
  std::vector<Hydrate> hydrates;
};

struct FormulaAST {
  Segment main;
  // Separator-joined decorations ("LiFePO4/C", "Pt@C").
  std::vector<std::pair<char, Segment>> decorations;

  // Flattened (symbol, multiplicity) list of the main segment in reading
  // order, group multipliers and hydrate coefficients applied.
  std::vector<std::pair<std::string, double>> parts() const;
  std::set<std::string> distinct_elements() const;
  bool has_digit() const;
};

struct FormulaReject {
  std::size_t position = 0;
  std::string reason;
};

struct FormulaResult {
  std::optional<FormulaAST> ast;
  FormulaReject reject;

  explicit operator bool() const { return ast.has_value(); }
};

inline constexpr std::size_t kMaxFormulaLength = 256;

FormulaResult parse_formula(std::string_view s, const LexConfig& config = {});
// Exact inverse of parse_formula on accepted input.
std::string serialize(const FormulaAST& ast);

struct KindVerdict {
  Label kind = Label::Name;
  double confidence = 1.0;
  std::vector<std::string> reasons;
};

// Shape test used for acronyms: 2-10 characters, no whitespace and at
// least 80% uppercase ASCII letters.
bool acronym_shape(std::string_view s);

// Formula when the grammar accepts and the string has a digit or two
// distinct elements; Acronym when the grammar rejects and the shape test
// passes; Name otherwise. Overrides win.
KindVerdict classify_entity_kind(std::string_view s, const LexConfig& config = {});

struct NameAcronymPair {
  std::string name;
  std::string acronym;
  double coverage = 0.0;

  friend bool operator==(const NameAcronymPair&, const NameAcronymPair&) = default;
};

inline constexpr double kMinAcronymCoverage = 0.6;

// Finds "<phrase> (<ACRONYM>)" patterns where the acronym letters occur in
// order in the phrase, the first at the phrase's first word initial.
std::vector<NameAcronymPair> extract_name_acronym_pairs(std::string_view text);

}  // namespace mkg::chemlex
