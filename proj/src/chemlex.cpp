#include "mkg/chemlex.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <fstream>
#include <string>
#include <unordered_set>

#include "mkg/error.hpp"
#include "mkg/text.hpp"

namespace mkg::chemlex {

namespace {

constexpr std::array<std::string_view, 118> kElements = {
    "H",  "He", "Li", "Be", "B",  "C",  "N",  "O",  "F",  "Ne", "Na", "Mg",
    "Al", "Si", "P",  "S",  "Cl", "Ar", "K",  "Ca", "Sc", "Ti", "V",  "Cr",
    "Mn", "Fe", "Co", "Ni", "Cu", "Zn", "Ga", "Ge", "As", "Se", "Br", "Kr",
    "Rb", "Sr", "Y",  "Zr", "Nb", "Mo", "Tc", "Ru", "Rh", "Pd", "Ag", "Cd",
    "In", "Sn", "Sb", "Te", "I",  "Xe", "Cs", "Ba", "La", "Ce", "Pr", "Nd",
    "Pm", "Sm", "Eu", "Gd", "Tb", "Dy", "Ho", "Er", "Tm", "Yb", "Lu", "Hf",
    "Ta", "W",  "Re", "Os", "Ir", "Pt", "Au", "Hg", "Tl", "Pb", "Bi", "Po",
    "At", "Rn", "Fr", "Ra", "Ac", "Th", "Pa", "U",  "Np", "Pu", "Am", "Cm",
    "Bk", "Cf", "Es", "Fm", "Md", "No", "Lr", "Rf", "Db", "Sg", "Bh", "Hs",
    "Mt", "Ds", "Rg", "Cn", "Nh", "Fl", "Mc", "Lv", "Ts", "Og",
};

const std::unordered_set<std::string_view>& element_set() {
  static const std::unordered_set<std::string_view> set(kElements.begin(),
                                                        kElements.end());
  return set;
}

constexpr std::string_view kMiddleDot = "\xC2\xB7";

bool is_upper(char c) { return c >= 'A' && c <= 'Z'; }
bool is_lower(char c) { return c >= 'a' && c <= 'z'; }
bool is_digit(char c) { return c >= '0' && c <= '9'; }

class FormulaParser {
 public:
  FormulaParser(std::string_view s, const LexConfig& config)
      : s_(s), config_(config) {}

  FormulaResult run() {
    FormulaResult result;
    if (s_.empty()) return fail(0, "empty string");
    if (s_.size() > kMaxFormulaLength) return fail(kMaxFormulaLength, "too long");
    for (std::size_t i = 0; i < s_.size(); ++i) {
      const char c = s_[i];
      if (std::isalnum(static_cast<unsigned char>(c)) || c == '(' || c == ')' ||
          c == '[' || c == ']' || c == '.' || c == '/' || c == '@' || c == '-') {
        continue;
      }
      if (s_.substr(i, kMiddleDot.size()) == kMiddleDot) {
        ++i;
        continue;
      }
      return fail(i, "character not allowed in a formula");
    }

    FormulaAST ast;
    if (!segment(ast.main)) return failure_;
    while (pos_ < s_.size()) {
      const char sep = s_[pos_];
      if (sep != '/' && sep != '@' && sep != '-') {
        return fail(pos_, "unexpected character");
      }
      ++pos_;
      Segment seg;
      if (!segment(seg)) return failure_;
      ast.decorations.emplace_back(sep, std::move(seg));
    }
    result.ast = std::move(ast);
    return result;
  }

 private:
  FormulaResult fail(std::size_t pos, std::string reason) {
    failure_.ast.reset();
    failure_.reject = {pos, std::move(reason)};
    return failure_;
  }

  bool segment(Segment& seg) {
    if (!body(seg.terms)) return false;
    while (pos_ < s_.size()) {
      Hydrate h;
      if (s_[pos_] == '.') {
        h.dot = ".";
      } else if (s_.substr(pos_, kMiddleDot.size()) == kMiddleDot) {
        h.dot = std::string(kMiddleDot);
      } else {
        break;
      }
      pos_ += h.dot.size();
      if (!count(h.coefficient)) return false;
      if (!body(h.terms)) return false;
      seg.hydrates.push_back(std::move(h));
    }
    return true;
  }

  bool body(std::vector<Term>& terms) {
    while (pos_ < s_.size()) {
      const char c = s_[pos_];
      if (is_upper(c)) {
        Term t;
        if (!element(t.symbol)) return false;
        if (!count(t.count_text)) return false;
        terms.push_back(std::move(t));
      } else if (c == '(' || c == '[') {
        const std::size_t open_pos = pos_;
        Term t;
        t.open = c;
        ++pos_;
        if (!body(t.children)) return false;
        const char close = c == '(' ? ')' : ']';
        if (pos_ >= s_.size() || s_[pos_] != close) {
          fail(open_pos, "unbalanced bracket");
          return false;
        }
        ++pos_;
        if (!count(t.count_text)) return false;
        terms.push_back(std::move(t));
      } else {
        break;
      }
    }
    if (terms.empty()) {
      fail(pos_, pos_ < s_.size() && is_lower(s_[pos_])
                     ? "lowercase letter cannot start an element symbol"
                     : "expected an element or group");
      return false;
    }
    return true;
  }

  bool element(std::string& symbol) {
    const std::size_t start = pos_;
    if (pos_ + 1 < s_.size() && is_lower(s_[pos_ + 1]) &&
        is_element_symbol(s_.substr(pos_, 2), config_)) {
      symbol = std::string(s_.substr(pos_, 2));
      pos_ += 2;
      return true;
    }
    if (is_element_symbol(s_.substr(pos_, 1), config_)) {
      symbol = std::string(s_.substr(pos_, 1));
      pos_ += 1;
      return true;
    }
    fail(start, "unknown element symbol");
    return false;
  }

  // "CuSO4.5H2O": an ASCII dot before "<n>H2O" separates a hydrate rather
  // than starting a decimal subscript.
  bool water_follows(std::size_t at) const {
    while (at < s_.size() && is_digit(s_[at])) ++at;
    return s_.substr(at, 3) == "H2O";
  }

  // Optional count: digits ('.' digits)?. Must be positive when present.
  bool count(std::string& out) {
    const std::size_t start = pos_;
    while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    if (pos_ == start) return true;
    if (pos_ + 1 < s_.size() && s_[pos_] == '.' && is_digit(s_[pos_ + 1]) &&
        !water_follows(pos_ + 1)) {
      ++pos_;
      while (pos_ < s_.size() && is_digit(s_[pos_])) ++pos_;
    }
    out = std::string(s_.substr(start, pos_ - start));
    if (std::stod(out) <= 0.0) {
      fail(start, "count must be positive");
      return false;
    }
    return true;
  }

  std::string_view s_;
  const LexConfig& config_;
  std::size_t pos_ = 0;
  FormulaResult failure_;
};

void append_terms(std::string& out, const std::vector<Term>& terms) {
  for (const auto& t : terms) {
    if (t.is_group()) {
      out.push_back(t.open);
      append_terms(out, t.children);
      out.push_back(t.open == '(' ? ')' : ']');
    } else {
      out += t.symbol;
    }
    out += t.count_text;
  }
}

void append_segment(std::string& out, const Segment& seg) {
  append_terms(out, seg.terms);
  for (const auto& h : seg.hydrates) {
    out += h.dot;
    out += h.coefficient;
    append_terms(out, h.terms);
  }
}

void flatten(const std::vector<Term>& terms, double multiplier,
             std::vector<std::pair<std::string, double>>& out) {
  for (const auto& t : terms) {
    if (t.is_group()) {
      flatten(t.children, multiplier * t.count(), out);
    } else {
      out.emplace_back(t.symbol, multiplier * t.count());
    }
  }
}

void collect_elements(const std::vector<Term>& terms, std::set<std::string>& out) {
  for (const auto& t : terms) {
    if (t.is_group()) {
      collect_elements(t.children, out);
    } else {
      out.insert(t.symbol);
    }
  }
}

void collect_elements(const Segment& seg, std::set<std::string>& out) {
  collect_elements(seg.terms, out);
  for (const auto& h : seg.hydrates) collect_elements(h.terms, out);
}

bool terms_have_count(const std::vector<Term>& terms) {
  return std::any_of(terms.begin(), terms.end(), [](const Term& t) {
    return !t.count_text.empty() || terms_have_count(t.children);
  });
}

bool segment_has_digit(const Segment& seg) {
  if (terms_have_count(seg.terms)) return true;
  return std::any_of(seg.hydrates.begin(), seg.hydrates.end(),
                     [](const Hydrate& h) {
                       return !h.coefficient.empty() || terms_have_count(h.terms);
                     });
}

}  // namespace

std::map<std::string, Label> LexConfig::default_overrides() {
  // Common abbreviations that happen to spell valid formulas, plus the two
  // small molecules that would otherwise fail the two-element test.
  return {
      {"NO", Label::Formula},  {"CO", Label::Formula},  {"IT", Label::Acronym},
      {"HER", Label::Acronym}, {"OER", Label::Acronym}, {"PCE", Label::Acronym},
      {"COF", Label::Acronym}, {"COFs", Label::Acronym}, {"NF", Label::Acronym},
      {"CNF", Label::Acronym}, {"PS", Label::Acronym},  {"PI", Label::Acronym},
  };
}

LexConfig load_lex_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::FileUnreadable, path);
  LexConfig config;
  std::size_t line_no = 0;
  for (std::string line; std::getline(in, line);) {
    ++line_no;
    if (auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    const auto body = text::trim(line);
    if (body.empty()) continue;
    const auto eq = body.rfind('=');
    if (eq == std::string_view::npos) {
      throw Error(ErrorKind::MalformedFile, "expected key = value", line_no);
    }
    const auto key = text::trim(body.substr(0, eq));
    const auto value = text::trim(body.substr(eq + 1));
    if (key == "allow_isotopes") {
      config.allow_isotopes = value == "true" || value == "1";
    } else if (key.substr(0, 9) == "override ") {
      const auto label = label_of(value);
      if (!is_core(label)) {
        throw Error(ErrorKind::MalformedFile, "override must name a core label",
                    line_no);
      }
      config.overrides[std::string(text::trim(key.substr(9)))] = label;
    } else {
      throw Error(ErrorKind::MalformedFile, "unknown key " + std::string(key),
                  line_no);
    }
  }
  return config;
}

bool is_element_symbol(std::string_view symbol, const LexConfig& config) {
  if (config.allow_isotopes && (symbol == "D" || symbol == "T")) return true;
  return element_set().count(symbol) > 0;
}

std::size_t periodic_table_size() { return kElements.size(); }

double Term::count() const {
  return count_text.empty() ? 1.0 : std::stod(count_text);
}

std::vector<std::pair<std::string, double>> FormulaAST::parts() const {
  std::vector<std::pair<std::string, double>> out;
  flatten(main.terms, 1.0, out);
  for (const auto& h : main.hydrates) {
    flatten(h.terms, h.coefficient.empty() ? 1.0 : std::stod(h.coefficient), out);
  }
  return out;
}

std::set<std::string> FormulaAST::distinct_elements() const {
  std::set<std::string> out;
  collect_elements(main, out);
  for (const auto& [sep, seg] : decorations) collect_elements(seg, out);
  return out;
}

bool FormulaAST::has_digit() const {
  if (segment_has_digit(main)) return true;
  return std::any_of(decorations.begin(), decorations.end(),
                     [](const auto& d) { return segment_has_digit(d.second); });
}

FormulaResult parse_formula(std::string_view s, const LexConfig& config) {
  return FormulaParser(s, config).run();
}

std::string serialize(const FormulaAST& ast) {
  std::string out;
  append_segment(out, ast.main);
  for (const auto& [sep, seg] : ast.decorations) {
    out.push_back(sep);
    append_segment(out, seg);
  }
  return out;
}

bool acronym_shape(std::string_view s) {
  if (s.size() < 2 || s.size() > 10) return false;
  std::size_t upper = 0;
  for (char c : s) {
    if (std::isspace(static_cast<unsigned char>(c))) return false;
    if (is_upper(c)) ++upper;
  }
  return static_cast<double>(upper) >= 0.8 * static_cast<double>(s.size());
}

KindVerdict classify_entity_kind(std::string_view raw, const LexConfig& config) {
  const std::string_view s = text::trim(raw);
  KindVerdict verdict;
  if (auto it = config.overrides.find(std::string(s)); it != config.overrides.end()) {
    verdict.kind = it->second;
    verdict.reasons = {"override"};
    return verdict;
  }

  const bool composite = s.find(' ') != std::string_view::npos &&
                         (s.find('/') != std::string_view::npos ||
                          s.find('@') != std::string_view::npos);
  auto finish_name = [&](KindVerdict& v) {
    v.kind = Label::Name;
    if (composite) {
      v.reasons.push_back(s.find('/') != std::string_view::npos
                              ? "composite.separator:/"
                              : "composite.separator:@");
      v.confidence = 0.5;
    }
    v.reasons.push_back("name.fallback");
    return v;
  };

  const auto parsed = parse_formula(s, config);
  if (parsed) {
    verdict.reasons.push_back("formula.grammar");
    if (parsed.ast->has_digit()) {
      verdict.kind = Label::Formula;
      verdict.reasons.push_back("formula.digit");
      return verdict;
    }
    if (parsed.ast->distinct_elements().size() >= 2) {
      verdict.kind = Label::Formula;
      verdict.reasons.push_back("formula.multi_element");
      return verdict;
    }
    // A lone symbol ("Si") could be either a formula or a name.
    verdict.reasons.push_back("formula.single_element");
    verdict.confidence = 0.5;
    return finish_name(verdict);
  }

  verdict.reasons.push_back("formula.reject@" +
                            std::to_string(parsed.reject.position) + ":" +
                            parsed.reject.reason);
  if (acronym_shape(s)) {
    verdict.kind = Label::Acronym;
    verdict.reasons.push_back("acronym.shape");
    return verdict;
  }
  if (s.find(' ') != std::string_view::npos) {
    verdict.reasons.push_back("acronym.has_space");
  } else if (s.size() < 2 || s.size() > 10) {
    verdict.reasons.push_back("acronym.length");
  } else {
    verdict.reasons.push_back("acronym.case_ratio");
  }
  return finish_name(verdict);
}

namespace {

// Letters an acronym contributes to matching; a trailing plural 's' is
// ignored ("CNTs").
std::string acronym_letters(std::string_view acronym) {
  std::string letters;
  for (std::size_t i = 0; i < acronym.size(); ++i) {
    const char c = acronym[i];
    if (!std::isalpha(static_cast<unsigned char>(c))) continue;
    if (i + 1 == acronym.size() && c == 's' && i > 0) continue;
    letters.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
  }
  return letters;
}

bool ends_clause(std::string_view word) {
  const char c = word.back();
  return c == ',' || c == ';' || c == '.' || c == ':' || c == ')' || c == '(' ||
         word.find('(') != std::string_view::npos ||
         word.find(')') != std::string_view::npos;
}

// In-order subsequence coverage. The first letter must sit on the phrase's
// first character and the last word must contribute at least one match.
double coverage(const std::vector<std::string_view>& words,
                const std::string& letters) {
  std::string flat;
  std::vector<std::size_t> word_of;
  for (std::size_t w = 0; w < words.size(); ++w) {
    for (char c : words[w]) {
      if (!std::isalnum(static_cast<unsigned char>(c))) continue;
      flat.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
      word_of.push_back(w);
    }
  }
  if (flat.empty() || flat[0] != letters[0]) return 0.0;
  std::size_t matched = 1;
  std::size_t pos = 1;
  bool last_word_hit = words.size() == 1;
  for (std::size_t j = 1; j < letters.size(); ++j) {
    const auto found = flat.find(letters[j], pos);
    if (found == std::string::npos) continue;
    ++matched;
    pos = found + 1;
    if (word_of[found] + 1 == words.size()) last_word_hit = true;
  }
  if (!last_word_hit) return 0.0;
  return static_cast<double>(matched) / static_cast<double>(letters.size());
}

}  // namespace

std::vector<NameAcronymPair> extract_name_acronym_pairs(std::string_view text) {
  std::vector<NameAcronymPair> pairs;
  std::size_t search = 0;
  while (true) {
    const auto open = text.find('(', search);
    if (open == std::string_view::npos) break;
    const auto close = text.find(')', open + 1);
    if (close == std::string_view::npos) break;
    search = open + 1;
    const auto inner = text.substr(open + 1, close - open - 1);
    if (inner.find('(') != std::string_view::npos) continue;
    const auto acronym = text::trim(inner);
    if (!acronym_shape(acronym)) continue;
    const std::string letters = acronym_letters(acronym);
    if (letters.empty()) continue;

    // Words before the parenthesis, nearest last, stopping at clause ends.
    std::vector<std::string_view> before;
    {
      std::string_view head = text::trim(text.substr(0, open));
      while (!head.empty()) {
        const auto space = head.find_last_of(" \t\n\r");
        const auto word = space == std::string_view::npos ? head : head.substr(space + 1);
        if (!before.empty() && ends_clause(word)) break;
        if (before.empty() && ends_clause(word)) break;
        before.push_back(word);
        if (space == std::string_view::npos) break;
        head = text::trim(head.substr(0, space));
      }
      std::reverse(before.begin(), before.end());
    }
    const std::size_t window =
        std::min(before.size(), std::min(letters.size() + 5, 2 * letters.size()));
    for (std::size_t len = 1; len <= window; ++len) {
      std::vector<std::string_view> phrase(before.end() - static_cast<std::ptrdiff_t>(len),
                                           before.end());
      const double cov = coverage(phrase, letters);
      if (cov < kMinAcronymCoverage) continue;
      std::string name;
      for (const auto& w : phrase) {
        if (!name.empty()) name.push_back(' ');
        name += w;
      }
      pairs.push_back({std::move(name), std::string(acronym), cov});
      break;
    }
  }
  return pairs;
}

}  // namespace mkg::chemlex
