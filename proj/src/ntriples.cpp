#include "mkg/ntriples.hpp"

#include <cctype>
#include <cstdio>

#include "mkg/error.hpp"

namespace mkg::nt {

Term iri(std::string value) { return {TermKind::Iri, std::move(value), {}, {}}; }
Term blank(std::string label) { return {TermKind::Blank, std::move(label), {}, {}}; }
Term literal(std::string text, std::string datatype) {
  return {TermKind::Literal, std::move(text), std::move(datatype), {}};
}

namespace {

class LineParser {
 public:
  LineParser(std::string_view s, std::size_t line_no) : s_(s), line_(line_no) {}

  std::optional<Statement> run() {
    skip_ws();
    if (done() || peek() == '#') return std::nullopt;
    Statement st;
    st.subject = term();
    if (st.subject.kind == TermKind::Literal) fail("literal subject");
    skip_ws();
    st.predicate = term();
    if (st.predicate.kind != TermKind::Iri) fail("predicate must be an IRI");
    skip_ws();
    st.object = term();
    skip_ws();
    if (done() || peek() != '.') fail("missing terminating '.'");
    ++pos_;
    skip_ws();
    if (!done() && peek() != '#') fail("trailing characters");
    return st;
  }

 private:
  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorKind::MalformedFile,
                what + " at column " + std::to_string(pos_ + 1), line_);
  }
  bool done() const { return pos_ >= s_.size(); }
  char peek() const { return s_[pos_]; }
  void skip_ws() {
    while (!done() && (peek() == ' ' || peek() == '\t' || peek() == '\r')) ++pos_;
  }

  Term term() {
    if (done()) fail("unexpected end of line");
    if (peek() == '<') return {TermKind::Iri, iri_ref(), {}, {}};
    if (peek() == '_') {
      if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != ':') fail("bad blank node");
      pos_ += 2;
      const std::size_t start = pos_;
      while (!done() && peek() != ' ' && peek() != '\t' && peek() != '.') ++pos_;
      if (pos_ == start) fail("empty blank node label");
      return {TermKind::Blank, std::string(s_.substr(start, pos_ - start)), {}, {}};
    }
    if (peek() == '"') {
      Term t{TermKind::Literal, quoted(), {}, {}};
      if (!done() && peek() == '^') {
        if (pos_ + 1 >= s_.size() || s_[pos_ + 1] != '^') fail("bad datatype marker");
        pos_ += 2;
        t.datatype = iri_ref();
      } else if (!done() && peek() == '@') {
        const std::size_t start = ++pos_;
        while (!done() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '-')) {
          ++pos_;
        }
        t.language = std::string(s_.substr(start, pos_ - start));
      }
      return t;
    }
    fail("unexpected character");
  }

  std::string iri_ref() {
    if (peek() != '<') fail("expected '<'");
    const std::size_t start = ++pos_;
    while (!done() && peek() != '>') {
      const char c = peek();
      if (c == ' ' || c == '<' || c == '"') fail("illegal character in IRI");
      ++pos_;
    }
    if (done()) fail("unterminated IRI");
    std::string out(s_.substr(start, pos_ - start));
    ++pos_;
    return out;
  }

  std::string quoted() {
    ++pos_;
    std::string out;
    while (!done() && peek() != '"') {
      char c = peek();
      ++pos_;
      if (c != '\\') {
        out.push_back(c);
        continue;
      }
      if (done()) fail("dangling escape");
      c = peek();
      ++pos_;
      switch (c) {
        case 't': out.push_back('\t'); break;
        case 'n': out.push_back('\n'); break;
        case 'r': out.push_back('\r'); break;
        case 'b': out.push_back('\b'); break;
        case 'f': out.push_back('\f'); break;
        case '"': out.push_back('"'); break;
        case '\'': out.push_back('\''); break;
        case '\\': out.push_back('\\'); break;
        case 'u': append_utf8(out, hex(4)); break;
        case 'U': append_utf8(out, hex(8)); break;
        default: fail("unknown escape");
      }
    }
    if (done()) fail("unterminated literal");
    ++pos_;
    return out;
  }

  unsigned long hex(std::size_t n) {
    if (pos_ + n > s_.size()) fail("short unicode escape");
    unsigned long v = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const char c = s_[pos_ + i];
      v <<= 4;
      if (c >= '0' && c <= '9') v |= static_cast<unsigned long>(c - '0');
      else if (c >= 'a' && c <= 'f') v |= static_cast<unsigned long>(c - 'a' + 10);
      else if (c >= 'A' && c <= 'F') v |= static_cast<unsigned long>(c - 'A' + 10);
      else fail("bad hex digit");
    }
    pos_ += n;
    return v;
  }

  static void append_utf8(std::string& out, unsigned long cp) {
    if (cp < 0x80) {
      out.push_back(static_cast<char>(cp));
    } else if (cp < 0x800) {
      out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else if (cp < 0x10000) {
      out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    } else {
      out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
      out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
    }
  }

  std::string_view s_;
  std::size_t line_;
  std::size_t pos_ = 0;
};

std::string escape_literal(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04X", static_cast<unsigned>(c));
          out += buf;
        } else {
          out.push_back(c);
        }
    }
  }
  return out;
}

}  // namespace

std::optional<Statement> parse_line(std::string_view line, std::size_t line_no) {
  return LineParser(line, line_no).run();
}

std::string format(const Term& term) {
  switch (term.kind) {
    case TermKind::Iri: return "<" + term.value + ">";
    case TermKind::Blank: return "_:" + term.value;
    case TermKind::Literal: {
      std::string out = "\"" + escape_literal(term.value) + "\"";
      if (!term.datatype.empty()) out += "^^<" + term.datatype + ">";
      else if (!term.language.empty()) out += "@" + term.language;
      return out;
    }
  }
  return {};
}

std::string format(const Statement& statement) {
  return format(statement.subject) + " " + format(statement.predicate) + " " +
         format(statement.object) + " .";
}

}  // namespace mkg::nt
