#include <fstream>
#include <sstream>
#include <stdexcept>

#include "wfsynth/sltl.hpp"

namespace wfsynth {

namespace {

bool is_word_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' || c == ':' || c == '.';
}

constexpr std::string_view kOpenCurly = "\xE2\x80\x9C";   // “
constexpr std::string_view kCloseCurly = "\xE2\x80\x9D";  // ”

class Parser {
 public:
  Parser(std::string_view text, const Vocabulary& vocab) : text_(text), vocab_(vocab) {}

  Formula formula() {
    auto f = implies();
    expect_end();
    return f;
  }

  ServiceConstraint service_constraint() {
    auto sc = sc_or();
    expect_end();
    return sc;
  }

  // `kind(arg, ...)` after the `template:` prefix.
  Formula template_call() {
    skip_ws();
    const auto start = pos_;
    const auto kind_name = word();
    if (kind_name.empty()) fail("expected template name", start);
    TemplateKind kind;
    try {
      kind = template_kind_from_string(kind_name);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), start);
    }
    expect('(');
    std::vector<ServiceConstraint> params;
    skip_ws();
    if (!accept(')')) {
      do {
        params.push_back(sc_or());
      } while (accept(','));
      expect(')');
    }
    expect_end();
    try {
      return make_template(kind, params);
    } catch (const std::invalid_argument& e) {
      fail(e.what(), start);
    }
  }

 private:
  [[noreturn]] void fail(const std::string& message, std::size_t at) const {
    throw ParseError(message, 1, at + 1);
  }

  void skip_ws() {
    while (pos_ < text_.size() && (text_[pos_] == ' ' || text_[pos_] == '\t' || text_[pos_] == '\r' || text_[pos_] == '\n')) ++pos_;
  }

  bool at_end() {
    skip_ws();
    return pos_ >= text_.size();
  }

  bool peek(std::string_view s) {
    skip_ws();
    return text_.substr(pos_, s.size()) == s;
  }

  bool accept(std::string_view s) {
    if (!peek(s)) return false;
    pos_ += s.size();
    return true;
  }

  bool accept(char c) { return accept(std::string_view(&c, 1)); }

  void expect(char c) {
    if (accept(c)) return;
    if (pos_ >= text_.size()) fail(std::string("expected '") + c + "' but reached end of input", pos_);
    fail(std::string("expected '") + c + "'", pos_);
  }

  void expect_end() {
    if (!at_end()) fail("unexpected trailing input", pos_);
  }

  // Reads a word without consuming whitespace after it.
  std::string_view word() {
    skip_ws();
    const auto start = pos_;
    while (pos_ < text_.size() && is_word_char(text_[pos_])) ++pos_;
    return text_.substr(start, pos_ - start);
  }

  std::string_view peek_word() {
    const auto saved = pos_;
    const auto w = word();
    pos_ = saved;
    return w;
  }

  // Identifier or quoted display name.
  struct RefToken {
    std::string text;
    bool quoted;
    std::size_t at;
  };

  RefToken ref_token() {
    skip_ws();
    const auto at = pos_;
    if (pos_ < text_.size() && text_[pos_] == '"') {
      const auto close = text_.find('"', pos_ + 1);
      if (close == std::string_view::npos) fail("unterminated quoted name", at);
      RefToken tok{std::string(text_.substr(pos_ + 1, close - pos_ - 1)), true, at};
      pos_ = close + 1;
      return tok;
    }
    if (text_.substr(pos_, kOpenCurly.size()) == kOpenCurly) {
      const auto body = pos_ + kOpenCurly.size();
      const auto close = text_.find(kCloseCurly, body);
      if (close == std::string_view::npos) fail("unterminated quoted name", at);
      RefToken tok{std::string(text_.substr(body, close - body)), true, at};
      pos_ = close + kCloseCurly.size();
      return tok;
    }
    const auto w = word();
    if (w.empty()) {
      if (pos_ >= text_.size()) fail("expected identifier but reached end of input", at);
      fail("expected identifier", at);
    }
    return RefToken{std::string(w), false, at};
  }

  // Quoted text is a display name first and an id second; bare words the
  // other way round.
  TermRef resolve(const Taxonomy& tax, const RefToken& tok, std::string_view what) const {
    const auto by_id = tax.find(tok.text);
    if (by_id && !tok.quoted) return *by_id;
    const auto hits = tax.find_by_name(tok.text);
    if (hits.size() > 1) {
      throw LookupError("ambiguous " + std::string(what) + " name \"" + tok.text + "\" at column " + std::to_string(tok.at + 1));
    }
    if (hits.size() == 1) return hits.front();
    if (by_id) return *by_id;
    throw LookupError("unknown " + std::string(what) + " '" + tok.text + "' at column " + std::to_string(tok.at + 1));
  }

  // --- formulas -----------------------------------------------------------

  Formula implies() {
    auto lhs = disjunct();
    if (accept("->")) return implication(std::move(lhs), implies());
    return lhs;
  }

  Formula disjunct() {
    auto lhs = conjunct();
    while (accept('|')) lhs = disjunction(std::move(lhs), conjunct());
    return lhs;
  }

  Formula conjunct() {
    auto lhs = until_expr();
    while (accept('&')) lhs = conjunction(std::move(lhs), until_expr());
    return lhs;
  }

  Formula until_expr() {
    auto lhs = unary();
    if (peek_word() == "U") {
      word();
      return until(std::move(lhs), until_expr());
    }
    return lhs;
  }

  Formula unary() {
    skip_ws();
    if (pos_ >= text_.size()) fail("unexpected end of input", pos_);
    const auto at = pos_;
    if (accept('!')) return negation(unary());
    if (accept('<')) {
      auto sc = sc_or();
      expect('>');
      return diamond(std::move(sc), unary());
    }
    if (accept('[')) {
      auto sc = sc_or();
      expect(']');
      return box(std::move(sc), unary());
    }
    if (accept('(')) {
      auto f = implies();
      expect(')');
      return f;
    }
    const auto w = word();
    if (w == "true") return f_true();
    if (w == "false") return f_false();
    if (w == "F") return eventually(unary());
    if (w == "G") return always(unary());
    if (w == "X") return next(unary());
    if (w == "type") {
      expect('(');
      const auto tok = ref_token();
      expect(')');
      return type_atom(resolve(*vocab_.types, tok, "type"));
    }
    if (w.empty()) fail("unexpected character '" + std::string(1, text_[at]) + "'", at);
    fail("unexpected identifier '" + std::string(w) + "' (type atoms are written type(id))", at);
  }

  // --- service constraints ------------------------------------------------

  ServiceConstraint sc_or() {
    auto lhs = sc_and();
    while (accept('|')) lhs = ServiceConstraint::disjunction(std::move(lhs), sc_and());
    return lhs;
  }

  ServiceConstraint sc_and() {
    auto lhs = sc_unary();
    while (accept('&')) lhs = ServiceConstraint::conjunction(std::move(lhs), sc_unary());
    return lhs;
  }

  ServiceConstraint sc_unary() {
    if (accept('!')) return ServiceConstraint::negation(sc_unary());
    if (accept('(')) {
      auto sc = sc_or();
      expect(')');
      return sc;
    }
    const auto tok = ref_token();
    if (!tok.quoted && tok.text == "true") return ServiceConstraint::any();
    return ServiceConstraint::atom(resolve(*vocab_.services, tok, "service term"));
  }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

// Cuts a `#` comment, ignoring `#` inside double quotes.
std::string_view strip_comment(std::string_view line) {
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (line[i] == '"') quoted = !quoted;
    if (line[i] == '#' && !quoted) return line.substr(0, i);
  }
  return line;
}

bool is_name_char(char c) { return is_word_char(c) || c == '\''; }

}  // namespace

Formula parse_formula(std::string_view text, const Vocabulary& vocab) { return Parser(text, vocab).formula(); }

ServiceConstraint parse_service_constraint(std::string_view text, const Vocabulary& vocab) {
  return Parser(text, vocab).service_constraint();
}

Formula parse_constraint(std::string_view text, const Vocabulary& vocab) {
  const auto body = trim(text);
  constexpr std::string_view prefix = "template:";
  if (body.substr(0, prefix.size()) == prefix) {
    const auto offset = static_cast<std::size_t>(body.data() - text.data()) + prefix.size();
    try {
      return Parser(body.substr(prefix.size()), vocab).template_call();
    } catch (const ParseError& e) {
      throw ParseError(e.message(), 1, e.column() + offset);
    }
  }
  return parse_formula(text, vocab);
}

const NamedConstraint* ConstraintSet::find(std::string_view name) const {
  for (const auto& e : entries)
    if (e.name == name) return &e;
  return nullptr;
}

Formula ConstraintSet::conjunction() const {
  std::vector<Formula> parts;
  for (const auto& e : entries) parts.push_back(e.formula);
  return conjoin(parts);
}

ConstraintSet parse_constraint_file(std::string_view text, const Vocabulary& vocab) {
  ConstraintSet set;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    auto end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const auto raw = text.substr(start, end - start);
    start = end + 1;
    ++line_no;

    auto line = trim(strip_comment(raw));
    if (line.empty()) continue;

    NamedConstraint entry;
    entry.line = line_no;
    // `name = expr`; names never contain '=' and formulas never do outside quotes.
    std::size_t n = 0;
    while (n < line.size() && is_name_char(line[n])) ++n;
    const auto rest = trim(line.substr(n));
    if (n > 0 && !rest.empty() && rest.front() == '=' && line.substr(0, n) != "template") {
      entry.name = std::string(line.substr(0, n));
      line = trim(rest.substr(1));
      if (set.find(entry.name)) throw ParseError("constraint '" + entry.name + "' defined twice", line_no);
    }
    entry.text = std::string(line);
    try {
      entry.formula = parse_constraint(line, vocab);
    } catch (const ParseError& e) {
      throw ParseError(e.message(), line_no, e.column());
    } catch (const LookupError& e) {
      throw ParseError(e.what(), line_no);
    }
    set.entries.push_back(std::move(entry));
    if (end == text.size()) break;
  }
  return set;
}

ConstraintSet load_constraint_file(const std::filesystem::path& path, const Vocabulary& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path.string() + "': no such file");
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_constraint_file(buf.str(), vocab);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.message(), e.line(), e.column());
  }
}

}  // namespace wfsynth
