#include "cmc4/exprio.hpp"

#include <cctype>
#include <fstream>
#include <sstream>

namespace cmc4 {

namespace {

struct Token {
  enum Kind { Int, Ident, Plus, Minus, Star, Caret, LParen, RParen, End } kind;
  std::string text;
  int line, col;
};

class Lexer {
public:
  Lexer(const std::string& s, int line0, int col0) : s_(s), line_(line0), col_(col0) {}

  Token next() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) advance();
    if (pos_ >= s_.size()) return {Token::End, "", line_, col_};
    int l = line_, c = col_;
    char ch = s_[pos_];
    if (std::isdigit(static_cast<unsigned char>(ch))) {
      std::string t;
      while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
        t += s_[pos_];
        advance();
      }
      return {Token::Int, t, l, c};
    }
    if (std::isalpha(static_cast<unsigned char>(ch))) {
      std::string t;
      while (pos_ < s_.size() && std::isalnum(static_cast<unsigned char>(s_[pos_]))) {
        t += s_[pos_];
        advance();
      }
      return {Token::Ident, t, l, c};
    }
    advance();
    switch (ch) {
      case '+': return {Token::Plus, "+", l, c};
      case '-': return {Token::Minus, "-", l, c};
      case '*': return {Token::Star, "*", l, c};
      case '^': return {Token::Caret, "^", l, c};
      case '(': return {Token::LParen, "(", l, c};
      case ')': return {Token::RParen, ")", l, c};
      default:
        throw ParseError(std::string("unexpected character '") + ch + "'", l, c);
    }
  }

private:
  void advance() {
    if (s_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }
  const std::string& s_;
  size_t pos_ = 0;
  int line_, col_;
};

class Parser {
public:
  Parser(const std::string& s, const VarTable& vt, int line0, int col0)
      : lex_(s, line0, col0), vt_(vt) {
    cur_ = lex_.next();
  }

  Poly run() {
    Poly p = expr();
    if (cur_.kind != Token::End)
      throw ParseError("trailing input '" + cur_.text + "'", cur_.line, cur_.col);
    return p;
  }

private:
  void bump() { cur_ = lex_.next(); }

  Poly expr() {
    bool neg = false;
    if (cur_.kind == Token::Minus) {
      neg = true;
      bump();
    }
    Poly p = term();
    if (neg) p = -p;
    while (cur_.kind == Token::Plus || cur_.kind == Token::Minus) {
      bool minus = cur_.kind == Token::Minus;
      bump();
      Poly t = term();
      p = minus ? p - t : p + t;
    }
    return p;
  }

  Poly term() {
    Poly p = factor();
    while (cur_.kind == Token::Star) {
      bump();
      p = p * factor();
    }
    return p;
  }

  Poly factor() {
    Poly b = base();
    if (cur_.kind == Token::Caret) {
      bump();
      if (cur_.kind != Token::Int)
        throw ParseError("exponent must be a nonnegative integer", cur_.line, cur_.col);
      unsigned long e = std::stoul(cur_.text);
      bump();
      b = b.pow(static_cast<unsigned>(e));
    }
    return b;
  }

  Poly base() {
    switch (cur_.kind) {
      case Token::Int: {
        Poly p = Poly::constant(vt_, Int(cur_.text));
        bump();
        return p;
      }
      case Token::Ident: {
        int v = vt_.index_of(cur_.text);
        if (v < 0)
          throw Error(Errc::UnknownVariable,
                      "unknown variable '" + cur_.text + "' at line " +
                          std::to_string(cur_.line) + ", col " + std::to_string(cur_.col));
        bump();
        return Poly::variable(vt_, v);
      }
      case Token::LParen: {
        bump();
        Poly p = expr();
        if (cur_.kind != Token::RParen)
          throw ParseError("expected ')'", cur_.line, cur_.col);
        bump();
        return p;
      }
      default:
        throw ParseError("expected integer, variable, or '('" +
                             (cur_.text.empty() ? std::string() : " before '" + cur_.text + "'"),
                         cur_.line, cur_.col);
    }
  }

  Lexer lex_;
  const VarTable& vt_;
  Token cur_;
};

Poly parse_at(const std::string& text, const VarTable& vt, int line0, int col0) {
  return Parser(text, vt, line0, col0).run();
}

const std::unordered_map<std::string, std::string>& latex_names() {
  static const std::unordered_map<std::string, std::string> m = {
      {"c", "c"},
      {"lam", "\\lambda"},
      {"lam1", "\\lambda'"},
      {"lam2", "\\lambda''"},
      {"lam3", "\\lambda'''"},
      {"lam4", "\\lambda''''"},
      {"lam5", "\\lambda'''''"},
      {"T", "T"},
      {"T1", "T'"},
      {"T2", "T''"},
      {"T3", "T'''"},
      {"T4", "T''''"},
      {"kap", "\\kappa"},
      {"tau", "\\tau"},
      {"y1", "y_1"},
      {"y2", "y_2"},
      {"y3", "y_3"},
      {"a", "a"},
      {"w2", "\\omega_{22}^1"},
      {"w3", "\\omega_{33}^1"},
      {"w4", "\\omega_{44}^1"},
      {"mu2", "\\lambda_2"},
      {"mu3", "\\lambda_3"},
      {"mu4", "\\lambda_4"},
      {"Da", "e_1(a)"},
      {"u", "u"},
  };
  return m;
}

}  // namespace

Poly parse(const std::string& text, const VarTable& vt) { return parse_at(text, vt, 1, 1); }

std::string render(const Poly& p) {
  if (p.is_zero()) return "0";
  const VarTable& vt = p.table();
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Int ac = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string facs;
    for (int v = 0; v < vt.size(); ++v) {
      if (m[v] == 0) continue;
      if (!facs.empty()) facs += "*";
      facs += vt.name(v);
      if (m[v] > 1) facs += "^" + std::to_string(m[v]);
    }
    if (facs.empty())
      out += ac.get_str();
    else if (ac == 1)
      out += facs;
    else
      out += ac.get_str() + "*" + facs;
  }
  return out;
}

std::string render_latex(const Poly& p) {
  if (p.is_zero()) return "0";
  const VarTable& vt = p.table();
  std::string out;
  bool first = true;
  for (const auto& [m, c] : p.terms()) {
    Int ac = c < 0 ? Int(-c) : c;
    if (first) {
      if (c < 0) out += "-";
      first = false;
    } else {
      out += c < 0 ? " - " : " + ";
    }
    std::string facs;
    for (int v = 0; v < vt.size(); ++v) {
      if (m[v] == 0) continue;
      if (!facs.empty()) facs += " ";
      auto it = latex_names().find(vt.name(v));
      facs += it != latex_names().end() ? it->second : vt.name(v);
      if (m[v] > 1)
        facs += m[v] < 10 ? "^" + std::to_string(m[v]) : "^{" + std::to_string(m[v]) + "}";
    }
    if (facs.empty())
      out += ac.get_str();
    else if (ac == 1)
      out += facs;
    else
      out += ac.get_str() + facs;
  }
  return out;
}

const Fixture* FixtureFile::find(const std::string& id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &entries_[it->second];
}

const Fixture& FixtureFile::at(const std::string& id) const {
  const Fixture* f = find(id);
  if (!f) throw Error(Errc::UnknownVariable, "no fixture with id '" + id + "'");
  return *f;
}

void FixtureFile::add(Fixture f) {
  if (index_.count(f.id)) throw Error(Errc::DuplicateId, "duplicate fixture id '" + f.id + "'");
  index_.emplace(f.id, entries_.size());
  entries_.push_back(std::move(f));
}

FixtureFile load_fixtures(const std::string& path, const VarTable& vt) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::IoError, "cannot open fixture file '" + path + "'");
  FixtureFile ff;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    std::string note;
    auto hash = line.find('#');
    if (hash != std::string::npos) {
      note = line.substr(hash + 1);
      while (!note.empty() && note.front() == ' ') note.erase(note.begin());
      line = line.substr(0, hash);
    }
    auto notspace = line.find_first_not_of(" \t\r");
    if (notspace == std::string::npos) continue;
    auto colon = line.find(':');
    if (colon == std::string::npos)
      throw ParseError("missing ':' in fixture line", lineno, 1);
    std::string id = line.substr(0, colon);
    auto b = id.find_first_not_of(" \t");
    auto e = id.find_last_not_of(" \t");
    if (b == std::string::npos) throw ParseError("empty fixture id", lineno, 1);
    id = id.substr(b, e - b + 1);
    std::string body = line.substr(colon + 1);
    Fixture f;
    f.id = id;
    f.expr = parse_at(body, vt, lineno, static_cast<int>(colon) + 2);
    f.note = note;
    f.line = lineno;
    ff.add(std::move(f));
  }
  return ff;
}

}  // namespace cmc4
