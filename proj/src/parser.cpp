#include "nil/parser.hpp"

#include <cctype>
#include <optional>

namespace nil {
namespace {

enum class Tok {
  Ident, Number, Semi, Colon, Comma, Dot, Assign,
  Lt, Gt, Le, Ge, AndAnd, OrOr, Bang,
  Plus, Minus, Star, Caret, LParen, RParen, End
};

struct Token {
  Tok kind;
  std::string text;
  int line, col;
};

std::vector<Token> lex(const std::string& s) {
  std::vector<Token> out;
  int line = 1, col = 1;
  size_t i = 0;
  auto push = [&](Tok k, std::string t, int l, int c) {
    out.push_back({k, std::move(t), l, c});
  };
  while (i < s.size()) {
    char c = s[i];
    int l = line, co = col;
    auto adv = [&](size_t n) {
      for (size_t j = 0; j < n; ++j) {
        if (s[i + j] == '\n') {
          ++line;
          col = 1;
        } else {
          ++col;
        }
      }
      i += n;
    };
    if (isspace((unsigned char)c)) {
      adv(1);
      continue;
    }
    if (isalpha((unsigned char)c) || c == '_') {
      size_t j = i;
      while (j < s.size() && (isalnum((unsigned char)s[j]) || s[j] == '_')) ++j;
      push(Tok::Ident, s.substr(i, j - i), l, co);
      adv(j - i);
      continue;
    }
    if (isdigit((unsigned char)c) ||
        (c == '.' && i + 1 < s.size() && isdigit((unsigned char)s[i + 1]))) {
      size_t j = i;
      while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
      if (j < s.size() && s[j] == '.') {
        ++j;
        while (j < s.size() && isdigit((unsigned char)s[j])) ++j;
      }
      if (j < s.size() && (s[j] == 'e' || s[j] == 'E')) {
        size_t k = j + 1;
        if (k < s.size() && (s[k] == '+' || s[k] == '-')) ++k;
        if (k < s.size() && isdigit((unsigned char)s[k])) {
          ++k;
          while (k < s.size() && isdigit((unsigned char)s[k])) ++k;
          j = k;
        }
      }
      push(Tok::Number, s.substr(i, j - i), l, co);
      adv(j - i);
      continue;
    }
    auto two = [&](char a, char b) {
      return c == a && i + 1 < s.size() && s[i + 1] == b;
    };
    if (two('<', '=')) { push(Tok::Le, "<=", l, co); adv(2); continue; }
    if (two('>', '=')) { push(Tok::Ge, ">=", l, co); adv(2); continue; }
    if (two('&', '&')) { push(Tok::AndAnd, "&&", l, co); adv(2); continue; }
    if (two('|', '|')) { push(Tok::OrOr, "||", l, co); adv(2); continue; }
    Tok k;
    switch (c) {
      case ';': k = Tok::Semi; break;
      case ':': k = Tok::Colon; break;
      case ',': k = Tok::Comma; break;
      case '.': k = Tok::Dot; break;
      case '=': k = Tok::Assign; break;
      case '<': k = Tok::Lt; break;
      case '>': k = Tok::Gt; break;
      case '!': k = Tok::Bang; break;
      case '+': k = Tok::Plus; break;
      case '-': k = Tok::Minus; break;
      case '*': k = Tok::Star; break;
      case '^': k = Tok::Caret; break;
      case '(': k = Tok::LParen; break;
      case ')': k = Tok::RParen; break;
      default:
        throw ParseError(l, co, std::string("unexpected character '") + c + "'");
    }
    push(k, std::string(1, c), l, co);
    adv(1);
  }
  out.push_back({Tok::End, "", line, col});
  return out;
}

bool is_function_name(const std::string& s) {
  return s == "sin" || s == "cos" || s == "exp" || s == "log";
}
bool is_keyword(const std::string& s) {
  return s == "vars" || s == "common" || s == "phi" || s == "psi" ||
         s == "degree" || s == "option" || is_function_name(s);
}

struct Parser {
  std::vector<Token> toks;
  size_t pos = 0;
  std::vector<std::string> vars;

  const Token& peek() const { return toks[pos]; }
  const Token& get() { return toks[pos++]; }
  bool accept(Tok k) {
    if (peek().kind == k) {
      ++pos;
      return true;
    }
    return false;
  }
  Token expect(Tok k, const char* what) {
    if (peek().kind != k)
      throw ParseError(peek().line, peek().col,
                       std::string("expected ") + what + ", got '" +
                           peek().text + "'");
    return get();
  }

  int var_index(const Token& t) {
    for (size_t i = 0; i < vars.size(); ++i)
      if (vars[i] == t.text) return (int)i;
    throw UndeclaredVariable(t.line, t.col, t.text);
  }

  Rat number(const Token& t) {
    auto q = rat_of_decimal(t.text);
    if (!q) throw ParseError(t.line, t.col, "malformed number '" + t.text + "'");
    return *q;
  }

  // expr := term (('+'|'-') term)*
  ExprPtr parse_expr() {
    ExprPtr e = parse_term();
    for (;;) {
      if (accept(Tok::Plus)) {
        e = e_add(e, parse_term());
      } else if (accept(Tok::Minus)) {
        e = e_sub(e, parse_term());
      } else {
        return e;
      }
    }
  }
  ExprPtr parse_term() {
    ExprPtr e = parse_factor();
    while (accept(Tok::Star)) e = e_mul(e, parse_factor());
    return e;
  }
  ExprPtr parse_factor() {
    if (accept(Tok::Minus)) {
      ExprPtr e = parse_factor();
      if (e->kind == ExprKind::Const) return e_const(-e->value);
      return e_neg(e);
    }
    return parse_power();
  }
  ExprPtr parse_power() {
    ExprPtr base = parse_primary();
    if (accept(Tok::Caret)) {
      const Token& t = expect(Tok::Number, "natural exponent");
      Rat q = number(t);
      if (q.get_den() != 1 || q < 1)
        throw BadDegree(t.line, t.col,
                        "exponent must be a natural number >= 1");
      if (q > 64) throw BadDegree(t.line, t.col, "exponent too large");
      return e_pow(base, (unsigned)q.get_num().get_ui());
    }
    return base;
  }
  ExprPtr parse_primary() {
    const Token& t = peek();
    if (t.kind == Tok::Number) {
      get();
      return e_const(number(t));
    }
    if (t.kind == Tok::LParen) {
      get();
      ExprPtr e = parse_expr();
      expect(Tok::RParen, "')'");
      return e;
    }
    if (t.kind == Tok::Ident) {
      if (is_function_name(t.text)) {
        get();
        expect(Tok::LParen, "'(' after function name");
        ExprPtr arg = parse_expr();
        expect(Tok::RParen, "')'");
        if (t.text == "sin") return e_sin(arg);
        if (t.text == "cos") return e_cos(arg);
        if (t.text == "exp") return e_exp(arg);
        return e_log(arg);
      }
      get();
      int idx = var_index(t);
      return e_var(idx, t.text);
    }
    throw ParseError(t.line, t.col, "expected expression, got '" + t.text + "'");
  }

  std::optional<Rel> peek_rel() {
    switch (peek().kind) {
      case Tok::Lt: return Rel::Lt;
      case Tok::Gt: return Rel::Gt;
      case Tok::Le: return Rel::Le;
      case Tok::Ge: return Rel::Ge;
      case Tok::Assign: return Rel::Eq;
      default: return std::nullopt;
    }
  }

  // atom := expr REL expr, folded to `lhs REL 0`
  FormulaPtr parse_atom() {
    ExprPtr lhs = parse_expr();
    auto r = peek_rel();
    if (!r)
      throw ParseError(peek().line, peek().col,
                       "expected relation, got '" + peek().text + "'");
    get();
    ExprPtr rhs = parse_expr();
    ExprPtr folded;
    if (rhs->kind == ExprKind::Const) {
      if (rhs->value == 0)
        folded = lhs;
      else if (rhs->value < 0)
        folded = e_add(lhs, e_const(-rhs->value));
      else
        folded = e_sub(lhs, rhs);
    } else {
      folded = e_sub(lhs, rhs);
    }
    return f_atom({folded, *r});
  }

  // formula := or-level; '(' is ambiguous between a grouped formula and a
  // parenthesized expression, resolved by backtracking.
  FormulaPtr parse_formula() {
    FormulaPtr f = parse_conj();
    while (accept(Tok::OrOr)) f = f_or(f, parse_conj());
    return f;
  }
  FormulaPtr parse_conj() {
    FormulaPtr f = parse_unit();
    while (accept(Tok::AndAnd)) f = f_and(f, parse_unit());
    return f;
  }
  FormulaPtr parse_unit() {
    if (accept(Tok::Bang)) return f_not(parse_unit());
    if (peek().kind == Tok::LParen) {
      size_t save = pos;
      get();
      try {
        FormulaPtr inner = parse_formula();
        expect(Tok::RParen, "')'");
        // "(x + y)^2 > 0" must not swallow "(x + y)" as a formula group;
        // a grouped formula cannot be followed by an expression operator.
        switch (peek().kind) {
          case Tok::Caret:
          case Tok::Star:
          case Tok::Plus:
          case Tok::Minus:
          case Tok::Lt:
          case Tok::Gt:
          case Tok::Le:
          case Tok::Ge:
          case Tok::Assign:
            pos = save;
            return parse_atom();
          default:
            return inner;
        }
      } catch (const UndeclaredVariable&) {
        throw;
      } catch (const ParseError&) {
        pos = save;
        return parse_atom();
      }
    }
    return parse_atom();
  }

  std::vector<std::string> parse_namelist() {
    std::vector<std::string> names;
    for (;;) {
      const Token& t = expect(Tok::Ident, "identifier");
      if (is_keyword(t.text))
        throw ParseError(t.line, t.col, "'" + t.text + "' is reserved");
      names.push_back(t.text);
      if (!accept(Tok::Comma) && peek().kind != Tok::Ident) break;
    }
    return names;
  }

  Problem parse_problem_body() {
    Problem p;
    bool have_phi = false, have_psi = false, have_degree = false;
    while (peek().kind != Tok::End) {
      const Token& t = expect(Tok::Ident, "declaration");
      if (t.text == "vars") {
        if (!vars.empty())
          throw ParseError(t.line, t.col, "duplicate vars declaration");
        vars = parse_namelist();
        for (size_t i = 0; i < vars.size(); ++i)
          for (size_t j = i + 1; j < vars.size(); ++j)
            if (vars[i] == vars[j])
              throw ParseError(t.line, t.col, "duplicate variable '" + vars[i] + "'");
        p.vars = vars;
      } else if (t.text == "common") {
        if (vars.empty())
          throw ParseError(t.line, t.col, "common before vars");
        if (!p.common.empty())
          throw ParseError(t.line, t.col, "duplicate common declaration");
        for (const auto& n : parse_namelist()) {
          int idx = p.var_index(n);
          if (idx < 0) throw UndeclaredVariable(t.line, t.col, n);
          p.common.push_back(idx);
        }
        std::sort(p.common.begin(), p.common.end());
        p.common.erase(std::unique(p.common.begin(), p.common.end()),
                       p.common.end());
      } else if (t.text == "phi" || t.text == "psi") {
        if (vars.empty())
          throw ParseError(t.line, t.col, "formula before vars");
        expect(Tok::Colon, "':'");
        FormulaPtr f = parse_formula();
        if (t.text == "phi") {
          if (have_phi) throw ParseError(t.line, t.col, "duplicate phi");
          p.phi = f;
          have_phi = true;
        } else {
          if (have_psi) throw ParseError(t.line, t.col, "duplicate psi");
          p.psi = f;
          have_psi = true;
        }
      } else if (t.text == "degree") {
        expect(Tok::Colon, "':'");
        const Token& n = expect(Tok::Number, "degree");
        Rat q = number(n);
        if (q.get_den() != 1 || q < 1)
          throw BadDegree(n.line, n.col, "degree must be a natural number >= 1");
        if (q > 64) throw BadDegree(n.line, n.col, "degree too large");
        p.degree = (unsigned)q.get_num().get_ui();
        have_degree = true;
      } else if (t.text == "option") {
        std::string key = expect(Tok::Ident, "option name").text;
        while (accept(Tok::Dot))
          key += "." + expect(Tok::Ident, "option name part").text;
        expect(Tok::Assign, "'='");
        std::string value;
        if (accept(Tok::Minus)) value = "-";
        const Token& v = peek();
        if (v.kind == Tok::Number || v.kind == Tok::Ident) {
          value += v.text;
          get();
        } else {
          throw ParseError(v.line, v.col, "expected option value");
        }
        p.options[key] = value;
      } else {
        throw ParseError(t.line, t.col, "unknown declaration '" + t.text + "'");
      }
      expect(Tok::Semi, "';'");
    }
    if (!have_phi || !have_psi)
      throw ParseError(peek().line, peek().col, "missing phi or psi");
    if (!have_degree) p.degree = 1;
    if (p.common.empty())
      throw ParseError(peek().line, peek().col, "missing common declaration");
    return p;
  }
};

}  // namespace

Problem parse_problem(const std::string& text) {
  Parser ps;
  ps.toks = lex(text);
  return ps.parse_problem_body();
}

FormulaPtr parse_formula_text(const std::string& text,
                              const std::vector<std::string>& vars) {
  Parser ps;
  ps.toks = lex(text);
  ps.vars = vars;
  FormulaPtr f = ps.parse_formula();
  ps.expect(Tok::End, "end of input");
  return f;
}

}  // namespace nil
