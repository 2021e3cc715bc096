#include "hqsynth/formula.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <unordered_map>

namespace hqs {

namespace {

Formula make(Op op, std::vector<Formula> kids = {}, std::string atom = {}, Rational lambda = 0) {
  auto n = std::make_shared<Node>();
  n->op = op;
  n->kids = std::move(kids);
  n->atom = std::move(atom);
  n->lambda = lambda;
  return n;
}

void check_lambda(const Rational& l) {
  if (!in_unit_interval(l))
    throw std::invalid_argument("parameter " + to_string(l) + " outside [0,1]");
}

}  // namespace

Formula f_true() { return make(Op::True); }
Formula f_false() { return make(Op::False); }
Formula f_atom(const std::string& name) { return make(Op::Atom, {}, name); }
Formula f_not(Formula a) { return make(Op::Not, {std::move(a)}); }

Formula f_min(std::vector<Formula> kids) {
  if (kids.empty()) return f_true();
  if (kids.size() == 1) return kids[0];
  return make(Op::Min, std::move(kids));
}

Formula f_max(std::vector<Formula> kids) {
  if (kids.empty()) return f_false();
  if (kids.size() == 1) return kids[0];
  return make(Op::Max, std::move(kids));
}

Formula f_and(Formula a, Formula b) { return make(Op::Min, {std::move(a), std::move(b)}); }
Formula f_or(Formula a, Formula b) { return make(Op::Max, {std::move(a), std::move(b)}); }
Formula f_implies(Formula a, Formula b) { return f_or(f_not(std::move(a)), std::move(b)); }
Formula f_iff(Formula a, Formula b) { return f_and(f_implies(a, b), f_implies(b, a)); }

Formula f_factor(const Rational& lambda, Formula a) {
  check_lambda(lambda);
  return make(Op::Factor, {std::move(a)}, {}, lambda);
}

Formula f_wavg(const Rational& lambda, Formula a, Formula b) {
  check_lambda(lambda);
  return make(Op::WAvg, {std::move(a), std::move(b)}, {}, lambda);
}

Formula f_next(Formula a) { return make(Op::Next, {std::move(a)}); }
Formula f_until(Formula a, Formula b) { return make(Op::Until, {std::move(a), std::move(b)}); }
Formula f_eventually(Formula a) { return f_until(f_true(), std::move(a)); }
Formula f_globally(Formula a) { return f_not(f_eventually(f_not(std::move(a)))); }

size_t size(const Formula& f) {
  size_t n = 1;
  for (const auto& k : f->kids) n += size(k);
  return n;
}

std::set<std::string> atoms(const Formula& f) {
  std::set<std::string> out;
  std::function<void(const Formula&)> walk = [&](const Formula& g) {
    if (g->op == Op::Atom) out.insert(g->atom);
    for (const auto& k : g->kids) walk(k);
  };
  walk(f);
  return out;
}

bool is_boolean(const Formula& f) {
  if (f->op == Op::Factor || f->op == Op::WAvg) return false;
  return std::all_of(f->kids.begin(), f->kids.end(), [](const Formula& k) { return is_boolean(k); });
}

std::string to_string(const Formula& f) {
  auto join = [&](const char* sep) {
    std::string s;
    for (size_t i = 0; i < f->kids.size(); ++i) {
      if (i) s += sep;
      s += to_string(f->kids[i]);
    }
    return s;
  };
  switch (f->op) {
    case Op::True: return "true";
    case Op::False: return "false";
    case Op::Atom: return f->atom;
    case Op::Not: return "!" + to_string(f->kids[0]);
    case Op::Min:
      return f->kids.size() == 2 ? "(" + join(" & ") + ")" : "min(" + join(", ") + ")";
    case Op::Max:
      return f->kids.size() == 2 ? "(" + join(" | ") + ")" : "max(" + join(", ") + ")";
    case Op::Factor: return "factor{" + to_string(f->lambda) + "} " + to_string(f->kids[0]);
    case Op::WAvg: return "wavg{" + to_string(f->lambda) + "}(" + join(", ") + ")";
    case Op::Next: return "X " + to_string(f->kids[0]);
    case Op::Until: return "(" + join(" U ") + ")";
  }
  return "?";
}

// ---------------------------------------------------------------- parser

namespace {

struct Token {
  enum Kind { Ident, Number, Sym, End } kind;
  std::string text;
  size_t pos;
};

std::vector<Token> tokenize(const std::string& s) {
  std::vector<Token> out;
  size_t i = 0;
  while (i < s.size()) {
    char c = s[i];
    if (std::isspace(static_cast<unsigned char>(c))) {
      ++i;
      continue;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      size_t j = i;
      while (j < s.size() && (std::isalnum(static_cast<unsigned char>(s[j])) || s[j] == '_')) ++j;
      out.push_back({Token::Ident, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c))) {
      size_t j = i;
      while (j < s.size() && std::isdigit(static_cast<unsigned char>(s[j]))) ++j;
      out.push_back({Token::Number, s.substr(i, j - i), i});
      i = j;
      continue;
    }
    if (s.compare(i, 3, "<->") == 0) {
      out.push_back({Token::Sym, "<->", i});
      i += 3;
      continue;
    }
    if (s.compare(i, 2, "->") == 0) {
      out.push_back({Token::Sym, "->", i});
      i += 2;
      continue;
    }
    if (std::string("!&|(){},/").find(c) != std::string::npos) {
      out.push_back({Token::Sym, std::string(1, c), i});
      ++i;
      continue;
    }
    throw ParseError(std::string("unexpected character '") + c + "'", i);
  }
  out.push_back({Token::End, "", s.size()});
  return out;
}

class Parser {
 public:
  Parser(const std::string& text, const std::set<std::string>& atoms)
      : toks_(tokenize(text)), atoms_(atoms) {}

  Formula run() {
    Formula f = implication();
    if (peek().kind != Token::End) throw ParseError("unexpected '" + peek().text + "'", peek().pos);
    return f;
  }

 private:
  std::vector<Token> toks_;
  const std::set<std::string>& atoms_;
  size_t at_ = 0;

  const Token& peek() const { return toks_[at_]; }
  bool is_sym(const char* s) const { return peek().kind == Token::Sym && peek().text == s; }
  bool is_kw(const char* s) const { return peek().kind == Token::Ident && peek().text == s; }

  void expect(const char* s) {
    if (!is_sym(s)) {
      const Token& t = peek();
      throw ParseError(std::string("expected '") + s + "' but found " +
                           (t.kind == Token::End ? std::string("end of input") : "'" + t.text + "'"),
                       t.pos);
    }
    ++at_;
  }

  Formula implication() {
    Formula l = biconditional();
    if (is_sym("->")) {
      ++at_;
      return f_implies(l, implication());
    }
    return l;
  }

  Formula biconditional() {
    Formula l = disjunction();
    while (is_sym("<->")) {
      ++at_;
      l = f_iff(l, disjunction());
    }
    return l;
  }

  Formula disjunction() {
    Formula l = conjunction();
    while (is_sym("|")) {
      ++at_;
      l = f_or(l, conjunction());
    }
    return l;
  }

  Formula conjunction() {
    Formula l = until();
    while (is_sym("&")) {
      ++at_;
      l = f_and(l, until());
    }
    return l;
  }

  Formula until() {
    Formula l = unary();
    if (is_kw("U")) {
      ++at_;
      return f_until(l, until());
    }
    return l;
  }

  Rational rational() {
    const Token& t = peek();
    if (t.kind != Token::Number) throw ParseError("expected a rational", t.pos);
    std::string text = t.text;
    ++at_;
    if (is_sym("/")) {
      ++at_;
      if (peek().kind != Token::Number) throw ParseError("expected a denominator", peek().pos);
      text += "/" + peek().text;
      ++at_;
    }
    Rational r;
    try {
      r = parse_rational(text);
    } catch (const std::invalid_argument& e) {
      throw ParseError(e.what(), t.pos);
    }
    if (!in_unit_interval(r)) throw ParseError("parameter " + text + " outside [0,1]", t.pos);
    return r;
  }

  Rational braced_rational() {
    expect("{");
    Rational r = rational();
    expect("}");
    return r;
  }

  Formula unary() {
    if (is_sym("!")) {
      ++at_;
      return f_not(unary());
    }
    if (is_kw("X")) {
      ++at_;
      return f_next(unary());
    }
    if (is_kw("F")) {
      ++at_;
      return f_eventually(unary());
    }
    if (is_kw("G")) {
      ++at_;
      return f_globally(unary());
    }
    if (is_kw("factor")) {
      ++at_;
      Rational l = braced_rational();
      return f_factor(l, unary());
    }
    return primary();
  }

  std::vector<Formula> list() {
    expect("(");
    std::vector<Formula> out{implication()};
    while (is_sym(",")) {
      ++at_;
      out.push_back(implication());
    }
    expect(")");
    return out;
  }

  Formula primary() {
    const Token& t = peek();
    if (is_sym("(")) {
      ++at_;
      Formula f = implication();
      expect(")");
      return f;
    }
    if (t.kind != Token::Ident) {
      throw ParseError(t.kind == Token::End ? "unexpected end of input" : "unexpected '" + t.text + "'",
                       t.pos);
    }
    if (t.text == "true") {
      ++at_;
      return f_true();
    }
    if (t.text == "false") {
      ++at_;
      return f_false();
    }
    if (t.text == "wavg") {
      ++at_;
      Rational l = braced_rational();
      expect("(");
      Formula a = implication();
      expect(",");
      Formula b = implication();
      expect(")");
      return f_wavg(l, a, b);
    }
    if (t.text == "min" || t.text == "max") {
      bool is_min = t.text == "min";
      ++at_;
      auto kids = list();
      return is_min ? f_min(std::move(kids)) : f_max(std::move(kids));
    }
    if (t.text == "U" || t.text == "factor")
      throw ParseError("unexpected '" + t.text + "'", t.pos);
    if (!atoms_.count(t.text)) throw ParseError("unknown atom '" + t.text + "'", t.pos);
    ++at_;
    return f_atom(t.text);
  }
};

}  // namespace

Formula parse(const std::string& text, const std::set<std::string>& inputs,
              const std::set<std::string>& outputs) {
  std::set<std::string> all = inputs;
  all.insert(outputs.begin(), outputs.end());
  return Parser(text, all).run();
}

Formula parse(const std::string& text, const std::vector<std::string>& atoms) {
  std::set<std::string> all(atoms.begin(), atoms.end());
  return Parser(text, all).run();
}

// ------------------------------------------------------------ evaluation

std::vector<Rational> eval_positions(const Formula& f, const LassoWord& w,
                                     const std::vector<std::string>& ap) {
  if (w.period.empty()) throw std::invalid_argument("lasso period must be nonempty");
  const size_t n = w.length();
  const size_t loop = w.prefix.size();
  auto next = [&](size_t k) { return k + 1 < n ? k + 1 : loop; };
  std::unordered_map<const Node*, std::vector<Rational>> memo;

  std::function<const std::vector<Rational>&(const Formula&)> ev =
      [&](const Formula& g) -> const std::vector<Rational>& {
    auto hit = memo.find(g.get());
    if (hit != memo.end()) return hit->second;
    std::vector<Rational> out(n);
    switch (g->op) {
      case Op::True:
        for (auto& x : out) x = 1;
        break;
      case Op::False:
        for (auto& x : out) x = 0;
        break;
      case Op::Atom: {
        auto it = std::find(ap.begin(), ap.end(), g->atom);
        if (it == ap.end()) throw std::invalid_argument("atom '" + g->atom + "' not in alphabet");
        Letter bit = Letter(1) << (it - ap.begin());
        for (size_t k = 0; k < n; ++k) out[k] = (w.at(k) & bit) ? 1 : 0;
        break;
      }
      case Op::Not: {
        const auto& a = ev(g->kids[0]);
        for (size_t k = 0; k < n; ++k) out[k] = 1 - a[k];
        break;
      }
      case Op::Min:
      case Op::Max: {
        out = ev(g->kids[0]);
        for (size_t j = 1; j < g->kids.size(); ++j) {
          const auto& b = ev(g->kids[j]);
          for (size_t k = 0; k < n; ++k)
            out[k] = g->op == Op::Min ? std::min(out[k], b[k]) : std::max(out[k], b[k]);
        }
        break;
      }
      case Op::Factor: {
        const auto& a = ev(g->kids[0]);
        for (size_t k = 0; k < n; ++k) out[k] = g->lambda * a[k];
        break;
      }
      case Op::WAvg: {
        const auto& a = ev(g->kids[0]);
        const auto& b = ev(g->kids[1]);
        for (size_t k = 0; k < n; ++k) out[k] = g->lambda * a[k] + (1 - g->lambda) * b[k];
        break;
      }
      case Op::Next: {
        const auto& a = ev(g->kids[0]);
        for (size_t k = 0; k < n; ++k) out[k] = a[next(k)];
        break;
      }
      case Op::Until: {
        const auto& a = ev(g->kids[0]);
        const auto& b = ev(g->kids[1]);
        // Least fixpoint of U(k) = max(b(k), min(a(k), U(next k))) on the loop,
        // then one backward pass over the prefix.
        for (size_t k = 0; k < n; ++k) out[k] = b[k];
        for (bool changed = true; changed;) {
          changed = false;
          for (size_t k = n; k-- > loop;) {
            Rational v = std::max(b[k], std::min(a[k], out[next(k)]));
            if (v != out[k]) {
              out[k] = v;
              changed = true;
            }
          }
        }
        for (size_t k = loop; k-- > 0;) out[k] = std::max(b[k], std::min(a[k], out[k + 1]));
        break;
      }
    }
    return memo.emplace(g.get(), std::move(out)).first->second;
  };
  return ev(f);
}

Rational eval_lasso(const Formula& f, const LassoWord& w, const std::vector<std::string>& ap) {
  return eval_positions(f, w, ap)[0];
}

}  // namespace hqs
