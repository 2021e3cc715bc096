#pragma once

#include "hqsynth/rational.hpp"

#include <cstdint>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace hqs {

// Core connectives. And/Or/Implies/F/G are desugared on construction.
enum class Op { True, False, Atom, Not, Min, Max, Factor, WAvg, Next, Until };

struct Node;
using Formula = std::shared_ptr<const Node>;

struct Node {
  Op op;
  std::string atom;      // Atom only
  Rational lambda;       // Factor / WAvg only
  std::vector<Formula> kids;
};

Formula f_true();
Formula f_false();
Formula f_atom(const std::string& name);
Formula f_not(Formula a);
Formula f_min(std::vector<Formula> kids);
Formula f_max(std::vector<Formula> kids);
Formula f_and(Formula a, Formula b);
Formula f_or(Formula a, Formula b);
Formula f_implies(Formula a, Formula b);
Formula f_iff(Formula a, Formula b);
Formula f_factor(const Rational& lambda, Formula a);
Formula f_wavg(const Rational& lambda, Formula a, Formula b);
Formula f_next(Formula a);
Formula f_until(Formula a, Formula b);
Formula f_eventually(Formula a);
Formula f_globally(Formula a);

// Number of nodes in the (tree-unfolded) syntax tree.
size_t size(const Formula& f);
std::set<std::string> atoms(const Formula& f);
// No Factor / WAvg anywhere.
bool is_boolean(const Formula& f);
std::string to_string(const Formula& f);

struct ParseError : std::runtime_error {
  size_t position;
  ParseError(const std::string& msg, size_t pos)
      : std::runtime_error(msg + " at position " + std::to_string(pos)), position(pos) {}
};

// Grammar: atom | true | false | ! f | f & f | f | f | f -> f | f <-> f | X f | F f | G f
//          | f U f | factor{r} f | wavg{r}(f, f) | min(f, ...) | max(f, ...) | ( f )
// Precedence from tightest: unary, U, &, |, <->, ->.
Formula parse(const std::string& text, const std::set<std::string>& inputs,
              const std::set<std::string>& outputs);
Formula parse(const std::string& text, const std::vector<std::string>& atoms);

// Letters are bitmasks over an atom list (bit k <-> ap[k]).
using Letter = uint32_t;

struct LassoWord {
  std::vector<Letter> prefix;
  std::vector<Letter> period;  // nonempty
  size_t length() const { return prefix.size() + period.size(); }
  Letter at(size_t i) const {
    return i < prefix.size() ? prefix[i] : period[(i - prefix.size()) % period.size()];
  }
};

Rational eval_lasso(const Formula& f, const LassoWord& w, const std::vector<std::string>& ap);
// Value at each of the |u|+|v| suffix positions.
std::vector<Rational> eval_positions(const Formula& f, const LassoWord& w,
                                     const std::vector<std::string>& ap);

// Bottom-up superset of the attainable values.
std::vector<Rational> candidate_values(const Formula& f);
// Exact set of attainable values, ascending.
std::vector<Rational> values(const Formula& f);

}  // namespace hqs
