#include "hqsynth/boolify.hpp"

#include <algorithm>
#include <map>
#include <tuple>

namespace hqs {

bool ValuePredicate::holds(const Rational& x) const {
  switch (kind) {
    case EqualTo: return x == value;
    case AtLeast: return x >= value;
    case GreaterThan: return x > value;
    case Member: return std::find(members.begin(), members.end(), x) != members.end();
  }
  return false;
}

std::string ValuePredicate::to_string() const {
  switch (kind) {
    case EqualTo: return "=" + hqs::to_string(value);
    case AtLeast: return ">=" + hqs::to_string(value);
    case GreaterThan: return ">" + hqs::to_string(value);
    case Member: {
      std::string s = "in{";
      for (size_t i = 0; i < members.size(); ++i) s += (i ? "," : "") + hqs::to_string(members[i]);
      return s + "}";
    }
  }
  return "?";
}

namespace {

bool is_const(const Formula& f, Op op) { return f->op == op; }

Formula b_not(const Formula& a) {
  if (is_const(a, Op::True)) return f_false();
  if (is_const(a, Op::False)) return f_true();
  if (a->op == Op::Not) return a->kids[0];
  return f_not(a);
}

Formula b_and(const Formula& a, const Formula& b) {
  if (is_const(a, Op::False) || is_const(b, Op::False)) return f_false();
  if (is_const(a, Op::True)) return b;
  if (is_const(b, Op::True) || a == b) return a;
  return f_and(a, b);
}

Formula b_or(const Formula& a, const Formula& b) {
  if (is_const(a, Op::True) || is_const(b, Op::True)) return f_true();
  if (is_const(a, Op::False)) return b;
  if (is_const(b, Op::False) || a == b) return a;
  return f_or(a, b);
}

Formula b_next(const Formula& a) {
  if (is_const(a, Op::True) || is_const(a, Op::False)) return a;
  return f_next(a);
}

Formula b_until(const Formula& a, const Formula& b) {
  if (is_const(b, Op::True) || is_const(b, Op::False)) return b;
  if (is_const(a, Op::False)) return b;
  return f_until(a, b);
}

// Pairs (x, y) from xs * ys with l*x + (1-l)*y above v that are minimal
// componentwise.
std::vector<std::pair<Rational, Rational>> minimal_pairs(const std::vector<Rational>& xs,
                                                         const std::vector<Rational>& ys,
                                                         const Rational& l, const Rational& v,
                                                         bool strict) {
  std::vector<std::pair<Rational, Rational>> out;
  // xs ascending: for each x the least y that works; keep y strictly decreasing.
  for (const auto& x : xs) {
    for (const auto& y : ys) {
      Rational s = l * x + (1 - l) * y;
      if (strict ? s > v : s >= v) {
        if (out.empty() || y < out.back().second) out.emplace_back(x, y);
        break;
      }
    }
  }
  return out;
}

class Booleanizer {
 public:
  Formula threshold(const Formula& f, const Rational& v, bool strict) {
    auto key = std::make_tuple(f.get(), v.get_str(), strict);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    Formula r = compute(f, v, strict);
    memo_.emplace(key, r);
    return r;
  }

 private:
  std::map<std::tuple<const Node*, std::string, bool>, Formula> memo_;
  std::map<const Node*, std::vector<Rational>> values_;

  const std::vector<Rational>& vals(const Formula& f) {
    auto it = values_.find(f.get());
    if (it == values_.end()) it = values_.emplace(f.get(), candidate_values(f)).first;
    return it->second;
  }

  static bool above(const Rational& x, const Rational& v, bool strict) { return strict ? x > v : x >= v; }

  Formula compute(const Formula& f, const Rational& v, bool strict) {
    switch (f->op) {
      case Op::True: return above(1, v, strict) ? f_true() : f_false();
      case Op::False: return above(0, v, strict) ? f_true() : f_false();
      case Op::Atom:
        if (above(0, v, strict)) return f_true();
        if (above(1, v, strict)) return f;
        return f_false();
      case Op::Not:
        // 1-x >= v  <=>  !(x > 1-v);  1-x > v  <=>  !(x >= 1-v)
        return b_not(threshold(f->kids[0], 1 - v, !strict));
      case Op::Min: {
        Formula acc = f_true();
        for (const auto& k : f->kids) acc = b_and(acc, threshold(k, v, strict));
        return acc;
      }
      case Op::Max: {
        Formula acc = f_false();
        for (const auto& k : f->kids) acc = b_or(acc, threshold(k, v, strict));
        return acc;
      }
      case Op::Factor: {
        if (above(0, v, strict)) return f_true();
        if (f->lambda == 0) return f_false();
        Rational scaled = v / f->lambda;
        if (scaled > 1 || (strict && scaled == 1)) return f_false();
        return threshold(f->kids[0], scaled, strict);
      }
      case Op::WAvg: {
        const auto& xs = vals(f->kids[0]);
        const auto& ys = vals(f->kids[1]);
        Formula acc = f_false();
        for (const auto& [x, y] : minimal_pairs(xs, ys, f->lambda, v, strict)) {
          acc = b_or(acc, b_and(threshold(f->kids[0], x, false), threshold(f->kids[1], y, false)));
        }
        return acc;
      }
      case Op::Next: return b_next(threshold(f->kids[0], v, strict));
      case Op::Until:
        return b_until(threshold(f->kids[0], v, strict), threshold(f->kids[1], v, strict));
    }
    return f_false();
  }
};

}  // namespace

Formula booleanize(const Formula& f, const ValuePredicate& p) {
  Booleanizer b;
  switch (p.kind) {
    case ValuePredicate::AtLeast: return b.threshold(f, p.value, false);
    case ValuePredicate::GreaterThan: return b.threshold(f, p.value, true);
    case ValuePredicate::EqualTo:
      return b_and(b.threshold(f, p.value, false), b_not(b.threshold(f, p.value, true)));
    case ValuePredicate::Member: {
      Formula acc = f_false();
      for (const auto& v : p.members)
        acc = b_or(acc, b_and(b.threshold(f, v, false), b_not(b.threshold(f, v, true))));
      return acc;
    }
  }
  return f_false();
}

}  // namespace hqs
