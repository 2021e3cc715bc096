#pragma once

#include "hqsynth/formula.hpp"

namespace hqs {

struct ValuePredicate {
  enum Kind { EqualTo, AtLeast, GreaterThan, Member };
  Kind kind = EqualTo;
  Rational value;
  std::vector<Rational> members;  // Member only

  static ValuePredicate equal_to(const Rational& v) { return {EqualTo, v, {}}; }
  static ValuePredicate at_least(const Rational& v) { return {AtLeast, v, {}}; }
  static ValuePredicate greater_than(const Rational& v) { return {GreaterThan, v, {}}; }
  static ValuePredicate member(std::vector<Rational> vs) { return {Member, 0, std::move(vs)}; }

  bool holds(const Rational& x) const;
  std::string to_string() const;
};

// Boolean formula (no Factor / WAvg) satisfied by exactly the words whose
// value satisfies the predicate.
Formula booleanize(const Formula& f, const ValuePredicate& p);

}  // namespace hqs
