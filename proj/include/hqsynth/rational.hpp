#pragma once

#include <gmpxx.h>

#include <string>
#include <vector>

namespace hqs {

using Rational = mpq_class;

// Accepts "n", "-n" and "n/d". Throws std::invalid_argument otherwise.
Rational parse_rational(const std::string& text);

// Canonical "num/den" form; integers print without a denominator.
std::string to_string(const Rational& r);

std::string to_decimal(const Rational& r, int digits = 6);

inline bool in_unit_interval(const Rational& r) { return r >= 0 && r <= 1; }

// Sorted, duplicate-free.
void normalize_set(std::vector<Rational>& values);

}  // namespace hqs
