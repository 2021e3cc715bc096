#include "hqsynth/rational.hpp"

#include <algorithm>
#include <cctype>
#include <stdexcept>

namespace hqs {

namespace {

bool all_digits(const std::string& s, size_t from) {
  if (from >= s.size()) return false;
  for (size_t i = from; i < s.size(); ++i)
    if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
  return true;
}

}  // namespace

Rational parse_rational(const std::string& text) {
  auto slash = text.find('/');
  std::string num = text.substr(0, slash);
  std::string den = slash == std::string::npos ? "1" : text.substr(slash + 1);
  size_t start = (!num.empty() && num[0] == '-') ? 1 : 0;
  if (!all_digits(num, start) || !all_digits(den, 0))
    throw std::invalid_argument("malformed rational '" + text + "'");
  mpz_class n(num, 10), d(den, 10);
  if (d == 0) throw std::invalid_argument("zero denominator in '" + text + "'");
  Rational r(n, d);
  r.canonicalize();
  return r;
}

std::string to_string(const Rational& r) { return r.get_str(); }

std::string to_decimal(const Rational& r, int digits) {
  mpz_class scale = 1;
  for (int i = 0; i < digits; ++i) scale *= 10;
  Rational scaled = r * scale;
  mpz_class q = scaled.get_num() / scaled.get_den();
  // round half away from zero
  mpz_class rem = scaled.get_num() - q * scaled.get_den();
  if (2 * abs(rem) >= scaled.get_den()) q += (r < 0 ? -1 : 1);
  bool neg = q < 0;
  std::string s = mpz_class(abs(q)).get_str();
  if (digits == 0) return (neg ? "-" : "") + s;
  if (s.size() <= static_cast<size_t>(digits)) s.insert(0, digits - s.size() + 1, '0');
  s.insert(s.size() - digits, ".");
  return (neg ? "-" : "") + s;
}

void normalize_set(std::vector<Rational>& values) {
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
}

}  // namespace hqs
