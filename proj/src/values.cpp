#include "hqsynth/automata.hpp"
#include "hqsynth/formula.hpp"

#include <map>

namespace hqs {

namespace {

std::vector<Rational> candidates(const Formula& f, std::map<const Node*, std::vector<Rational>>& memo) {
  auto it = memo.find(f.get());
  if (it != memo.end()) return it->second;
  std::vector<Rational> out;
  switch (f->op) {
    case Op::True: out = {1}; break;
    case Op::False: out = {0}; break;
    case Op::Atom: out = {0, 1}; break;
    case Op::Not:
      for (const auto& v : candidates(f->kids[0], memo)) out.push_back(1 - v);
      break;
    case Op::Min:
    case Op::Max: {
      out = candidates(f->kids[0], memo);
      for (size_t j = 1; j < f->kids.size(); ++j) {
        auto b = candidates(f->kids[j], memo);
        std::vector<Rational> next;
        for (const auto& x : out)
          for (const auto& y : b) next.push_back(f->op == Op::Min ? std::min(x, y) : std::max(x, y));
        normalize_set(next);
        out = std::move(next);
      }
      break;
    }
    case Op::Factor:
      for (const auto& v : candidates(f->kids[0], memo)) out.push_back(f->lambda * v);
      break;
    case Op::WAvg: {
      auto a = candidates(f->kids[0], memo);
      auto b = candidates(f->kids[1], memo);
      for (const auto& x : a)
        for (const auto& y : b) out.push_back(f->lambda * x + (1 - f->lambda) * y);
      break;
    }
    case Op::Next: out = candidates(f->kids[0], memo); break;
    case Op::Until: {
      out = candidates(f->kids[0], memo);
      auto b = candidates(f->kids[1], memo);
      out.insert(out.end(), b.begin(), b.end());
      break;
    }
  }
  normalize_set(out);
  memo.emplace(f.get(), out);
  return out;
}

}  // namespace

std::vector<Rational> candidate_values(const Formula& f) {
  std::map<const Node*, std::vector<Rational>> memo;
  return candidates(f, memo);
}

std::vector<Rational> values(const Formula& f) {
  auto as = atoms(f);
  std::vector<std::string> ap(as.begin(), as.end());
  std::vector<Rational> out;
  for (const auto& v : candidate_values(f))
    if (nbw_nonempty(ltl_to_nbw(booleanize(f, ValuePredicate::equal_to(v)), ap))) out.push_back(v);
  return out;
}

}  // namespace hqs
