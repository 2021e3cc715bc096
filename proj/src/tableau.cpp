#include "hqsynth/automata.hpp"
#include "hqsynth/graph.hpp"

#include <algorithm>
#include <map>
#include <tuple>
#include <unordered_map>

namespace hqs {

namespace {

size_t g_ceiling = 1000000;

// Hash-consed negation normal form.
class Nnf {
 public:
  enum Kind { T, F, Lit, And, Or, Next, Until, Release };
  struct N {
    Kind kind;
    int atom;
    bool pos;
    std::vector<int> kids;
  };

  std::vector<N> nodes;

  int top() { return mk(T, -1, true, {}); }
  int bottom() { return mk(F, -1, true, {}); }
  int lit(int atom, bool pos) { return mk(Lit, atom, pos, {}); }

  int junction(Kind kind, const std::vector<int>& in) {
    const Kind unit = kind == And ? T : F;
    const Kind zero = kind == And ? F : T;
    std::vector<int> kids;
    for (int k : in) {
      if (nodes[k].kind == unit) continue;
      if (nodes[k].kind == zero) return mk(zero, -1, true, {});
      if (nodes[k].kind == kind)
        kids.insert(kids.end(), nodes[k].kids.begin(), nodes[k].kids.end());
      else
        kids.push_back(k);
    }
    std::sort(kids.begin(), kids.end());
    kids.erase(std::unique(kids.begin(), kids.end()), kids.end());
    for (size_t i = 0; i < kids.size(); ++i) {
      const N& a = nodes[kids[i]];
      if (a.kind != Lit) continue;
      for (size_t j = i + 1; j < kids.size(); ++j) {
        const N& b = nodes[kids[j]];
        if (b.kind == Lit && b.atom == a.atom && b.pos != a.pos) return mk(zero, -1, true, {});
      }
    }
    if (kids.empty()) return mk(unit, -1, true, {});
    if (kids.size() == 1) return kids[0];
    return mk(kind, -1, true, kids);
  }

  int next(int a) {
    if (nodes[a].kind == T || nodes[a].kind == F) return a;
    return mk(Next, -1, true, {a});
  }

  int until(int a, int b) {
    if (nodes[b].kind == T || nodes[b].kind == F || nodes[a].kind == F) return b;
    return mk(Until, -1, true, {a, b});
  }

  int release(int a, int b) {
    if (nodes[b].kind == T || nodes[b].kind == F || nodes[a].kind == T) return b;
    return mk(Release, -1, true, {a, b});
  }

 private:
  std::map<std::tuple<int, int, bool, std::vector<int>>, int> index_;

  int mk(Kind kind, int atom, bool pos, std::vector<int> kids) {
    auto key = std::make_tuple(static_cast<int>(kind), atom, pos, kids);
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    nodes.push_back({kind, atom, pos, std::move(kids)});
    int id = static_cast<int>(nodes.size()) - 1;
    index_.emplace(std::move(key), id);
    return id;
  }
};

class NnfBuilder {
 public:
  NnfBuilder(Nnf& store, const std::vector<std::string>& ap) : s_(store), ap_(ap) {}

  int build(const Formula& f, bool positive) {
    auto key = std::make_pair(f.get(), positive);
    auto it = memo_.find(key);
    if (it != memo_.end()) return it->second;
    int r = compute(f, positive);
    memo_.emplace(key, r);
    return r;
  }

 private:
  Nnf& s_;
  const std::vector<std::string>& ap_;
  std::map<std::pair<const Node*, bool>, int> memo_;

  int compute(const Formula& f, bool positive) {
    switch (f->op) {
      case Op::True: return positive ? s_.top() : s_.bottom();
      case Op::False: return positive ? s_.bottom() : s_.top();
      case Op::Atom: {
        auto it = std::find(ap_.begin(), ap_.end(), f->atom);
        if (it == ap_.end()) throw std::invalid_argument("atom '" + f->atom + "' not in alphabet");
        return s_.lit(static_cast<int>(it - ap_.begin()), positive);
      }
      case Op::Not: return build(f->kids[0], !positive);
      case Op::Min:
      case Op::Max: {
        std::vector<int> kids;
        for (const auto& k : f->kids) kids.push_back(build(k, positive));
        bool conj = (f->op == Op::Min) == positive;
        return s_.junction(conj ? Nnf::And : Nnf::Or, kids);
      }
      case Op::Next: return s_.next(build(f->kids[0], positive));
      case Op::Until: {
        int a = build(f->kids[0], positive);
        int b = build(f->kids[1], positive);
        return positive ? s_.until(a, b) : s_.release(a, b);
      }
      case Op::Factor:
      case Op::WAvg: throw std::invalid_argument("quality operator in a Boolean formula");
    }
    return s_.bottom();
  }
};

struct Cover {
  Letter pos = 0, neg = 0;
  std::vector<int> next;
  std::vector<int> pending;  // postponed Until nodes
  bool operator<(const Cover& o) const {
    return std::tie(pos, neg, next, pending) < std::tie(o.pos, o.neg, o.next, o.pending);
  }
};

class Expander {
 public:
  explicit Expander(const Nnf& s) : s_(s) {}

  std::vector<Cover> expand(const std::vector<int>& obligations) {
    out_.clear();
    Cover start;
    go(obligations, start, {});
    std::sort(out_.begin(), out_.end());
    out_.erase(std::unique(out_.begin(), out_.end(),
                           [](const Cover& a, const Cover& b) { return !(a < b) && !(b < a); }),
               out_.end());
    return out_;
  }

 private:
  const Nnf& s_;
  std::vector<Cover> out_;

  static void insert_sorted(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it == v.end() || *it != x) v.insert(it, x);
  }

  void go(std::vector<int> todo, Cover cur, std::vector<int> done) {
    while (!todo.empty()) {
      int f = todo.back();
      todo.pop_back();
      auto it = std::lower_bound(done.begin(), done.end(), f);
      if (it != done.end() && *it == f) continue;
      done.insert(it, f);
      const Nnf::N& n = s_.nodes[f];
      switch (n.kind) {
        case Nnf::T: break;
        case Nnf::F: return;
        case Nnf::Lit: {
          Letter bit = Letter(1) << n.atom;
          if (n.pos) {
            if (cur.neg & bit) return;
            cur.pos |= bit;
          } else {
            if (cur.pos & bit) return;
            cur.neg |= bit;
          }
          break;
        }
        case Nnf::And:
          for (int k : n.kids) todo.push_back(k);
          break;
        case Nnf::Next: insert_sorted(cur.next, n.kids[0]); break;
        case Nnf::Or:
          for (int k : n.kids) {
            auto t = todo;
            t.push_back(k);
            go(std::move(t), cur, done);
          }
          return;
        case Nnf::Until: {
          auto t1 = todo;
          t1.push_back(n.kids[1]);
          go(std::move(t1), cur, done);
          Cover c2 = cur;
          insert_sorted(c2.next, f);
          insert_sorted(c2.pending, f);
          todo.push_back(n.kids[0]);
          cur = std::move(c2);
          break;
        }
        case Nnf::Release: {
          auto t1 = todo;
          t1.push_back(n.kids[0]);
          t1.push_back(n.kids[1]);
          go(std::move(t1), cur, done);
          insert_sorted(cur.next, f);
          todo.push_back(n.kids[1]);
          break;
        }
      }
    }
    out_.push_back(std::move(cur));
  }
};

}  // namespace

size_t state_ceiling() { return g_ceiling; }
void set_state_ceiling(size_t n) { g_ceiling = n; }

void check_ceiling(size_t n, const char* what) {
  if (n > g_ceiling)
    throw ResourceLimit(std::string(what) + " exceeds the state ceiling of " +
                        std::to_string(g_ceiling) + " states");
}

NBW ltl_to_nbw(const Formula& f, const std::vector<std::string>& ap) {
  if (ap.size() > 16) throw std::invalid_argument("too many atoms");
  Nnf store;
  NnfBuilder builder(store, ap);
  int root = builder.build(f, true);

  // Until nodes in the closure define the generalized acceptance sets.
  std::vector<int> untils;
  {
    std::vector<char> seen(store.nodes.size(), 0);
    std::vector<int> todo{root};
    seen[root] = 1;
    while (!todo.empty()) {
      int v = todo.back();
      todo.pop_back();
      if (store.nodes[v].kind == Nnf::Until) untils.push_back(v);
      for (int k : store.nodes[v].kids)
        if (!seen[k]) {
          seen[k] = 1;
          todo.push_back(k);
        }
    }
    std::sort(untils.begin(), untils.end());
  }
  const size_t k = untils.size();

  NBW nbw;
  nbw.num_ap = static_cast<int>(ap.size());
  Expander expander(store);
  std::map<std::vector<int>, std::vector<Cover>> covers;
  std::map<std::pair<std::vector<int>, size_t>, int> ids;
  std::vector<std::pair<std::vector<int>, size_t>> todo;

  auto id_of = [&](const std::vector<int>& obl, size_t level) {
    auto key = std::make_pair(obl, level);
    auto it = ids.find(key);
    if (it != ids.end()) return it->second;
    int id = static_cast<int>(ids.size());
    check_ceiling(ids.size() + 1, "Buchi automaton");
    ids.emplace(key, id);
    todo.push_back(key);
    nbw.out.emplace_back();
    return id;
  };

  nbw.initial = id_of(store.nodes[root].kind == Nnf::T ? std::vector<int>{} : std::vector<int>{root}, 0);
  while (!todo.empty()) {
    auto [obl, level] = todo.back();
    todo.pop_back();
    int src = ids.at({obl, level});
    auto cit = covers.find(obl);
    if (cit == covers.end()) cit = covers.emplace(obl, expander.expand(obl)).first;
    std::vector<NBW::Edge> edges;
    for (const Cover& c : cit->second) {
      size_t j = level;
      while (j < k && !std::binary_search(c.pending.begin(), c.pending.end(), untils[j])) ++j;
      bool acc = j == k;
      if (acc) j = 0;
      NBW::Edge e;
      e.pos = c.pos;
      e.neg = c.neg;
      e.accepting = acc;
      e.dst = id_of(c.next, j);
      edges.push_back(e);
    }
    nbw.out[src] = std::move(edges);
  }
  return nbw;
}

namespace {

Adjacency nbw_graph(const NBW& a) {
  Adjacency g(a.size());
  for (int s = 0; s < a.size(); ++s)
    for (const auto& e : a.out[s]) g[s].push_back(e.dst);
  return g;
}

}  // namespace

bool nbw_nonempty(const NBW& a) {
  Adjacency g = nbw_graph(a);
  auto reach = reachable(g, {a.initial});
  auto scc = strongly_connected(g, &reach);
  for (int s = 0; s < a.size(); ++s) {
    if (!reach[s]) continue;
    for (const auto& e : a.out[s])
      if (e.accepting && scc.comp[e.dst] == scc.comp[s]) return true;
  }
  return false;
}

bool nbw_accepts(const NBW& a, const LassoWord& w) {
  const int n = static_cast<int>(w.length());
  const int loop = static_cast<int>(w.prefix.size());
  auto node = [&](int q, int k) { return q * n + k; };
  Adjacency g(static_cast<size_t>(a.size()) * n);
  for (int q = 0; q < a.size(); ++q)
    for (int k = 0; k < n; ++k) {
      int nk = k + 1 < n ? k + 1 : loop;
      for (const auto& e : a.out[q])
        if (e.matches(w.at(k))) g[node(q, k)].push_back(node(e.dst, nk));
    }
  auto reach = reachable(g, {node(a.initial, 0)});
  auto scc = strongly_connected(g, &reach);
  for (int q = 0; q < a.size(); ++q)
    for (int k = 0; k < n; ++k) {
      if (!reach[node(q, k)]) continue;
      int nk = k + 1 < n ? k + 1 : loop;
      for (const auto& e : a.out[q])
        if (e.accepting && e.matches(w.at(k)) &&
            scc.comp[node(e.dst, nk)] == scc.comp[node(q, k)])
          return true;
    }
  return false;
}

}  // namespace hqs
