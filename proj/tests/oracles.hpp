#pragma once

// Reference implementations used only by the tests. They work on plain
// std::set values and direct definitions, sharing no code paths with the
// library beyond FinSet and Rational.

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <random>
#include <set>
#include <vector>

#include "kanlift/density.hpp"
#include "kanlift/giry.hpp"
#include "kanlift/kantorovich.hpp"

namespace oracle {

using IntSet = std::set<int>;
using Family = std::set<IntSet>;

inline IntSet to_set(std::size_t mask) {
  IntSet s;
  for (int i = 0; i < 32; ++i)
    if ((mask >> i) & 1U) s.insert(i);
  return s;
}

inline std::size_t to_mask(const IntSet& s) {
  std::size_t m = 0;
  for (int i : s) m |= std::size_t{1} << i;
  return m;
}

// Powerset monad on {0..n-1}, elements of T X being subsets.
inline std::vector<IntSet> all_subsets(int n) {
  std::vector<IntSet> out;
  for (std::size_t m = 0; m < (std::size_t{1} << n); ++m) out.push_back(to_set(m));
  return out;
}

inline IntSet kleisli(const std::vector<IntSet>& f, const IntSet& v) {
  IntSet out;
  for (int x : v) out.insert(f[static_cast<std::size_t>(x)].begin(), f[static_cast<std::size_t>(x)].end());
  return out;
}

// ----------------------------------------------------------- preorders --

using Order = std::set<std::pair<int, int>>;

inline Order order_of(const kanlift::Preorder& p) {
  Order o;
  const int n = static_cast<int>(p.carrier.size());
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      if (p.le(static_cast<std::size_t>(i), static_cast<std::size_t>(j))) o.insert({i, j});
  return o;
}

enum class Power { Lower, Upper, Convex };

// Hoare / Smyth / Egli-Milner orders on subsets, straight from the definitions.
inline Order power_order(const Order& o, int n, Power kind) {
  const auto subsets = all_subsets(n);
  auto lower = [&](const IntSet& v, const IntSet& w) {
    return std::all_of(v.begin(), v.end(), [&](int i) {
      return std::any_of(w.begin(), w.end(), [&](int j) { return o.count({i, j}) > 0; });
    });
  };
  auto upper = [&](const IntSet& v, const IntSet& w) {
    return std::all_of(w.begin(), w.end(), [&](int j) {
      return std::any_of(v.begin(), v.end(), [&](int i) { return o.count({i, j}) > 0; });
    });
  };
  Order out;
  for (const auto& v : subsets)
    for (const auto& w : subsets) {
      bool ok = kind == Power::Lower ? lower(v, w) : kind == Power::Upper ? upper(v, w) : lower(v, w) && upper(v, w);
      if (ok) out.insert({static_cast<int>(to_mask(v)), static_cast<int>(to_mask(w))});
    }
  return out;
}

// ---------------------------------------------------------- topologies --

// Smallest family containing the generators, ∅ and the whole space, closed
// under pairwise unions and intersections.
inline Family generate_topology(const Family& gens, int points) {
  IntSet all;
  for (int i = 0; i < points; ++i) all.insert(i);
  Family t = gens;
  t.insert(IntSet{});
  t.insert(all);
  bool grew = true;
  while (grew) {
    grew = false;
    const std::vector<IntSet> cur(t.begin(), t.end());
    for (const auto& a : cur)
      for (const auto& b : cur) {
        IntSet u = a, i;
        u.insert(b.begin(), b.end());
        std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::inserter(i, i.begin()));
        grew = t.insert(u).second || grew;
        grew = t.insert(i).second || grew;
      }
  }
  return t;
}

inline Family opens_of(const kanlift::Topology& t) {
  Family f;
  for (const auto& u : t.opens()) {
    IntSet s;
    kanlift::for_each_bit(u, [&](std::size_t i) { s.insert(static_cast<int>(i)); });
    f.insert(s);
  }
  return f;
}

// Lower Vietoris: generated by {V | V ∩ U ≠ ∅}; upper: by {V | V ⊆ U}.
inline Family vietoris(const Family& opens, int n, bool lower) {
  const auto subsets = all_subsets(n);
  Family gens;
  for (const auto& u : opens) {
    IntSet g;
    for (const auto& v : subsets) {
      const bool hit = std::any_of(v.begin(), v.end(), [&](int x) { return u.count(x) > 0; });
      const bool inside = std::includes(u.begin(), u.end(), v.begin(), v.end());
      if (lower ? hit : inside) g.insert(static_cast<int>(to_mask(v)));
    }
    gens.insert(g);
  }
  return generate_topology(gens, 1 << n);
}

// ------------------------------------------------------------- measures --

inline bool measurable(const kanlift::FinMeasSpace& s, const IntSet& u) {
  for (const auto& b : s.blocks()) {
    bool any = false, all = true;
    kanlift::for_each_bit(b, [&](std::size_t x) {
      const bool in = u.count(static_cast<int>(x)) > 0;
      any = any || in;
      all = all && in;
    });
    if (any && !all) return false;
  }
  return true;
}

inline kanlift::Rational mass(const kanlift::SubProb& v, const IntSet& u) {
  kanlift::Rational t = 0;
  const auto& s = v.space();
  for (std::size_t k = 0; k < s.block_count(); ++k)
    if (u.count(static_cast<int>(s.blocks()[k].find_first())) > 0) t += v.mass()[k];
  return t;
}

inline IntSet image(const kanlift::Relation& r, const IntSet& v) {
  IntSet out;
  for (int i : v)
    for (std::size_t j = 0; j < r.cols(); ++j)
      if (r.test(static_cast<std::size_t>(i), j)) out.insert(static_cast<int>(j));
  return out;
}

enum class Sim { Single, Two, Bisim };

// Unfolded definitions: loop over all subsets, keep the measurable ones.
inline bool simulation(const kanlift::LMP& a, const kanlift::LMP& b, const kanlift::Relation& r, Sim kind) {
  const int n1 = static_cast<int>(a.states().size());
  const int n2 = static_cast<int>(b.states().size());
  std::vector<IntSet> sv, sw;
  for (const auto& v : all_subsets(n1))
    if (measurable(a.space(), v)) sv.push_back(v);
  for (const auto& w : all_subsets(n2))
    if (measurable(b.space(), w)) sw.push_back(w);
  for (int s1 = 0; s1 < n1; ++s1)
    for (int s2 = 0; s2 < n2; ++s2) {
      if (!r.test(static_cast<std::size_t>(s1), static_cast<std::size_t>(s2))) continue;
      for (std::size_t act = 0; act < a.actions().size(); ++act) {
        const auto& k1 = a.kernel(act, static_cast<std::size_t>(s1));
        const auto& k2 = b.kernel(act, static_cast<std::size_t>(s2));
        for (const auto& v : sv)
          for (const auto& w : sw) {
            const IntSet rv = image(r, v);
            bool test = false;
            if (kind == Sim::Single) test = v == w && std::includes(v.begin(), v.end(), rv.begin(), rv.end());
            if (kind == Sim::Two) test = std::includes(w.begin(), w.end(), rv.begin(), rv.end());
            if (kind == Sim::Bisim) {
              test = true;
              for (int x = 0; x < n1; ++x)
                for (int y = 0; y < n2; ++y)
                  if (r.test(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) &&
                      (v.count(x) > 0) != (w.count(y) > 0))
                    test = false;
            }
            if (!test) continue;
            const auto m1 = mass(k1, v);
            const auto m2 = mass(k2, w);
            if (kind == Sim::Bisim ? m1 != m2 : m1 > m2) return false;
          }
      }
    }
  return true;
}

// ---------------------------------------------------------------- random --

using Rng = std::mt19937_64;

inline kanlift::Rational random_rational(Rng& rng, int den_max = 6) {
  std::uniform_int_distribution<int> den(1, den_max);
  const int d = den(rng);
  std::uniform_int_distribution<int> num(0, d);
  return kanlift::Rational(num(rng), d);
}

// A random partition of {0..n-1} into blocks.
inline kanlift::FinMeasSpace random_space(Rng& rng, std::size_t n) {
  const kanlift::FinSet c = kanlift::FinSet::range(n);
  std::vector<kanlift::Bits> blocks;
  std::uniform_int_distribution<std::size_t> pick(0, n);
  for (std::size_t x = 0; x < n; ++x) {
    const std::size_t k = std::min(pick(rng), blocks.size());
    if (k == blocks.size()) blocks.push_back(c.none());
    blocks[k].set(x);
  }
  return kanlift::FinMeasSpace(c, std::move(blocks));
}

// Sub-probability masses on a grid of denominator `den`.
inline kanlift::SubProb random_subprob(Rng& rng, const kanlift::FinMeasSpace& s, int den = 4) {
  std::vector<kanlift::Rational> mass(s.block_count(), kanlift::Rational(0));
  std::uniform_int_distribution<int> units(0, den);
  int left = units(rng);
  for (std::size_t k = 0; k < mass.size() && left > 0; ++k) {
    std::uniform_int_distribution<int> take(0, left);
    const int t = k + 1 == mass.size() ? left : take(rng);
    mass[k] = kanlift::Rational(t, den);
    left -= t;
  }
  std::shuffle(mass.begin(), mass.end(), rng);
  return kanlift::SubProb(s, std::move(mass));
}

inline kanlift::LMP random_lmp(Rng& rng, std::size_t states, std::size_t actions, int den = 4) {
  const auto space = random_space(rng, states);
  std::vector<std::vector<kanlift::SubProb>> kernel(actions);
  for (auto& row : kernel) {
    std::vector<kanlift::SubProb> per_block;
    for (std::size_t k = 0; k < space.block_count(); ++k) per_block.push_back(random_subprob(rng, space, den));
    for (std::size_t s = 0; s < states; ++s) row.push_back(per_block[space.block_of(s)]);
  }
  return kanlift::LMP(space, kanlift::FinSet::range(actions), std::move(kernel));
}

inline kanlift::Relation random_relation(Rng& rng, std::size_t rows, std::size_t cols, double density = 0.5) {
  std::bernoulli_distribution coin(density);
  kanlift::Relation r(rows, cols);
  for (std::size_t i = 0; i < rows; ++i)
    for (std::size_t j = 0; j < cols; ++j)
      if (coin(rng)) r.set(i, j);
  return r;
}

// Shortest-path closure of random edge weights; some pairs may stay at ∞.
inline kanlift::Pseudometric random_pseudometric(Rng& rng, std::size_t n, double inf_chance = 0.2) {
  using kanlift::ExtRational;
  kanlift::Pseudometric d = kanlift::Pseudometric::discrete(kanlift::FinSet::range(n));
  std::bernoulli_distribution infinite(inf_chance);
  std::uniform_int_distribution<int> num(0, 6);
  std::uniform_int_distribution<int> den(1, 4);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!infinite(rng)) d.dist[i][j] = d.dist[j][i] = ExtRational(kanlift::Rational(num(rng), den(rng)));
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d.dist[i][k] + d.dist[k][j] < d.dist[i][j]) d.dist[i][j] = d.dist[i][k] + d.dist[k][j];
  return d;
}

// One step of the two-LMP simulation functional, from the definition: the
// pairs whose kernels pass every test (V,W) with r[V] ⊆ W.
inline kanlift::Relation simulation_step(const kanlift::LMP& a, const kanlift::LMP& b, const kanlift::Relation& r) {
  kanlift::Relation out(r.rows(), r.cols());
  for (std::size_t s1 = 0; s1 < r.rows(); ++s1)
    for (std::size_t s2 = 0; s2 < r.cols(); ++s2) {
      bool ok = true;
      for (const auto& v : all_subsets(static_cast<int>(r.rows())))
        for (const auto& w : all_subsets(static_cast<int>(r.cols()))) {
          if (!measurable(a.space(), v) || !measurable(b.space(), w)) continue;
          const IntSet rv = image(r, v);
          if (!std::includes(w.begin(), w.end(), rv.begin(), rv.end())) continue;
          for (std::size_t act = 0; act < a.actions().size(); ++act)
            ok = ok && mass(a.kernel(act, s1), v) <= mass(b.kernel(act, s2), w);
        }
      if (ok) out.set(s1, s2);
    }
  return out;
}

// ---------------------------------------------------------------- streams --

// Same stream up to `bound` indices, compared pointwise.
template <class T>
bool same_prefix(const kanlift::BasicLasso<T>& a, const kanlift::BasicLasso<T>& b, std::size_t bound) {
  for (std::size_t i = 0; i < bound; ++i)
    if (!(a.at(i) == b.at(i))) return false;
  return true;
}

// A non-canonical encoding of the same stream: unroll the cycle some times,
// repeat it, and rotate part of it into the prefix.
inline std::pair<std::vector<kanlift::Atom>, std::vector<kanlift::Atom>> reencode(const kanlift::Lasso& l, Rng& rng) {
  std::uniform_int_distribution<std::size_t> small(0, 3);
  std::vector<kanlift::Atom> prefix = l.prefix();
  const std::size_t unroll = small(rng) * l.cycle().size() + small(rng) % (l.cycle().size() + 1);
  for (std::size_t i = 0; i < unroll; ++i) prefix.push_back(l.at(l.prefix().size() + i));
  std::vector<kanlift::Atom> cycle;
  const std::size_t reps = 1 + small(rng);
  for (std::size_t r = 0; r < reps; ++r)
    for (std::size_t i = 0; i < l.cycle().size(); ++i) cycle.push_back(l.at(prefix.size() + r * l.cycle().size() + i));
  return {prefix, cycle};
}

struct RawLasso {
  std::vector<kanlift::Atom> prefix;
  std::vector<kanlift::Atom> cycle;

  const kanlift::Atom& at(std::size_t i) const {
    return i < prefix.size() ? prefix[i] : cycle[(i - prefix.size()) % cycle.size()];
  }
};

// Membership from the characterization on raw encodings. Tails are compared
// pointwise over a window long enough for every stream involved to have
// entered its cycle and gone round all of them together.
inline bool stream_member_raw(const std::vector<RawLasso>& s0, const std::set<kanlift::Atom>& x0, const RawLasso& x) {
  std::size_t prefix = x.prefix.size();
  std::size_t period = x.cycle.size();
  for (const auto& v : s0) {
    prefix = std::max(prefix, v.prefix.size());
    period = std::lcm(period, v.cycle.size());
  }
  const std::size_t window = prefix + period;
  auto tails_equal = [&](const RawLasso& a, std::size_t i, const RawLasso& b, std::size_t j) {
    for (std::size_t k = 0; k < window; ++k)
      if (a.at(i + k) != b.at(j + k)) return false;
    return true;
  };
  for (const auto& v : s0) {
    bool ok = true;
    for (std::size_t i = 0; i < window && ok; ++i) {
      const bool in_s0 = std::any_of(s0.begin(), s0.end(), [&](const RawLasso& w) { return tails_equal(v, i, w, 0); });
      ok = !in_s0 || x0.count(x.at(i)) > 0;
    }
    for (std::size_t n = 0; n < window && ok; ++n)
      for (std::size_t m = 0; m < window && ok; ++m)
        ok = !tails_equal(v, n, v, m) || x.at(n) == x.at(m);
    if (ok) return true;
  }
  return false;
}

}  // namespace oracle
