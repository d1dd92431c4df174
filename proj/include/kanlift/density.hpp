#pragma once

// Density lifting of comonads along the subobject cofibration Pred → Set.
// The product comonad D_A X = X × A is handled by enumeration as well as by
// its closed formula. For the stream comonad D X = ℕ ⇒ X only eventually
// periodic streams (lassos) are represented, and membership is decided by the
// characterization over tails of a parameter stream.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/fibration.hpp"
#include "kanlift/report.hpp"

namespace kanlift {

// ---------------------------------------------------------------- product --

/// X ×̇ (S0[R], A): the lift of x for the comonad (−) × A at parameter s over R × A.
inline Predicate product_density_lift(const FinSet& a, const FinSet& r, const Predicate& s, const Predicate& x) {
  require(s.carrier == product(r, a), ErrorKind::AmbientMismatch, "parameter must live over R × A");
  Bits projected = a.none();
  for_each_bit(s.members, [&](std::size_t k) { projected.set(k % a.size()); });
  const FinSet ambient = product(x.carrier, a);
  Bits out = ambient.none();
  for_each_bit(x.members, [&](std::size_t i) {
    for_each_bit(projected, [&](std::size_t j) { out.set(pair_index(i, j, a.size())); });
  });
  return {ambient, out};
}

/// The same lift computed from its definition: the union, over every
/// f: R × A → X with f(S0) ⊆ X0, of the direct image of S0 under
/// (ρ, α) ↦ (f(ρ, α), α).
inline Predicate product_density_lift_enumerated(const FinSet& a, const FinSet& r, const Predicate& s,
                                                 const Predicate& x) {
  const FinSet ra = product(r, a);
  require(s.carrier == ra, ErrorKind::AmbientMismatch, "parameter must live over R × A");
  const FinSet ambient = product(x.carrier, a);
  Bits out = ambient.none();
  for (const FinFun& f : enumerate_functions(ra, x.carrier)) {
    if (!f.image(s.members).is_subset_of(x.members)) continue;
    for_each_bit(s.members, [&](std::size_t k) { out.set(pair_index(f(k), k % a.size(), a.size())); });
  }
  return {ambient, out};
}

// ----------------------------------------------------------------- lassos --

/// Eventually periodic stream prefix · cycle^ω. Constructed values are kept
/// in canonical form: the cycle is primitive and the prefix is as short as
/// possible, so two lassos denote the same stream iff they are equal.
template <class T>
class BasicLasso {
 public:
  BasicLasso() = default;
  BasicLasso(std::vector<T> prefix, std::vector<T> cycle) : prefix_(std::move(prefix)), cycle_(std::move(cycle)) {
    require(!cycle_.empty(), ErrorKind::InvalidStructure, "lasso cycle must be nonempty");
    canonicalize();
  }

  const std::vector<T>& prefix() const noexcept { return prefix_; }
  const std::vector<T>& cycle() const noexcept { return cycle_; }

  const T& at(std::size_t i) const {
    if (i < prefix_.size()) return prefix_[i];
    return cycle_[(i - prefix_.size()) % cycle_.size()];
  }

  /// The stream λj. x(i + j).
  BasicLasso tail(std::size_t i) const {
    if (i <= prefix_.size()) return BasicLasso(std::vector<T>(prefix_.begin() + static_cast<std::ptrdiff_t>(i), prefix_.end()), cycle_);
    std::vector<T> cycle = cycle_;
    std::rotate(cycle.begin(), cycle.begin() + static_cast<std::ptrdiff_t>((i - prefix_.size()) % cycle.size()),
                cycle.end());
    return BasicLasso({}, std::move(cycle));
  }

  friend bool operator==(const BasicLasso&, const BasicLasso&) = default;
  friend auto operator<=>(const BasicLasso& a, const BasicLasso& b) {
    if (auto c = a.prefix_ <=> b.prefix_; c != 0) return c;
    return a.cycle_ <=> b.cycle_;
  }

 private:
  void canonicalize() {
    const std::size_t n = cycle_.size();
    for (std::size_t p = 1; p < n; ++p) {
      if (n % p != 0) continue;
      bool periodic = true;
      for (std::size_t i = p; i < n && periodic; ++i) periodic = cycle_[i] == cycle_[i - p];
      if (periodic) {
        cycle_.resize(p);
        break;
      }
    }
    while (!prefix_.empty() && prefix_.back() == cycle_.back()) {
      std::rotate(cycle_.rbegin(), cycle_.rbegin() + 1, cycle_.rend());
      prefix_.pop_back();
    }
  }

  std::vector<T> prefix_;
  std::vector<T> cycle_;
};

using Lasso = BasicLasso<Atom>;

inline std::string describe(const Atom& a) { return a; }

template <class T>
std::string describe(const BasicLasso<T>& l) {
  auto join = [](const std::vector<T>& xs) {
    std::string s;
    for (std::size_t i = 0; i < xs.size(); ++i) s += (i ? " " : "") + describe(xs[i]);
    return s;
  };
  return "(" + join(l.prefix()) + ")(" + join(l.cycle()) + ")^w";
}

inline Lasso lasso_tail(const Lasso& v, std::size_t i) { return v.tail(i); }

/// Index bound past which the tails of every given lasso have all recurred.
template <class... L>
std::size_t tail_bound(const L&... ls) {
  const std::size_t prefix = std::max({ls.prefix().size()...});
  std::size_t period = 1;
  ((period = std::lcm(period, ls.cycle().size())), ...);
  return prefix + period;
}

/// The parameter: streams over R forming S0.
struct StreamParam {
  FinSet r;
  std::vector<Lasso> s0;

  StreamParam(FinSet r_, std::vector<Lasso> s0_) : r(std::move(r_)), s0(std::move(s0_)) {
    for (const auto& v : s0)
      for (std::size_t i = 0; i < tail_bound(v); ++i)
        require(r.find(v.at(i)).has_value(), ErrorKind::AmbientMismatch,
                "stream " + describe(v) + " leaves R at \"" + v.at(i) + "\"");
    std::sort(s0.begin(), s0.end());
    s0.erase(std::unique(s0.begin(), s0.end()), s0.end());
  }

  bool contains(const Lasso& v) const { return std::binary_search(s0.begin(), s0.end(), v); }
};

/// x is in the lift of X0 iff some v ∈ S0 satisfies
///   (1) v/i ∈ S0 ⟹ x(i) ∈ X0 for all i, and
///   (2) v/n = v/m ⟹ x(n) = x(m) for all n, m.
/// Beyond the tail bound of v and x both sides repeat, so the indices below
/// it decide both conditions.
template <class T>
bool stream_density_member(const StreamParam& param, const std::function<bool(const T&)>& in_x0,
                           const BasicLasso<T>& x) {
  for (const auto& v : param.s0) {
    const std::size_t bound = tail_bound(v, x);
    std::vector<Lasso> tails;
    tails.reserve(bound);
    for (std::size_t i = 0; i < bound; ++i) tails.push_back(v.tail(i));
    bool ok = true;
    for (std::size_t i = 0; i < bound && ok; ++i) ok = !param.contains(tails[i]) || in_x0(x.at(i));
    for (std::size_t n = 0; n < bound && ok; ++n)
      for (std::size_t m = n + 1; m < bound && ok; ++m) ok = tails[n] != tails[m] || x.at(n) == x.at(m);
    if (ok) return true;
  }
  return false;
}

inline bool stream_density_member(const StreamParam& param, const Predicate& x, const Lasso& stream) {
  const std::function<bool(const Atom&)> in_x0 = [&](const Atom& a) {
    const auto i = x.carrier.find(a);
    require(i.has_value(), ErrorKind::AmbientMismatch, "stream symbol \"" + a + "\" is not in the carrier");
    return x.members.test(*i);
  };
  return stream_density_member(param, in_x0, stream);
}

/// δ(x) = λm. x/m as a lasso whose symbols are the tails of x.
template <class T>
BasicLasso<BasicLasso<T>> comultiply(const BasicLasso<T>& x) {
  std::vector<BasicLasso<T>> prefix, cycle;
  for (std::size_t i = 0; i < x.prefix().size(); ++i) prefix.push_back(x.tail(i));
  for (std::size_t i = 0; i < x.cycle().size(); ++i) cycle.push_back(x.tail(x.prefix().size() + i));
  return {std::move(prefix), std::move(cycle)};
}

// ----------------------------------------------------------- law checks --

struct StreamSample {
  StreamParam param;
  Predicate x;
  std::vector<Lasso> streams;
};

/// Counit and comultiplication of D_A restrict to the lifted objects, and
/// the closed formula matches enumeration. Exhaustive over all carriers of
/// the given size bound, all S0 and all X0.
inline Report product_comonad_laws(std::size_t max_size = 2) {
  Report report;
  auto& formula = report.add("product: formula = enumeration");
  auto& counit = report.add("product: counit maps lift(X) into X");
  auto& comult = report.add("product: comultiplication maps lift(X) into lift(lift(X))");
  for (std::size_t na = 1; na <= max_size; ++na)
    for (std::size_t nr = 0; nr <= max_size; ++nr)
      for (std::size_t nx = 0; nx <= max_size; ++nx) {
        const FinSet a = FinSet::range(na);
        const FinSet r = FinSet::range(nr);
        const FinSet xs = FinSet::range(nx);
        const FinSet ra = product(r, a);
        for (std::uint64_t sm = 0; sm < (std::uint64_t{1} << ra.size()); ++sm)
          for (std::uint64_t xm = 0; xm < (std::uint64_t{1} << nx); ++xm) {
            const Predicate s{ra, bits_from_mask(ra.size(), sm)};
            const Predicate x{xs, bits_from_mask(nx, xm)};
            const Predicate lifted = product_density_lift(a, r, s, x);
            ++formula.cases;
            if (lifted != product_density_lift_enumerated(a, r, s, x))
              fail(formula, "S0=" + describe(ra, s.members) + " X0=" + describe(xs, x.members));
            const Predicate lifted2 = product_density_lift(a, r, s, lifted);
            for_each_bit(lifted.members, [&](std::size_t k) {
              ++counit.cases;
              ++comult.cases;
              const std::size_t xi = k / na;
              const std::size_t ai = k % na;
              if (!x.members.test(xi)) fail(counit, "member " + lifted.carrier[k]);
              if (!lifted2.members.test(pair_index(k, ai, na))) fail(comult, "member " + lifted.carrier[k]);
            });
          }
      }
  return report;
}

/// Counit and comultiplication of the stream comonad on sampled members.
inline Report stream_comonad_laws(const std::vector<StreamSample>& samples) {
  Report report;
  auto& counit = report.add("stream: counit maps lift(X) into X");
  auto& comult = report.add("stream: comultiplication maps lift(X) into lift(lift(X))");
  for (const auto& sample : samples) {
    const std::function<bool(const Lasso&)> in_lift = [&](const Lasso& t) {
      return stream_density_member(sample.param, sample.x, t);
    };
    for (const auto& stream : sample.streams) {
      if (!in_lift(stream)) continue;
      ++counit.cases;
      if (!sample.x.members.test(sample.x.carrier.index_of(stream.at(0)))) fail(counit, describe(stream));
      ++comult.cases;
      if (!stream_density_member(sample.param, in_lift, comultiply(stream))) fail(comult, describe(stream));
    }
  }
  return report;
}

inline Report comonad_laws_check(const std::vector<StreamSample>& samples, std::size_t product_max_size = 2) {
  Report report = product_comonad_laws(product_max_size);
  report.append(stream_comonad_laws(samples));
  return report;
}

}  // namespace kanlift
