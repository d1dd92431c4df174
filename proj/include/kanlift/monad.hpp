#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/finset.hpp"
#include "kanlift/report.hpp"

namespace kanlift {

/// A monad on finite sets whose T X is itself an explicitly enumerable
/// finite set, presented as a Kleisli triple. The multiplication is
/// kleisli(id_{T X}).
struct FiniteMonad {
  std::string name;
  std::function<FinSet(const FinSet&)> apply;
  std::function<FinFun(const FinSet&)> unit;
  /// f : X -> T Y  gives  f# : T X -> T Y
  std::function<FinFun(const FinFun&)> kleisli;

  FinFun multiplication(const FinSet& x) const {
    return kleisli(FinFun::identity(apply(x)));
  }
};

namespace powerset {

inline constexpr std::size_t kMaxCarrier = 20;

/// Atom naming the subset `mask` of x, e.g. "{a,b}".
inline Atom subset_atom(const FinSet& x, std::uint64_t mask) {
  std::string s = "{";
  bool first = true;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if ((mask >> i) & 1U) {
      if (!first) s += ',';
      s += x[i];
      first = false;
    }
  }
  return s + "}";
}

/// P(x); the element with index m is the subset whose i-th member bit is bit i of m.
inline FinSet apply(const FinSet& x) {
  require(x.size() <= kMaxCarrier, ErrorKind::CarrierTooLarge,
          "powerset of a set with more than 20 elements");
  const std::uint64_t n = std::uint64_t{1} << x.size();
  std::vector<Atom> atoms;
  atoms.reserve(n);
  for (std::uint64_t m = 0; m < n; ++m) atoms.push_back(subset_atom(x, m));
  return FinSet(std::move(atoms));
}

inline std::uint64_t singleton_mask(std::size_t i) { return std::uint64_t{1} << i; }

inline Bits to_bits(std::size_t n, std::size_t mask) { return bits_from_mask(n, mask); }

inline std::size_t to_mask(const Bits& bits) {
  std::size_t m = 0;
  for_each_bit(bits, [&](std::size_t i) { m |= std::size_t{1} << i; });
  return m;
}

}  // namespace powerset

/// The powerset monad: unit x ↦ {x}, f#(V) = ⋃_{x∈V} f(x).
inline FiniteMonad powerset_monad() {
  FiniteMonad m;
  m.name = "powerset";
  m.apply = powerset::apply;
  m.unit = [](const FinSet& x) {
    std::vector<std::size_t> images(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) images[i] = powerset::singleton_mask(i);
    return FinFun(x, powerset::apply(x), std::move(images));
  };
  m.kleisli = [](const FinFun& f) {
    const FinSet tx = powerset::apply(f.dom());
    std::vector<std::size_t> images(tx.size(), 0);
    // images[V] = images[V minus its lowest member] ∪ f(lowest member)
    for (std::size_t v = 1; v < images.size(); ++v) {
      const std::size_t low = static_cast<std::size_t>(__builtin_ctzll(v));
      images[v] = images[v & (v - 1)] | f(low);
    }
    return FinFun(tx, f.cod(), std::move(images));
  };
  return m;
}

/// Extensional check of the Kleisli-triple laws over every triple of carriers
/// and every pair of Kleisli maps between them.
inline Report verify_monad_laws(const FiniteMonad& m, const std::vector<FinSet>& carriers) {
  Report report;
  auto& left_unit = report.add(m.name + ": kleisli(unit) = id");
  auto& right_unit = report.add(m.name + ": kleisli(f) . unit = f");
  auto& assoc = report.add(m.name + ": kleisli(g) . kleisli(f) = kleisli(kleisli(g) . f)");

  for (const auto& x : carriers) {
    const FinSet tx = m.apply(x);
    const FinFun unit_x = m.unit(x);
    ++left_unit.cases;
    if (!(m.kleisli(unit_x) == FinFun::identity(tx)))
      fail(left_unit, "X = " + describe(x, x.full()));

    for (const auto& y : carriers) {
      const FinSet ty = m.apply(y);
      for (const auto& f : enumerate_functions(x, ty)) {
        const FinFun fk = m.kleisli(f);
        ++right_unit.cases;
        if (!(compose(fk, unit_x) == f)) fail(right_unit, "f = " + describe(f));

        for (const auto& z : carriers) {
          const FinSet tz = m.apply(z);
          for (const auto& g : enumerate_functions(y, tz)) {
            const FinFun gk = m.kleisli(g);
            ++assoc.cases;
            if (!(compose(gk, fk) == m.kleisli(compose(gk, f))))
              fail(assoc, "f = " + describe(f) + ", g = " + describe(g));
          }
        }
      }
    }
  }
  return report;
}

/// An A-ary algebraic operation: a family α_X : (A ⋔ T X) -> T X natural in
/// Kleisli morphisms. The domain of each component is function_space(A, T X).
struct AlgebraicOp {
  std::string name;
  FinSet arity;
  std::function<FinFun(const FinSet&)> component;
};

/// A-ary union on the powerset monad.
inline AlgebraicOp union_op(const FinSet& arity) {
  AlgebraicOp op;
  op.name = "union";
  op.arity = arity;
  op.component = [arity](const FinSet& x) {
    const FinSet tx = powerset::apply(x);
    const FinSet dom = function_space(arity, tx);
    std::vector<std::size_t> images(dom.size());
    for (std::size_t t = 0; t < dom.size(); ++t) {
      std::size_t u = 0;
      for (const auto v : function_digits(t, arity.size(), tx.size())) u |= v;
      images[t] = u;
    }
    return FinFun(dom, tx, std::move(images));
  };
  return op;
}

/// A ⋔ g : (A ⋔ X) -> (A ⋔ Y), post-composition with g.
inline FinFun power_map(const FinSet& a, const FinFun& g) {
  const FinSet dom = function_space(a, g.dom());
  const FinSet cod = function_space(a, g.cod());
  std::vector<std::size_t> images(dom.size());
  for (std::size_t t = 0; t < dom.size(); ++t) {
    auto digits = function_digits(t, a.size(), g.dom().size());
    for (auto& d : digits) d = g(d);
    images[t] = function_index(digits, g.cod().size());
  }
  return FinFun(dom, cod, std::move(images));
}

/// kleisli(f) ∘ α_X = α_Y ∘ (A ⋔ kleisli(f)) for every f : X -> T Y.
inline Report verify_algop_naturality(const FiniteMonad& m, const AlgebraicOp& op,
                                      const std::vector<FinSet>& carriers) {
  Report report;
  auto& check = report.add(op.name + ": naturality in Kleisli morphisms");
  for (const auto& x : carriers) {
    const FinFun alpha_x = op.component(x);
    for (const auto& y : carriers) {
      const FinFun alpha_y = op.component(y);
      for (const auto& f : enumerate_functions(x, m.apply(y))) {
        const FinFun fk = m.kleisli(f);
        ++check.cases;
        if (!(compose(fk, alpha_x) == compose(alpha_y, power_map(op.arity, fk))))
          fail(check, "f = " + describe(f));
      }
    }
  }
  return report;
}

}  // namespace kanlift
