#pragma once

// Codensity lifting along posetal fibrations with fibred meets. For a single
// parameter (R, S) with S above T R, the lift of X is
//
//     ⋀_{f ∈ E(X, S)} (kleisli(p f))⁻¹(S)        (a fibre object above T(pX))
//
// A parameter with several entries contributes the union of their families
// to one meet. An empty family yields the top of the fibre.

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/fibration.hpp"
#include "kanlift/monad.hpp"
#include "kanlift/report.hpp"

namespace kanlift {

/// Reindexing and meet used by the engine. Tests substitute faulty versions
/// to check that the verification batteries notice.
template <FibreType F>
struct FibreOps {
  std::function<F(const map_t<F>&, const F&)> reindex;
  std::function<F(std::span<const F>)> meet;
};

template <FibreType F>
FibreOps<F> default_ops() {
  return {[](const map_t<F>& f, const F& s) { return kanlift::reindex(f, s); },
          [](std::span<const F> items) { return kanlift::meet(items); }};
}

template <FibreType F>
struct ParamEntry {
  carrier_t<F> base;  // R
  F s;                // S, above T R
};

template <FibreType F>
struct LiftingParam {
  std::vector<ParamEntry<F>> entries;
};

template <FibreType F>
struct LiftedObject {
  F base;
  F result;
  std::size_t witness_count = 0;  // hom-set elements inspected
};

template <FibreType F>
LiftedObject<F> codensity_lift(const FiniteMonad& m, const LiftingParam<F>& param, const F& x,
                               const FibreOps<F>& ops = default_ops<F>()) {
  require(!param.entries.empty(), ErrorKind::EmptyList, "lifting parameter without entries");
  const carrier_t<F> tx = apply_monad(m, x.carrier);
  std::vector<F> family;
  std::size_t inspected = 0;
  for (const auto& entry : param.entries) {
    require(apply_monad(m, entry.base) == entry.s.carrier, ErrorKind::CarrierMismatch,
            "lifting parameter: S is not above T R");
    for (const auto& f : hom_enumerate(x, entry.s)) {
      ++inspected;
      family.push_back(ops.reindex(kleisli_map(m, f), entry.s));
    }
  }
  F result = family.empty() ? F::top(tx) : ops.meet(family);
  return {x, std::move(result), inspected};
}

template <FibreType F>
using LiftFn = std::function<F(const F&)>;

template <FibreType F>
LiftFn<F> as_lifting(const FiniteMonad& m, const LiftingParam<F>& param,
                     const FibreOps<F>& ops = default_ops<F>()) {
  return [m, param, ops](const F& x) { return codensity_lift(m, param, x, ops).result; };
}

// ---------------------------------------------------------------------------
// Built-in parameters for the powerset monad, all with R = {*}.

namespace params {

inline FinSet one() { return FinSet{"*"}; }
/// T 1 = {∅, {*}}; index 0 is ∅ and index 1 is {*}.
inline FinSet t_one() { return powerset::apply(one()); }

/// ∅ ≤ {*}: yields the lower preorder.
inline LiftingParam<Preorder> lower_preorder() {
  const FinSet t1 = t_one();
  return {{{one(), Preorder::generated(t1, {{"{}", "{*}"}})}}};
}

/// {*} ≤ ∅: yields the upper preorder.
inline LiftingParam<Preorder> upper_preorder() {
  const FinSet t1 = t_one();
  return {{{one(), Preorder::generated(t1, {{"{*}", "{}"}})}}};
}

/// Both entries together: the convex preorder.
inline LiftingParam<Preorder> convex_preorder() {
  auto p = lower_preorder();
  p.entries.push_back(upper_preorder().entries.front());
  return p;
}

/// Opens {∅, {{*}}, T1}: yields the lower Vietoris topology.
inline LiftingParam<Topology> lower_vietoris() {
  const FinSet t1 = t_one();
  return {{{one(), Topology::from_subbasis(t1, {singleton_bits(2, 1)})}}};
}

/// Opens {∅, {∅}, T1}: yields the upper Vietoris topology.
inline LiftingParam<Topology> upper_vietoris() {
  const FinSet t1 = t_one();
  return {{{one(), Topology::from_subbasis(t1, {singleton_bits(2, 0)})}}};
}

/// Relational analogue of the lower preorder: S = {(∅,∅), (∅,{*}), ({*},{*})}
/// above T1 × T1. The lift relates (V, W) iff every member of V is related to
/// some member of W.
inline LiftingParam<BinaryRelation> lower_relation() {
  const FinSet t1 = t_one();
  Relation r(2, 2);
  r.set(0, 0);
  r.set(0, 1);
  r.set(1, 1);
  return {{{CarrierPair{one(), one()}, BinaryRelation{{t1, t1}, r}}}};
}

}  // namespace params

// ---------------------------------------------------------------------------
// Closed forms of the powerset liftings, computed directly from the
// element-wise formulas.

enum class ClosedForm { LowerPre, UpperPre, ConvexPre, LowerVietoris, UpperVietoris };

namespace detail {
inline Bits mask_bits(std::size_t n, std::size_t mask) { return bits_from_mask(n, mask); }
}  // namespace detail

/// V ⊑ W iff ∀i∈V ∃j∈W. i ≤ j
inline Preorder lower_preorder(const Preorder& x) {
  const std::size_t n = x.carrier.size();
  const FinSet tx = powerset::apply(x.carrier);
  Relation r(tx.size(), tx.size());
  for (std::size_t v = 0; v < tx.size(); ++v)
    for (std::size_t w = 0; w < tx.size(); ++w) {
      bool ok = true;
      for (std::size_t i = 0; i < n && ok; ++i) {
        if (!((v >> i) & 1U)) continue;
        bool found = false;
        for (std::size_t j = 0; j < n && !found; ++j) found = ((w >> j) & 1U) && x.le(i, j);
        ok = found;
      }
      r.set(v, w, ok);
    }
  return {tx, std::move(r)};
}

/// V ⊑ W iff ∀j∈W ∃i∈V. i ≤ j
inline Preorder upper_preorder(const Preorder& x) {
  const std::size_t n = x.carrier.size();
  const FinSet tx = powerset::apply(x.carrier);
  Relation r(tx.size(), tx.size());
  for (std::size_t v = 0; v < tx.size(); ++v)
    for (std::size_t w = 0; w < tx.size(); ++w) {
      bool ok = true;
      for (std::size_t j = 0; j < n && ok; ++j) {
        if (!((w >> j) & 1U)) continue;
        bool found = false;
        for (std::size_t i = 0; i < n && !found; ++i) found = ((v >> i) & 1U) && x.le(i, j);
        ok = found;
      }
      r.set(v, w, ok);
    }
  return {tx, std::move(r)};
}

inline Preorder convex_preorder(const Preorder& x) {
  Preorder lower = lower_preorder(x);
  lower.leq &= upper_preorder(x).leq;
  return lower;
}

/// Generated by ◇U = {V | V ∩ U ≠ ∅} for U open.
inline Topology lower_vietoris(const Topology& x) {
  const FinSet tx = powerset::apply(x.carrier);
  std::vector<Bits> subbasis;
  for (const auto& u : x.opens()) {
    const std::size_t um = powerset::to_mask(u);
    Bits diamond(tx.size());
    for (std::size_t v = 0; v < tx.size(); ++v) diamond.set(v, (v & um) != 0);
    subbasis.push_back(std::move(diamond));
  }
  return Topology::from_subbasis(tx, subbasis);
}

/// Generated by □U = {V | V ⊆ U} for U open.
inline Topology upper_vietoris(const Topology& x) {
  const FinSet tx = powerset::apply(x.carrier);
  std::vector<Bits> subbasis;
  for (const auto& u : x.opens()) {
    const std::size_t um = powerset::to_mask(u);
    Bits box(tx.size());
    for (std::size_t v = 0; v < tx.size(); ++v) box.set(v, (v & ~um) == 0);
    subbasis.push_back(std::move(box));
  }
  return Topology::from_subbasis(tx, subbasis);
}

inline FibreObject closed_form_lift(ClosedForm kind, const FibreObject& x) {
  switch (kind) {
    case ClosedForm::LowerPre: return lower_preorder(expect_tag<Preorder>(x));
    case ClosedForm::UpperPre: return upper_preorder(expect_tag<Preorder>(x));
    case ClosedForm::ConvexPre: return convex_preorder(expect_tag<Preorder>(x));
    case ClosedForm::LowerVietoris: return lower_vietoris(expect_tag<Topology>(x));
    case ClosedForm::UpperVietoris: return upper_vietoris(expect_tag<Topology>(x));
  }
  throw Error(ErrorKind::UnsupportedTag, "unknown closed form");
}

// ---------------------------------------------------------------------------
// Lifting laws at the posetal level:
//   unit:    η_{pX} ∈ E(X, L X)
//   kleisli: f ∈ E(X, L Y)  ⟹  kleisli(pf) ∈ E(L X, L Y)

template <FibreType F>
Report verify_lifting_laws(const FiniteMonad& m, const LiftFn<F>& lift, const std::vector<F>& samples,
                           const std::string& label = "lifting") {
  Report report;
  auto& carrier = report.add(label + ": L X lies above T(pX)");
  auto& unit = report.add(label + ": unit is a morphism X -> L X");
  auto& ext = report.add(label + ": kleisli extension is a morphism L X -> L Y");

  std::vector<F> lifted;
  lifted.reserve(samples.size());
  for (const auto& x : samples) {
    lifted.push_back(lift(x));
    ++carrier.cases;
    if (!(lifted.back().carrier == apply_monad(m, x.carrier))) fail(carrier, "X = " + describe(x));
  }
  if (!carrier.passed) return report;

  for (std::size_t i = 0; i < samples.size(); ++i) {
    ++unit.cases;
    if (!is_morphism(unit_map(m, samples[i].carrier), samples[i], lifted[i]))
      fail(unit, "X = " + describe(samples[i]) + ", L X = " + describe(lifted[i]));
  }
  for (std::size_t i = 0; i < samples.size(); ++i) {
    for (std::size_t j = 0; j < samples.size(); ++j) {
      for (const auto& f : hom_enumerate(samples[i], lifted[j])) {
        ++ext.cases;
        if (!is_morphism(kleisli_map(m, f), lifted[i], lifted[j]))
          fail(ext, "X = " + describe(samples[i]) + ", Y = " + describe(samples[j]) + ", f = " + describe(f));
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Algebraic operations. For a faithful posetal fibration an operation α lifts
// to the codensity lifting with parameter (R, S) iff α_R : A ⋔ S -> S is a
// morphism of the total category.

template <FibreType F>
  requires HasPowers<F>
bool algop_lift_exists(const FiniteMonad& m, const LiftingParam<F>& param, const AlgebraicOp& op) {
  require(param.entries.size() == 1, ErrorKind::InvalidStructure,
          "algop_lift_exists needs a single-entry parameter");
  const auto& entry = param.entries.front();
  require(apply_monad(m, entry.base) == entry.s.carrier, ErrorKind::CarrierMismatch,
          "lifting parameter: S is not above T R");
  return is_morphism(op.component(entry.base), power_object(op.arity, entry.s), entry.s);
}

inline bool algop_lift_exists(const FiniteMonad& m, const FibreObject& s, const FinSet& base,
                              const AlgebraicOp& op) {
  return std::visit(
      [&](const auto& v) -> bool {
        using F = std::remove_cvref_t<decltype(v)>;
        if constexpr (HasPowers<F> && std::is_same_v<carrier_t<F>, FinSet>) {
          return algop_lift_exists(m, LiftingParam<F>{{{base, v}}}, op);
        } else {
          throw Error(ErrorKind::UnsupportedTag,
                      "powers are not available for " + std::string(to_string(F::tag)));
        }
      },
      s);
}

/// α_{pX} : A ⋔ L X -> L X is a morphism for every sample X.
template <FibreType F>
  requires HasPowers<F>
Report verify_algop_lifting(const AlgebraicOp& op, const LiftFn<F>& lift, const std::vector<F>& samples,
                            const std::string& label) {
  Report report;
  auto& check = report.add(label + ": " + op.name + " is a morphism A ⋔ L X -> L X (|A| = " +
                           std::to_string(op.arity.size()) + ")");
  for (const auto& x : samples) {
    const F lx = lift(x);
    ++check.cases;
    if (!is_morphism(op.component(x.carrier), power_object(op.arity, lx), lx))
      fail(check, "X = " + describe(x));
  }
  return report;
}

// ---------------------------------------------------------------------------
// Closed objects. S above T(pX) is closed w.r.t. X iff η_{pX} ∈ E(X, S) and
// kleisli(f) ∈ E(S, S) for every f ∈ E(X, S); equivalently S = [S]^{pX} X.

template <FibreType F>
bool is_closed(const FiniteMonad& m, const F& x, const F& s) {
  require(s.carrier == apply_monad(m, x.carrier), ErrorKind::CarrierMismatch,
          "is_closed: S is not above T(pX)");
  if (!is_morphism(unit_map(m, x.carrier), x, s)) return false;
  for (const auto& f : hom_enumerate(x, s))
    if (!is_morphism(kleisli_map(m, f), s, s)) return false;
  return true;
}

/// φ_{X,Y}(S) = [S]^{pX} Y for S closed w.r.t. X.
template <FibreType F>
F phi(const FiniteMonad& m, const F& s, const F& x, const F& y) {
  require(is_closed(m, x, s), ErrorKind::NotClosed, "phi: parameter is not closed w.r.t. X");
  return codensity_lift(m, LiftingParam<F>{{{x.carrier, s}}}, y).result;
}

}  // namespace kanlift
