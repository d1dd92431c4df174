#pragma once

// Membership oracles for the codensity liftings of the sub-Giry monad to
// relations over finite measurable spaces, and simulation / bisimulation
// checks for finite LMPs built on them. Lifted relations over measures are
// never materialized: every question is a finite loop over block unions.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/measurable.hpp"
#include "kanlift/relation.hpp"

namespace kanlift {

/// Binary predicate S0 on [0,1]. The subset characterizations are exact for
/// LEQ and EQ; a custom predicate must satisfy indicator closure, convex
/// hulls and pointwise suprema, which only the caller can vouch for.
struct RelParam {
  std::string name;
  std::function<bool(const Rational&, const Rational&)> holds;
  bool caller_certified = false;

  bool operator()(const Rational& a, const Rational& b) const { return holds(a, b); }

  static RelParam leq() {
    return {"leq", [](const Rational& a, const Rational& b) { return a <= b; }, false};
  }
  static RelParam eq() {
    return {"eq", [](const Rational& a, const Rational& b) { return a == b; }, false};
  }
  static RelParam custom(std::string name, std::function<bool(const Rational&, const Rational&)> pred,
                         std::ostream& warn = std::cerr) {
    warn << "warning: relation parameter \"" << name
         << "\" is caller-certified; membership is exact only under the closure hypotheses\n";
    return {std::move(name), std::move(pred), true};
  }
};

struct BRelObj {
  FinMeasSpace space1;
  FinMeasSpace space2;
  Relation rel;

  void validate() const {
    require(rel.rows() == space1.carrier().size() && rel.cols() == space2.carrier().size(),
            ErrorKind::CarrierMismatch, "relation does not fit the two spaces");
  }
};

struct ERelObj {
  FinMeasSpace space;
  Relation rel;

  void validate() const {
    require(rel.rows() == space.carrier().size() && rel.cols() == space.carrier().size(),
            ErrorKind::CarrierMismatch, "relation does not fit the space");
  }
};

/// A pair of measurable sets, used both as test sets and as witnesses.
struct TestPair {
  Bits v;
  Bits w;
};

namespace detail {

// Value of the indicator of `mask`'s block union at point x.
inline Rational indicator(const FinMeasSpace& space, std::uint64_t mask, std::size_t x) {
  return Rational(static_cast<int>((mask >> space.block_of(x)) & 1U));
}

// All measurable (V, W), as block masks, such that (χ_V, χ_W) maps every
// related pair into S0.
inline std::vector<std::pair<std::uint64_t, std::uint64_t>> admissible_pairs(const FinMeasSpace& s1,
                                                                              const FinMeasSpace& s2,
                                                                              const Relation& rel,
                                                                              const RelParam& s0) {
  std::vector<std::pair<std::uint64_t, std::uint64_t>> out;
  const std::uint64_t n1 = s1.measurable_count();
  const std::uint64_t n2 = s2.measurable_count();
  for (std::uint64_t v = 0; v < n1; ++v) {
    for (std::uint64_t w = 0; w < n2; ++w) {
      bool ok = true;
      for (std::size_t a = 0; a < rel.rows() && ok; ++a)
        for_each_bit(rel.row(a), [&](std::size_t b) {
          ok = ok && s0(indicator(s1, v, a), indicator(s2, w, b));
        });
      if (ok) out.emplace_back(v, w);
    }
  }
  return out;
}

inline std::optional<TestPair> first_violation(const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs,
                                               const RelParam& s0, const SubProb& v1, const SubProb& v2) {
  for (const auto& [v, w] : pairs)
    if (!s0(v1.on_blocks(v), v2.on_blocks(w)))
      return TestPair{v1.space().block_union(v), v2.space().block_union(w)};
  return std::nullopt;
}

}  // namespace detail

/// The pair of measures is in the lifted relation over x iff no admissible
/// test pair (V, W) separates them. Returns the separating pair if any.
inline std::optional<TestPair> brel_violation(const BRelObj& x, const RelParam& s0, const SubProb& v1,
                                              const SubProb& v2) {
  x.validate();
  require(v1.space() == x.space1 && v2.space() == x.space2, ErrorKind::SpaceMismatch,
          "brel_member: measures over other spaces");
  return detail::first_violation(detail::admissible_pairs(x.space1, x.space2, x.rel, s0), s0, v1, v2);
}

inline bool brel_member(const BRelObj& x, const RelParam& s0, const SubProb& v1, const SubProb& v2) {
  return !brel_violation(x, s0, v1, v2).has_value();
}

/// Endo-relation variant: only V = W test sets are considered.
inline std::optional<Bits> erel_violation(const ERelObj& x, const RelParam& s0, const SubProb& v1,
                                          const SubProb& v2) {
  x.validate();
  require(v1.space() == x.space && v2.space() == x.space, ErrorKind::SpaceMismatch,
          "erel_member: measures over another space");
  const std::uint64_t n = x.space.measurable_count();
  for (std::uint64_t v = 0; v < n; ++v) {
    bool preserving = true;
    for (std::size_t a = 0; a < x.rel.rows() && preserving; ++a)
      for_each_bit(x.rel.row(a), [&](std::size_t b) {
        preserving = preserving && s0(detail::indicator(x.space, v, a), detail::indicator(x.space, v, b));
      });
    if (preserving && !s0(v1.on_blocks(v), v2.on_blocks(v))) return x.space.block_union(v);
  }
  return std::nullopt;
}

inline bool erel_member(const ERelObj& x, const RelParam& s0, const SubProb& v1, const SubProb& v2) {
  return !erel_violation(x, s0, v1, v2).has_value();
}

/// Where a simulation or bisimulation condition breaks.
struct SimWitness {
  std::size_t s1 = 0;
  std::size_t s2 = 0;
  std::size_t action = 0;
  Bits v;
  Bits w;
};

struct SimResult {
  bool holds = true;
  std::optional<SimWitness> witness;

  explicit operator bool() const noexcept { return holds; }
};

inline std::string describe(const SimWitness& w, const LMP& lmp1, const LMP& lmp2) {
  return "pair (" + lmp1.states()[w.s1] + "," + lmp2.states()[w.s2] + "), action \"" +
         lmp1.actions()[w.action] + "\", V=" + describe(lmp1.states(), w.v) + ", W=" +
         describe(lmp2.states(), w.w);
}

namespace detail {

inline void require_shared_actions(const LMP& a, const LMP& b) {
  require(a.actions() == b.actions(), ErrorKind::ActionMismatch, "LMPs have different action sets");
}

inline void require_fits(const Relation& r, const LMP& a, const LMP& b) {
  require(r.rows() == a.states().size() && r.cols() == b.states().size(), ErrorKind::CarrierMismatch,
          "relation does not fit the state spaces");
}

// Checks every related pair and action against a fixed family of test pairs.
inline SimResult check_pairs(const LMP& lmp1, const LMP& lmp2, const Relation& r, const RelParam& s0,
                             const std::vector<std::pair<std::uint64_t, std::uint64_t>>& pairs) {
  for (std::size_t s1 = 0; s1 < r.rows(); ++s1) {
    for (const std::size_t s2 : bit_indices(r.row(s1))) {
      for (std::size_t a = 0; a < lmp1.actions().size(); ++a) {
        if (auto bad = first_violation(pairs, s0, lmp1.kernel(a, s1), lmp2.kernel(a, s2)))
          return {false, SimWitness{s1, s2, a, std::move(bad->v), std::move(bad->w)}};
      }
    }
  }
  return {};
}

}  // namespace detail

/// Simulation on one LMP: r reflexive and, for related states and every
/// action, the kernels are related by the LEQ lifting of r. The test sets are
/// the measurable U with r[U] ⊆ U.
inline SimResult is_simulation_single(const LMP& lmp, const Relation& r) {
  detail::require_fits(r, lmp, lmp);
  require(r.is_reflexive(), ErrorKind::NotReflexive, "simulation relation must be reflexive");
  const auto leq = RelParam::leq();
  std::vector<std::pair<std::uint64_t, std::uint64_t>> pairs;
  const std::uint64_t n = lmp.space().measurable_count();
  for (std::uint64_t u = 0; u < n; ++u) {
    const Bits set = lmp.space().block_union(u);
    if (r.image(set).is_subset_of(set)) pairs.emplace_back(u, u);
  }
  return detail::check_pairs(lmp, lmp, r, leq, pairs);
}

/// Simulation between two LMPs: for related states and every action,
/// kernel1(V) ≤ kernel2(W) whenever r[V] ⊆ W.
inline SimResult is_simulation_two(const LMP& lmp1, const LMP& lmp2, const Relation& r) {
  detail::require_shared_actions(lmp1, lmp2);
  detail::require_fits(r, lmp1, lmp2);
  const auto leq = RelParam::leq();
  return detail::check_pairs(lmp1, lmp2, r, leq, detail::admissible_pairs(lmp1.space(), lmp2.space(), r, leq));
}

/// Bisimulation: kernel1(V) = kernel2(W) on every r-closed measurable pair.
inline SimResult is_bisimulation(const LMP& lmp1, const LMP& lmp2, const Relation& r) {
  detail::require_shared_actions(lmp1, lmp2);
  detail::require_fits(r, lmp1, lmp2);
  const auto eq = RelParam::eq();
  return detail::check_pairs(lmp1, lmp2, r, eq, detail::admissible_pairs(lmp1.space(), lmp2.space(), r, eq));
}

/// r[V] is measurable in space2 for every measurable V of space1.
inline bool preserves_measurable_sets(const Relation& r, const FinMeasSpace& space1, const FinMeasSpace& space2) {
  require(r.rows() == space1.carrier().size() && r.cols() == space2.carrier().size(), ErrorKind::CarrierMismatch,
          "relation does not fit the spaces");
  const std::uint64_t n = space1.measurable_count();
  for (std::uint64_t v = 0; v < n; ++v)
    if (!space2.is_measurable(r.image(space1.block_union(v)))) return false;
  return true;
}

/// Greatest fixpoint of the two-LMP simulation functional, starting from
/// `start` (the total relation by default). No reflexivity is imposed. The
/// result need not compose with other simulations.
inline Relation largest_simulation_two(const LMP& lmp1, const LMP& lmp2,
                                       std::optional<Relation> start = std::nullopt) {
  detail::require_shared_actions(lmp1, lmp2);
  Relation r = start ? std::move(*start) : Relation::full(lmp1.states().size(), lmp2.states().size());
  detail::require_fits(r, lmp1, lmp2);
  const auto leq = RelParam::leq();
  for (;;) {
    const auto pairs = detail::admissible_pairs(lmp1.space(), lmp2.space(), r, leq);
    Relation next(r.rows(), r.cols());
    for (std::size_t s1 = 0; s1 < r.rows(); ++s1) {
      for_each_bit(r.row(s1), [&](std::size_t s2) {
        bool ok = true;
        for (std::size_t a = 0; a < lmp1.actions().size() && ok; ++a)
          ok = !detail::first_violation(pairs, leq, lmp1.kernel(a, s1), lmp2.kernel(a, s2)).has_value();
        if (ok) next.set(s1, s2);
      });
    }
    if (next == r) return r;
    r = std::move(next);
  }
}

}  // namespace kanlift
