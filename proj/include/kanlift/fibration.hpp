#pragma once

// Posetal fibrations over finite sets. Each fibre type below is an object of
// a total category sitting above its `carrier`; reindexing, meets, morphism
// tests and hom enumeration are provided as overloads so that the lifting
// engine can be written once as a template.
//
// Fibre order per type (a ≤ b):
//   Predicate, Preorder, EndoRelation, BinaryRelation : inclusion
//   Topology     : a is finer than b (every b-open is a-open)
//   Pseudometric : a ≥ b pointwise, so the meet is the pointwise sup
//
// Finite topologies are stored as their minimal open neighbourhoods
// nbhd[x] = ⋂{U open | x ∈ U}; the open sets are exactly the unions of
// these, so the representation is canonical and open families are
// recovered on demand.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <iterator>
#include <ranges>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kanlift/finset.hpp"
#include "kanlift/monad.hpp"
#include "kanlift/rational.hpp"
#include "kanlift/relation.hpp"

namespace kanlift {

enum class FibreTag { Pred, Pre, Top, ERel, BRel, Met };

constexpr std::string_view to_string(FibreTag tag) {
  switch (tag) {
    case FibreTag::Pred: return "PRED";
    case FibreTag::Pre: return "PRE";
    case FibreTag::Top: return "TOP";
    case FibreTag::ERel: return "EREL";
    case FibreTag::BRel: return "BREL";
    case FibreTag::Met: return "MET";
  }
  return "?";
}

// ---------------------------------------------------------------------------
// Carriers and maps. Binary relations live over pairs of sets.

struct CarrierPair {
  FinSet left;
  FinSet right;
  friend bool operator==(const CarrierPair&, const CarrierPair&) = default;
};

struct FunPair {
  FinFun left;
  FinFun right;
  friend bool operator==(const FunPair&, const FunPair&) = default;
};

inline FinSet apply_monad(const FiniteMonad& m, const FinSet& x) { return m.apply(x); }
inline CarrierPair apply_monad(const FiniteMonad& m, const CarrierPair& x) {
  return {m.apply(x.left), m.apply(x.right)};
}

inline FinFun unit_map(const FiniteMonad& m, const FinSet& x) { return m.unit(x); }
inline FunPair unit_map(const FiniteMonad& m, const CarrierPair& x) {
  return {m.unit(x.left), m.unit(x.right)};
}

inline FinFun kleisli_map(const FiniteMonad& m, const FinFun& f) { return m.kleisli(f); }
inline FunPair kleisli_map(const FiniteMonad& m, const FunPair& f) {
  return {m.kleisli(f.left), m.kleisli(f.right)};
}

inline FunPair compose(const FunPair& g, const FunPair& f) {
  return {compose(g.left, f.left), compose(g.right, f.right)};
}

inline FinFun identity_map(const FinSet& x) { return FinFun::identity(x); }
inline FunPair identity_map(const CarrierPair& x) {
  return {FinFun::identity(x.left), FinFun::identity(x.right)};
}

inline std::string describe(const FunPair& f) {
  return "(" + describe(f.left) + ", " + describe(f.right) + ")";
}

/// Lazy enumeration of pairs of functions, left component most significant.
class PairFunctionRange : public std::ranges::view_interface<PairFunctionRange> {
 public:
  class iterator {
   public:
    using value_type = FunPair;
    using difference_type = std::ptrdiff_t;
    using iterator_concept = std::input_iterator_tag;

    iterator() = default;
    explicit iterator(const PairFunctionRange* range)
        : range_(range), left_(range->left_.begin()), right_(range->right_.begin()) {
      if (right_ == std::default_sentinel) left_ = FunctionRange::iterator();
    }

    FunPair operator*() const { return {*left_, *right_}; }

    iterator& operator++() {
      ++right_;
      if (right_ == std::default_sentinel) {
        ++left_;
        right_ = range_->right_.begin();
      }
      return *this;
    }
    void operator++(int) { ++*this; }

    friend bool operator==(const iterator& it, std::default_sentinel_t) {
      return it.left_ == std::default_sentinel;
    }

   private:
    const PairFunctionRange* range_ = nullptr;
    FunctionRange::iterator left_;
    FunctionRange::iterator right_;
  };

  PairFunctionRange() = default;
  PairFunctionRange(const CarrierPair& dom, const CarrierPair& cod)
      : left_(dom.left, cod.left), right_(dom.right, cod.right) {}

  iterator begin() const { return iterator(this); }
  std::default_sentinel_t end() const { return {}; }

 private:
  FunctionRange left_;
  FunctionRange right_;
};

inline FunctionRange enumerate_maps(const FinSet& dom, const FinSet& cod) {
  return enumerate_functions(dom, cod);
}
inline PairFunctionRange enumerate_maps(const CarrierPair& dom, const CarrierPair& cod) {
  return PairFunctionRange(dom, cod);
}

inline const FinSet& map_dom(const FinFun& f) { return f.dom(); }
inline const FinSet& map_cod(const FinFun& f) { return f.cod(); }
inline CarrierPair map_dom(const FunPair& f) { return {f.left.dom(), f.right.dom()}; }
inline CarrierPair map_cod(const FunPair& f) { return {f.left.cod(), f.right.cod()}; }

inline std::string describe(const FinSet& x) { return describe(x, x.full()); }
inline std::string describe(const CarrierPair& x) {
  return "(" + describe(x.left) + ", " + describe(x.right) + ")";
}

// ---------------------------------------------------------------------------
// Fibre types

/// Subset of the carrier (subobject fibration).
struct Predicate {
  static constexpr FibreTag tag = FibreTag::Pred;
  FinSet carrier;
  Bits members;

  static Predicate top(const FinSet& c) { return {c, c.full()}; }
  static Predicate of(const FinSet& c, const std::vector<Atom>& atoms) {
    return {c, Subset(c, atoms).bits()};
  }
  void validate() const {
    require(members.size() == carrier.size(), ErrorKind::InvalidStructure, "predicate of wrong width");
  }
  friend bool operator==(const Predicate&, const Predicate&) = default;
};

/// Reflexive, transitive relation `leq` on the carrier.
struct Preorder {
  static constexpr FibreTag tag = FibreTag::Pre;
  FinSet carrier;
  Relation leq;

  static Preorder top(const FinSet& c) { return {c, Relation::full(c.size(), c.size())}; }
  static Preorder discrete(const FinSet& c) { return {c, Relation::identity(c.size())}; }

  /// Reflexive-transitive closure of the given pairs.
  static Preorder generated(const FinSet& c, const std::vector<std::pair<Atom, Atom>>& pairs) {
    Relation r = Relation::identity(c.size());
    for (const auto& [a, b] : pairs) r.set(c.index_of(a), c.index_of(b));
    return {c, r.transitive_closure()};
  }

  bool le(std::size_t i, std::size_t j) const { return leq.test(i, j); }

  void validate() const {
    require(leq.rows() == carrier.size() && leq.cols() == carrier.size(), ErrorKind::InvalidStructure,
            "preorder matrix of wrong size");
    require(leq.is_reflexive(), ErrorKind::InvalidStructure, "preorder is not reflexive");
    require(leq.is_transitive(), ErrorKind::InvalidStructure, "preorder is not transitive");
  }
  friend bool operator==(const Preorder&, const Preorder&) = default;
};

/// Finite topology given by minimal open neighbourhoods.
struct Topology {
  static constexpr FibreTag tag = FibreTag::Top;
  FinSet carrier;
  std::vector<Bits> nbhd;

  /// The indiscrete topology {∅, carrier}.
  static Topology top(const FinSet& c) { return {c, std::vector<Bits>(c.size(), c.full())}; }
  static Topology discrete(const FinSet& c) {
    std::vector<Bits> n;
    for (std::size_t i = 0; i < c.size(); ++i) n.push_back(singleton_bits(c.size(), i));
    return {c, std::move(n)};
  }

  /// Coarsest topology in which every member of `subbasis` is open.
  static Topology from_subbasis(const FinSet& c, const std::vector<Bits>& subbasis) {
    Topology t = top(c);
    for (const auto& u : subbasis) {
      require(u.size() == c.size(), ErrorKind::InvalidStructure, "open set of wrong width");
      for_each_bit(u, [&](std::size_t x) { t.nbhd[x] &= u; });
    }
    return t;
  }

  /// Accepts an explicit open family; it must already be a topology.
  static Topology from_opens(const FinSet& c, const std::vector<Bits>& opens) {
    Topology t = from_subbasis(c, opens);
    const auto generated = t.opens();
    std::vector<Bits> given = opens;
    std::sort(given.begin(), given.end(), detail_less);
    given.erase(std::unique(given.begin(), given.end()), given.end());
    require(given == generated, ErrorKind::InvalidStructure,
            "open family is not closed under unions and intersections or misses the empty/full set");
    return t;
  }

  bool is_open(const Bits& u) const {
    bool ok = true;
    for_each_bit(u, [&](std::size_t x) { ok = ok && nbhd[x].is_subset_of(u); });
    return ok;
  }

  /// All open sets, sorted by (cardinality, bit pattern).
  std::vector<Bits> opens() const {
    require(carrier.size() <= 20, ErrorKind::CarrierTooLarge, "listing the opens of a space above 20 points");
    // Close {∅} under union with minimal neighbourhoods.
    std::vector<Bits> out{carrier.none()};
    for (std::size_t k = 0; k < out.size(); ++k) {
      for (const auto& n : nbhd) {
        Bits u = out[k] | n;
        if (std::find(out.begin(), out.end(), u) == out.end()) out.push_back(std::move(u));
      }
    }
    std::sort(out.begin(), out.end(), detail_less);
    return out;
  }

  void validate() const {
    require(nbhd.size() == carrier.size(), ErrorKind::InvalidStructure, "neighbourhood table of wrong size");
    for (std::size_t x = 0; x < nbhd.size(); ++x) {
      require(nbhd[x].size() == carrier.size() && nbhd[x].test(x), ErrorKind::InvalidStructure,
              "minimal neighbourhood must contain its point");
      for_each_bit(nbhd[x], [&](std::size_t y) {
        require(nbhd[y].is_subset_of(nbhd[x]), ErrorKind::InvalidStructure,
                "minimal neighbourhoods are not nested");
      });
    }
  }

  static bool detail_less(const Bits& a, const Bits& b) {
    if (a.count() != b.count()) return a.count() < b.count();
    for (std::size_t i = 0; i < a.size(); ++i)
      if (a.test(i) != b.test(i)) return a.test(i);
    return false;
  }

  friend bool operator==(const Topology&, const Topology&) = default;
};

/// Arbitrary relation on the carrier.
struct EndoRelation {
  static constexpr FibreTag tag = FibreTag::ERel;
  FinSet carrier;
  Relation rel;

  static EndoRelation top(const FinSet& c) { return {c, Relation::full(c.size(), c.size())}; }
  void validate() const {
    require(rel.rows() == carrier.size() && rel.cols() == carrier.size(), ErrorKind::InvalidStructure,
            "relation matrix of wrong size");
  }
  friend bool operator==(const EndoRelation&, const EndoRelation&) = default;
};

/// Relation between two carriers.
struct BinaryRelation {
  static constexpr FibreTag tag = FibreTag::BRel;
  CarrierPair carrier;
  Relation rel;

  static BinaryRelation top(const CarrierPair& c) {
    return {c, Relation::full(c.left.size(), c.right.size())};
  }
  void validate() const {
    require(rel.rows() == carrier.left.size() && rel.cols() == carrier.right.size(),
            ErrorKind::InvalidStructure, "relation matrix of wrong size");
  }
  friend bool operator==(const BinaryRelation&, const BinaryRelation&) = default;
};

/// Extended pseudometric with exact rational distances.
struct Pseudometric {
  static constexpr FibreTag tag = FibreTag::Met;
  FinSet carrier;
  std::vector<std::vector<ExtRational>> dist;

  static Pseudometric top(const FinSet& c) {
    return {c, std::vector<std::vector<ExtRational>>(c.size(), std::vector<ExtRational>(c.size()))};
  }
  /// Every pair of distinct points at distance ∞.
  static Pseudometric discrete(const FinSet& c) {
    Pseudometric d = top(c);
    for (std::size_t i = 0; i < c.size(); ++i)
      for (std::size_t j = 0; j < c.size(); ++j)
        if (i != j) d.dist[i][j] = ExtRational::infinity();
    return d;
  }

  const ExtRational& operator()(std::size_t i, std::size_t j) const { return dist[i][j]; }

  void validate() const {
    const std::size_t n = carrier.size();
    require(dist.size() == n, ErrorKind::InvalidStructure, "distance matrix of wrong size");
    for (std::size_t i = 0; i < n; ++i) {
      require(dist[i].size() == n, ErrorKind::InvalidStructure, "distance matrix of wrong size");
      require(dist[i][i] == ExtRational(0), ErrorKind::InvalidStructure, "d(x,x) must be 0");
      for (std::size_t j = 0; j < n; ++j) {
        require(dist[i][j] >= ExtRational(0), ErrorKind::InvalidStructure, "negative distance");
        require(dist[i][j] == dist[j][i], ErrorKind::InvalidStructure, "distance is not symmetric");
        for (std::size_t k = 0; k < n; ++k)
          require(dist[i][j] + dist[j][k] >= dist[i][k], ErrorKind::InvalidStructure,
                  "triangle inequality fails at (" + carrier[i] + "," + carrier[j] + "," + carrier[k] + ")");
      }
    }
  }
  friend bool operator==(const Pseudometric&, const Pseudometric&) = default;
};

template <class F>
using carrier_t = std::remove_cvref_t<decltype(std::declval<F>().carrier)>;

template <class F>
using map_t = std::conditional_t<std::is_same_v<carrier_t<F>, CarrierPair>, FunPair, FinFun>;

template <class F>
concept FibreType = requires(const F& f) {
  { F::tag } -> std::convertible_to<FibreTag>;
  f.carrier;
  f.validate();
};

// ---------------------------------------------------------------------------
// Reindexing along f : dom -> cod.

namespace detail {
inline void require_carrier(const FinSet& expected, const FinSet& got, const char* what) {
  require(expected == got, ErrorKind::CarrierMismatch, what);
}
inline void require_carrier(const CarrierPair& expected, const CarrierPair& got, const char* what) {
  require(expected == got, ErrorKind::CarrierMismatch, what);
}
}  // namespace detail

inline Predicate reindex(const FinFun& f, const Predicate& s) {
  detail::require_carrier(f.cod(), s.carrier, "reindex: object is not above the codomain");
  return {f.dom(), f.preimage(s.members)};
}

namespace detail {
inline Relation reindex_square(const FinFun& f, const Relation& r) {
  const std::size_t n = f.dom().size();
  Relation out(n, n);
  for (std::size_t i = 0; i < n; ++i) out.row(i) = f.preimage(r.row(f(i)));
  return out;
}
}  // namespace detail

inline Preorder reindex(const FinFun& f, const Preorder& s) {
  detail::require_carrier(f.cod(), s.carrier, "reindex: object is not above the codomain");
  return {f.dom(), detail::reindex_square(f, s.leq)};
}

inline Topology reindex(const FinFun& f, const Topology& s) {
  detail::require_carrier(f.cod(), s.carrier, "reindex: object is not above the codomain");
  std::vector<Bits> pre(s.carrier.size());
  for (std::size_t y = 0; y < pre.size(); ++y) pre[y] = f.preimage(s.nbhd[y]);
  std::vector<Bits> n(f.dom().size());
  for (std::size_t x = 0; x < n.size(); ++x) n[x] = pre[f(x)];
  return {f.dom(), std::move(n)};
}

inline EndoRelation reindex(const FinFun& f, const EndoRelation& s) {
  detail::require_carrier(f.cod(), s.carrier, "reindex: object is not above the codomain");
  return {f.dom(), detail::reindex_square(f, s.rel)};
}

inline BinaryRelation reindex(const FunPair& f, const BinaryRelation& s) {
  detail::require_carrier(map_cod(f), s.carrier, "reindex: object is not above the codomain");
  Relation out(f.left.dom().size(), f.right.dom().size());
  for (std::size_t i = 0; i < out.rows(); ++i) out.row(i) = f.right.preimage(s.rel.row(f.left(i)));
  return {map_dom(f), std::move(out)};
}

inline Pseudometric reindex(const FinFun& f, const Pseudometric& s) {
  detail::require_carrier(f.cod(), s.carrier, "reindex: object is not above the codomain");
  Pseudometric out = Pseudometric::top(f.dom());
  for (std::size_t i = 0; i < out.carrier.size(); ++i)
    for (std::size_t j = 0; j < out.carrier.size(); ++j) out.dist[i][j] = s.dist[f(i)][f(j)];
  return out;
}

// ---------------------------------------------------------------------------
// Fibred meets.

namespace detail {
template <class F>
const F& require_meetable(std::span<const F> items) {
  require(!items.empty(), ErrorKind::EmptyList, "fibred meet of an empty list");
  for (const auto& item : items)
    require(item.carrier == items.front().carrier, ErrorKind::CarrierMismatch,
            "fibred meet of objects above different carriers");
  return items.front();
}
}  // namespace detail

inline Predicate meet(std::span<const Predicate> items) {
  Predicate out = detail::require_meetable(items);
  for (const auto& p : items) out.members &= p.members;
  return out;
}

inline Preorder meet(std::span<const Preorder> items) {
  Preorder out = detail::require_meetable(items);
  for (const auto& p : items) out.leq &= p.leq;
  return out;
}

/// Coarsest topology refining every argument: generated by the union of the
/// open families, i.e. pointwise intersection of minimal neighbourhoods.
inline Topology meet(std::span<const Topology> items) {
  Topology out = detail::require_meetable(items);
  for (const auto& t : items)
    for (std::size_t x = 0; x < out.nbhd.size(); ++x) out.nbhd[x] &= t.nbhd[x];
  return out;
}

inline EndoRelation meet(std::span<const EndoRelation> items) {
  EndoRelation out = detail::require_meetable(items);
  for (const auto& r : items) out.rel &= r.rel;
  return out;
}

inline BinaryRelation meet(std::span<const BinaryRelation> items) {
  BinaryRelation out = detail::require_meetable(items);
  for (const auto& r : items) out.rel &= r.rel;
  return out;
}

/// Pointwise supremum.
inline Pseudometric meet(std::span<const Pseudometric> items) {
  Pseudometric out = detail::require_meetable(items);
  for (const auto& d : items)
    for (std::size_t i = 0; i < out.dist.size(); ++i)
      for (std::size_t j = 0; j < out.dist.size(); ++j)
        out.dist[i][j] = std::max(out.dist[i][j], d.dist[i][j]);
  return out;
}

template <FibreType F>
F meet(std::initializer_list<F> items) {
  return meet(std::span<const F>(items.begin(), items.size()));
}

// ---------------------------------------------------------------------------
// Fibre order a ≤ b.

inline bool fibre_leq(const Predicate& a, const Predicate& b) {
  return a.carrier == b.carrier && a.members.is_subset_of(b.members);
}
inline bool fibre_leq(const Preorder& a, const Preorder& b) {
  return a.carrier == b.carrier && a.leq.is_subset_of(b.leq);
}
inline bool fibre_leq(const Topology& a, const Topology& b) {
  if (!(a.carrier == b.carrier)) return false;
  for (std::size_t x = 0; x < a.nbhd.size(); ++x)
    if (!a.nbhd[x].is_subset_of(b.nbhd[x])) return false;
  return true;
}
inline bool fibre_leq(const EndoRelation& a, const EndoRelation& b) {
  return a.carrier == b.carrier && a.rel.is_subset_of(b.rel);
}
inline bool fibre_leq(const BinaryRelation& a, const BinaryRelation& b) {
  return a.carrier == b.carrier && a.rel.is_subset_of(b.rel);
}
inline bool fibre_leq(const Pseudometric& a, const Pseudometric& b) {
  if (!(a.carrier == b.carrier)) return false;
  for (std::size_t i = 0; i < a.dist.size(); ++i)
    for (std::size_t j = 0; j < a.dist.size(); ++j)
      if (a.dist[i][j] < b.dist[i][j]) return false;
  return true;
}

// ---------------------------------------------------------------------------
// Morphisms of the total category.

namespace detail {
inline void require_map_between(const FinFun& f, const FinSet& x, const FinSet& y) {
  require(f.dom() == x && f.cod() == y, ErrorKind::CarrierMismatch,
          "is_morphism: function does not go between the carriers");
}
inline void require_map_between(const FunPair& f, const CarrierPair& x, const CarrierPair& y) {
  require(map_dom(f) == x && map_cod(f) == y, ErrorKind::CarrierMismatch,
          "is_morphism: functions do not go between the carriers");
}
inline bool preserves_square(const FinFun& f, const Relation& rx, const Relation& ry) {
  for (std::size_t i = 0; i < rx.rows(); ++i) {
    const Bits& target = ry.row(f(i));
    bool ok = true;
    for_each_bit(rx.row(i), [&](std::size_t j) { ok = ok && target.test(f(j)); });
    if (!ok) return false;
  }
  return true;
}
}  // namespace detail

inline bool is_morphism(const FinFun& f, const Predicate& x, const Predicate& y) {
  detail::require_map_between(f, x.carrier, y.carrier);
  return f.image(x.members).is_subset_of(y.members);
}

/// Monotone.
inline bool is_morphism(const FinFun& f, const Preorder& x, const Preorder& y) {
  detail::require_map_between(f, x.carrier, y.carrier);
  return detail::preserves_square(f, x.leq, y.leq);
}

/// Continuous: every x has nbhd(x) ⊆ f⁻¹(nbhd(f x)).
inline bool is_morphism(const FinFun& f, const Topology& x, const Topology& y) {
  detail::require_map_between(f, x.carrier, y.carrier);
  std::vector<Bits> pre(y.carrier.size());
  std::vector<bool> computed(y.carrier.size(), false);
  for (std::size_t i = 0; i < x.carrier.size(); ++i) {
    const std::size_t fi = f(i);
    if (!computed[fi]) {
      pre[fi] = f.preimage(y.nbhd[fi]);
      computed[fi] = true;
    }
    if (!x.nbhd[i].is_subset_of(pre[fi])) return false;
  }
  return true;
}

inline bool is_morphism(const FinFun& f, const EndoRelation& x, const EndoRelation& y) {
  detail::require_map_between(f, x.carrier, y.carrier);
  return detail::preserves_square(f, x.rel, y.rel);
}

inline bool is_morphism(const FunPair& f, const BinaryRelation& x, const BinaryRelation& y) {
  detail::require_map_between(f, x.carrier, y.carrier);
  for (std::size_t i = 0; i < x.rel.rows(); ++i) {
    const Bits& target = y.rel.row(f.left(i));
    bool ok = true;
    for_each_bit(x.rel.row(i), [&](std::size_t j) { ok = ok && target.test(f.right(j)); });
    if (!ok) return false;
  }
  return true;
}

/// Non-expansive: e(f x, f x') ≤ d(x, x').
inline bool is_morphism(const FinFun& f, const Pseudometric& x, const Pseudometric& y) {
  detail::require_map_between(f, x.carrier, y.carrier);
  for (std::size_t i = 0; i < x.dist.size(); ++i)
    for (std::size_t j = i + 1; j < x.dist.size(); ++j)
      if (y.dist[f(i)][f(j)] > x.dist[i][j]) return false;
  return true;
}

/// Every morphism x -> y of the total category, lazily.
template <FibreType F>
auto hom_enumerate(const F& x, const F& y) {
  return enumerate_maps(x.carrier, y.carrier) |
         std::views::filter([x, y](const map_t<F>& f) { return is_morphism(f, x, y); });
}

// ---------------------------------------------------------------------------
// Powers A ⋔ S in the total category, above function_space(A, S.carrier).

namespace detail {
/// rows[t] = ⋂_a { t' | t'(a) ∈ rows_s[t(a)] }, the product of per-point sets.
inline std::vector<Bits> power_rows(const FinSet& a, const FinSet& base, const std::vector<Bits>& rows_s,
                                    std::size_t power_size) {
  // cylinder[k][y] = { t | y' = t(a_k) ∈ rows_s[y] }
  std::vector<std::vector<Bits>> cylinder(a.size(), std::vector<Bits>(base.size(), Bits(power_size)));
  std::vector<std::vector<std::size_t>> digits(power_size);
  for (std::size_t t = 0; t < power_size; ++t) digits[t] = function_digits(t, a.size(), base.size());
  for (std::size_t k = 0; k < a.size(); ++k)
    for (std::size_t y = 0; y < base.size(); ++y)
      for (std::size_t t = 0; t < power_size; ++t)
        if (rows_s[y].test(digits[t][k])) cylinder[k][y].set(t);
  std::vector<Bits> out(power_size, Bits(power_size).set());
  for (std::size_t t = 0; t < power_size; ++t)
    for (std::size_t k = 0; k < a.size(); ++k) out[t] &= cylinder[k][digits[t][k]];
  return out;
}
}  // namespace detail

inline Predicate power_object(const FinSet& a, const Predicate& s) {
  const FinSet carrier = function_space(a, s.carrier);
  Bits members(carrier.size());
  for (std::size_t t = 0; t < carrier.size(); ++t) {
    bool all = true;
    for (const auto v : function_digits(t, a.size(), s.carrier.size())) all = all && s.members.test(v);
    members.set(t, all);
  }
  return {carrier, std::move(members)};
}

/// Pointwise order.
inline Preorder power_object(const FinSet& a, const Preorder& s) {
  const FinSet carrier = function_space(a, s.carrier);
  auto rows = detail::power_rows(a, s.carrier, s.leq.row_bits(), carrier.size());
  return {carrier, Relation::from_rows(std::move(rows), carrier.size())};
}

/// Product topology generated by π_a⁻¹(U).
inline Topology power_object(const FinSet& a, const Topology& s) {
  const FinSet carrier = function_space(a, s.carrier);
  return {carrier, detail::power_rows(a, s.carrier, s.nbhd, carrier.size())};
}

template <class F>
concept HasPowers = requires(const FinSet& a, const F& s) { power_object(a, s); };

// ---------------------------------------------------------------------------
// Exhaustive enumeration of small fibres (test and verification support).

/// Every preorder on c (c.size() ≤ 4).
inline std::vector<Preorder> all_preorders(const FinSet& c) {
  const std::size_t n = c.size();
  require(n <= 4, ErrorKind::CarrierTooLarge, "all_preorders beyond 4 points");
  std::vector<std::pair<std::size_t, std::size_t>> off;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (i != j) off.emplace_back(i, j);
  std::vector<Preorder> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << off.size()); ++m) {
    Relation r = Relation::identity(n);
    for (std::size_t k = 0; k < off.size(); ++k)
      if ((m >> k) & 1U) r.set(off[k].first, off[k].second);
    if (r.is_transitive()) out.push_back({c, std::move(r)});
  }
  return out;
}

/// Every topology on c (c.size() ≤ 4), via the preorder of minimal neighbourhoods.
inline std::vector<Topology> all_topologies(const FinSet& c) {
  std::vector<Topology> out;
  for (const auto& p : all_preorders(c)) out.push_back({c, p.leq.row_bits()});
  return out;
}

inline std::vector<Predicate> all_predicates(const FinSet& c) {
  require(c.size() <= 16, ErrorKind::CarrierTooLarge, "all_predicates beyond 16 points");
  std::vector<Predicate> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << c.size()); ++m)
    out.push_back({c, bits_from_mask(c.size(), m)});
  return out;
}

inline std::vector<EndoRelation> all_endorelations(const FinSet& c) {
  const std::size_t n = c.size();
  require(n <= 4, ErrorKind::CarrierTooLarge, "all_endorelations beyond 4 points");
  std::vector<EndoRelation> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << (n * n)); ++m) {
    Relation r(n, n);
    for (std::size_t k = 0; k < n * n; ++k)
      if ((m >> k) & 1U) r.set(k / n, k % n);
    out.push_back({c, std::move(r)});
  }
  return out;
}

inline std::vector<BinaryRelation> all_binary_relations(const CarrierPair& c) {
  const std::size_t n = c.left.size() * c.right.size();
  require(n <= 16, ErrorKind::CarrierTooLarge, "all_binary_relations beyond 16 pairs");
  std::vector<BinaryRelation> out;
  for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
    Relation r(c.left.size(), c.right.size());
    for (std::size_t k = 0; k < n; ++k)
      if ((m >> k) & 1U) r.set(k / c.right.size(), k % c.right.size());
    out.push_back({c, std::move(r)});
  }
  return out;
}

// ---------------------------------------------------------------------------
// Rendering for witnesses and tables.

inline std::string describe(const Predicate& p) { return "PRED " + describe(p.carrier, p.members); }
inline std::string describe(const Preorder& p) {
  return "PRE on " + describe(p.carrier) + " " + describe_pairs(p.carrier, p.carrier, p.leq, true);
}
inline std::string describe(const Topology& t) {
  std::string s = "TOP on " + describe(t.carrier) + " ";
  if (t.carrier.size() <= 8) {
    s += "opens {";
    bool first = true;
    for (const auto& u : t.opens()) {
      if (!first) s += ", ";
      s += describe(t.carrier, u);
      first = false;
    }
    return s + "}";
  }
  return s + "(" + std::to_string(t.carrier.size()) + " points)";
}
inline std::string describe(const EndoRelation& r) {
  return "EREL " + describe_pairs(r.carrier, r.carrier, r.rel);
}
inline std::string describe(const BinaryRelation& r) {
  return "BREL " + describe_pairs(r.carrier.left, r.carrier.right, r.rel);
}
inline std::string describe(const Pseudometric& d) {
  std::string s = "MET on " + describe(d.carrier) + " [";
  for (std::size_t i = 0; i < d.dist.size(); ++i) {
    if (i) s += "; ";
    for (std::size_t j = 0; j < d.dist.size(); ++j) s += (j ? " " : "") + to_string(d.dist[i][j]);
  }
  return s + "]";
}

// ---------------------------------------------------------------------------
// Dynamically tagged fibre objects (file formats and the CLI).

using FibreObject = std::variant<Predicate, Preorder, Topology, EndoRelation, BinaryRelation, Pseudometric>;

inline FibreTag tag_of(const FibreObject& x) {
  return std::visit([](const auto& v) { return std::remove_cvref_t<decltype(v)>::tag; }, x);
}

inline std::string describe(const FibreObject& x) {
  return std::visit([](const auto& v) { return describe(v); }, x);
}

template <FibreType F>
const F& expect_tag(const FibreObject& x) {
  const F* p = std::get_if<F>(&x);
  require(p != nullptr, ErrorKind::TagMismatch,
          "expected " + std::string(to_string(F::tag)) + ", got " + std::string(to_string(tag_of(x))));
  return *p;
}

}  // namespace kanlift
