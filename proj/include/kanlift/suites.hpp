#pragma once

// Named verification batteries. Each takes the monad and fibre operations
// from a SuiteConfig so that faulty implementations can be run through them.

#include <cstddef>
#include <algorithm>
#include <exception>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "kanlift/density.hpp"
#include "kanlift/engine.hpp"

namespace kanlift {

struct SuiteConfig {
  FiniteMonad monad = powerset_monad();
  FibreOps<Preorder> preorder_ops = default_ops<Preorder>();
  FibreOps<Topology> topology_ops = default_ops<Topology>();
  /// Largest carrier enumerated by the lifting batteries.
  std::size_t max_size = 3;
  /// Largest carrier for the battery over all closed objects.
  std::size_t closed_max_size = 2;
};

inline const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"monad-laws", "lifting-laws", "closed-objects", "comonad-laws",
                                              "engine-vs-closed-form"};
  return names;
}

template <FibreType F>
struct BuiltinLifting {
  std::string name;
  LiftingParam<F> param;
  ClosedForm form;
};

inline std::vector<BuiltinLifting<Preorder>> preorder_liftings() {
  return {{"lower-pre", params::lower_preorder(), ClosedForm::LowerPre},
          {"upper-pre", params::upper_preorder(), ClosedForm::UpperPre},
          {"convex", params::convex_preorder(), ClosedForm::ConvexPre}};
}

inline std::vector<BuiltinLifting<Topology>> topology_liftings() {
  return {{"lower-vietoris", params::lower_vietoris(), ClosedForm::LowerVietoris},
          {"upper-vietoris", params::upper_vietoris(), ClosedForm::UpperVietoris}};
}

inline std::vector<Preorder> preorders_up_to(std::size_t n) {
  std::vector<Preorder> out;
  for (std::size_t k = 0; k <= n; ++k)
    for (auto& p : all_preorders(FinSet::range(k))) out.push_back(std::move(p));
  return out;
}

inline std::vector<Topology> topologies_up_to(std::size_t n) {
  std::vector<Topology> out;
  for (std::size_t k = 0; k <= n; ++k)
    for (auto& t : all_topologies(FinSet::range(k))) out.push_back(std::move(t));
  return out;
}

template <FibreType F>
F closed_form_of(ClosedForm form, const F& x) {
  return std::get<F>(closed_form_lift(form, FibreObject{x}));
}

namespace detail {

template <FibreType F>
void engine_vs_closed_form(Report& report, const SuiteConfig& cfg, const FibreOps<F>& ops,
                           const std::vector<BuiltinLifting<F>>& liftings, const std::vector<F>& samples) {
  for (const auto& l : liftings) {
    auto& check = report.add("engine = closed form: " + l.name);
    for (const auto& x : samples) {
      ++check.cases;
      const F got = codensity_lift(cfg.monad, l.param, x, ops).result;
      const F want = closed_form_of(l.form, x);
      if (!(got == want)) fail(check, "X = " + describe(x) + ", engine " + describe(got) + ", closed form " + describe(want));
    }
  }
}

template <FibreType F>
void lifting_laws(Report& report, const SuiteConfig& cfg, const FibreOps<F>& ops,
                  const std::vector<BuiltinLifting<F>>& liftings, const std::vector<F>& samples) {
  for (const auto& l : liftings)
    report.append(verify_lifting_laws<F>(cfg.monad, as_lifting(cfg.monad, l.param, ops), samples, l.name));
}

template <FibreType F>
void closed_objects(Report& report, const SuiteConfig& cfg, const FibreOps<F>& ops,
                    const std::vector<BuiltinLifting<F>>& liftings, const std::vector<F>& samples,
                    const std::vector<F>& small, const std::string& fibre) {
  for (const auto& l : liftings) {
    auto& own = report.add(l.name + ": L X is closed w.r.t. X");
    auto& upper = report.add(l.name + ": L Y <= phi(L X) at Y");
    std::vector<F> lifted;
    for (const auto& x : samples) {
      lifted.push_back(codensity_lift(cfg.monad, l.param, x, ops).result);
      ++own.cases;
      if (!is_closed(cfg.monad, x, lifted.back())) fail(own, "X = " + describe(x));
    }
    if (!own.passed) continue;
    for (std::size_t i = 0; i < small.size(); ++i) {
      const F lx = codensity_lift(cfg.monad, l.param, small[i], ops).result;
      for (const auto& y : small) {
        ++upper.cases;
        const F ly = codensity_lift(cfg.monad, l.param, y, ops).result;
        if (!fibre_leq(ly, phi(cfg.monad, lx, small[i], y)))
          fail(upper, "X = " + describe(small[i]) + ", Y = " + describe(y));
      }
    }
  }

  // Every object above T X, for every X in the small range.
  auto& fixed = report.add(fibre + ": phi(S) at X = S for every closed S");
  for (const auto& x : small) {
    const FinSet tx = apply_monad(cfg.monad, x.carrier);
    std::vector<F> above;
    if constexpr (std::is_same_v<F, Preorder>) above = all_preorders(tx);
    else above = all_topologies(tx);
    for (const auto& s : above) {
      if (!is_closed(cfg.monad, x, s)) continue;
      ++fixed.cases;
      if (!(phi(cfg.monad, s, x, x) == s)) fail(fixed, "X = " + describe(x) + ", S = " + describe(s));
    }
  }
}

}  // namespace detail

/// Every lasso over the alphabet with prefix and cycle of length at most two.
inline std::vector<Lasso> small_lassos(const std::vector<Atom>& alphabet) {
  std::vector<std::vector<Atom>> words{{}};
  for (std::size_t len = 1; len <= 2; ++len) {
    const auto previous = words;
    for (const auto& w : previous) {
      if (w.size() != len - 1) continue;
      for (const auto& a : alphabet) {
        auto next = w;
        next.push_back(a);
        words.push_back(std::move(next));
      }
    }
  }
  std::vector<Lasso> out;
  for (const auto& p : words)
    for (const auto& c : words)
      if (!c.empty()) {
        Lasso l(p, c);
        if (std::find(out.begin(), out.end(), l) == out.end()) out.push_back(std::move(l));
      }
  return out;
}

inline std::vector<StreamSample> default_stream_samples() {
  const FinSet r{"0", "1"};
  const FinSet x{"x", "y"};
  const auto streams = small_lassos(x.atoms());
  std::vector<StreamSample> out;
  const std::vector<std::vector<Lasso>> params{
      {Lasso({}, {"0", "1"})},
      {Lasso({}, {"0"}), Lasso({"1"}, {"0"})},
      {Lasso({"1"}, {"0", "1"}), Lasso({}, {"1"})},
  };
  for (const auto& s0 : params)
    for (const auto& p : all_predicates(x)) out.push_back({StreamParam(r, s0), p, streams});
  return out;
}

inline Report run_suite(const std::string& name, const SuiteConfig& cfg = {}) {
  Report report;
  try {
    if (name == "monad-laws") {
      const std::vector<FinSet> carriers{FinSet::range(0), FinSet::range(1), FinSet::range(2)};
      report = verify_monad_laws(cfg.monad, carriers);
      report.append(verify_algop_naturality(cfg.monad, union_op(FinSet::range(2)), carriers));
    } else if (name == "lifting-laws") {
      detail::lifting_laws(report, cfg, cfg.preorder_ops, preorder_liftings(), preorders_up_to(cfg.max_size));
      detail::lifting_laws(report, cfg, cfg.topology_ops, topology_liftings(), topologies_up_to(cfg.max_size));
    } else if (name == "closed-objects") {
      detail::closed_objects(report, cfg, cfg.preorder_ops, preorder_liftings(), preorders_up_to(cfg.max_size),
                             preorders_up_to(cfg.closed_max_size), "PRE");
      detail::closed_objects(report, cfg, cfg.topology_ops, topology_liftings(), topologies_up_to(cfg.max_size),
                             topologies_up_to(cfg.closed_max_size), "TOP");
    } else if (name == "comonad-laws") {
      report = comonad_laws_check(default_stream_samples());
    } else if (name == "engine-vs-closed-form") {
      detail::engine_vs_closed_form(report, cfg, cfg.preorder_ops, preorder_liftings(),
                                    preorders_up_to(cfg.max_size));
      detail::engine_vs_closed_form(report, cfg, cfg.topology_ops, topology_liftings(),
                                    topologies_up_to(cfg.max_size));
    } else {
      throw Error(ErrorKind::Schema, "unknown suite \"" + name + "\"");
    }
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::Schema) throw;
    fail(report.add(name + ": raised " + std::string(to_string(e.kind()))), e.what());
  } catch (const std::exception& e) {
    fail(report.add(name + ": raised an exception"), e.what());
  }
  return report;
}

}  // namespace kanlift
