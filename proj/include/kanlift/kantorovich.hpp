#pragma once

// Kantorovich lifting of a finite pseudometric to sub-probability measures:
//
//   K(v1, v2) = sup { |∫f dv1 − ∫f dv2| : f non-expansive into [0,1] }.
//
// On a finite space every such f is measurable, the objective is linear and
// the feasible set is a polytope, so the supremum is attained at a vertex and
// equals max(LP(c), LP(−c)) with c = v1 − v2. The LP is solved by an exact
// rational simplex with Bland's rule. A non-discrete σ-algebra forces f to be
// constant on blocks, so variables are blocks throughout.

#include <algorithm>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "kanlift/fibration.hpp"
#include "kanlift/measurable.hpp"
#include "kanlift/report.hpp"

namespace kanlift {

/// f(i) − f(j) ≤ bound
struct DiffConstraint {
  std::size_t i = 0;
  std::size_t j = 0;
  Rational bound;
};

/// maximize Σ c(i) f(i) subject to 0 ≤ f ≤ 1 and the difference constraints.
struct LPInstance {
  std::vector<Rational> objective;
  std::vector<DiffConstraint> diffs;

  std::size_t variables() const noexcept { return objective.size(); }
};

struct LPSolution {
  Rational value;
  std::vector<Rational> primal;
  /// One multiplier per upper bound, then one per difference constraint.
  std::vector<Rational> dual;
  std::size_t pivots = 0;
};

namespace detail {

// Rows of A f ≤ b in the order the dual vector uses: f(i) ≤ 1, then diffs.
inline std::vector<std::pair<std::vector<Rational>, Rational>> lp_rows(const LPInstance& lp) {
  const std::size_t n = lp.variables();
  std::vector<std::pair<std::vector<Rational>, Rational>> rows;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> a(n, Rational(0));
    a[i] = 1;
    rows.emplace_back(std::move(a), Rational(1));
  }
  for (const auto& d : lp.diffs) {
    std::vector<Rational> a(n, Rational(0));
    a[d.i] += 1;
    a[d.j] -= 1;
    rows.emplace_back(std::move(a), d.bound);
  }
  return rows;
}

// Primal feasibility, dual feasibility and zero duality gap.
inline bool certify(const LPInstance& lp, const LPSolution& s) {
  const auto rows = lp_rows(lp);
  const std::size_t n = lp.variables();
  Rational primal_value = 0;
  for (std::size_t j = 0; j < n; ++j) {
    if (s.primal[j] < 0) return false;
    primal_value += lp.objective[j] * s.primal[j];
  }
  Rational dual_value = 0;
  std::vector<Rational> aty(n, Rational(0));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Rational lhs = 0;
    for (std::size_t j = 0; j < n; ++j) lhs += rows[r].first[j] * s.primal[j];
    if (lhs > rows[r].second || s.dual[r] < 0) return false;
    dual_value += s.dual[r] * rows[r].second;
    for (std::size_t j = 0; j < n; ++j) aty[j] += rows[r].first[j] * s.dual[r];
  }
  for (std::size_t j = 0; j < n; ++j)
    if (aty[j] < lp.objective[j]) return false;
  return primal_value == s.value && dual_value == s.value;
}

}  // namespace detail

/// Tableau simplex from the slack basis (feasible because b ≥ 0). Bland's
/// rule rules out cycling. The optimum is certified by an explicit dual
/// solution before it is returned.
inline LPSolution solve_lp(const LPInstance& lp) {
  const auto rows = detail::lp_rows(lp);
  const std::size_t n = lp.variables();
  const std::size_t m = rows.size();
  const std::size_t cols = n + m;

  std::vector<std::vector<Rational>> t(m, std::vector<Rational>(cols + 1, Rational(0)));
  std::vector<std::size_t> basis(m);
  for (std::size_t r = 0; r < m; ++r) {
    require(rows[r].second >= 0, ErrorKind::InvalidStructure, "negative constraint bound");
    for (std::size_t j = 0; j < n; ++j) t[r][j] = rows[r].first[j];
    t[r][n + r] = 1;
    t[r][cols] = rows[r].second;
    basis[r] = n + r;
  }
  std::vector<Rational> reduced(cols, Rational(0));
  for (std::size_t j = 0; j < n; ++j) reduced[j] = lp.objective[j];
  Rational value = 0;

  LPSolution out;
  for (;;) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < cols && !entering; ++j)
      if (reduced[j] > 0) entering = j;
    if (!entering) break;
    const std::size_t q = *entering;

    std::optional<std::size_t> leaving;
    Rational best;
    for (std::size_t r = 0; r < m; ++r) {
      if (t[r][q] <= 0) continue;
      const Rational ratio = t[r][cols] / t[r][q];
      if (!leaving || ratio < best || (ratio == best && basis[r] < basis[*leaving])) {
        leaving = r;
        best = ratio;
      }
    }
    // The box constraints bound every variable, so some row always limits q.
    require(leaving.has_value(), ErrorKind::InvalidStructure, "unbounded LP");
    const std::size_t p = *leaving;

    const Rational pivot = t[p][q];
    for (auto& x : t[p]) x /= pivot;
    for (std::size_t r = 0; r < m; ++r) {
      if (r == p || t[r][q] == 0) continue;
      const Rational factor = t[r][q];
      for (std::size_t j = 0; j <= cols; ++j) t[r][j] -= factor * t[p][j];
    }
    const Rational factor = reduced[q];
    for (std::size_t j = 0; j < cols; ++j) reduced[j] -= factor * t[p][j];
    value += factor * t[p][cols];
    basis[p] = q;
    ++out.pivots;
  }

  out.value = value;
  out.primal.assign(n, Rational(0));
  for (std::size_t r = 0; r < m; ++r)
    if (basis[r] < n) out.primal[basis[r]] = t[r][cols];
  out.dual.resize(m);
  for (std::size_t r = 0; r < m; ++r) out.dual[r] = -reduced[n + r];
  require(detail::certify(lp, out), ErrorKind::InvalidStructure, "simplex optimum failed its certificate");
  return out;
}

struct KantorovichResult {
  Rational value;
  /// Optimal test function, one value per point of the carrier.
  std::vector<Rational> test_function;
  /// True when the optimum integrates higher against v1 than v2.
  bool forward = true;
};

namespace detail {

inline void check_kantorovich_inputs(const Pseudometric& d, const SubProb& v1, const SubProb& v2) {
  require(v1.space() == v2.space(), ErrorKind::SpaceMismatch, "measures over different spaces");
  require(v1.space().carrier() == d.carrier, ErrorKind::CarrierMismatch,
          "measures do not live on the metric's carrier");
}

// One variable per block; the bound between blocks is the least distance
// between their points, and pairs at distance ∞ add nothing.
inline LPInstance block_lp(const Pseudometric& d, const SubProb& v1, const SubProb& v2) {
  const auto& space = v1.space();
  LPInstance lp;
  for (std::size_t k = 0; k < space.block_count(); ++k) lp.objective.push_back(v1.mass()[k] - v2.mass()[k]);
  for (std::size_t b = 0; b < space.block_count(); ++b) {
    for (std::size_t c = 0; c < space.block_count(); ++c) {
      if (b == c) continue;
      std::optional<ExtRational> least;
      for_each_bit(space.blocks()[b], [&](std::size_t x) {
        for_each_bit(space.blocks()[c], [&](std::size_t y) {
          if (!least || d(x, y) < *least) least = d(x, y);
        });
      });
      if (!least->is_infinite()) lp.diffs.push_back({b, c, least->value()});
    }
  }
  return lp;
}

inline std::vector<Rational> spread(const FinMeasSpace& space, const std::vector<Rational>& per_block) {
  std::vector<Rational> f(space.carrier().size());
  for (std::size_t x = 0; x < f.size(); ++x) f[x] = per_block[space.block_of(x)];
  return f;
}

}  // namespace detail

inline KantorovichResult kantorovich_solve(const Pseudometric& d, const SubProb& v1, const SubProb& v2) {
  detail::check_kantorovich_inputs(d, v1, v2);
  LPInstance lp = detail::block_lp(d, v1, v2);
  const LPSolution up = solve_lp(lp);
  for (auto& c : lp.objective) c = -c;
  const LPSolution down = solve_lp(lp);
  if (up.value >= down.value) return {up.value, detail::spread(v1.space(), up.primal), true};
  return {down.value, detail::spread(v1.space(), down.primal), false};
}

inline Rational kantorovich(const Pseudometric& d, const SubProb& v1, const SubProb& v2) {
  return kantorovich_solve(d, v1, v2).value;
}

inline constexpr std::size_t kOracleMaxCarrier = 5;

namespace detail {

// Solves the square system by Gauss-Jordan; nullopt when singular.
inline std::optional<std::vector<Rational>> solve_square(std::vector<std::vector<Rational>> a, std::vector<Rational> b) {
  const std::size_t n = b.size();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && a[pivot][col] == 0) ++pivot;
    if (pivot == n) return std::nullopt;
    std::swap(a[pivot], a[col]);
    std::swap(b[pivot], b[col]);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col || a[r][col] == 0) continue;
      const Rational factor = a[r][col] / a[col][col];
      for (std::size_t j = col; j < n; ++j) a[r][j] -= factor * a[col][j];
      b[r] -= factor * b[col];
    }
  }
  for (std::size_t i = 0; i < n; ++i) b[i] /= a[i][i];
  return b;
}

}  // namespace detail

/// Brute force: every choice of n tight constraints among 0 ≤ f, f ≤ 1 and
/// the difference constraints, solved exactly; the largest |objective| over
/// the feasible solutions.
inline Rational kantorovich_oracle(const Pseudometric& d, const SubProb& v1, const SubProb& v2) {
  detail::check_kantorovich_inputs(d, v1, v2);
  require(d.carrier.size() <= kOracleMaxCarrier, ErrorKind::CarrierTooLarge,
          "vertex enumeration is limited to " + std::to_string(kOracleMaxCarrier) + " points");
  const LPInstance lp = detail::block_lp(d, v1, v2);
  const std::size_t n = lp.variables();

  std::vector<std::vector<Rational>> a;
  std::vector<Rational> b;
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<Rational> lower(n, Rational(0)), upper(n, Rational(0));
    lower[i] = -1;
    upper[i] = 1;
    a.push_back(lower);
    b.emplace_back(0);
    a.push_back(upper);
    b.emplace_back(1);
  }
  // Drop constraints implied by the box or by a two-step path through the
  // constraints still kept; the polytope, hence its vertex set, is unchanged.
  std::vector<DiffConstraint> kept(lp.diffs.begin(), lp.diffs.end());
  for (std::size_t k = kept.size(); k-- > 0;) {
    const auto& c = kept[k];
    bool implied = c.bound >= 1;
    for (std::size_t p = 0; p < kept.size() && !implied; ++p)
      for (std::size_t q = 0; q < kept.size() && !implied; ++q)
        implied = p != k && q != k && kept[p].i == c.i && kept[q].j == c.j && kept[p].j == kept[q].i &&
                  kept[p].bound + kept[q].bound <= c.bound;
    if (implied) kept.erase(kept.begin() + static_cast<std::ptrdiff_t>(k));
  }
  for (const auto& c : kept) {
    std::vector<Rational> row(n, Rational(0));
    row[c.i] = 1;
    row[c.j] = -1;
    a.push_back(row);
    b.push_back(c.bound);
  }

  Rational best = 0;
  std::vector<std::size_t> pick(n);
  std::function<void(std::size_t, std::size_t)> choose = [&](std::size_t depth, std::size_t from) {
    if (depth == n) {
      std::vector<std::vector<Rational>> sub;
      std::vector<Rational> rhs;
      for (const std::size_t k : pick) {
        sub.push_back(a[k]);
        rhs.push_back(b[k]);
      }
      const auto point = detail::solve_square(std::move(sub), std::move(rhs));
      if (!point) return;
      for (std::size_t r = 0; r < a.size(); ++r) {
        Rational lhs = 0;
        for (std::size_t j = 0; j < n; ++j) lhs += a[r][j] * (*point)[j];
        if (lhs > b[r]) return;
      }
      Rational obj = 0;
      for (std::size_t j = 0; j < n; ++j) obj += lp.objective[j] * (*point)[j];
      best = std::max(best, obj < 0 ? Rational(-obj) : obj);
      return;
    }
    for (std::size_t k = from; k < a.size(); ++k) {
      pick[depth] = k;
      choose(depth + 1, k + 1);
    }
  };
  choose(0, 0);
  return best;
}

/// ∫f dv for f constant on blocks, given by its value at each point.
inline Rational integrate(const SubProb& v, const std::vector<Rational>& f) {
  const auto& space = v.space();
  require(f.size() == space.carrier().size(), ErrorKind::CarrierMismatch, "test function of wrong length");
  Rational total = 0;
  for (std::size_t k = 0; k < space.block_count(); ++k) total += v.mass()[k] * f[space.blocks()[k].find_first()];
  return total;
}

/// Lifted distance axioms on all sample pairs and triples, plus the unit
/// bound K(δx, δy) = min(d(x,y), 1) when the space is discrete.
inline Report verify_pseudometric_laws(const Pseudometric& d, const std::vector<SubProb>& samples) {
  Report report;
  std::vector<std::vector<Rational>> k(samples.size(), std::vector<Rational>(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i)
    for (std::size_t j = 0; j < samples.size(); ++j) k[i][j] = kantorovich(d, samples[i], samples[j]);

  auto& refl = report.add("K(v,v) = 0");
  auto& sym = report.add("K symmetric");
  auto& tri = report.add("K triangle inequality");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    ++refl.cases;
    if (k[i][i] != 0) fail(refl, "v=" + describe(samples[i]) + " K=" + to_string(k[i][i]));
    for (std::size_t j = 0; j < samples.size(); ++j) {
      ++sym.cases;
      if (k[i][j] != k[j][i]) fail(sym, "samples " + std::to_string(i) + "," + std::to_string(j));
      for (std::size_t l = 0; l < samples.size(); ++l) {
        ++tri.cases;
        if (k[i][j] + k[j][l] < k[i][l])
          fail(tri, "samples " + std::to_string(i) + "," + std::to_string(j) + "," + std::to_string(l));
      }
    }
  }

  if (!samples.empty() && samples.front().space() == FinMeasSpace::discrete(d.carrier)) {
    const auto& space = samples.front().space();
    auto& unit = report.add("K(dirac x, dirac y) = min(d(x,y), 1)");
    for (std::size_t x = 0; x < d.carrier.size(); ++x) {
      for (std::size_t y = 0; y < d.carrier.size(); ++y) {
        ++unit.cases;
        const Rational got = kantorovich(d, SubProb::dirac(space, x), SubProb::dirac(space, y));
        const Rational want = d(x, y).is_infinite() ? Rational(1) : std::min(d(x, y).value(), Rational(1));
        if (got != want)
          fail(unit, "(" + d.carrier[x] + "," + d.carrier[y] + "): " + to_string(got) + " vs " + to_string(want));
      }
    }
  }
  return report;
}

}  // namespace kanlift
