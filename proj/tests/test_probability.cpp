#include <gtest/gtest.h>

#include <sstream>

#include "oracles.hpp"

using namespace kanlift;

namespace {

const FinSet two = FinSet::range(2);

FinMeasSpace discrete2() { return FinMeasSpace::discrete(two); }
FinMeasSpace indiscrete2() { return FinMeasSpace::indiscrete(two); }

SubProb masses(const FinMeasSpace& s, std::vector<Rational> m) { return SubProb(s, std::move(m)); }

// The three constant LMPs of the standard counterexample.
LMP k1() { return LMP::constant(masses(discrete2(), {Rational(1, 2), Rational(1, 2)})); }
LMP k2() { return LMP::constant(masses(indiscrete2(), {Rational(1)})); }
LMP k3() { return LMP::constant(masses(discrete2(), {Rational(1, 3), Rational(2, 3)})); }

Bits bits(std::initializer_list<std::size_t> members, std::size_t n = 2) {
  Bits b(n);
  for (auto i : members) b.set(i);
  return b;
}

Relation eq2() { return Relation::identity(2); }

}  // namespace

// ------------------------------------------------------------ measurable --

TEST(SigmaGenerate, Examples) {
  EXPECT_EQ(sigma_generate(two, {bits({0})}), discrete2());
  EXPECT_EQ(sigma_generate(two, {}), indiscrete2());
  const FinSet abc{"a", "b", "c"};
  const auto s = sigma_generate(abc, {bits({0, 1}, 3)});
  ASSERT_EQ(s.block_count(), 2U);
  EXPECT_EQ(s.blocks()[0], bits({0, 1}, 3));
  EXPECT_EQ(s.blocks()[1], bits({2}, 3));
}

TEST(SigmaGenerate, Idempotent) {
  oracle::Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_space(rng, 1 + trial % 5);
    EXPECT_EQ(sigma_generate(s.carrier(), s.measurable_sets()), s);
  }
}

TEST(SigmaGenerate, MatchesSetOracle) {
  oracle::Rng rng(11);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 1 + trial % 4;
    std::vector<Bits> gens;
    oracle::Family fam;
    for (int g = 0; g < trial % 3; ++g) {
      Bits b(n);
      for (std::size_t i = 0; i < n; ++i) b.set(i, rng() & 1U);
      gens.push_back(b);
      fam.insert(oracle::to_set(powerset::to_mask(b)));
    }
    const auto s = sigma_generate(FinSet::range(n), gens);
    // Measurable sets are exactly the sets obtained by closing under
    // complement, union and intersection.
    oracle::Family closed = fam;
    closed.insert(oracle::IntSet{});
    for (bool grew = true; grew;) {
      grew = false;
      const oracle::Family now = closed;
      for (const auto& a : now) {
        oracle::IntSet comp;
        for (int i = 0; i < static_cast<int>(n); ++i)
          if (!a.count(i)) comp.insert(i);
        grew = closed.insert(comp).second || grew;
        for (const auto& b : now) {
          oracle::IntSet u = a;
          u.insert(b.begin(), b.end());
          grew = closed.insert(u).second || grew;
        }
      }
    }
    oracle::Family got;
    for (const auto& m : s.measurable_sets()) got.insert(oracle::to_set(powerset::to_mask(m)));
    ASSERT_EQ(got, closed);
  }
}

TEST(FinMeasSpace, RejectsNonPartitions) {
  EXPECT_THROW(FinMeasSpace(two, {bits({0})}), Error);
  EXPECT_THROW(FinMeasSpace(two, {bits({0, 1}), bits({1})}), Error);
  EXPECT_THROW(FinMeasSpace(two, {bits({0}), Bits(2), bits({1})}), Error);
}

TEST(MeasureEval, Examples) {
  const auto v1 = masses(discrete2(), {Rational(1, 2), Rational(1, 2)});
  const auto v3 = masses(discrete2(), {Rational(1, 3), Rational(2, 3)});
  EXPECT_EQ(measure_eval(v1, Subset::full(two)), Rational(1));
  EXPECT_EQ(measure_eval(v1, Subset::empty(two)), Rational(0));
  EXPECT_EQ(measure_eval(v3, Subset(two, std::vector<Atom>{"1"})), Rational(2, 3));
  const auto v2 = masses(indiscrete2(), {Rational(1)});
  try {
    measure_eval(v2, Subset(two, std::vector<Atom>{"0"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMeasurable);
  }
}

TEST(MeasureEval, AdditiveAndMonotone) {
  oracle::Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto s = oracle::random_space(rng, 1 + trial % 4);
    const auto v = oracle::random_subprob(rng, s);
    const auto sets = s.measurable_sets();
    for (const auto& a : sets)
      for (const auto& b : sets) {
        const Rational ma = measure_eval(v, Subset(s.carrier(), a));
        const Rational mb = measure_eval(v, Subset(s.carrier(), b));
        if (!a.intersects(b)) { ASSERT_EQ(measure_eval(v, Subset(s.carrier(), a | b)), ma + mb); }
        if (a.is_subset_of(b)) { ASSERT_LE(ma, mb); }
      }
  }
}

TEST(SubProb, Validation) {
  EXPECT_THROW(masses(discrete2(), {Rational(2, 3), Rational(2, 3)}), Error);
  EXPECT_THROW(masses(discrete2(), {Rational(-1, 3), Rational(1, 3)}), Error);
  EXPECT_THROW(masses(discrete2(), {Rational(1)}), Error);
  EXPECT_EQ(SubProb::zero(discrete2()).total(), Rational(0));
  EXPECT_EQ(SubProb::dirac(indiscrete2(), 1).total(), Rational(1));
}

TEST(IsMeasurableFun, Examples) {
  const auto id = FinFun::identity(two);
  EXPECT_TRUE(is_measurable_fun(id, discrete2(), indiscrete2()));
  EXPECT_FALSE(is_measurable_fun(id, indiscrete2(), discrete2()));
  EXPECT_TRUE(is_measurable_fun(id, indiscrete2(), indiscrete2()));
  EXPECT_TRUE(is_measurable_fun(id, discrete2(), discrete2()));
  const FinSet abc{"a", "b", "c"};
  EXPECT_TRUE(is_measurable_fun(FinFun::constant(abc, two, 1), FinMeasSpace::indiscrete(abc), discrete2()));
  try {
    is_measurable_fun(id, FinMeasSpace::discrete(abc), discrete2());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CarrierMismatch);
  }
}

TEST(LMP, KernelMustBeMeasurable) {
  const auto d = discrete2();
  const auto ind = indiscrete2();
  // States 0 and 1 share a block but have different kernels.
  std::vector<std::vector<SubProb>> kernel{{SubProb::dirac(ind, 0), SubProb::zero(ind)}};
  try {
    LMP(ind, FinSet{"a"}, kernel);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotMeasurable);
  }
  EXPECT_NO_THROW(LMP(d, FinSet{"a"}, {{SubProb::dirac(d, 0), SubProb::zero(d)}}));
}

TEST(MaxBlocks, GuardsEnumeration) {
  const auto s = FinMeasSpace::discrete(FinSet::range(max_blocks() + 1));
  try {
    s.measurable_count();
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyBlocks);
  }
}

// ----------------------------------------------------- lifted relations --

TEST(BRelMember, Examples) {
  const auto d = discrete2();
  const auto v1 = masses(d, {Rational(1, 2), Rational(1, 2)});
  const auto v3 = masses(d, {Rational(1, 3), Rational(2, 3)});
  EXPECT_TRUE(brel_member({d, d, eq2()}, RelParam::eq(), v1, v1));
  const auto bad = brel_violation({d, d, eq2()}, RelParam::eq(), v1, v3);
  ASSERT_TRUE(bad.has_value());
  EXPECT_FALSE(brel_member({d, d, eq2()}, RelParam::eq(), v1, v3));

  const auto v2 = masses(indiscrete2(), {Rational(1)});
  EXPECT_TRUE(brel_member({d, indiscrete2(), eq2()}, RelParam::leq(), v1, v2));
}

TEST(BRelMember, SpaceMismatch) {
  const auto d = discrete2();
  const auto v1 = masses(d, {Rational(1, 2), Rational(1, 2)});
  const auto v2 = masses(indiscrete2(), {Rational(1)});
  try {
    brel_member({d, d, eq2()}, RelParam::leq(), v1, v2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SpaceMismatch);
  }
}

TEST(ERelMember, Examples) {
  oracle::Rng rng(5);
  for (int trial = 0; trial < 50; ++trial) {
    const auto s = oracle::random_space(rng, 1 + trial % 4);
    const auto v1 = oracle::random_subprob(rng, s);
    const auto v2 = oracle::random_subprob(rng, s);
    const ERelObj full{s, Relation::full(s.carrier().size(), s.carrier().size())};
    EXPECT_EQ(erel_member(full, RelParam::leq(), v1, v2), v1.total() <= v2.total());
    EXPECT_TRUE(erel_member({s, oracle::random_relation(rng, s.carrier().size(), s.carrier().size())},
                            RelParam::leq(), v1, v1));
  }
  const auto d = discrete2();
  EXPECT_FALSE(erel_member({d, eq2()}, RelParam::eq(), masses(d, {Rational(1, 2), Rational(0)}),
                           masses(d, {Rational(1, 4), Rational(0)})));
}

TEST(RelParam, CustomWarns) {
  std::ostringstream warn;
  const auto p = RelParam::custom("lt-or-eq", [](const Rational& a, const Rational& b) { return a <= b; }, warn);
  EXPECT_TRUE(p.caller_certified);
  EXPECT_NE(warn.str().find("caller-certified"), std::string::npos);
  EXPECT_TRUE(p(Rational(0), Rational(1)));
}

TEST(BRelMember, MatchesUnfoldedDefinition) {
  // Membership against a brute force over all subset pairs.
  oracle::Rng rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const auto s1 = oracle::random_space(rng, 1 + trial % 3);
    const auto s2 = oracle::random_space(rng, 1 + (trial / 3) % 3);
    const auto r = oracle::random_relation(rng, s1.carrier().size(), s2.carrier().size());
    const auto v1 = oracle::random_subprob(rng, s1);
    const auto v2 = oracle::random_subprob(rng, s2);
    for (const auto& s0 : {RelParam::leq(), RelParam::eq()}) {
      bool expected = true;
      for (const auto& v : oracle::all_subsets(static_cast<int>(s1.carrier().size())))
        for (const auto& w : oracle::all_subsets(static_cast<int>(s2.carrier().size()))) {
          if (!oracle::measurable(s1, v) || !oracle::measurable(s2, w)) continue;
          bool admissible = true;
          for (std::size_t x = 0; x < r.rows(); ++x)
            for (std::size_t y = 0; y < r.cols(); ++y)
              if (r.test(x, y) && !s0(Rational(v.count(static_cast<int>(x))), Rational(w.count(static_cast<int>(y)))))
                admissible = false;
          if (admissible && !s0(oracle::mass(v1, v), oracle::mass(v2, w))) expected = false;
        }
      ASSERT_EQ(brel_member({s1, s2, r}, s0, v1, v2), expected) << s0.name;
    }
  }
}

// ----------------------------------------------------------- simulations --

TEST(SimulationTwo, StandardCounterexample) {
  EXPECT_TRUE(is_simulation_two(k1(), k2(), eq2()));
  EXPECT_TRUE(is_simulation_two(k2(), k3(), eq2()));
  const auto r = is_simulation_two(k1(), k3(), eq2());
  ASSERT_FALSE(r);
  ASSERT_TRUE(r.witness.has_value());
  EXPECT_EQ(r.witness->v, bits({0}));
  EXPECT_EQ(r.witness->w, bits({0}));
  EXPECT_EQ(describe(*r.witness, k1(), k3()), "pair (0,0), action \"a\", V={0}, W={0}");
  EXPECT_FALSE(preserves_measurable_sets(eq2(), discrete2(), indiscrete2()));
  EXPECT_FALSE(is_simulation_two(k1(), k3(), compose(eq2(), eq2())));
}

TEST(SimulationTwo, ActionMismatch) {
  const auto d = discrete2();
  const LMP two_actions(d, FinSet{"a", "b"},
                        {std::vector<SubProb>(2, masses(d, {Rational(1, 2), Rational(1, 2)})),
                         std::vector<SubProb>(2, SubProb::zero(d))});
  for (auto call : {+[](const LMP& a, const LMP& b) { (void)is_simulation_two(a, b, eq2()); },
                    +[](const LMP& a, const LMP& b) { (void)is_bisimulation(a, b, eq2()); },
                    +[](const LMP& a, const LMP& b) { (void)largest_simulation_two(a, b); }}) {
    try {
      call(two_actions, k1());
      ADD_FAILURE();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::ActionMismatch);
    }
  }
}

TEST(SimulationSingle, TwoStateExample) {
  // States s=0, t=1; kernel(s) = ½δ_s, kernel(t) = δ_s; r = Δ ∪ {(s,t)}.
  const auto d = discrete2();
  Relation r = Relation::identity(2);
  r.set(0, 1);
  const LMP lmp(d, FinSet{"a"}, {{masses(d, {Rational(1, 2), Rational(0)}), SubProb::dirac(d, 0)}});
  EXPECT_TRUE(is_simulation_single(lmp, r));
  const LMP swapped(d, FinSet{"a"}, {{SubProb::dirac(d, 0), masses(d, {Rational(1, 2), Rational(0)})}});
  const auto res = is_simulation_single(swapped, r);
  ASSERT_FALSE(res);
  EXPECT_EQ(res.witness->v, bits({0, 1}));
  EXPECT_TRUE(is_simulation_single(swapped, Relation::identity(2)));
  try {
    is_simulation_single(lmp, Relation(2, 2));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NotReflexive);
  }
}

TEST(Bisimulation, Examples) {
  EXPECT_TRUE(is_bisimulation(k1(), k1(), eq2()));
  EXPECT_FALSE(is_bisimulation(k1(), k3(), eq2()));
  // A relabelled copy of a random LMP is bisimilar along the relabelling.
  oracle::Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto a = oracle::random_lmp(rng, n, 1 + trial % 2);
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<Bits> blocks;
    for (const auto& b : a.space().blocks()) {
      Bits nb(n);
      for_each_bit(b, [&](std::size_t x) { nb.set(perm[x]); });
      blocks.push_back(nb);
    }
    const FinMeasSpace space(FinSet::range(n), blocks);
    auto move = [&](const SubProb& v) {
      std::vector<Rational> m(space.block_count());
      for (std::size_t k = 0; k < a.space().block_count(); ++k)
        m[space.block_of(perm[a.space().blocks()[k].find_first()])] = v.mass()[k];
      return SubProb(space, m);
    };
    std::vector<std::vector<SubProb>> kernel(a.actions().size(), std::vector<SubProb>(n));
    for (std::size_t act = 0; act < a.actions().size(); ++act)
      for (std::size_t s = 0; s < n; ++s) kernel[act][perm[s]] = move(a.kernel(act, s));
    const LMP b(space, a.actions(), kernel);
    Relation graph(n, n);
    for (std::size_t s = 0; s < n; ++s) graph.set(s, perm[s]);
    EXPECT_TRUE(is_bisimulation(a, b, graph));
    EXPECT_TRUE(is_simulation_two(a, b, graph));
  }
}

TEST(Simulations, MatchUnfoldedDefinitions) {
  oracle::Rng rng(19);
  for (int trial = 0; trial < 300; ++trial) {
    const auto a = oracle::random_lmp(rng, 1 + trial % 3, 1 + trial % 2, 3);
    const auto b = oracle::random_lmp(rng, 1 + (trial / 3) % 3, 1 + trial % 2, 3);
    const auto r = oracle::random_relation(rng, a.states().size(), b.states().size());
    ASSERT_EQ(bool(is_simulation_two(a, b, r)), oracle::simulation(a, b, r, oracle::Sim::Two));
    ASSERT_EQ(bool(is_bisimulation(a, b, r)), oracle::simulation(a, b, r, oracle::Sim::Bisim));
    Relation refl = oracle::random_relation(rng, a.states().size(), a.states().size());
    for (std::size_t i = 0; i < a.states().size(); ++i) refl.set(i, i);
    ASSERT_EQ(bool(is_simulation_single(a, refl)), oracle::simulation(a, a, refl, oracle::Sim::Single));
  }
}

TEST(Simulations, DiagonalAlwaysSimulates) {
  oracle::Rng rng(23);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = oracle::random_lmp(rng, 1 + trial % 4, 1 + trial % 3);
    const auto id = Relation::identity(a.states().size());
    EXPECT_TRUE(is_simulation_single(a, id));
    EXPECT_TRUE(is_simulation_two(a, a, id));
    EXPECT_TRUE(is_bisimulation(a, a, id));
  }
}

TEST(Simulations, FunctionalIsMonotone) {
  oracle::Rng rng(29);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = oracle::random_lmp(rng, 1 + trial % 3, 1, 3);
    const auto b = oracle::random_lmp(rng, 1 + (trial / 3) % 3, 1, 3);
    const auto r = oracle::random_relation(rng, a.states().size(), b.states().size(), 0.4);
    Relation bigger = r;
    for (std::size_t i = 0; i < r.rows(); ++i)
      for (std::size_t j = 0; j < r.cols(); ++j)
        if (rng() % 2) bigger.set(i, j);
    EXPECT_TRUE(oracle::simulation_step(a, b, r).is_subset_of(oracle::simulation_step(a, b, bigger)));
  }
}

TEST(PreservesMeasurableSets, Examples) {
  oracle::Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto s = oracle::random_space(rng, 1 + trial % 4);
    const std::size_t n = s.carrier().size();
    EXPECT_TRUE(preserves_measurable_sets(Relation::identity(n), s, s));
    const auto s2 = oracle::random_space(rng, 1 + trial % 3);
    EXPECT_TRUE(preserves_measurable_sets(Relation::full(n, s2.carrier().size()), s, s2));
  }
  EXPECT_FALSE(preserves_measurable_sets(eq2(), discrete2(), indiscrete2()));
  EXPECT_TRUE(preserves_measurable_sets(eq2(), indiscrete2(), discrete2()));
}

TEST(LargestSimulation, CounterexampleInstances) {
  EXPECT_EQ(largest_simulation_two(k1(), k3()), Relation::full(2, 2));
  // Starting below Eq₂ nothing survives: ({0},{0}) refutes both diagonal pairs.
  EXPECT_EQ(largest_simulation_two(k1(), k3(), eq2()), Relation(2, 2));
  EXPECT_EQ(largest_simulation_two(k1(), k2()), Relation::full(2, 2));
}

TEST(LargestSimulation, IsGreatestFixpoint) {
  oracle::Rng rng(37);
  for (int trial = 0; trial < 60; ++trial) {
    const auto a = oracle::random_lmp(rng, 1 + trial % 2, 1, 2);
    const auto b = oracle::random_lmp(rng, 1 + (trial / 2) % 3, 1, 2);
    const auto g = largest_simulation_two(a, b);
    ASSERT_TRUE(is_simulation_two(a, b, g));
    const std::size_t n = a.states().size() * b.states().size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
      Relation r(a.states().size(), b.states().size());
      for (std::size_t k = 0; k < n; ++k)
        if ((mask >> k) & 1U) r.set(k / b.states().size(), k % b.states().size());
      if (is_simulation_two(a, b, r)) { ASSERT_TRUE(r.is_subset_of(g)); }
    }
  }
}

TEST(Simulations, ComposeUnderMeasurableSetPreservation) {
  oracle::Rng rng(41);
  int composed = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto a = oracle::random_lmp(rng, 1 + trial % 3, 1, 2);
    const auto b = oracle::random_lmp(rng, 1 + (trial / 3) % 3, 1, 2);
    const auto c = oracle::random_lmp(rng, 1 + (trial / 9) % 3, 1, 2);
    // Largest simulations inside random relations.
    const auto r1 = largest_simulation_two(a, b, oracle::random_relation(rng, a.states().size(), b.states().size(), 0.7));
    const auto r2 = largest_simulation_two(b, c, oracle::random_relation(rng, b.states().size(), c.states().size(), 0.7));
    if (!preserves_measurable_sets(r1, a.space(), b.space()) ||
        !preserves_measurable_sets(r2, b.space(), c.space()))
      continue;
    ++composed;
    EXPECT_TRUE(is_simulation_two(a, c, compose(r1, r2)));
  }
  EXPECT_GT(composed, 0);
}

// ---------------------------------------------------------- kantorovich --

TEST(Kantorovich, Examples) {
  const FinSet ab{"a", "b"};
  Pseudometric d = Pseudometric::top(ab);
  d.dist[0][1] = d.dist[1][0] = Rational(1, 2);
  const auto s = FinMeasSpace::discrete(ab);
  const auto da = SubProb::dirac(s, 0);
  const auto db = SubProb::dirac(s, 1);
  const auto res = kantorovich_solve(d, da, db);
  EXPECT_EQ(res.value, Rational(1, 2));
  EXPECT_EQ(res.test_function, (std::vector<Rational>{Rational(1, 2), Rational(0)}));
  EXPECT_EQ(kantorovich(d, da, da), Rational(0));
  EXPECT_EQ(kantorovich(d, da, SubProb::zero(s)), Rational(1));
  EXPECT_EQ(kantorovich_oracle(d, da, db), Rational(1, 2));
}

TEST(Kantorovich, InfiniteDistancesAreBangBang) {
  oracle::Rng rng(43);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto d = Pseudometric::discrete(FinSet::range(n));
    const auto s = FinMeasSpace::discrete(d.carrier);
    const auto v1 = oracle::random_subprob(rng, s);
    const auto v2 = oracle::random_subprob(rng, s);
    Rational up = 0, down = 0;
    for (std::size_t x = 0; x < n; ++x) {
      const Rational diff = v1.mass()[x] - v2.mass()[x];
      (diff > 0 ? up : down) += diff > 0 ? diff : Rational(-diff);
    }
    EXPECT_EQ(kantorovich(d, v1, v2), std::max(up, down));
  }
}

TEST(Kantorovich, SinglePoint) {
  const auto d = Pseudometric::top(FinSet{"x"});
  const auto s = FinMeasSpace::discrete(d.carrier);
  const SubProb a(s, {Rational(1, 3)});
  const SubProb b(s, {Rational(3, 4)});
  EXPECT_EQ(kantorovich(d, a, b), Rational(5, 12));
  EXPECT_EQ(kantorovich_oracle(d, a, b), Rational(5, 12));
}

TEST(Kantorovich, Errors) {
  const auto d = Pseudometric::top(two);
  try {
    kantorovich(d, SubProb::zero(discrete2()), SubProb::zero(indiscrete2()));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SpaceMismatch);
  }
  const auto big = Pseudometric::top(FinSet::range(kOracleMaxCarrier + 1));
  const auto s = FinMeasSpace::discrete(big.carrier);
  try {
    kantorovich_oracle(big, SubProb::zero(s), SubProb::zero(s));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::CarrierTooLarge);
  }
  EXPECT_EQ(kantorovich(big, SubProb::zero(s), SubProb::dirac(s, 3)), Rational(1));
}

TEST(Kantorovich, SimplexMatchesOracleAndCertifies) {
  oracle::Rng rng(47);
  for (int trial = 0; trial < 150; ++trial) {
    const std::size_t n = 1 + trial % 5;
    const auto d = oracle::random_pseudometric(rng, n);
    const auto s = FinMeasSpace::discrete(d.carrier);
    const auto v1 = oracle::random_subprob(rng, s, 6);
    const auto v2 = oracle::random_subprob(rng, s, 6);
    const auto res = kantorovich_solve(d, v1, v2);
    ASSERT_EQ(res.value, kantorovich_oracle(d, v1, v2));
    // The test function is feasible and attains the value.
    for (std::size_t x = 0; x < n; ++x) {
      ASSERT_GE(res.test_function[x], 0);
      ASSERT_LE(res.test_function[x], 1);
      for (std::size_t y = 0; y < n; ++y)
        if (!d(x, y).is_infinite()) { ASSERT_LE(res.test_function[x] - res.test_function[y], d(x, y).value()); }
    }
    const Rational gap = integrate(v1, res.test_function) - integrate(v2, res.test_function);
    ASSERT_EQ(res.forward ? gap : Rational(-gap), res.value);
  }
}

TEST(Kantorovich, CoarseSpaceMatchesCollapsedMetric) {
  // On an indiscrete space every test function is constant.
  const auto d = Pseudometric::top(FinSet::range(3));
  const auto s = FinMeasSpace::indiscrete(d.carrier);
  EXPECT_EQ(kantorovich(d, SubProb(s, {Rational(1, 4)}), SubProb(s, {Rational(3, 4)})), Rational(1, 2));
}

TEST(Kantorovich, MonotoneInMetric) {
  oracle::Rng rng(53);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 3;
    const auto d1 = oracle::random_pseudometric(rng, n);
    const auto d2 = oracle::random_pseudometric(rng, n);
    const auto sup = meet({d1, d2});
    const auto s = FinMeasSpace::discrete(d1.carrier);
    const auto v1 = oracle::random_subprob(rng, s);
    const auto v2 = oracle::random_subprob(rng, s);
    EXPECT_LE(kantorovich(d1, v1, v2), kantorovich(sup, v1, v2));
  }
}

TEST(Kantorovich, NonExpansiveFunctionsAreBounded) {
  oracle::Rng rng(59);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto d = oracle::random_pseudometric(rng, n);
    const auto s = FinMeasSpace::discrete(d.carrier);
    const auto v1 = oracle::random_subprob(rng, s);
    const auto v2 = oracle::random_subprob(rng, s);
    const Rational k = kantorovich(d, v1, v2);
    for (int sample = 0; sample < 20; ++sample) {
      std::vector<Rational> f(n);
      for (auto& x : f) x = oracle::random_rational(rng);
      bool nonexpansive = true;
      for (std::size_t x = 0; x < n; ++x)
        for (std::size_t y = 0; y < n; ++y)
          if (!d(x, y).is_infinite() && f[x] - f[y] > d(x, y).value()) nonexpansive = false;
      if (!nonexpansive) continue;
      const Rational gap = integrate(v1, f) - integrate(v2, f);
      EXPECT_LE(gap < 0 ? Rational(-gap) : gap, k);
    }
  }
}

TEST(PseudometricLaws, RandomInstances) {
  oracle::Rng rng(61);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + trial % 4;
    const auto d = oracle::random_pseudometric(rng, n);
    const auto s = FinMeasSpace::discrete(d.carrier);
    std::vector<SubProb> samples;
    for (int k = 0; k < 5; ++k) samples.push_back(oracle::random_subprob(rng, s));
    const auto report = verify_pseudometric_laws(d, samples);
    EXPECT_TRUE(report.passed()) << report;
    EXPECT_EQ(report.checks().size(), 4U);
  }
}
