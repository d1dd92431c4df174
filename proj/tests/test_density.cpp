#include <gtest/gtest.h>

#include "kanlift/suites.hpp"
#include "oracles.hpp"

using namespace kanlift;

namespace {

using Word = std::vector<Atom>;

Lasso lasso(Word prefix, Word cycle) { return Lasso(std::move(prefix), std::move(cycle)); }

const FinSet xy{"x", "y"};
const Predicate just_x = Predicate::of(xy, {"x"});

StreamParam alternating() { return StreamParam(FinSet{"0", "1"}, {lasso({}, {"0", "1"})}); }

oracle::RawLasso raw(const Lasso& l) { return {l.prefix(), l.cycle()}; }

std::set<Atom> members(const Predicate& p) {
  std::set<Atom> out;
  for_each_bit(p.members, [&](std::size_t i) { out.insert(p.carrier[i]); });
  return out;
}

}  // namespace

// --------------------------------------------------------------- product --

TEST(ProductDensity, Examples) {
  const FinSet a{"a", "b"};
  const FinSet r{"r"};
  const Predicate s = Predicate::of(product(r, a), {"(r,a)"});
  const Predicate lifted = product_density_lift(a, r, s, just_x);
  EXPECT_EQ(lifted, Predicate::of(product(xy, a), {"(x,a)"}));
  EXPECT_EQ(product_density_lift_enumerated(a, r, s, just_x), lifted);

  const Predicate none{product(r, a), product(r, a).none()};
  EXPECT_EQ(product_density_lift(a, r, none, just_x).members.count(), 0U);
  EXPECT_EQ(product_density_lift_enumerated(a, r, none, just_x).members.count(), 0U);

  const Predicate full = Predicate::top(product(r, a));
  EXPECT_EQ(product_density_lift(a, r, full, Predicate::top(xy)), Predicate::top(product(xy, a)));
}

TEST(ProductDensity, AmbientMismatch) {
  try {
    product_density_lift(FinSet{"a"}, FinSet{"r"}, just_x, just_x);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbientMismatch);
  }
}

TEST(ProductDensity, FormulaMatchesEnumerationExhaustively) {
  std::size_t cases = 0;
  for (std::size_t na = 0; na <= 2; ++na)
    for (std::size_t nr = 0; nr <= 2; ++nr)
      for (std::size_t nx = 0; nx <= 2; ++nx) {
        const FinSet a = FinSet::range(na);
        const FinSet r = FinSet::range(nr);
        for (const auto& s : all_predicates(product(r, a)))
          for (const auto& x : all_predicates(FinSet::range(nx))) {
            ++cases;
            ASSERT_EQ(product_density_lift(a, r, s, x), product_density_lift_enumerated(a, r, s, x))
                << describe(s) << " " << describe(x);
          }
      }
  EXPECT_GT(cases, 100U);
}

// ---------------------------------------------------------------- lassos --

TEST(Lasso, Canonicalizes) {
  EXPECT_EQ(lasso({}, {"0", "1", "0", "1"}), lasso({}, {"0", "1"}));
  EXPECT_EQ(lasso({"1"}, {"0", "1"}), lasso({}, {"1", "0"}));
  EXPECT_EQ(lasso({"a", "b", "b"}, {"b"}), lasso({"a"}, {"b"}));
  EXPECT_NE(lasso({"a"}, {"b"}), lasso({}, {"b"}));
  const Lasso l = lasso({"a", "b", "a"}, {"b", "a"});
  EXPECT_TRUE(l.prefix().empty());
  EXPECT_EQ(l.cycle(), (Word{"a", "b"}));
  EXPECT_THROW(lasso({"a"}, {}), Error);
}

TEST(Lasso, TailExamples) {
  const Lasso v = lasso({}, {"0", "1"});
  EXPECT_EQ(lasso_tail(v, 0), v);
  EXPECT_EQ(lasso_tail(v, 1), lasso({}, {"1", "0"}));
  EXPECT_EQ(lasso_tail(lasso({"a"}, {"b"}), 5), lasso({}, {"b"}));
}

TEST(Lasso, Describe) {
  EXPECT_EQ(describe(lasso({"a", "b"}, {"b", "c"})), "(a b)(b c)^w");
  EXPECT_EQ(describe(lasso({}, {"0"})), "()(0)^w");
}

TEST(Lasso, ReencodingsDenoteTheSameStream) {
  oracle::Rng rng(71);
  const auto lassos = small_lassos({"p", "q", "r"});
  for (const auto& l : lassos)
    for (int k = 0; k < 20; ++k) {
      const auto [prefix, cycle] = oracle::reencode(l, rng);
      const Lasso again(prefix, cycle);
      ASSERT_EQ(again, l);
      const oracle::RawLasso r{prefix, cycle};
      for (std::size_t i = 0; i < 3 * (prefix.size() + cycle.size()); ++i) ASSERT_EQ(r.at(i), l.at(i));
      ASSERT_EQ(Lasso(again.prefix(), again.cycle()), again);
    }
}

TEST(Lasso, EqualityIsStreamEquality) {
  const auto lassos = small_lassos({"p", "q"});
  for (const auto& a : lassos)
    for (const auto& b : lassos)
      ASSERT_EQ(a == b, oracle::same_prefix(a, b, tail_bound(a, b))) << describe(a) << " " << describe(b);
}

TEST(Lasso, TailsCompose) {
  for (const auto& l : small_lassos({"p", "q"}))
    for (std::size_t i = 0; i < 5; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        ASSERT_EQ(lasso_tail(l, i + j), lasso_tail(lasso_tail(l, i), j));
        ASSERT_EQ(lasso_tail(l, i).at(j), l.at(i + j));
      }
}

TEST(Lasso, Comultiply) {
  const Lasso l = lasso({"a"}, {"b", "c"});
  const auto d = comultiply(l);
  for (std::size_t m = 0; m < 8; ++m) EXPECT_EQ(d.at(m), l.tail(m));
  EXPECT_EQ(d.prefix().size(), 1U);
  EXPECT_EQ(d.cycle().size(), 2U);
}

// --------------------------------------------------------------- streams --

TEST(StreamParam, Validation) {
  try {
    StreamParam(FinSet{"0"}, {lasso({}, {"1"})});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbientMismatch);
  }
  const StreamParam p(FinSet{"0", "1"}, {lasso({}, {"0"}), lasso({"0"}, {"0"})});
  EXPECT_EQ(p.s0.size(), 1U);
}

TEST(StreamDensity, Examples) {
  const auto p = alternating();
  EXPECT_TRUE(stream_density_member(p, just_x, lasso({}, {"x", "x"})));
  EXPECT_TRUE(stream_density_member(p, just_x, lasso({}, {"x", "y"})));
  EXPECT_FALSE(stream_density_member(p, just_x, lasso({}, {"y", "x"})));
  EXPECT_FALSE(stream_density_member(p, just_x, lasso({}, {"x", "y", "y"})));
}

TEST(StreamDensity, EmptyPredicateAndEmptyParameter) {
  const Predicate empty{xy, xy.none()};
  for (const auto& l : small_lassos({"x", "y"})) {
    EXPECT_FALSE(stream_density_member(alternating(), empty, l));
    EXPECT_FALSE(stream_density_member(StreamParam(FinSet{"0", "1"}, {}), Predicate::top(xy), l));
  }
}

TEST(StreamDensity, UnknownSymbol) {
  try {
    stream_density_member(alternating(), just_x, lasso({}, {"z"}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::AmbientMismatch);
  }
}

TEST(StreamDensity, MatchesRawOracle) {
  for (const auto& sample : default_stream_samples()) {
    std::vector<oracle::RawLasso> s0;
    for (const auto& v : sample.param.s0) s0.push_back(raw(v));
    for (const auto& x : sample.streams)
      ASSERT_EQ(stream_density_member(sample.param, sample.x, x),
                oracle::stream_member_raw(s0, members(sample.x), raw(x)))
          << describe(sample.x) << " " << describe(x);
  }
}

TEST(StreamDensity, InvariantUnderReencoding) {
  oracle::Rng rng(73);
  for (const auto& sample : default_stream_samples()) {
    for (const auto& x : sample.streams) {
      const bool expected = stream_density_member(sample.param, sample.x, x);
      for (int k = 0; k < 5; ++k) {
        std::vector<oracle::RawLasso> s0;
        for (const auto& v : sample.param.s0) {
          const auto [p, c] = oracle::reencode(v, rng);
          s0.push_back({p, c});
        }
        const auto [p, c] = oracle::reencode(x, rng);
        ASSERT_EQ(oracle::stream_member_raw(s0, members(sample.x), {p, c}), expected);
        ASSERT_EQ(stream_density_member(sample.param, sample.x, Lasso(p, c)), expected);
      }
    }
  }
}

// ----------------------------------------------------------- comonad laws --

TEST(ComonadLaws, ProductExhaustive) {
  const auto r = product_comonad_laws(2);
  EXPECT_TRUE(r.passed()) << r;
}

TEST(ComonadLaws, StreamSamples) {
  const auto r = stream_comonad_laws(default_stream_samples());
  EXPECT_TRUE(r.passed()) << r;
  for (const auto& c : r.checks()) EXPECT_GT(c.cases, 0U) << c.name;
}

TEST(ComonadLaws, EmptySamplesPassVacuously) {
  const auto r = stream_comonad_laws({});
  EXPECT_TRUE(r.passed());
  EXPECT_TRUE(comonad_laws_check({}, 0).passed());
}
