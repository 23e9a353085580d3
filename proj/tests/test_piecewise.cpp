#include "flowtime/piecewise.hpp"

#include "flowtime/generator.hpp"
#include "support.hpp"

#include <doctest.h>

using namespace flowtime;
using namespace testsupport;

TEST_CASE("step evaluation is right-continuous") {
  const StepFunction u = fig1_inflow();
  CHECK(u(Q("1")) == 0);
  CHECK(u(Q("0")) == 2);
  CHECK(u(Q("5/2")) == 1);
  CHECK(u(Q("-1")) == 0);
  CHECK(StepFunction()(Q("7")) == 0);
}

TEST_CASE("piecewise-linear evaluation interpolates") {
  const PiecewiseLinear f({Q("0"), Q("1")}, {Q("1"), Q("3")}, Q("0"), Q("0"));
  CHECK(f(Q("1/2")) == 2);
  CHECK(f(Q("-1")) == 1);
  CHECK(f(Q("2")) == 3);
}

TEST_CASE("canonical form merges redundant pieces") {
  const StepFunction s(Q("1"), {Q("0"), Q("1"), Q("2")}, {Q("1"), Q("2"), Q("2")});
  CHECK(s.breakpoints() == std::vector<Rational>{Q("1")});
  CHECK(s.values() == std::vector<Rational>{Q("2")});

  const PiecewiseLinear f({Q("0"), Q("1"), Q("2")}, {Q("0"), Q("1"), Q("2")}, Q("1"), Q("1"));
  CHECK(f == PiecewiseLinear::identity());
  CHECK(f.xs().size() == 1);

  CHECK_THROWS_AS(StepFunction(Q("0"), {Q("1"), Q("1")}, {Q("2"), Q("3")}), std::invalid_argument);
}

TEST_CASE("integrate: cumulative inflow of the bottleneck example") {
  const PiecewiseLinear cumulative = integrate(fig1_inflow());
  CHECK(cumulative(Q("0")) == 0);
  CHECK(cumulative(Q("1")) == 2);
  CHECK(cumulative(Q("2")) == 2);
  CHECK(cumulative(Q("3")) == 3);
}

TEST_CASE("integrate: trivial cases") {
  CHECK(integrate(StepFunction()) == PiecewiseLinear::constant(Q("0")));
  CHECK(integrate(StepFunction(Q("3"))) == PiecewiseLinear::affine(Q("3"), Q("0")));
}

TEST_CASE("integrate telescopes exactly") {
  for (std::uint64_t seed = 0; seed < 50; ++seed) {
    Rng rng(100 + seed);
    const StepFunction f = random_step(rng);
    const PiecewiseLinear cumulative = integrate(f);
    CHECK(cumulative(Q("0")) == 0);
    // Independent telescoping sum between consecutive breakpoints.
    const auto& bps = f.breakpoints();
    for (std::size_t i = 1; i < bps.size(); ++i) {
      const Rational increment = f.values()[i - 1] * (bps[i] - bps[i - 1]);
      CHECK(cumulative(bps[i]) - cumulative(bps[i - 1]) == increment);
    }
    CHECK(cumulative.derivative() == f);
  }
}

TEST_CASE("compose_monotone matches the arrival-time shift") {
  // l_r of the worked bottleneck example; appending a unit-latency edge just
  // shifts arrivals by one.
  const PiecewiseLinear l_r({Q("0"), Q("1"), Q("2")}, {Q("1"), Q("3"), Q("3")}, Q("1"), Q("1"));
  const PiecewiseLinear shift = PiecewiseLinear::affine(Q("1"), Q("1"));
  const PiecewiseLinear l_t = compose_monotone(shift, l_r);
  CHECK(l_t(Q("1")) == 4);
  CHECK(l_t == l_r + Q("1"));
}

TEST_CASE("compose_monotone identity and kink propagation") {
  Rng rng(7);
  for (int i = 0; i < 30; ++i) {
    const PiecewiseLinear f = random_monotone_plw(rng);
    CHECK(compose_monotone(PiecewiseLinear::identity(), f) == f);
  }
  // Outer kink at 3 lands at the preimage under f(x) = x + 1.
  const PiecewiseLinear g({Q("3")}, {Q("6")}, Q("2"), Q("0"));
  const PiecewiseLinear f = PiecewiseLinear::affine(Q("1"), Q("1"));
  const PiecewiseLinear composed = compose_monotone(g, f);
  CHECK(composed(Q("1")) == g(Q("2")));
  CHECK(composed.xs() == std::vector<Rational>{Q("2")});
  const auto oracle = [&](const Rational& x) { return g(f(x)); };
  CHECK(grid_equal(composed, oracle, Q("-10"), Q("10")));
}

TEST_CASE("compose_monotone rejects non-monotone inner functions") {
  const PiecewiseLinear wiggle({Q("0"), Q("1")}, {Q("1"), Q("0")}, Q("0"), Q("0"));
  CHECK_THROWS_AS(compose_monotone(PiecewiseLinear::identity(), wiggle), std::invalid_argument);
}

TEST_CASE("compose_monotone preserves monotonicity") {
  Rng rng(8);
  for (int i = 0; i < 30; ++i) {
    const PiecewiseLinear f = random_monotone_plw(rng);
    const PiecewiseLinear g = random_monotone_plw(rng);
    CHECK(compose_monotone(g, f).nondecreasing());
  }
}

TEST_CASE("min_pointwise inserts crossings") {
  const PiecewiseLinear a = PiecewiseLinear::affine(Q("1"), Q("2"));
  const PiecewiseLinear b = PiecewiseLinear::affine(Q("1"), Q("3"));
  CHECK(min_pointwise({a, b}) == a);
  CHECK(min_pointwise({a}) == a);

  const PiecewiseLinear c = PiecewiseLinear::affine(Q("2"), Q("0"));
  const PiecewiseLinear d = PiecewiseLinear::affine(Q("1"), Q("1"));
  const PiecewiseLinear m = min_pointwise({c, d});
  CHECK(m.xs() == std::vector<Rational>{Q("1")});
  const auto oracle = [&](const Rational& x) { return std::min(c(x), d(x)); };
  CHECK(grid_equal(m, oracle, Q("-10"), Q("10")));
  CHECK_THROWS_AS(min_pointwise(std::vector<PiecewiseLinear>{}), std::invalid_argument);
}

TEST_CASE("min_pointwise agrees with the pointwise oracle at random points") {
  Rng rng(9);
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<PiecewiseLinear> fs;
    const std::size_t n = 2 + rng.below(3);
    for (std::size_t i = 0; i < n; ++i) fs.push_back(random_plw(rng));
    const PiecewiseLinear m = min_pointwise(fs);
    for (int i = 0; i < 100; ++i) {
      const Rational x = random_rational(rng, 30);
      Rational want = fs[0](x);
      for (const auto& f : fs) want = std::min(want, f(x));
      CHECK(m(x) == want);
    }
  }
}

TEST_CASE("results stay canonical") {
  Rng rng(10);
  for (int trial = 0; trial < 40; ++trial) {
    const PiecewiseLinear f = random_plw(rng);
    const PiecewiseLinear g = random_plw(rng);
    for (const auto& h : {f + g, min_pointwise(f, g), max_pointwise(f, g)}) {
      for (std::size_t i = 1; i < h.xs().size(); ++i) {
        CHECK(h.xs()[i - 1] < h.xs()[i]);
        // Every surviving interior breakpoint is a genuine kink.
        if (i + 1 < h.xs().size()) CHECK(h.segment_slope(i - 1) != h.segment_slope(i));
      }
    }
    const StepFunction s = random_step(rng) + random_step(rng);
    const Rational* last = &s.value_before();
    for (std::size_t i = 0; i < s.values().size(); ++i) {
      CHECK(s.values()[i] != *last);
      last = &s.values()[i];
    }
  }
}

TEST_CASE("step builder writes contiguous pieces") {
  StepBuilder b;
  b.append(Q("0"), Q("1"), Q("2"));
  b.append(Q("1"), Q("2"), Q("2"));
  b.append(Q("2"), Q("3"), Q("0"));
  const StepFunction f = b.build();
  CHECK(f(Q("3/2")) == 2);
  CHECK(f(Q("2")) == 0);
  CHECK(f.breakpoints().size() == 2);
  CHECK_THROWS_AS(b.append(Q("5"), Q("6"), Q("1")), std::logic_error);
}

TEST_CASE("truncation zeroes the tail") {
  const StepFunction u = fig1_inflow();
  const StepFunction cut = u.truncated_after(Q("3/2"));
  CHECK(cut(Q("1")) == 0);
  CHECK(cut(Q("5/4")) == 0);
  CHECK(cut(Q("2")) == 0);
  CHECK(cut(Q("1/2")) == 2);
  CHECK(u.truncated_after(Q("1")).breakpoints() == std::vector<Rational>{Q("0"), Q("1")});
}
