#pragma once

#include "flowtime/rational.hpp"

#include <vector>

namespace flowtime {

/// Right-continuous step function defined on all of R.
///
/// Canonical form: `value_before` on (-inf, b0), values[i] on [b_i, b_{i+1}),
/// values.back() on [b_last, +inf). Breakpoints are strictly increasing and
/// adjacent equal values are merged, so equal functions compare equal.
class StepFunction {
 public:
  /// The zero function.
  StepFunction() : value_before_(0) {}
  explicit StepFunction(Rational constant) : value_before_(std::move(constant)) {}
  StepFunction(Rational value_before, std::vector<Rational> breakpoints, std::vector<Rational> values);

  const Rational& value_before() const { return value_before_; }
  const std::vector<Rational>& breakpoints() const { return breakpoints_; }
  const std::vector<Rational>& values() const { return values_; }

  /// Right-continuous evaluation.
  Rational operator()(const Rational& x) const;

  bool is_zero() const { return breakpoints_.empty() && value_before_ == 0; }
  bool nonnegative() const;
  /// True if the function is identically zero on (-inf, x).
  bool vanishes_before(const Rational& x) const;

  /// Replaces the function by 0 on [from, +inf).
  StepFunction truncated_after(const Rational& from) const;

  StepFunction operator+(const StepFunction& other) const;
  StepFunction operator*(const Rational& scale) const;

  bool operator==(const StepFunction&) const = default;

 private:
  Rational value_before_;
  std::vector<Rational> breakpoints_;
  std::vector<Rational> values_;
};

/// Assembles a step function from consecutive pieces written left to right;
/// the function is zero before the first piece and the last appended value
/// persists on [frontier, +inf).
class StepBuilder {
 public:
  /// Appends value on [from, to). `from` must extend the current frontier
  /// exactly; empty intervals are skipped.
  void append(const Rational& from, const Rational& to, const Rational& value);
  /// Appends the final piece on [from, +inf).
  void append_tail(const Rational& from, const Rational& value);

  bool empty() const { return starts_.empty(); }
  StepFunction build() const;

 private:
  std::vector<Rational> starts_;
  std::vector<Rational> values_;
  std::optional<Rational> frontier_;  // end of the last bounded piece
  bool closed_ = false;
};

/// Continuous piecewise-linear function defined on all of R, anchored at one
/// or more breakpoints with linear interpolation between them and affine
/// extrapolation outside using `slope_before` / `slope_after`.
///
/// Canonical form: no collinear interior breakpoint survives, the first and
/// last breakpoints are genuine kinks whenever more than one anchor remains,
/// and a globally affine function is anchored at x = 0. Equal functions
/// compare equal.
class PiecewiseLinear {
 public:
  PiecewiseLinear() : PiecewiseLinear(constant(Rational(0))) {}
  PiecewiseLinear(std::vector<Rational> xs, std::vector<Rational> ys, Rational slope_before,
                  Rational slope_after);

  static PiecewiseLinear constant(const Rational& c);
  /// slope * x + intercept
  static PiecewiseLinear affine(const Rational& slope, const Rational& intercept);
  static PiecewiseLinear identity() { return affine(Rational(1), Rational(0)); }

  const std::vector<Rational>& xs() const { return xs_; }
  const std::vector<Rational>& ys() const { return ys_; }
  const Rational& slope_before() const { return slope_before_; }
  const Rational& slope_after() const { return slope_after_; }

  Rational operator()(const Rational& x) const;
  /// Slope of the segment [xs[i], xs[i+1]].
  Rational segment_slope(std::size_t i) const;
  /// Slope on [x, x+eps) for small eps (the right derivative).
  Rational slope_right_of(const Rational& x) const;

  bool nondecreasing() const;
  bool nonnegative() const;

  PiecewiseLinear operator+(const PiecewiseLinear& other) const;
  PiecewiseLinear operator-(const PiecewiseLinear& other) const;
  PiecewiseLinear operator-() const;
  PiecewiseLinear operator*(const Rational& scale) const;
  PiecewiseLinear operator+(const Rational& shift) const;
  /// x -> f(x + delta)
  PiecewiseLinear shifted_arg(const Rational& delta) const;

  /// Right-continuous step function of slopes.
  StepFunction derivative() const;

  bool operator==(const PiecewiseLinear&) const = default;

 private:
  std::vector<Rational> xs_;
  std::vector<Rational> ys_;
  Rational slope_before_;
  Rational slope_after_;

  void canonicalize();
};

/// F(x) = integral of f from 0 to x; continuous piecewise-linear with F(0)=0.
PiecewiseLinear integrate(const StepFunction& f);

/// Exact composition g(f(x)) for nondecreasing f. Throws std::invalid_argument
/// when f is not monotone.
PiecewiseLinear compose_monotone(const PiecewiseLinear& g, const PiecewiseLinear& f);

/// Exact pointwise minimum; crossing points become breakpoints. Throws on an
/// empty list.
PiecewiseLinear min_pointwise(const std::vector<PiecewiseLinear>& fs);
PiecewiseLinear min_pointwise(const PiecewiseLinear& f, const PiecewiseLinear& g);

PiecewiseLinear max_pointwise(const PiecewiseLinear& f, const PiecewiseLinear& g);

StepFunction sum(const std::vector<StepFunction>& fs);

}  // namespace flowtime
