#include "flowtime/piecewise.hpp"

#include <algorithm>
#include <stdexcept>

namespace flowtime {

namespace {

void require_strictly_increasing(const std::vector<Rational>& xs) {
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (!(xs[i - 1] < xs[i])) throw std::invalid_argument("breakpoints must be strictly increasing");
  }
}

// Index of the last breakpoint <= x, or npos when x precedes all of them.
std::size_t piece_index(const std::vector<Rational>& xs, const Rational& x) {
  auto it = std::upper_bound(xs.begin(), xs.end(), x);
  if (it == xs.begin()) return static_cast<std::size_t>(-1);
  return static_cast<std::size_t>(it - xs.begin()) - 1;
}

}  // namespace

// ---------------------------------------------------------------- StepFunction

StepFunction::StepFunction(Rational value_before, std::vector<Rational> breakpoints,
                           std::vector<Rational> values)
    : value_before_(std::move(value_before)) {
  if (breakpoints.size() != values.size()) {
    throw std::invalid_argument("step function needs one value per breakpoint");
  }
  require_strictly_increasing(breakpoints);
  // Merge adjacent equal values into canonical form.
  const Rational* last = &value_before_;
  for (std::size_t i = 0; i < breakpoints.size(); ++i) {
    if (values[i] == *last) continue;
    breakpoints_.push_back(std::move(breakpoints[i]));
    values_.push_back(std::move(values[i]));
    last = &values_.back();
  }
}

Rational StepFunction::operator()(const Rational& x) const {
  const std::size_t i = piece_index(breakpoints_, x);
  if (i == static_cast<std::size_t>(-1)) return value_before_;
  return values_[i];
}

bool StepFunction::nonnegative() const {
  if (value_before_ < 0) return false;
  for (const auto& v : values_) {
    if (v < 0) return false;
  }
  return true;
}

bool StepFunction::vanishes_before(const Rational& x) const {
  if (value_before_ != 0) return false;
  for (std::size_t i = 0; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i] < x && values_[i] != 0) return false;
  }
  return true;
}

StepFunction StepFunction::truncated_after(const Rational& from) const {
  std::vector<Rational> bps, vals;
  for (std::size_t i = 0; i < breakpoints_.size() && breakpoints_[i] < from; ++i) {
    bps.push_back(breakpoints_[i]);
    vals.push_back(values_[i]);
  }
  bps.push_back(from);
  vals.push_back(Rational(0));
  return StepFunction(value_before_, std::move(bps), std::move(vals));
}

StepFunction StepFunction::operator+(const StepFunction& other) const {
  std::vector<Rational> bps;
  bps.reserve(breakpoints_.size() + other.breakpoints_.size());
  std::merge(breakpoints_.begin(), breakpoints_.end(), other.breakpoints_.begin(),
             other.breakpoints_.end(), std::back_inserter(bps));
  bps.erase(std::unique(bps.begin(), bps.end()), bps.end());
  std::vector<Rational> vals;
  vals.reserve(bps.size());
  for (const auto& b : bps) vals.push_back((*this)(b) + other(b));
  return StepFunction(value_before_ + other.value_before_, std::move(bps), std::move(vals));
}

StepFunction StepFunction::operator*(const Rational& scale) const {
  std::vector<Rational> vals;
  vals.reserve(values_.size());
  for (const auto& v : values_) vals.push_back(v * scale);
  return StepFunction(value_before_ * scale, breakpoints_, std::move(vals));
}

StepFunction sum(const std::vector<StepFunction>& fs) {
  StepFunction acc;
  for (const auto& f : fs) acc = acc + f;
  return acc;
}

// ----------------------------------------------------------------- StepBuilder

void StepBuilder::append(const Rational& from, const Rational& to, const Rational& value) {
  if (closed_) throw std::logic_error("step builder already closed");
  if (to < from) throw std::logic_error("step piece with negative length");
  if (to == from) return;
  if (frontier_ && from != *frontier_) throw std::logic_error("step pieces must be contiguous");
  if (!starts_.empty() && values_.back() == value) {
    frontier_ = to;
    return;
  }
  starts_.push_back(from);
  values_.push_back(value);
  frontier_ = to;
}

void StepBuilder::append_tail(const Rational& from, const Rational& value) {
  if (closed_) throw std::logic_error("step builder already closed");
  if (frontier_ && from != *frontier_) throw std::logic_error("step pieces must be contiguous");
  if (starts_.empty() || values_.back() != value) {
    starts_.push_back(from);
    values_.push_back(value);
  }
  closed_ = true;
}

StepFunction StepBuilder::build() const {
  return StepFunction(Rational(0), starts_, values_);
}

// ------------------------------------------------------------- PiecewiseLinear

PiecewiseLinear::PiecewiseLinear(std::vector<Rational> xs, std::vector<Rational> ys,
                                 Rational slope_before, Rational slope_after)
    : xs_(std::move(xs)),
      ys_(std::move(ys)),
      slope_before_(std::move(slope_before)),
      slope_after_(std::move(slope_after)) {
  if (xs_.empty()) throw std::invalid_argument("piecewise-linear function needs an anchor point");
  if (xs_.size() != ys_.size()) {
    throw std::invalid_argument("piecewise-linear function needs one value per breakpoint");
  }
  require_strictly_increasing(xs_);
  canonicalize();
}

void PiecewiseLinear::canonicalize() {
  // Drop interior breakpoints where the slope does not change.
  if (xs_.size() > 2) {
    std::vector<Rational> xs{xs_.front()}, ys{ys_.front()};
    for (std::size_t i = 1; i + 1 < xs_.size(); ++i) {
      const Rational left = (ys_[i] - ys[ys.size() - 1]) / (xs_[i] - xs[xs.size() - 1]);
      const Rational right = (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
      if (left != right) {
        xs.push_back(xs_[i]);
        ys.push_back(ys_[i]);
      }
    }
    xs.push_back(xs_.back());
    ys.push_back(ys_.back());
    xs_ = std::move(xs);
    ys_ = std::move(ys);
  }
  // Trim boundary anchors that are not kinks.
  while (xs_.size() >= 2 && slope_before_ == (ys_[1] - ys_[0]) / (xs_[1] - xs_[0])) {
    xs_.erase(xs_.begin());
    ys_.erase(ys_.begin());
  }
  const auto n = [&] { return xs_.size(); };
  while (n() >= 2 && slope_after_ == (ys_[n() - 1] - ys_[n() - 2]) / (xs_[n() - 1] - xs_[n() - 2])) {
    xs_.pop_back();
    ys_.pop_back();
  }
  // A globally affine function is anchored at 0.
  if (xs_.size() == 1 && slope_before_ == slope_after_ && xs_[0] != 0) {
    ys_[0] = ys_[0] - slope_before_ * xs_[0];
    xs_[0] = 0;
  }
}

PiecewiseLinear PiecewiseLinear::constant(const Rational& c) {
  return PiecewiseLinear({Rational(0)}, {c}, Rational(0), Rational(0));
}

PiecewiseLinear PiecewiseLinear::affine(const Rational& slope, const Rational& intercept) {
  return PiecewiseLinear({Rational(0)}, {intercept}, slope, slope);
}

Rational PiecewiseLinear::operator()(const Rational& x) const {
  const std::size_t i = piece_index(xs_, x);
  if (i == static_cast<std::size_t>(-1)) return ys_.front() + slope_before_ * (x - xs_.front());
  if (i + 1 == xs_.size()) return ys_.back() + slope_after_ * (x - xs_.back());
  return ys_[i] + segment_slope(i) * (x - xs_[i]);
}

Rational PiecewiseLinear::segment_slope(std::size_t i) const {
  return (ys_[i + 1] - ys_[i]) / (xs_[i + 1] - xs_[i]);
}

Rational PiecewiseLinear::slope_right_of(const Rational& x) const {
  const std::size_t i = piece_index(xs_, x);
  if (i == static_cast<std::size_t>(-1)) return slope_before_;
  if (i + 1 == xs_.size()) return slope_after_;
  return segment_slope(i);
}

bool PiecewiseLinear::nondecreasing() const {
  if (slope_before_ < 0 || slope_after_ < 0) return false;
  for (std::size_t i = 1; i < ys_.size(); ++i) {
    if (ys_[i] < ys_[i - 1]) return false;
  }
  return true;
}

bool PiecewiseLinear::nonnegative() const {
  if (slope_before_ > 0 || slope_after_ < 0) return false;
  for (const auto& y : ys_) {
    if (y < 0) return false;
  }
  return true;
}

PiecewiseLinear PiecewiseLinear::operator+(const PiecewiseLinear& other) const {
  std::vector<Rational> xs;
  xs.reserve(xs_.size() + other.xs_.size());
  std::merge(xs_.begin(), xs_.end(), other.xs_.begin(), other.xs_.end(), std::back_inserter(xs));
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::vector<Rational> ys;
  ys.reserve(xs.size());
  for (const auto& x : xs) ys.push_back((*this)(x) + other(x));
  return PiecewiseLinear(std::move(xs), std::move(ys), slope_before_ + other.slope_before_,
                         slope_after_ + other.slope_after_);
}

PiecewiseLinear PiecewiseLinear::operator-() const {
  std::vector<Rational> ys;
  ys.reserve(ys_.size());
  for (const auto& y : ys_) ys.push_back(-y);
  return PiecewiseLinear(xs_, std::move(ys), -slope_before_, -slope_after_);
}

PiecewiseLinear PiecewiseLinear::operator-(const PiecewiseLinear& other) const {
  return *this + (-other);
}

PiecewiseLinear PiecewiseLinear::operator*(const Rational& scale) const {
  std::vector<Rational> ys;
  ys.reserve(ys_.size());
  for (const auto& y : ys_) ys.push_back(y * scale);
  return PiecewiseLinear(xs_, std::move(ys), slope_before_ * scale, slope_after_ * scale);
}

PiecewiseLinear PiecewiseLinear::operator+(const Rational& shift) const {
  std::vector<Rational> ys;
  ys.reserve(ys_.size());
  for (const auto& y : ys_) ys.push_back(y + shift);
  return PiecewiseLinear(xs_, std::move(ys), slope_before_, slope_after_);
}

PiecewiseLinear PiecewiseLinear::shifted_arg(const Rational& delta) const {
  std::vector<Rational> xs;
  xs.reserve(xs_.size());
  for (const auto& x : xs_) xs.push_back(x - delta);
  return PiecewiseLinear(std::move(xs), ys_, slope_before_, slope_after_);
}

StepFunction PiecewiseLinear::derivative() const {
  std::vector<Rational> vals;
  vals.reserve(xs_.size());
  for (std::size_t i = 0; i + 1 < xs_.size(); ++i) vals.push_back(segment_slope(i));
  vals.push_back(slope_after_);
  return StepFunction(slope_before_, xs_, std::move(vals));
}

// ------------------------------------------------------------------ operations

PiecewiseLinear integrate(const StepFunction& f) {
  const auto& bps = f.breakpoints();
  if (bps.empty()) return PiecewiseLinear::affine(f.value_before(), Rational(0));
  std::vector<Rational> ys(bps.size());
  ys[0] = 0;
  for (std::size_t i = 1; i < bps.size(); ++i) {
    ys[i] = ys[i - 1] + f.values()[i - 1] * (bps[i] - bps[i - 1]);
  }
  PiecewiseLinear raw(bps, std::move(ys), f.value_before(), f.values().back());
  return raw + (-raw(Rational(0)));
}

PiecewiseLinear compose_monotone(const PiecewiseLinear& g, const PiecewiseLinear& f) {
  if (!f.nondecreasing()) {
    throw std::invalid_argument("compose_monotone: inner function must be nondecreasing");
  }
  std::vector<Rational> candidates = f.xs();
  const auto add_preimages_in = [&](const Rational& anchor_x, const Rational& anchor_y,
                                    const Rational& slope, const Rational* lo, const Rational* hi) {
    // Preimages of g's breakpoints falling strictly inside (lo, hi) on a
    // segment of f with positive slope through (anchor_x, anchor_y).
    if (slope == 0) return;
    for (const auto& c : g.xs()) {
      if (lo && !(*lo < c)) continue;
      if (hi && !(c < *hi)) continue;
      candidates.push_back(anchor_x + (c - anchor_y) / slope);
    }
  };
  const auto& xs = f.xs();
  const auto& ys = f.ys();
  {
    const Rational y0 = ys.front();
    add_preimages_in(xs.front(), y0, f.slope_before(), nullptr, &y0);
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    add_preimages_in(xs[i], ys[i], f.segment_slope(i), &ys[i], &ys[i + 1]);
  }
  {
    const Rational yl = ys.back();
    add_preimages_in(xs.back(), yl, f.slope_after(), &yl, nullptr);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<Rational> out_ys;
  out_ys.reserve(candidates.size());
  for (const auto& x : candidates) out_ys.push_back(g(f(x)));
  const Rational sb = f.slope_before() == 0 ? Rational(0) : g.slope_before() * f.slope_before();
  const Rational sa = f.slope_after() == 0 ? Rational(0) : g.slope_after() * f.slope_after();
  return PiecewiseLinear(std::move(candidates), std::move(out_ys), sb, sa);
}

PiecewiseLinear min_pointwise(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  const PiecewiseLinear diff = f - g;
  std::vector<Rational> candidates;
  candidates.reserve(f.xs().size() + g.xs().size() + diff.xs().size());
  candidates.insert(candidates.end(), f.xs().begin(), f.xs().end());
  candidates.insert(candidates.end(), g.xs().begin(), g.xs().end());
  // Crossing points: roots of the difference inside each affine region.
  const auto& xs = diff.xs();
  const auto& ys = diff.ys();
  if (diff.slope_before() != 0) {
    const Rational root = xs.front() - ys.front() / diff.slope_before();
    if (root < xs.front()) candidates.push_back(root);
  }
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    if ((ys[i] < 0 && ys[i + 1] > 0) || (ys[i] > 0 && ys[i + 1] < 0)) {
      candidates.push_back(xs[i] + (xs[i + 1] - xs[i]) * (-ys[i]) / (ys[i + 1] - ys[i]));
    }
  }
  if (diff.slope_after() != 0) {
    const Rational root = xs.back() - ys.back() / diff.slope_after();
    if (root > xs.back()) candidates.push_back(root);
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
  std::vector<Rational> out_ys;
  out_ys.reserve(candidates.size());
  for (const auto& x : candidates) out_ys.push_back(std::min(f(x), g(x)));
  const Rational sb = std::max(f.slope_before(), g.slope_before());
  const Rational sa = std::min(f.slope_after(), g.slope_after());
  return PiecewiseLinear(std::move(candidates), std::move(out_ys), sb, sa);
}

PiecewiseLinear min_pointwise(const std::vector<PiecewiseLinear>& fs) {
  if (fs.empty()) throw std::invalid_argument("min_pointwise: empty list");
  PiecewiseLinear acc = fs.front();
  for (std::size_t i = 1; i < fs.size(); ++i) acc = min_pointwise(acc, fs[i]);
  return acc;
}

PiecewiseLinear max_pointwise(const PiecewiseLinear& f, const PiecewiseLinear& g) {
  return -min_pointwise(-f, -g);
}

}  // namespace flowtime
