#pragma once

#include <utility>
#include <vector>

#include "netd/rational.hpp"

namespace netd {

// Nondecreasing continuous piecewise-linear delay curve. The first
// breakpoint is (release, 0); beyond the last breakpoint the curve grows
// with final_slope, which must be positive so every threshold is eventually
// reached. Values before the release are zero.
class DelayFunction {
 public:
  DelayFunction() = default;
  DelayFunction(std::vector<std::pair<Rational, Rational>> breakpoints, Rational final_slope);

  // Straight line of the given slope starting at (release, 0).
  static DelayFunction linear(const Rational& release, const Rational& slope);

  const std::vector<std::pair<Rational, Rational>>& breakpoints() const { return breakpoints_; }
  const Rational& final_slope() const { return final_slope_; }
  const Rational& release() const { return breakpoints_.front().first; }

  Rational value(const Rational& t) const;

  // Earliest t with value(t) >= y (y >= 0). The release for y == 0.
  Rational first_time_reaching(const Rational& y) const;

 private:
  std::vector<std::pair<Rational, Rational>> breakpoints_;
  Rational final_slope_;
};

// Sum of clamped terms max(0, d_i(t) - c_i). This is the shape of both the
// residual-delay aggregate that triggers services and the penalty aggregate
// marched by the forwarding loop; it is nondecreasing and piecewise linear,
// so thresholds can be hit exactly by walking segment endpoints.
class ClampedSum {
 public:
  void add(const DelayFunction& fn, Rational offset);
  bool empty() const { return terms_.empty(); }

  Rational value(const Rational& t) const;

  // Earliest t >= from with value(t) >= threshold. Requires a positive
  // aggregate slope eventually, which the final_slope invariant provides.
  Rational earliest_reach(const Rational& threshold, const Rational& from) const;

 private:
  struct Term {
    const DelayFunction* fn;
    Rational offset;
  };
  std::vector<Term> terms_;
};

}  // namespace netd
