#include "netd/delay_function.hpp"

#include <algorithm>

#include "netd/errors.hpp"

namespace netd {

DelayFunction::DelayFunction(std::vector<std::pair<Rational, Rational>> breakpoints,
                             Rational final_slope)
    : breakpoints_(std::move(breakpoints)), final_slope_(std::move(final_slope)) {
  if (breakpoints_.empty()) throw input_error("delay curve needs at least one breakpoint");
  if (breakpoints_.front().second != 0)
    throw input_error("delay curve must start at value zero");
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i].first <= breakpoints_[i - 1].first)
      throw input_error("delay breakpoints must strictly increase in time");
    if (breakpoints_[i].second < breakpoints_[i - 1].second)
      throw input_error("delay curve must be nondecreasing");
  }
  if (final_slope_ <= 0) throw input_error("delay curve needs a positive final slope");
}

DelayFunction DelayFunction::linear(const Rational& release, const Rational& slope) {
  return DelayFunction({{release, Rational(0)}}, slope);
}

Rational DelayFunction::value(const Rational& t) const {
  if (t <= breakpoints_.front().first) return Rational(0);
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (t <= breakpoints_[i].first) {
      const auto& [t0, v0] = breakpoints_[i - 1];
      const auto& [t1, v1] = breakpoints_[i];
      return v0 + (v1 - v0) * (t - t0) / (t1 - t0);
    }
  }
  const auto& [tl, vl] = breakpoints_.back();
  return vl + final_slope_ * (t - tl);
}

Rational DelayFunction::first_time_reaching(const Rational& y) const {
  if (y < 0) throw input_error("delay values are nonnegative");
  if (y == 0) return release();
  for (std::size_t i = 1; i < breakpoints_.size(); ++i) {
    if (breakpoints_[i].second >= y) {
      const auto& [t0, v0] = breakpoints_[i - 1];
      const auto& [t1, v1] = breakpoints_[i];
      // v1 > v0 here: the previous breakpoint is below y, this one is not
      return t0 + (y - v0) * (t1 - t0) / (v1 - v0);
    }
  }
  const auto& [tl, vl] = breakpoints_.back();
  return tl + (y - vl) / final_slope_;
}

void ClampedSum::add(const DelayFunction& fn, Rational offset) {
  terms_.push_back({&fn, std::move(offset)});
}

Rational ClampedSum::value(const Rational& t) const {
  Rational total(0);
  for (const Term& term : terms_) {
    Rational v = term.fn->value(t) - term.offset;
    if (v > 0) total += v;
  }
  return total;
}

Rational ClampedSum::earliest_reach(const Rational& threshold, const Rational& from) const {
  if (value(from) >= threshold) return from;
  if (terms_.empty()) throw internal_error("threshold unreachable: empty aggregate");
  // Candidate kinks: curve breakpoints and the clamp activation times.
  // Between consecutive candidates the aggregate is linear.
  std::vector<Rational> kinks;
  for (const Term& term : terms_) {
    for (const auto& [t, v] : term.fn->breakpoints())
      if (t > from) kinks.push_back(t);
    if (term.offset > 0) {
      Rational cross = term.fn->first_time_reaching(term.offset);
      if (cross > from) kinks.push_back(cross);
    }
  }
  std::sort(kinks.begin(), kinks.end());
  kinks.erase(std::unique(kinks.begin(), kinks.end()), kinks.end());

  Rational prev_t = from;
  Rational prev_v = value(from);
  for (const Rational& t : kinks) {
    Rational v = value(t);
    if (v >= threshold)
      return prev_t + (threshold - prev_v) * (t - prev_t) / (v - prev_v);
    prev_t = t;
    prev_v = v;
  }
  // Past every kink the aggregate is a single line with positive slope.
  Rational probe = prev_t + 1;
  Rational slope = value(probe) - prev_v;
  if (slope <= 0) throw internal_error("aggregate delay stopped growing");
  return prev_t + (threshold - prev_v) / slope;
}

}  // namespace netd
