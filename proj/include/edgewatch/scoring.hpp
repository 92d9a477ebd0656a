#pragma once

#include <cstdint>

namespace edgewatch {

// Chi-squared goodness-of-fit of the live-tick count `a` against the mean
// level implied by the running total `s` over `t` ticks:
//   (a - s/t)^2 * t^2 / (s (t - 1)).
// Defined as 0 when t <= 1 or s <= 0.
double midas_score(double a, double s, std::uint64_t t) noexcept;

// Filtering variant where `s` excludes the live tick:
//   (a + s - a t)^2 / (s (t - 1)).
// Same conventions at t <= 1 and s <= 0.
double midasf_score(double a, double s, std::uint64_t t) noexcept;

// midas_score evaluated at a - nu * tick_mass, which absorbs the sketch's
// additive overestimate. Not clamped at zero.
double adjusted_statistic(double a, double s, std::uint64_t t, double nu,
                          double tick_mass) noexcept;

// Standard normal quantile (Wichura AS241, relative error ~1e-16).
double normal_quantile(double p);

// Quantile of the chi-squared distribution with one degree of freedom.
// Requires 0 <= p < 1.
double chi2_quantile_1dof(double p);

// False-positive budget `eps` and sketch error `nu` for the binary decision;
// the flag threshold is the chi2(1) quantile at 1 - eps/2.
class GuaranteeParams {
 public:
  GuaranteeParams(double eps, double nu);

  double eps() const noexcept { return eps_; }
  double nu() const noexcept { return nu_; }
  double threshold() const noexcept { return threshold_; }

 private:
  double eps_;
  double nu_;
  double threshold_;
};

// True when the adjusted statistic exceeds the guarantee threshold.
inline bool decide(double x_tilde, const GuaranteeParams& g) noexcept {
  return x_tilde > g.threshold();
}

}  // namespace edgewatch
