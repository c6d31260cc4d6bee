#include "treepack/probability.hpp"

#include <cmath>
#include <stdexcept>

namespace treepack {

namespace {

double clamp01(double x) { return x < 0.0 ? 0.0 : (x > 1.0 ? 1.0 : x); }

void check_bennett(const BennettParams& bp) {
  if (bp.count < 1 || !(bp.bound > 0.0) || bp.sigma2 < 0.0 || bp.t < 0.0) {
    throw std::invalid_argument("bennett_tail: need N>=1, M>0, sigma2>=0, t>=0");
  }
}

}  // namespace

double bennett_tail(const BennettParams& bp) {
  check_bennett(bp);
  if (bp.t == 0.0) return 1.0;
  const double denom = 2.0 * (static_cast<double>(bp.count) * bp.sigma2 + bp.bound * bp.t / 3.0);
  if (denom <= 0.0) return 0.0;
  return clamp01(std::exp(-bp.t * bp.t / denom));
}

double bennett_tail_raw(const BennettParams& bp) {
  check_bennett(bp);
  if (bp.t == 0.0) return 1.0;
  const double nsig = static_cast<double>(bp.count) * bp.sigma2;
  if (nsig <= 0.0) return 0.0;  // u -> infinity limit
  const double u = bp.bound * bp.t / nsig;
  const double exponent = (nsig / (bp.bound * bp.bound)) * ((1.0 + u) * std::log1p(u) - u);
  return clamp01(std::exp(-exponent));
}

double order_stat_moment(int d, int r, int k) {
  if (d < 1 || r < 1 || d > r) throw std::domain_error("order_stat_moment: need 1 <= d <= r");
  if (k < 1) throw std::domain_error("order_stat_moment: need k >= 1");
  double prod = 1.0;
  for (int j = 1; j <= k; ++j) {
    prod *= static_cast<double>(d + j - 1) / static_cast<double>(r + j);
  }
  return prod;
}

double Params::clock_drift() const { return 21.0 * p / (alpha * alpha * alpha * alpha); }

double Params::tau_max() const { return eps * p / (60.0 * std::log(static_cast<double>(n))); }

double Params::degree_cap() const { return 2.0 * n * p; }

AssumptionReport validate_params(const Params& raw) {
  if (raw.n < 3) throw std::invalid_argument("validate_params: need n >= 3");
  if (!(raw.alpha > 0.0 && raw.alpha < 1.0) || !(raw.eps > 0.0 && raw.eps < 1.0) ||
      !(raw.p > 0.0 && raw.p <= 1.0)) {
    throw std::invalid_argument("validate_params: alpha, eps in (0,1) and p in (0,1] required");
  }

  const double n = static_cast<double>(raw.n);
  const double logn = std::log(n);
  AssumptionReport rep;
  auto add = [&rep](const std::string& name, double lhs, double rhs, bool holds) {
    rep.conditions.push_back({name, lhs, rhs, holds});
  };

  const double p_lower = 150.0 * logn * logn / (raw.alpha * raw.eps * n);
  add("p_lower", p_lower, raw.p, p_lower <= raw.p);

  const double a4 = raw.alpha * raw.alpha * raw.alpha * raw.alpha;
  const double p_upper = raw.eps * a4 / 128.0;
  add("p_upper", raw.p, p_upper, raw.p <= p_upper);

  const double delta_cap =
      std::min(raw.alpha, raw.eps / std::log(1.0 / raw.alpha)) * raw.eps * n * raw.p / (1600.0 * logn);
  add("delta_cap", static_cast<double>(raw.delta), delta_cap, raw.delta <= delta_cap);

  const double count_cap = (1.0 - raw.eps) * n * raw.p / 2.0;
  add("count_cap", static_cast<double>(raw.count), count_cap, raw.count <= count_cap);

  const double drift = raw.clock_drift();
  add("exp_2drift", std::exp(2.0 * drift), 1.0 + raw.eps / 2.0,
      std::exp(2.0 * drift) <= 1.0 + raw.eps / 2.0);

  const double overlap_lower = 30.0 * logn / (raw.alpha * raw.alpha * n);
  add("overlap_precondition", overlap_lower, raw.p, overlap_lower <= raw.p);

  rep.feasible = true;
  for (const auto& c : rep.conditions) rep.feasible = rep.feasible && c.holds;
  rep.notes.push_back(
      "p_upper uses eps*alpha^4/128 (statement form); the restated form elsewhere uses 126");
  rep.notes.push_back("all logarithms are natural");
  rep.notes.push_back(
      "expansion sampling threshold 500 d log(n) / w is a proof artifact, not a runtime gate");
  return rep;
}

HarmonicGap harmonic_gap(int n, int m) {
  if (m < 1 || m >= n) throw std::domain_error("harmonic_gap: need 1 <= m < n");
  HarmonicGap g;
  for (int d = 1; d <= m - 1; ++d) g.value += 1.0 / static_cast<double>(n - d);
  g.bound = std::log(static_cast<double>(n - 1) / static_cast<double>(n - m));
  g.within = g.value <= g.bound + 1e-15;
  return g;
}

}  // namespace treepack
