#include "treepack/stats.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace treepack {

namespace {

// series expansion of P(a, x), valid for x < a + 1
double gamma_series_p(double a, double x) {
  const double gln = std::lgamma(a);
  double ap = a;
  double sum = 1.0 / a;
  double del = sum;
  for (int i = 0; i < 500; ++i) {
    ap += 1.0;
    del *= x / ap;
    sum += del;
    if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
  }
  return sum * std::exp(-x + a * std::log(x) - gln);
}

// continued fraction for Q(a, x), valid for x >= a + 1
double gamma_cf_q(double a, double x) {
  const double gln = std::lgamma(a);
  const double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= 500; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < 1e-15) break;
  }
  return std::exp(-x + a * std::log(x) - gln) * h;
}

}  // namespace

double gammq(double a, double x) {
  if (x < 0.0 || a <= 0.0) throw std::domain_error("gammq: need x >= 0, a > 0");
  if (x == 0.0) return 1.0;
  if (x < a + 1.0) return 1.0 - gamma_series_p(a, x);
  return gamma_cf_q(a, x);
}

double chi2_pvalue(double stat, int df) {
  if (df < 1) throw std::domain_error("chi2_pvalue: need df >= 1");
  if (stat <= 0.0) return 1.0;
  return gammq(0.5 * df, 0.5 * stat);
}

namespace {

// Kolmogorov tail: 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2)
double kolmogorov_tail(double lambda) {
  double sum = 0.0, sign = 1.0;
  for (int k = 1; k <= 101; ++k) {
    const double term = std::exp(-2.0 * k * k * lambda * lambda);
    sum += sign * term;
    sign = -sign;
    if (term < 1e-12) break;
  }
  return std::clamp(2.0 * sum, 0.0, 1.0);
}

}  // namespace

double ks_two_sample_pvalue(std::vector<double> a, std::vector<double> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  double d = 0.0;
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double x = std::min(a[i], b[j]);
    while (i < a.size() && a[i] <= x) ++i;
    while (j < b.size() && b[j] <= x) ++j;
    d = std::max(d, std::fabs(static_cast<double>(i) / na - static_cast<double>(j) / nb));
  }
  const double ne = std::sqrt(na * nb / (na + nb));
  return kolmogorov_tail((ne + 0.12 + 0.11 / ne) * d);
}

double ks_one_sample_pvalue(std::vector<double> xs, const std::function<double(double)>& cdf) {
  if (xs.empty()) throw std::invalid_argument("ks: empty sample");
  std::sort(xs.begin(), xs.end());
  const double n = static_cast<double>(xs.size());
  double d = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    const double f = cdf(xs[i]);
    d = std::max(d, std::fabs(static_cast<double>(i + 1) / n - f));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  const double sn = std::sqrt(n);
  return kolmogorov_tail((sn + 0.12 + 0.11 / sn) * d);
}

double chi2_statistic(const std::vector<double>& observed, const std::vector<double>& expected) {
  if (observed.size() != expected.size()) throw std::invalid_argument("chi2: size mismatch");
  double stat = 0.0;
  for (std::size_t i = 0; i < observed.size(); ++i) {
    if (expected[i] <= 0.0) {
      if (observed[i] != 0.0) throw std::invalid_argument("chi2: mass in zero-expectation cell");
      continue;
    }
    const double diff = observed[i] - expected[i];
    stat += diff * diff / expected[i];
  }
  return stat;
}

double chi2_homogeneity_pvalue(const std::vector<long>& counts_a,
                               const std::vector<long>& counts_b) {
  if (counts_a.size() != counts_b.size()) throw std::invalid_argument("chi2: size mismatch");
  double total_a = 0.0, total_b = 0.0;
  for (long c : counts_a) total_a += static_cast<double>(c);
  for (long c : counts_b) total_b += static_cast<double>(c);
  const double total = total_a + total_b;
  double stat = 0.0;
  int df = -1;
  for (std::size_t k = 0; k < counts_a.size(); ++k) {
    const double row = static_cast<double>(counts_a[k] + counts_b[k]);
    if (row == 0.0) continue;
    ++df;
    const double ea = row * total_a / total;
    const double eb = row * total_b / total;
    stat += (counts_a[k] - ea) * (counts_a[k] - ea) / ea;
    stat += (counts_b[k] - eb) * (counts_b[k] - eb) / eb;
  }
  if (df < 1) return 1.0;
  return chi2_pvalue(stat, df);
}

SampleMoments sample_moments(const std::vector<double>& xs) {
  SampleMoments m;
  m.n = static_cast<long>(xs.size());
  if (m.n == 0) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(m.n);
  if (m.n > 1) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.stderr_mean = std::sqrt(ss / static_cast<double>(m.n - 1)) /
                    std::sqrt(static_cast<double>(m.n));
  }
  return m;
}

}  // namespace treepack
