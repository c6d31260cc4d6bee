#pragma once

#include <string>
#include <vector>

namespace treepack {

/// Inputs of the Bennett-type tail bound for sums of N random variables that
/// are bounded by M with conditional mean <= mu and conditional second
/// moment <= sigma2; t is the deviation above N*mu.
struct BennettParams {
  long count = 1;      // N
  double bound = 1.0;  // M
  double mean = 0.0;   // mu
  double sigma2 = 0.0;
  double t = 0.0;
};

/// exp(-t^2 / (2 (N sigma^2 + M t / 3))), clamped to [0, 1].
double bennett_tail(const BennettParams& bp);

/// The sharper form exp(-(N sigma^2 / M^2) ((1+u) log(1+u) - u)) with
/// u = M t / (N sigma^2); always <= bennett_tail.
double bennett_tail_raw(const BennettParams& bp);

/// k-th moment of the d-th smallest of r independent uniforms:
/// prod_{j=1..k} (d+j-1)/(r+j). Throws std::domain_error unless 1<=d<=r.
double order_stat_moment(int d, int r, int k);

/// Packing parameters with the derived quantities recomputed on demand.
struct Params {
  int n = 0;
  double p = 0.0;
  double alpha = 0.0;
  double eps = 0.0;
  int delta = 0;  // max tree degree
  long count = 0; // number of trees N

  double clock_drift() const;  // delta_rate = 21 p / alpha^4
  double tau_max() const;      // eps p / (60 log n)
  double degree_cap() const;   // 2 n p
};

struct Condition {
  std::string name;
  double lhs = 0.0, rhs = 0.0;
  bool holds = false;
};

struct AssumptionReport {
  std::vector<Condition> conditions;
  bool feasible = false;  // conjunction of all conditions
  std::vector<std::string> notes;
};

/// Evaluates the feasibility inequalities for (n, p, alpha, eps, delta, N):
/// the p window, the degree and count caps, the exp(2*drift) sanity bound,
/// and the overlap-statistic precondition. Natural logarithms throughout.
/// Never throws on infeasibility; the report carries the verdicts.
AssumptionReport validate_params(const Params& raw);

struct HarmonicGap {
  double value = 0.0;  // H_{n-1} - H_{n-m}
  double bound = 0.0;  // log((n-1)/(n-m))
  bool within = false;
};

HarmonicGap harmonic_gap(int n, int m);

}  // namespace treepack
