#pragma once

#include <span>
#include <vector>

#include "dcm/data.hpp"

namespace dcm {

/// Per-variable test results for one update step against a fixed set.
struct TestReport {
  VariableSet set_tested;
  std::vector<double> delta;    // average differential correlation to the set
  std::vector<double> sigma0;   // estimated null standard deviation of delta
  std::vector<double> pvalues;  // one-sided, upper tail
};

struct StepResult {
  TestReport report;
  VariableSet selected;
  bool small_sample = false;  // min(n1, n2) below kSmallSampleWarning
};

/// Below this per-condition sample size the variance estimator is known to
/// be anticonservative.
inline constexpr Index kSmallSampleWarning = 30;

/// Lower bound applied to variance estimates and sigma0.
inline constexpr double kVarianceFloor = 1e-12;

/// (1/|A|) sum_{j in A} (r1_ij - r2_ij), evaluated through the two
/// centroids. The j = i term is kept and contributes exactly zero.
double delta_hat(const StandardizedCondition& cond1,
                 const StandardizedCondition& cond2, Index i,
                 const VariableSet& A);

/// Consistent estimate of Var(sqrt(n) * avg_corr(cond, i, A)).
///
/// With U, W the variance-one scaled column i and centroid, and
/// Y_l = (1/|A|) sum_j r_ij U_jl^2, the estimate is
///   (1/n) sum_l { r^2/4 U^4 - r W U^3 + (r Y/2 + W^2) U^2 - W Y U + Y^2/4 }
/// with r = avg_corr(cond, i, A). The summand equals (r U^2/2 - W U + Y/2)^2,
/// which is how it is evaluated. O(n |A|) time, O(n) extra space.
double tau_hat(const StandardizedCondition& cond, Index i, const VariableSet& A);

/// sqrt(tau1/n1 + tau2/n2), floored at kVarianceFloor.
double sigma0(double tau1, Index n1, double tau2, Index n2);

/// Upper tail of the standard normal, 1 - Phi(z), via erfc.
double normal_sf(double z);

/// 1 - Phi(delta / sigma0).
double p_value(double delta, double sigma0);

/// Benjamini-Yekutieli step-up selection. Finds the largest k with
/// p_(k) < k * alpha / (p * H_k), H_k = sum_{m<=k} 1/m, and returns every
/// index whose p-value is <= p_(k). Empty if no k qualifies.
VariableSet by_fdr_select(std::span<const double> pvalues, double alpha);

/// Tests every variable against A in both conditions and applies
/// by_fdr_select. The per-variable loop runs on the OpenMP pool; output does
/// not depend on the thread count.
StepResult test_step(const StandardizedCondition& cond1,
                     const StandardizedCondition& cond2, const VariableSet& A,
                     double alpha);

}  // namespace dcm
