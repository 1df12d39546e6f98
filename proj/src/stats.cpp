#include "dcm/stats.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dcm/error.hpp"

namespace dcm {

namespace {

void check_pair(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                const VariableSet& A) {
  if (cond1.p() != cond2.p()) {
    throw ValidationError("conditions have different variable counts");
  }
  if (A.empty()) throw ValidationError("test set is empty");
  A.validate(cond1.p());
}

Eigen::MatrixXd gather(const StandardizedCondition& cond, const VariableSet& A) {
  Eigen::MatrixXd out(static_cast<Eigen::Index>(cond.n()), static_cast<Eigen::Index>(A.size()));
  for (Index k = 0; k < A.size(); ++k) {
    out.col(static_cast<Eigen::Index>(k)) = cond.matrix().col(static_cast<Eigen::Index>(A[k]));
  }
  return out;
}

// n * sum_l (r x_l^2 / 2 - w_l x_l + y_l / 2)^2 in stored (unit-norm) units;
// identical to the variance-one form since U = sqrt(n) x, W = sqrt(n) w and
// Y = n y.
double tau_from_parts(const Eigen::Ref<const Eigen::VectorXd>& x,
                      const Eigen::Ref<const Eigen::VectorXd>& w,
                      const Eigen::Ref<const Eigen::VectorXd>& y, double r) {
  const double n = static_cast<double>(x.size());
  const double s =
      ((0.5 * r) * x.array().square() - w.array() * x.array() + 0.5 * y.array())
          .square()
          .sum();
  return std::max(n * s, kVarianceFloor);
}

// Average correlation to A and tau_hat for every variable of one condition.
void condition_statistics(const StandardizedCondition& cond, const VariableSet& A,
                          std::vector<double>& ravg, std::vector<double>& tau) {
  const auto p = static_cast<Eigen::Index>(cond.p());
  const auto k = static_cast<Eigen::Index>(A.size());
  const Eigen::MatrixXd XA = gather(cond, A);
  const Eigen::MatrixXd Q = XA.array().square().matrix();
  const Eigen::VectorXd w = XA.rowwise().mean();
  const auto& X = cond.matrix();

  // Bounds the chunk x |A| correlation block to about 8 MB.
  const Eigen::Index chunk = std::clamp<Eigen::Index>((Eigen::Index{1} << 20) / std::max<Eigen::Index>(k, 1), 16, 256);
  const Eigen::Index nchunks = (p + chunk - 1) / chunk;
  ravg.assign(static_cast<std::size_t>(p), 0.0);
  tau.assign(static_cast<std::size_t>(p), 0.0);

#pragma omp parallel for schedule(static)
  for (Eigen::Index c = 0; c < nchunks; ++c) {
    const Eigen::Index begin = c * chunk;
    const Eigen::Index m = std::min(chunk, p - begin);
    const Eigen::MatrixXd R = X.middleCols(begin, m).transpose() * XA;  // m x |A|
    const Eigen::MatrixXd Y = (Q * R.transpose()) / static_cast<double>(k);  // n x m
    for (Eigen::Index t = 0; t < m; ++t) {
      const double r = R.row(t).mean();
      const auto idx = static_cast<std::size_t>(begin + t);
      ravg[idx] = r;
      tau[idx] = tau_from_parts(X.col(begin + t), w, Y.col(t), r);
    }
  }
}

}  // namespace

double delta_hat(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                 Index i, const VariableSet& A) {
  check_pair(cond1, cond2, A);
  if (i >= cond1.p()) throw ValidationError("variable index out of range");
  const auto col = static_cast<Eigen::Index>(i);
  return centroid(cond1, A).dot(cond1.matrix().col(col)) -
         centroid(cond2, A).dot(cond2.matrix().col(col));
}

double tau_hat(const StandardizedCondition& cond, Index i, const VariableSet& A) {
  if (A.empty()) throw ValidationError("test set is empty");
  A.validate(cond.p());
  if (i >= cond.p()) throw ValidationError("variable index out of range");
  const auto x = cond.matrix().col(static_cast<Eigen::Index>(i));
  const Eigen::VectorXd w = centroid(cond, A);
  Eigen::VectorXd y = Eigen::VectorXd::Zero(x.size());
  double r = 0.0;
  for (Index j : A) {
    const auto xj = cond.matrix().col(static_cast<Eigen::Index>(j));
    const double rij = x.dot(xj);
    r += rij;
    y.array() += rij * xj.array().square();
  }
  r /= static_cast<double>(A.size());
  y /= static_cast<double>(A.size());
  return tau_from_parts(x, w, y, r);
}

double sigma0(double tau1, Index n1, double tau2, Index n2) {
  const double v = tau1 / static_cast<double>(n1) + tau2 / static_cast<double>(n2);
  return std::max(std::sqrt(std::max(v, 0.0)), kVarianceFloor);
}

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double p_value(double delta, double sigma0) { return normal_sf(delta / sigma0); }

VariableSet by_fdr_select(std::span<const double> pvalues, double alpha) {
  const std::size_t p = pvalues.size();
  if (p == 0) return {};
  std::vector<Index> order(p);
  std::iota(order.begin(), order.end(), Index{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](Index a, Index b) { return pvalues[a] < pvalues[b]; });

  double harmonic = 0.0;
  std::size_t k_star = 0;
  for (std::size_t k = 1; k <= p; ++k) {
    harmonic += 1.0 / static_cast<double>(k);
    const double threshold = (static_cast<double>(k) * alpha / static_cast<double>(p)) / harmonic;
    if (pvalues[order[k - 1]] < threshold) k_star = k;
  }
  if (k_star == 0) return {};

  const double cutoff = pvalues[order[k_star - 1]];
  std::vector<Index> selected;
  for (Index i = 0; i < p; ++i) {
    if (pvalues[i] <= cutoff) selected.push_back(i);
  }
  return VariableSet(std::move(selected));
}

StepResult test_step(const StandardizedCondition& cond1, const StandardizedCondition& cond2,
                     const VariableSet& A, double alpha) {
  check_pair(cond1, cond2, A);
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("alpha must lie in (0, 1)");

  std::vector<double> r1, tau1, r2, tau2;
  condition_statistics(cond1, A, r1, tau1);
  condition_statistics(cond2, A, r2, tau2);

  StepResult out;
  out.small_sample = std::min(cond1.n(), cond2.n()) < kSmallSampleWarning;
  TestReport& rep = out.report;
  const std::size_t p = cond1.p();
  rep.set_tested = A;
  rep.delta.resize(p);
  rep.sigma0.resize(p);
  rep.pvalues.resize(p);
  for (std::size_t i = 0; i < p; ++i) {
    rep.delta[i] = r1[i] - r2[i];
    rep.sigma0[i] = sigma0(tau1[i], cond1.n(), tau2[i], cond2.n());
    rep.pvalues[i] = p_value(rep.delta[i], rep.sigma0[i]);
  }
  out.selected = by_fdr_select(rep.pvalues, alpha);
  return out;
}

}  // namespace dcm
