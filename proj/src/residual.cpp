#include "dcm/residual.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "dcm/error.hpp"

namespace dcm {

FactorModel estimate_loadings(const StandardizedCondition& cond, const VariableSet& A) {
  if (A.size() < 2) throw ValidationError("factor model needs at least 2 variables");
  A.validate(cond.p());
  const auto k = static_cast<Eigen::Index>(A.size());
  Eigen::MatrixXd XA(static_cast<Eigen::Index>(cond.n()), k);
  for (Eigen::Index t = 0; t < k; ++t) {
    XA.col(t) = cond.matrix().col(static_cast<Eigen::Index>(A[static_cast<Index>(t)]));
  }
  const Eigen::MatrixXd block = XA.transpose() * XA;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(block);
  if (eig.info() != Eigen::Success) throw std::runtime_error("eigen decomposition failed");

  FactorModel model;
  model.leading_eigenvalue = std::max(eig.eigenvalues()[k - 1], 0.0);
  Eigen::VectorXd v = eig.eigenvectors().col(k - 1);
  if (v.sum() < 0.0) v = -v;
  model.loadings = (std::sqrt(model.leading_eigenvalue) * v).cwiseMax(-1.0).cwiseMin(1.0);
  model.explained = model.leading_eigenvalue / static_cast<double>(k);
  return model;
}

Residualized residualize(const StandardizedCondition& cond, const VariableSet& A,
                         const FactorModel& model) {
  A.validate(cond.p());
  if (static_cast<Index>(model.loadings.size()) != A.size()) {
    throw ValidationError("factor model does not match the variable set");
  }
  Residualized out{cond, {}};
  const double lsq = model.loadings.squaredNorm();
  if (A.empty() || lsq == 0.0) return out;

  const auto k = static_cast<Eigen::Index>(A.size());
  Eigen::VectorXd f = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(cond.n()));
  for (Eigen::Index t = 0; t < k; ++t) {
    f += model.loadings[t] * cond.matrix().col(static_cast<Eigen::Index>(A[static_cast<Index>(t)]));
  }
  f /= lsq;

  std::vector<Index> dropped;
  for (Eigen::Index t = 0; t < k; ++t) {
    const Index j = A[static_cast<Index>(t)];
    Eigen::VectorXd res = cond.matrix().col(static_cast<Eigen::Index>(j)) - model.loadings[t] * f;
    res.array() -= res.mean();
    const double norm = res.norm();
    if (norm < 1e-8) {
      dropped.push_back(j);
      continue;
    }
    out.condition.columns_.col(static_cast<Eigen::Index>(j)) = res / norm;
  }
  out.dropped = VariableSet(std::move(dropped));
  return out;
}

}  // namespace dcm
