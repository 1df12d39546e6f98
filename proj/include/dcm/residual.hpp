#pragma once

#include <Eigen/Dense>

#include "dcm/data.hpp"

namespace dcm {

/// Rank-one approximation Lambda Lambda^T of a set's correlation block.
struct FactorModel {
  Eigen::VectorXd loadings;       // one per member of A, in A's order
  double leading_eigenvalue = 0;  // lambda_1 of the |A| x |A| block
  double explained = 0;           // lambda_1 / |A|
};

struct Residualized {
  StandardizedCondition condition;
  VariableSet dropped;  // members whose residual vanished; column left as-is
};

/// Leading eigenpair of the |A| x |A| correlation block (only that block is
/// formed). loadings = sqrt(lambda_1) v_1, signed so their mean is >= 0 and
/// clamped to [-1, 1].
FactorModel estimate_loadings(const StandardizedCondition& cond, const VariableSet& A);

/// Regresses each member of A on the factor score f = X_A L / (L^T L),
/// keeps column_j - f L_j, then re-centers and re-normalizes it. Columns
/// outside A are copied unchanged. A member whose residual has numerically
/// zero norm is reported in `dropped`.
Residualized residualize(const StandardizedCondition& cond, const VariableSet& A,
                         const FactorModel& model);

}  // namespace dcm
