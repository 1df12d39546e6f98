#pragma once

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dcm/data.hpp"

namespace fixtures {

inline dcm::DataMatrix to_data(Eigen::MatrixXd values) {
  dcm::DataMatrix d;
  d.values = std::move(values);
  for (Eigen::Index j = 0; j < d.values.cols(); ++j) d.variable_names.push_back("x" + std::to_string(j));
  return d;
}

inline Eigen::MatrixXd normal_matrix(Eigen::Index n, Eigen::Index p, unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N;
  Eigen::MatrixXd m(n, p);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < p; ++j) m(i, j) = N(rng);
  return m;
}

/// Columns [0, k) equicorrelated at rho, the rest independent.
inline Eigen::MatrixXd block_matrix(Eigen::Index n, Eigen::Index p, Eigen::Index k, double rho,
                                    unsigned seed) {
  std::mt19937 rng(seed);
  std::normal_distribution<double> N;
  Eigen::MatrixXd m(n, p);
  for (Eigen::Index i = 0; i < n; ++i) {
    const double z = N(rng);
    for (Eigen::Index j = 0; j < p; ++j) {
      const double e = N(rng);
      m(i, j) = j < k ? std::sqrt(rho) * z + std::sqrt(1 - rho) * e : e;
    }
  }
  return m;
}

inline dcm::StandardizedCondition std_normal(Eigen::Index n, Eigen::Index p, unsigned seed) {
  return dcm::standardize(to_data(normal_matrix(n, p, seed)));
}

inline dcm::StandardizedCondition std_block(Eigen::Index n, Eigen::Index p, Eigen::Index k,
                                            double rho, unsigned seed) {
  return dcm::standardize(to_data(block_matrix(n, p, k, rho, seed)));
}

/// Textbook two-pass Pearson correlation of raw columns.
inline double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  const double n = static_cast<double>(x.size());
  double mx = 0, my = 0;
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    mx += x[l];
    my += y[l];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0, syy = 0;
  for (Eigen::Index l = 0; l < x.size(); ++l) {
    sxy += (x[l] - mx) * (y[l] - my);
    sxx += (x[l] - mx) * (x[l] - mx);
    syy += (y[l] - my) * (y[l] - my);
  }
  return sxy / std::sqrt(sxx * syy);
}

inline dcm::VariableSet random_set(dcm::Index p, dcm::Index k, unsigned seed) {
  std::mt19937 rng(seed);
  std::vector<dcm::Index> all(p);
  for (dcm::Index i = 0; i < p; ++i) all[i] = i;
  std::shuffle(all.begin(), all.end(), rng);
  all.resize(k);
  return dcm::VariableSet(all);
}

}  // namespace fixtures
