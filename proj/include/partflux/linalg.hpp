// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_LINALG_HPP
#define PARTFLUX_LINALG_HPP

#include <span>
#include <Eigen/Dense>

namespace partflux
{

// A = U diag(sigma) V^T with orthonormal columns in U and V and sigma nonincreasing.
struct ThinSvd
{
  Eigen::MatrixXd u;
  Eigen::VectorXd sigma;
  Eigen::MatrixXd v;
};

ThinSvd ComputeThinSvd(const Eigen::MatrixXd &a);

// Smallest k >= 1 with 1 - sum_{i<=k} sigma_i^2 / sum_i sigma_i^2 <= eps.
int SelectRank(std::span<const double> sigma, double eps);

// Relative energy deficit 1 - E_k of the leading k singular values.
double EnergyDeficit(std::span<const double> sigma, int k);

// Lower Cholesky factor of a symmetric positive definite matrix.
class SpdFactor
{
public:
  explicit SpdFactor(const Eigen::MatrixXd &s);

  Eigen::VectorXd Solve(const Eigen::VectorXd &rhs) const;
  // In-place variant for allocation-free use in time loops.
  void SolveInPlace(Eigen::VectorXd &x) const;

  const Eigen::MatrixXd &lower() const { return lower_; }
  int size() const { return static_cast<int>(lower_.rows()); }

private:
  Eigen::MatrixXd lower_;
};

}  // namespace partflux

#endif  // PARTFLUX_LINALG_HPP
