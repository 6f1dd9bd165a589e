// SPDX-License-Identifier: Apache-2.0

#include "partflux/linalg.hpp"

#include <string>
#include <vector>
#include <Eigen/Cholesky>
#include <Eigen/QR>
#include <Eigen/SVD>
#include "partflux/error.hpp"

namespace partflux
{

namespace
{

ThinSvd SquareishSvd(const Eigen::MatrixXd &a)
{
  Eigen::BDCSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  Require(svd.info() == Eigen::Success, ErrorKind::Convergence, "SVD did not converge");
  return {svd.matrixU(), svd.singularValues(), svd.matrixV()};
}

}  // namespace

ThinSvd ComputeThinSvd(const Eigen::MatrixXd &a)
{
  Require(a.allFinite(), ErrorKind::InvalidArgument, "SVD input has non-finite entries");
  Require(a.rows() > 0 && a.cols() > 0, ErrorKind::InvalidArgument, "SVD input is empty");
  const Eigen::Index m = a.rows(), n = a.cols();
  if (n <= 2 * m)
  {
    return SquareishSvd(a);
  }
  // Snapshot matrices are short and very wide. Reduce with a QR factorization of A^T
  // first: A^T = Q R gives A = R^T Q^T, so with R^T = U S W^T we get V = Q W.
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a.transpose());
  const Eigen::MatrixXd r =
      qr.matrixQR().topRows(m).triangularView<Eigen::Upper>().toDenseMatrix();
  ThinSvd small = SquareishSvd(r.transpose());
  Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n, m);
  v.topRows(m) = small.v;
  v.applyOnTheLeft(qr.householderQ());
  return {std::move(small.u), std::move(small.sigma), std::move(v)};
}

double EnergyDeficit(std::span<const double> sigma, int k)
{
  double total = 0.0, head = 0.0;
  for (std::size_t i = 0; i < sigma.size(); i++)
  {
    const double s2 = sigma[i] * sigma[i];
    total += s2;
    if (static_cast<int>(i) < k)
    {
      head += s2;
    }
  }
  Require(total > 0.0, ErrorKind::InvalidArgument, "all singular values are zero");
  // Summing the tail directly avoids cancellation in 1 - head / total.
  double tail = 0.0;
  for (std::size_t i = static_cast<std::size_t>(k); i < sigma.size(); i++)
  {
    tail += sigma[i] * sigma[i];
  }
  return tail / total;
}

int SelectRank(std::span<const double> sigma, double eps)
{
  Require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument,
          "energy threshold must lie in (0, 1), got " + std::to_string(eps));
  Require(!sigma.empty(), ErrorKind::InvalidArgument, "no singular values");
  double total = 0.0;
  for (double s : sigma)
  {
    total += s * s;
  }
  Require(total > 0.0, ErrorKind::InvalidArgument, "all singular values are zero");
  // tail[k] = sum_{i >= k} sigma_i^2, accumulated from the smallest values up.
  const int n = static_cast<int>(sigma.size());
  std::vector<double> tail(n + 1, 0.0);
  for (int i = n - 1; i >= 0; i--)
  {
    tail[i] = tail[i + 1] + sigma[i] * sigma[i];
  }
  for (int k = 1; k <= n; k++)
  {
    if (tail[k] / total <= eps)
    {
      return k;
    }
  }
  return n;
}

SpdFactor::SpdFactor(const Eigen::MatrixXd &s)
{
  Require(s.rows() == s.cols() && s.rows() > 0, ErrorKind::InvalidArgument,
          "SPD factorization needs a nonempty square matrix");
  const double scale = s.cwiseAbs().maxCoeff();
  const double asym = (s - s.transpose()).cwiseAbs().maxCoeff();
  Require(asym <= 1.0e-12 * scale, ErrorKind::NotSpd, "matrix not SPD: not symmetric");
  Eigen::LLT<Eigen::MatrixXd> llt(s);
  Require(llt.info() == Eigen::Success, ErrorKind::NotSpd,
          "matrix not SPD: non-positive pivot");
  lower_ = llt.matrixL();
}

Eigen::VectorXd SpdFactor::Solve(const Eigen::VectorXd &rhs) const
{
  Eigen::VectorXd x = rhs;
  SolveInPlace(x);
  return x;
}

void SpdFactor::SolveInPlace(Eigen::VectorXd &x) const
{
  Require(x.size() == lower_.rows(), ErrorKind::InvalidArgument,
          "right-hand side size does not match the factor");
  lower_.triangularView<Eigen::Lower>().solveInPlace(x);
  lower_.transpose().triangularView<Eigen::Upper>().solveInPlace(x);
}

}  // namespace partflux
