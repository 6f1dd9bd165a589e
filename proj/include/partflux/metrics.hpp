// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_METRICS_HPP
#define PARTFLUX_METRICS_HPP

#include <Eigen/Dense>
#include "partflux/assembly.hpp"
#include "partflux/mesh.hpp"
#include "partflux/solvers.hpp"

namespace partflux
{

struct RelativeError
{
  double l2 = 0.0;  // E^0
  double h1 = 0.0;  // E^1
};

//
// Relative L2 and H1 errors of a partitioned solution against a benchmark, averaged over
// the two subdomains:
//
//   E^r = 1/2 sum_i |u_X - u_M|_{r,i} / |u_M|_{r,i}.
//
// Norms are quadratic forms of the nodal consistent mass and the kappa = 1 Laplacian, so
// the inputs are nodal vectors including Dirichlet values.
//
class ErrorNorm
{
public:
  ErrorNorm(const SubdomainMesh &mesh1, const SubdomainMesh &mesh2);

  RelativeError Relative(const Eigen::VectorXd &x1, const Eigen::VectorXd &x2,
                         const Eigen::VectorXd &m1, const Eigen::VectorXd &m2) const;

  // Squared L2 norm and squared H1 seminorm of a nodal vector on one side.
  double L2Squared(int side, const Eigen::VectorXd &u) const;
  double SemiH1Squared(int side, const Eigen::VectorXd &u) const;

private:
  SparseMatrix mass_[2], laplace_[2];
};

// Nodal values of every node of sub taken from a nodal vector on the full mesh.
Eigen::VectorXd RestrictNodes(const SubdomainMesh &full, const Eigen::VectorXd &nodal,
                              const SubdomainMesh &sub);

// Errors of a partitioned state against the monolithic run of the same problem, both at
// the final time of the monolithic run.
RelativeError CompareToMonolithic(const CoupledProblem &problem, const CoupledState &state,
                                  const MonolithicTrajectory &mono);

// Errors of a partitioned state against the exact solution interpolated at state.t.
RelativeError CompareToField(const CoupledProblem &problem, const CoupledState &state,
                             const SpaceTimeField &exact);

}  // namespace partflux

#endif  // PARTFLUX_METRICS_HPP
