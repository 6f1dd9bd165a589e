// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_ASSEMBLY_HPP
#define PARTFLUX_ASSEMBLY_HPP

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include "partflux/mesh.hpp"
#include "partflux/scenarios.hpp"

namespace partflux
{

using SparseMatrix = Eigen::SparseMatrix<double>;

enum class MassVariant
{
  Consistent,
  Lumped,
};

enum class InitialMethod
{
  Projection,
  Interpolation,
};

//
// Nodal matrices over all mesh nodes in DoF order, assembled with 2x2 Gauss quadrature
// per element. Rows index test functions, columns trial functions.
//
SparseMatrix AssembleNodalMass(const SubdomainMesh &mesh);

// Matrix of (kappa grad u - v u, grad w). The diffusion coefficient is taken per element
// from the scenario side the element centroid lies in.
SparseMatrix AssembleNodalStiffness(const SubdomainMesh &mesh, double kappa_left,
                                    double kappa_right, const VelocityField &velocity);

// Free-DoF blocks.
SparseMatrix AssembleMass(const SubdomainMesh &mesh, MassVariant variant);
SparseMatrix AssembleStiffness(const SubdomainMesh &mesh, double kappa,
                               const VelocityField &velocity);

// Interface mass matrix realizing <lambda, w>_gamma for the multiplier in the trace
// space of `lagrange_mesh`, restricted to the interface DoFs of `mesh`.
Eigen::MatrixXd AssembleConstraint(const SubdomainMesh &lagrange_mesh,
                                   const SubdomainMesh &mesh);

// Operators of the semi-discrete system M du/dt + K u = b(t) -/+ G^T lambda on the free
// DoFs of one mesh.
struct SubdomainOperators
{
  int side = 1;
  int num_free = 0;
  int num_interface = 0;
  SparseMatrix mass;            // consistent, free x free
  Eigen::VectorXd lumped_mass;  // row sums of the consistent free block
  SparseMatrix stiffness;       // free x free
  SparseMatrix stiffness_lift;  // free x Dirichlet
  SparseMatrix mass_lift;       // free x Dirichlet, consistent
  Eigen::MatrixXd constraint;   // interface x interface; empty on the full mesh
};

SubdomainOperators AssembleOperators(const SubdomainMesh &mesh, const Scenario &scenario);

// Nodal interpolant of the Dirichlet data (or of its time derivative) at time t.
Eigen::VectorXd DirichletValues(const SubdomainMesh &mesh, const SpaceTimeField &field,
                                double t);

// (f, w) for every free test function w.
Eigen::VectorXd AssembleSourceLoad(const SubdomainMesh &mesh, const SpaceTimeField &source,
                                   double t);

// b(t) = (f, w) - K_lift g(t) - M_lift dg/dt(t). The lift uses the consistent mass for
// both variants; lumping only replaces the free block.
Eigen::VectorXd AssembleLoad(const SubdomainMesh &mesh, const SubdomainOperators &ops,
                             const Scenario &scenario, double t);

// Initial free coefficients by interpolation or by L2 projection onto the space of
// functions that match the Dirichlet interpolant at t = 0.
Eigen::VectorXd SetInitial(const SubdomainMesh &mesh, const SubdomainOperators &ops,
                           const Scenario &scenario, InitialMethod method);

// Free coefficients padded with the Dirichlet interpolant at time t.
Eigen::VectorXd ExpandToNodes(const SubdomainMesh &mesh, const Eigen::VectorXd &free,
                              const Scenario &scenario, double t);

}  // namespace partflux

#endif  // PARTFLUX_ASSEMBLY_HPP
