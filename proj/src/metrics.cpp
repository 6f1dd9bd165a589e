// SPDX-License-Identifier: Apache-2.0

#include "partflux/metrics.hpp"

#include <cmath>
#include "partflux/error.hpp"

namespace partflux
{

ErrorNorm::ErrorNorm(const SubdomainMesh &mesh1, const SubdomainMesh &mesh2)
{
  const SubdomainMesh *meshes[2] = {&mesh1, &mesh2};
  const VelocityField still = [](double, double) { return std::array<double, 2>{0.0, 0.0}; };
  for (int i = 0; i < 2; i++)
  {
    mass_[i] = AssembleNodalMass(*meshes[i]);
    laplace_[i] = AssembleNodalStiffness(*meshes[i], 1.0, 1.0, still);
  }
}

double ErrorNorm::L2Squared(int side, const Eigen::VectorXd &u) const
{
  const SparseMatrix &m = mass_[side - 1];
  Require(u.size() == m.rows(), ErrorKind::LayoutMismatch,
          "nodal vector does not match the mesh");
  return u.dot(m * u);
}

double ErrorNorm::SemiH1Squared(int side, const Eigen::VectorXd &u) const
{
  const SparseMatrix &k = laplace_[side - 1];
  Require(u.size() == k.rows(), ErrorKind::LayoutMismatch,
          "nodal vector does not match the mesh");
  // Clamp round-off below zero for (nearly) constant fields.
  return std::max(0.0, u.dot(k * u));
}

RelativeError ErrorNorm::Relative(const Eigen::VectorXd &x1, const Eigen::VectorXd &x2,
                                  const Eigen::VectorXd &m1, const Eigen::VectorXd &m2) const
{
  const Eigen::VectorXd *xs[2] = {&x1, &x2};
  const Eigen::VectorXd *ms[2] = {&m1, &m2};
  RelativeError err;
  for (int i = 0; i < 2; i++)
  {
    const int side = i + 1;
    const Eigen::VectorXd d = *xs[i] - *ms[i];
    const double ref0 = L2Squared(side, *ms[i]);
    const double ref1 = ref0 + SemiH1Squared(side, *ms[i]);
    Require(ref0 > 0.0, ErrorKind::InvalidArgument,
            "benchmark solution has zero norm on subdomain " + std::to_string(side));
    const double d0 = L2Squared(side, d);
    err.l2 += 0.5 * std::sqrt(d0 / ref0);
    err.h1 += 0.5 * std::sqrt((d0 + SemiH1Squared(side, d)) / ref1);
  }
  return err;
}

Eigen::VectorXd RestrictNodes(const SubdomainMesh &full, const Eigen::VectorXd &nodal,
                              const SubdomainMesh &sub)
{
  Require(nodal.size() == full.NumNodes(), ErrorKind::LayoutMismatch,
          "nodal vector does not match the full mesh");
  Eigen::VectorXd out(sub.NumNodes());
  for (int r = 0; r < sub.NumNodes(); r++)
  {
    const Node &p = sub.node(r);
    out(r) = nodal(full.DofAt(p.ix, p.iy));
  }
  return out;
}

RelativeError CompareToMonolithic(const CoupledProblem &problem, const CoupledState &state,
                                  const MonolithicTrajectory &mono)
{
  Require(std::abs(state.t - mono.final_time) <= 1.0e-12 * std::max(1.0, mono.final_time),
          ErrorKind::InvalidArgument, "solutions are at different times");
  const SubdomainMesh full = BuildFullMesh(problem.spec());
  const Scenario &sc = problem.scenario();
  const Eigen::VectorXd nodal = ExpandToNodes(full, mono.final_free, sc, mono.final_time);
  const ErrorNorm norm(problem.mesh(1), problem.mesh(2));
  return norm.Relative(ExpandToNodes(problem.mesh(1), state.u1, sc, state.t),
                       ExpandToNodes(problem.mesh(2), state.u2, sc, state.t),
                       RestrictNodes(full, nodal, problem.mesh(1)),
                       RestrictNodes(full, nodal, problem.mesh(2)));
}

RelativeError CompareToField(const CoupledProblem &problem, const CoupledState &state,
                             const SpaceTimeField &exact)
{
  const Scenario &sc = problem.scenario();
  Eigen::VectorXd ref[2];
  for (int side = 1; side <= 2; side++)
  {
    const SubdomainMesh &mesh = problem.mesh(side);
    ref[side - 1].resize(mesh.NumNodes());
    for (int r = 0; r < mesh.NumNodes(); r++)
    {
      const Node &p = mesh.node(r);
      ref[side - 1](r) = exact(side, p.x, p.y, state.t);
    }
  }
  const ErrorNorm norm(problem.mesh(1), problem.mesh(2));
  return norm.Relative(ExpandToNodes(problem.mesh(1), state.u1, sc, state.t),
                       ExpandToNodes(problem.mesh(2), state.u2, sc, state.t), ref[0], ref[1]);
}

}  // namespace partflux
