// SPDX-License-Identifier: Apache-2.0

#include "partflux/assembly.hpp"

#include <array>
#include <cmath>
#include <string>
#include <vector>
#include "partflux/error.hpp"

namespace partflux
{

namespace
{

// 2x2 Gauss rule on the reference square [0,1]^2, weights 1/4 each.
struct QuadRule
{
  std::array<double, 2> pts;
  QuadRule()
  {
    const double d = 0.5 / std::sqrt(3.0);
    pts = {0.5 - d, 0.5 + d};
  }
};

const QuadRule &Gauss()
{
  static const QuadRule rule;
  return rule;
}

// Bilinear shape functions, counterclockwise from the lower-left corner.
std::array<double, 4> Shape(double xi, double eta)
{
  return {(1.0 - xi) * (1.0 - eta), xi * (1.0 - eta), xi * eta, (1.0 - xi) * eta};
}

// Reference gradients d/dxi, d/deta.
std::array<std::array<double, 2>, 4> ShapeGrad(double xi, double eta)
{
  return {{{-(1.0 - eta), -(1.0 - xi)},
           {(1.0 - eta), -xi},
           {eta, xi},
           {-eta, (1.0 - xi)}}};
}

int SideOfPoint(const SubdomainMesh &mesh, double x)
{
  if (mesh.region() != Region::Full)
  {
    return mesh.side();
  }
  return x <= 0.5 ? 1 : 2;
}

template <typename ElementKernel>
SparseMatrix AssembleNodal(const SubdomainMesh &mesh, ElementKernel &&kernel)
{
  std::vector<Eigen::Triplet<double>> triplets;
  triplets.reserve(mesh.elements().size() * 16);
  std::array<std::array<double, 4>, 4> ke;
  for (const auto &elem : mesh.elements())
  {
    for (auto &row : ke)
    {
      row.fill(0.0);
    }
    kernel(elem, ke);
    for (int a = 0; a < 4; a++)
    {
      for (int b = 0; b < 4; b++)
      {
        triplets.emplace_back(elem[a], elem[b], ke[a][b]);
      }
    }
  }
  SparseMatrix m(mesh.NumNodes(), mesh.NumNodes());
  m.setFromTriplets(triplets.begin(), triplets.end());
  return m;
}

SparseMatrix Block(const SparseMatrix &m, int row0, int rows, int col0, int cols)
{
  SparseMatrix b = m.block(row0, col0, rows, cols);
  b.makeCompressed();
  return b;
}

}  // namespace

SparseMatrix AssembleNodalMass(const SubdomainMesh &mesh)
{
  const double area = mesh.h() * mesh.h();
  const auto &g = Gauss();
  return AssembleNodal(mesh,
                       [&](const std::array<int, 4> &, auto &ke)
                       {
                         for (double xi : g.pts)
                         {
                           for (double eta : g.pts)
                           {
                             const auto n = Shape(xi, eta);
                             for (int a = 0; a < 4; a++)
                             {
                               for (int b = 0; b < 4; b++)
                               {
                                 ke[a][b] += 0.25 * area * n[a] * n[b];
                               }
                             }
                           }
                         }
                       });
}

SparseMatrix AssembleNodalStiffness(const SubdomainMesh &mesh, double kappa_left,
                                    double kappa_right, const VelocityField &velocity)
{
  Require(kappa_left >= 0.0 && kappa_right >= 0.0, ErrorKind::InvalidArgument,
          "diffusion coefficient must be nonnegative");
  const double h = mesh.h();
  const double area = h * h;
  const auto &g = Gauss();
  return AssembleNodal(
      mesh,
      [&](const std::array<int, 4> &elem, auto &ke)
      {
        const Node &origin = mesh.node(elem[0]);
        const int side = SideOfPoint(mesh, origin.x + 0.5 * h);
        const double kappa = side == 1 ? kappa_left : kappa_right;
        for (double xi : g.pts)
        {
          for (double eta : g.pts)
          {
            const auto n = Shape(xi, eta);
            const auto dn = ShapeGrad(xi, eta);
            const auto v = velocity ? velocity(origin.x + h * xi, origin.y + h * eta)
                                    : std::array<double, 2>{0.0, 0.0};
            for (int a = 0; a < 4; a++)
            {
              const double ax = dn[a][0] / h, ay = dn[a][1] / h;
              const double v_dot_grad_w = v[0] * ax + v[1] * ay;
              for (int b = 0; b < 4; b++)
              {
                const double bx = dn[b][0] / h, by = dn[b][1] / h;
                ke[a][b] +=
                    0.25 * area * (kappa * (ax * bx + ay * by) - n[b] * v_dot_grad_w);
              }
            }
          }
        }
      });
}

SparseMatrix AssembleMass(const SubdomainMesh &mesh, MassVariant variant)
{
  const SparseMatrix nodal = AssembleNodalMass(mesh);
  const int nf = mesh.NumFree();
  if (variant == MassVariant::Consistent)
  {
    return Block(nodal, 0, nf, 0, nf);
  }
  const Eigen::VectorXd sums = Block(nodal, 0, nf, 0, nf) * Eigen::VectorXd::Ones(nf);
  SparseMatrix lumped(nf, nf);
  lumped.reserve(Eigen::VectorXi::Constant(nf, 1));
  for (int i = 0; i < nf; i++)
  {
    lumped.insert(i, i) = sums(i);
  }
  lumped.makeCompressed();
  return lumped;
}

SparseMatrix AssembleStiffness(const SubdomainMesh &mesh, double kappa,
                               const VelocityField &velocity)
{
  const int nf = mesh.NumFree();
  return Block(AssembleNodalStiffness(mesh, kappa, kappa, velocity), 0, nf, 0, nf);
}

Eigen::MatrixXd AssembleConstraint(const SubdomainMesh &lagrange_mesh,
                                   const SubdomainMesh &mesh)
{
  const int ng = mesh.NumInterface();
  Require(lagrange_mesh.NumInterface() == ng && lagrange_mesh.n() == mesh.n(),
          ErrorKind::LayoutMismatch,
          "interface node counts differ: " + std::to_string(lagrange_mesh.NumInterface()) +
              " vs " + std::to_string(ng));
  for (int j = 0; j < ng; j++)
  {
    const Node &a = lagrange_mesh.node(j);
    const Node &b = mesh.node(j);
    Require(a.x == b.x && a.y == b.y, ErrorKind::LayoutMismatch,
            "interface nodes do not match");
  }
  // Interface DoF j sits at lattice row iy = j + 1; segment s spans rows s and s + 1.
  const double h = mesh.h();
  const auto &g = Gauss();
  Eigen::MatrixXd gmat = Eigen::MatrixXd::Zero(ng, ng);
  for (int s = 0; s < mesh.n(); s++)
  {
    const std::array<int, 2> dofs = {s - 1, s};  // -1 / ng mark Dirichlet endpoints
    for (double xi : g.pts)
    {
      const std::array<double, 2> n = {1.0 - xi, xi};
      for (int a = 0; a < 2; a++)
      {
        for (int b = 0; b < 2; b++)
        {
          if (dofs[a] >= 0 && dofs[a] < ng && dofs[b] >= 0 && dofs[b] < ng)
          {
            gmat(dofs[a], dofs[b]) += 0.5 * h * n[a] * n[b];
          }
        }
      }
    }
  }
  return gmat;
}

SubdomainOperators AssembleOperators(const SubdomainMesh &mesh, const Scenario &scenario)
{
  Require(scenario.kappa1 > 0.0 && scenario.kappa2 > 0.0, ErrorKind::InvalidArgument,
          "diffusion coefficients must be positive");
  SubdomainOperators ops;
  ops.side = mesh.side();
  ops.num_free = mesh.NumFree();
  ops.num_interface = mesh.NumInterface();
  const int nf = mesh.NumFree();
  const int nd = mesh.NumDirichlet();

  const SparseMatrix mass = AssembleNodalMass(mesh);
  ops.mass = Block(mass, 0, nf, 0, nf);
  ops.mass_lift = Block(mass, 0, nf, nf, nd);
  ops.lumped_mass = ops.mass * Eigen::VectorXd::Ones(nf);

  const SparseMatrix stiff =
      AssembleNodalStiffness(mesh, scenario.kappa1, scenario.kappa2, scenario.velocity);
  ops.stiffness = Block(stiff, 0, nf, 0, nf);
  ops.stiffness_lift = Block(stiff, 0, nf, nf, nd);

  if (mesh.region() != Region::Full)
  {
    ops.constraint = AssembleConstraint(mesh, mesh);
  }
  return ops;
}

Eigen::VectorXd DirichletValues(const SubdomainMesh &mesh, const SpaceTimeField &field,
                                double t)
{
  const int nf = mesh.NumFree();
  Eigen::VectorXd g = Eigen::VectorXd::Zero(mesh.NumDirichlet());
  if (!field)
  {
    return g;
  }
  for (int r = 0; r < mesh.NumDirichlet(); r++)
  {
    const Node &p = mesh.node(nf + r);
    g(r) = field(SideOfPoint(mesh, p.x), p.x, p.y, t);
  }
  return g;
}

Eigen::VectorXd AssembleSourceLoad(const SubdomainMesh &mesh, const SpaceTimeField &source,
                                   double t)
{
  const int nf = mesh.NumFree();
  Eigen::VectorXd b = Eigen::VectorXd::Zero(nf);
  if (!source)
  {
    return b;
  }
  const double h = mesh.h();
  const double w = 0.25 * h * h;
  const auto &g = Gauss();
  for (const auto &elem : mesh.elements())
  {
    const Node &origin = mesh.node(elem[0]);
    const int side = SideOfPoint(mesh, origin.x + 0.5 * h);
    for (double xi : g.pts)
    {
      for (double eta : g.pts)
      {
        const double f = source(side, origin.x + h * xi, origin.y + h * eta, t);
        const auto n = Shape(xi, eta);
        for (int a = 0; a < 4; a++)
        {
          if (elem[a] < nf)
          {
            b(elem[a]) += w * n[a] * f;
          }
        }
      }
    }
  }
  return b;
}

Eigen::VectorXd AssembleLoad(const SubdomainMesh &mesh, const SubdomainOperators &ops,
                             const Scenario &scenario, double t)
{
  Eigen::VectorXd b = AssembleSourceLoad(mesh, scenario.source, t);
  if (scenario.boundary)
  {
    b.noalias() -= ops.stiffness_lift * DirichletValues(mesh, scenario.boundary, t);
  }
  if (scenario.boundary_rate)
  {
    b.noalias() -= ops.mass_lift * DirichletValues(mesh, scenario.boundary_rate, t);
  }
  return b;
}

Eigen::VectorXd SetInitial(const SubdomainMesh &mesh, const SubdomainOperators &ops,
                           const Scenario &scenario, InitialMethod method)
{
  const int nf = mesh.NumFree();
  Eigen::VectorXd c = Eigen::VectorXd::Zero(nf);
  if (!scenario.initial)
  {
    // Zero data: both methods reduce to the lifted projection of 0 or to 0 itself.
    if (method == InitialMethod::Interpolation || !scenario.boundary)
    {
      return c;
    }
  }
  if (method == InitialMethod::Interpolation)
  {
    for (int r = 0; r < nf; r++)
    {
      const Node &p = mesh.node(r);
      c(r) = scenario.initial(SideOfPoint(mesh, p.x), p.x, p.y);
    }
    return c;
  }
  SpaceTimeField u0;
  if (scenario.initial)
  {
    u0 = [&](int side, double x, double y, double) { return scenario.initial(side, x, y); };
  }
  Eigen::VectorXd rhs = AssembleSourceLoad(mesh, u0, 0.0);
  if (scenario.boundary)
  {
    rhs.noalias() -= ops.mass_lift * DirichletValues(mesh, scenario.boundary, 0.0);
  }
  Eigen::SimplicialLLT<SparseMatrix> llt(ops.mass);
  Require(llt.info() == Eigen::Success, ErrorKind::NotSpd,
          "matrix not SPD: consistent mass factorization failed");
  c = llt.solve(rhs);
  return c;
}

Eigen::VectorXd ExpandToNodes(const SubdomainMesh &mesh, const Eigen::VectorXd &free,
                              const Scenario &scenario, double t)
{
  Eigen::VectorXd full(mesh.NumNodes());
  full.head(mesh.NumFree()) = free;
  full.tail(mesh.NumDirichlet()) = DirichletValues(mesh, scenario.boundary, t);
  return full;
}

}  // namespace partflux
