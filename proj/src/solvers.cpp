// SPDX-License-Identifier: Apache-2.0

#include "partflux/solvers.hpp"

#include <chrono>
#include <cmath>
#include <string>
#include "partflux/error.hpp"

namespace partflux
{

namespace
{

using Clock = std::chrono::steady_clock;

double Seconds(Clock::duration d)
{
  return std::chrono::duration<double>(d).count();
}

void CheckFinite(const Eigen::VectorXd &v, int step, const char *what)
{
  if (!v.allFinite())
  {
    Fail(ErrorKind::Instability,
         std::string("non-finite ") + what + " at step " + std::to_string(step));
  }
}

std::vector<int> MaybePatch(const SubdomainMesh &mesh, int patch_size)
{
  return patch_size > 0 ? PatchIndices(mesh, patch_size) : std::vector<int>{};
}

Eigen::VectorXd Gather(const Eigen::VectorXd &u, const std::vector<int> &idx)
{
  Eigen::VectorXd out(idx.size());
  for (std::size_t j = 0; j < idx.size(); j++)
  {
    out(j) = u(idx[j]);
  }
  return out;
}

}  // namespace

double DefaultTimeStep(int n)
{
  switch (n)
  {
    case 16:
      return 1.42e-2;
    case 32:
      return 6.84e-3;
    case 64:
      return 3.37e-3;
    case 128:
      return 1.67e-3;
    default:
      Fail(ErrorKind::InvalidArgument,
           "no default time step for N = " + std::to_string(n) + "; set dt explicitly");
  }
}

int StepCount(double final_time, double dt)
{
  Require(dt > 0.0 && final_time >= 0.0, ErrorKind::InvalidArgument,
          "time step must be positive and final time nonnegative");
  return static_cast<int>(std::lround(final_time / dt));
}

MassInverse::MassInverse(const SubdomainOperators &ops, MassVariant variant)
  : variant_(variant)
{
  if (variant_ == MassVariant::Lumped)
  {
    Require((ops.lumped_mass.array() > 0.0).all(), ErrorKind::NotSpd,
            "matrix not SPD: lumped mass has a non-positive entry");
    inv_lumped_ = ops.lumped_mass.cwiseInverse();
    return;
  }
  auto llt = std::make_shared<Eigen::SimplicialLLT<SparseMatrix>>(ops.mass);
  Require(llt->info() == Eigen::Success, ErrorKind::NotSpd,
          "matrix not SPD: consistent mass factorization failed");
  llt_ = std::move(llt);
}

void MassInverse::ApplyInPlace(Eigen::VectorXd &x) const
{
  if (variant_ == MassVariant::Lumped)
  {
    x.array() *= inv_lumped_.array();
  }
  else
  {
    x = llt_->solve(x);
  }
}

Eigen::VectorXd MassInverse::Apply(const Eigen::VectorXd &x) const
{
  Eigen::VectorXd y = x;
  ApplyInPlace(y);
  return y;
}

SchurSystem BuildSchur(const SubdomainOperators &ops1, const SubdomainOperators &ops2,
                       MassVariant variant)
{
  const int ng = ops1.num_interface;
  Require(ng > 0 && ops2.num_interface == ng && ops1.constraint.rows() == ng &&
              ops2.constraint.rows() == ng,
          ErrorKind::LayoutMismatch, "subdomain interfaces do not match");
  auto build_h = [&](const SubdomainOperators &ops) -> Eigen::MatrixXd
  {
    const Eigen::MatrixXd &g = ops.constraint;
    if (variant == MassVariant::Lumped)
    {
      return g * ops.lumped_mass.head(ng).cwiseInverse().asDiagonal();
    }
    Eigen::SimplicialLLT<SparseMatrix> llt(ops.mass);
    Require(llt.info() == Eigen::Success, ErrorKind::NotSpd,
            "matrix not SPD: consistent mass factorization failed");
    const Eigen::MatrixXd e = Eigen::MatrixXd::Identity(ops.num_free, ng);
    // X = M^{-1} E_gamma, so H = [G 0] M^{-1} = G X^T by symmetry of M.
    const Eigen::MatrixXd x = llt.solve(e);
    return g * x.transpose();
  };
  Eigen::MatrixXd h1 = build_h(ops1);
  Eigen::MatrixXd h2 = build_h(ops2);
  Eigen::MatrixXd s = h1.leftCols(ng) * ops1.constraint.transpose() +
                      h2.leftCols(ng) * ops2.constraint.transpose();
  // Exact in exact arithmetic; the sparse solves leave round-off asymmetry.
  s = (0.5 * (s + s.transpose())).eval();
  SpdFactor factor(s);
  return {variant, std::move(s), std::move(factor), std::move(h1), std::move(h2)};
}

void SchurSyncInto(const SchurSystem &schur, const Eigen::VectorXd &b1,
                   const Eigen::VectorXd &b2, Eigen::VectorXd &rhs_work,
                   Eigen::VectorXd &lambda)
{
  const Eigen::Index cols = schur.h1.cols();
  rhs_work.noalias() = schur.h1 * b1.head(cols);
  rhs_work.noalias() -= schur.h2 * b2.head(cols);
  lambda = rhs_work;
  schur.factor.SolveInPlace(lambda);
}

Eigen::VectorXd SchurSync(const SchurSystem &schur, const Eigen::VectorXd &b1,
                          const Eigen::VectorXd &b2)
{
  Eigen::VectorXd rhs(schur.schur.rows()), lambda(schur.schur.rows());
  SchurSyncInto(schur, b1, b2, rhs, lambda);
  return lambda;
}

void AddInterfaceLoad(const SubdomainOperators &ops, const Eigen::VectorXd &lambda,
                      Eigen::VectorXd &rhs)
{
  const Eigen::Index ng = ops.num_interface;
  if (ops.side == 1)
  {
    rhs.head(ng).noalias() -= ops.constraint.transpose() * lambda;
  }
  else
  {
    rhs.head(ng).noalias() += ops.constraint.transpose() * lambda;
  }
}

Eigen::VectorXd EulerStep(const MassInverse &minv, const Eigen::VectorXd &u,
                          const Eigen::VectorXd &b, const Eigen::VectorXd &lambda_load,
                          double dt)
{
  Require(dt > 0.0, ErrorKind::InvalidArgument, "time step must be positive");
  Eigen::VectorXd r = b + lambda_load;
  minv.ApplyInPlace(r);
  return u + dt * r;
}

SchurSynchronizer::SchurSynchronizer(std::shared_ptr<const SchurSystem> schur)
  : schur_(std::move(schur)), rhs_(schur_->schur.rows())
{
}

void SchurSynchronizer::Synchronize(const SyncInput &in, Eigen::VectorXd &lambda)
{
  SchurSyncInto(*schur_, in.b1, in.b2, rhs_, lambda);
}

std::string SchurSynchronizer::Name() const
{
  return schur_->variant == MassVariant::Consistent ? "ivrc" : "ivrl";
}

CoupledProblem::CoupledProblem(const DomainSpec &spec, const Scenario &scenario)
  : spec_(spec), scenario_(scenario), mesh1_(spec, Region::Left),
    mesh2_(spec, Region::Right), ops1_(AssembleOperators(mesh1_, scenario)),
    ops2_(AssembleOperators(mesh2_, scenario))
{
}

CoupledProblem CoupledProblem::WithScenario(const Scenario &scenario) const
{
  Require(scenario.kappa1 == scenario_.kappa1 && scenario.kappa2 == scenario_.kappa2,
          ErrorKind::InvalidArgument,
          "operators can only be shared between scenarios with equal coefficients");
  CoupledProblem copy = *this;
  copy.scenario_ = scenario;
  return copy;
}

std::pair<Eigen::VectorXd, Eigen::VectorXd> CoupledProblem::InitialState(
    InitialMethod method) const
{
  if (method == InitialMethod::Interpolation)
  {
    return {SetInitial(mesh1_, ops1_, scenario_, method),
            SetInitial(mesh2_, ops2_, scenario_, method)};
  }
  const SubdomainMesh full = BuildFullMesh(spec_);
  const SubdomainOperators full_ops = AssembleOperators(full, scenario_);
  const Eigen::VectorXd nodal =
      ExpandToNodes(full, SetInitial(full, full_ops, scenario_, method), scenario_, 0.0);
  return {RestrictToSubdomain(full, nodal, mesh1_), RestrictToSubdomain(full, nodal, mesh2_)};
}

Trajectory RunPartitioned(Synchronizer &sync, const CoupledProblem &problem, double dt,
                          const RunOptions &options)
{
  const Scenario &scenario = problem.scenario();
  const int steps = StepCount(scenario.final_time, dt);
  const SubdomainOperators &ops1 = problem.ops(1);
  const SubdomainOperators &ops2 = problem.ops(2);
  const MassInverse minv1(ops1, options.variant);
  const MassInverse minv2(ops2, options.variant);
  const std::vector<int> patch1 = MaybePatch(problem.mesh(1), options.patch_size);
  const std::vector<int> patch2 = MaybePatch(problem.mesh(2), options.patch_size);

  Trajectory traj;
  traj.dt = dt;
  traj.steps = steps;
  traj.grid_n = problem.spec().n;
  traj.num_interface = problem.NumInterface();
  traj.patch_size = options.patch_size;
  traj.lambda.reserve(steps);

  auto [u1, u2] = problem.InitialState(options.initial);
  Eigen::VectorXd lambda = Eigen::VectorXd::Zero(problem.NumInterface());
  auto record = [&](double t)
  {
    if (options.record_states)
    {
      traj.states.push_back({t, u1, u2, lambda});
    }
    if (options.patch_size > 0)
    {
      traj.patch1.push_back(Gather(u1, patch1));
      traj.patch2.push_back(Gather(u2, patch2));
    }
  };
  record(0.0);

  sync.Reset();
  Eigen::VectorXd b1, b2, r1, r2;
  Clock::duration sync_time{};
  const auto loop_start = Clock::now();
  for (int k = 0; k < steps; k++)
  {
    const double t = k * dt;
    b1 = AssembleLoad(problem.mesh(1), ops1, scenario, t);
    b1.noalias() -= ops1.stiffness * u1;
    b2 = AssembleLoad(problem.mesh(2), ops2, scenario, t);
    b2.noalias() -= ops2.stiffness * u2;

    const auto sync_start = Clock::now();
    sync.Synchronize({k, t, u1, u2, b1, b2}, lambda);
    sync_time += Clock::now() - sync_start;
    CheckFinite(lambda, k, "interface flux");
    traj.lambda.push_back(lambda);

    r1 = b1;
    AddInterfaceLoad(ops1, lambda, r1);
    minv1.ApplyInPlace(r1);
    u1.noalias() += dt * r1;
    r2 = b2;
    AddInterfaceLoad(ops2, lambda, r2);
    minv2.ApplyInPlace(r2);
    u2.noalias() += dt * r2;
    CheckFinite(u1, k, "subdomain 1 state");
    CheckFinite(u2, k, "subdomain 2 state");
    record((k + 1) * dt);
  }
  traj.loop_seconds = Seconds(Clock::now() - loop_start);
  traj.sync_seconds = Seconds(sync_time);
  traj.final_state = {steps * dt, std::move(u1), std::move(u2), std::move(lambda)};
  return traj;
}

MonolithicTrajectory RunMonolithic(const DomainSpec &spec, const Scenario &scenario,
                                   double dt, InitialMethod initial, bool record_states)
{
  const SubdomainMesh mesh = BuildFullMesh(spec);
  const SubdomainOperators ops = AssembleOperators(mesh, scenario);
  const MassInverse minv(ops, MassVariant::Consistent);
  const int steps = StepCount(scenario.final_time, dt);

  MonolithicTrajectory traj;
  traj.dt = dt;
  traj.steps = steps;
  Eigen::VectorXd u = SetInitial(mesh, ops, scenario, initial);
  if (record_states)
  {
    traj.states.reserve(steps + 1);
    traj.states.push_back(u);
  }
  Eigen::VectorXd r;
  const auto loop_start = Clock::now();
  for (int k = 0; k < steps; k++)
  {
    const double t = k * dt;
    r = AssembleLoad(mesh, ops, scenario, t);
    r.noalias() -= ops.stiffness * u;
    minv.ApplyInPlace(r);
    u.noalias() += dt * r;
    CheckFinite(u, k, "monolithic state");
    if (record_states)
    {
      traj.states.push_back(u);
    }
  }
  traj.loop_seconds = Seconds(Clock::now() - loop_start);
  traj.final_free = std::move(u);
  traj.final_time = steps * dt;
  return traj;
}

Eigen::VectorXd RestrictToSubdomain(const SubdomainMesh &full, const Eigen::VectorXd &nodal,
                                    const SubdomainMesh &sub)
{
  Require(nodal.size() == full.NumNodes(), ErrorKind::LayoutMismatch,
          "nodal vector does not match the full mesh");
  Eigen::VectorXd out(sub.NumFree());
  for (int r = 0; r < sub.NumFree(); r++)
  {
    const Node &p = sub.node(r);
    out(r) = nodal(full.DofAt(p.ix, p.iy));
  }
  return out;
}

}  // namespace partflux
