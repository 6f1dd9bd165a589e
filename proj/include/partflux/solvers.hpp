// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_SOLVERS_HPP
#define PARTFLUX_SOLVERS_HPP

#include <memory>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include <Eigen/SparseCholesky>
#include "partflux/assembly.hpp"
#include "partflux/linalg.hpp"
#include "partflux/mesh.hpp"
#include "partflux/scenarios.hpp"

namespace partflux
{

// Default time steps for the grids of the experiments; other grids must set dt.
double DefaultTimeStep(int n);

// Number of forward Euler steps to reach final_time, round(final_time / dt).
int StepCount(double final_time, double dt);

// Applies M^{-1} for either mass variant. The consistent variant keeps a sparse Cholesky
// factorization computed once at construction.
class MassInverse
{
public:
  MassInverse(const SubdomainOperators &ops, MassVariant variant);

  MassVariant variant() const { return variant_; }
  void ApplyInPlace(Eigen::VectorXd &x) const;
  Eigen::VectorXd Apply(const Eigen::VectorXd &x) const;

private:
  MassVariant variant_;
  Eigen::VectorXd inv_lumped_;
  std::shared_ptr<const Eigen::SimplicialLLT<SparseMatrix>> llt_;
};

//
// Dual Schur complement S = G_1 M_1^{-1} G_1^T + G_2 M_2^{-1} G_2^T with its Cholesky
// factor and the precomputed H_i = G_i M_i^{-1}. For the lumped variant the interface
// DoFs decouple from the interior ones and H_i only acts on the interface block.
//
struct SchurSystem
{
  MassVariant variant;
  Eigen::MatrixXd schur;
  SpdFactor factor;
  Eigen::MatrixXd h1, h2;
};

SchurSystem BuildSchur(const SubdomainOperators &ops1, const SubdomainOperators &ops2,
                       MassVariant variant);

// Solves S lambda = H_1 b_1 - H_2 b_2 where b_i = f_i - K_i u_i.
Eigen::VectorXd SchurSync(const SchurSystem &schur, const Eigen::VectorXd &b1,
                          const Eigen::VectorXd &b2);
void SchurSyncInto(const SchurSystem &schur, const Eigen::VectorXd &b1,
                   const Eigen::VectorXd &b2, Eigen::VectorXd &rhs_work,
                   Eigen::VectorXd &lambda);

// u_{k+1} = u_k + dt M^{-1} (b_k + lambda_load).
Eigen::VectorXd EulerStep(const MassInverse &minv, const Eigen::VectorXd &u,
                          const Eigen::VectorXd &b, const Eigen::VectorXd &lambda_load,
                          double dt);

// Neumann load (-1)^side G^T lambda on the free DoFs of one subdomain.
void AddInterfaceLoad(const SubdomainOperators &ops, const Eigen::VectorXd &lambda,
                      Eigen::VectorXd &rhs);

struct CoupledState
{
  double t = 0.0;
  Eigen::VectorXd u1, u2;
  Eigen::VectorXd lambda;  // flux used for the step starting at t
};

// Data available to a synchronization operator at the start of step k.
struct SyncInput
{
  int step;
  double t;
  const Eigen::VectorXd &u1;
  const Eigen::VectorXd &u2;
  const Eigen::VectorXd &b1;
  const Eigen::VectorXd &b2;
};

// Computes the interface flux lambda_k from the current subdomain states.
class Synchronizer
{
public:
  virtual ~Synchronizer() = default;

  // Called once before the first step of every run.
  virtual void Reset() {}
  virtual void Synchronize(const SyncInput &in, Eigen::VectorXd &lambda) = 0;
  virtual std::string Name() const = 0;
};

// IVR(C) or IVR(L), depending on the variant of the Schur system.
class SchurSynchronizer : public Synchronizer
{
public:
  explicit SchurSynchronizer(std::shared_ptr<const SchurSystem> schur);

  void Synchronize(const SyncInput &in, Eigen::VectorXd &lambda) override;
  std::string Name() const override;

private:
  std::shared_ptr<const SchurSystem> schur_;
  Eigen::VectorXd rhs_;
};

//
// Offline data of one coupled problem instance: subdomain meshes and operators.
//
class CoupledProblem
{
public:
  CoupledProblem(const DomainSpec &spec, const Scenario &scenario);

  const DomainSpec &spec() const { return spec_; }
  const Scenario &scenario() const { return scenario_; }
  const SubdomainMesh &mesh(int side) const { return side == 1 ? mesh1_ : mesh2_; }
  const SubdomainOperators &ops(int side) const { return side == 1 ? ops1_ : ops2_; }
  int NumInterface() const { return mesh1_.NumInterface(); }

  // Initial free coefficients of both subdomains. The L2 projection is taken over the
  // whole domain and restricted, which makes the interface values of both sides agree.
  std::pair<Eigen::VectorXd, Eigen::VectorXd> InitialState(InitialMethod method) const;

  // Same problem with a different initial condition; operators are shared.
  CoupledProblem WithScenario(const Scenario &scenario) const;

private:
  DomainSpec spec_;
  Scenario scenario_;
  SubdomainMesh mesh1_, mesh2_;
  SubdomainOperators ops1_, ops2_;
};

struct RunOptions
{
  MassVariant variant = MassVariant::Consistent;
  InitialMethod initial = InitialMethod::Projection;
  bool record_states = false;  // keep u_1, u_2 at every t_k
  int patch_size = 0;          // keep interface patches at every t_k when > 0
};

struct Trajectory
{
  double dt = 0.0;
  int steps = 0;
  int grid_n = 0;
  int num_interface = 0;
  int patch_size = 0;
  std::vector<Eigen::VectorXd> lambda;  // lambda_k, k = 0..steps-1
  std::vector<CoupledState> states;     // t_0..t_steps when recorded
  std::vector<Eigen::VectorXd> patch1, patch2;  // t_0..t_steps when recorded
  CoupledState final_state;
  double loop_seconds = 0.0;
  double sync_seconds = 0.0;
};

// Explicit synchronous partitioned scheme: at every step synchronize, then advance both
// subdomains with forward Euler.
Trajectory RunPartitioned(Synchronizer &sync, const CoupledProblem &problem, double dt,
                          const RunOptions &options);

struct MonolithicTrajectory
{
  double dt = 0.0;
  int steps = 0;
  std::vector<Eigen::VectorXd> states;  // full-mesh free coefficients, when recorded
  Eigen::VectorXd final_free;
  double final_time = 0.0;
  double loop_seconds = 0.0;
};

// Forward Euler on the single-domain Galerkin system with consistent mass.
MonolithicTrajectory RunMonolithic(const DomainSpec &spec, const Scenario &scenario,
                                   double dt, InitialMethod initial = InitialMethod::Projection,
                                   bool record_states = false);

// Free coefficients of a subdomain taken from a nodal vector on the full mesh.
Eigen::VectorXd RestrictToSubdomain(const SubdomainMesh &full, const Eigen::VectorXd &nodal,
                                    const SubdomainMesh &sub);

}  // namespace partflux

#endif  // PARTFLUX_SOLVERS_HPP
