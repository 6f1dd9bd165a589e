// SPDX-License-Identifier: Apache-2.0

#include "partflux/surrogate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include "partflux/error.hpp"
#include "partflux/linalg.hpp"

namespace partflux
{

namespace
{

void CheckLayout(const StaggeredLayout &layout)
{
  Require(layout.num_interface > 0 && layout.patch_size > 0, ErrorKind::InvalidArgument,
          "staggered layout needs interface DoFs and a positive patch size");
}

bool SameValue(double a, double b)
{
  return std::abs(a - b) <= 1.0e-12 * std::max(std::abs(a), std::abs(b));
}

// Sorted distinct values, merging entries closer than a relative tolerance.
std::vector<double> DistinctValues(std::vector<double> v)
{
  std::sort(v.begin(), v.end());
  std::vector<double> out;
  for (double x : v)
  {
    if (out.empty() || !SameValue(out.back(), x))
    {
      out.push_back(x);
    }
  }
  return out;
}

int IndexOf(const std::vector<double> &values, double x)
{
  for (std::size_t i = 0; i < values.size(); i++)
  {
    if (SameValue(values[i], x))
    {
      return static_cast<int>(i);
    }
  }
  return -1;
}

// Lagrange basis polynomial a on the nodes, evaluated at x.
double LagrangeBasis(const std::vector<double> &nodes, int a, double x)
{
  double w = 1.0;
  for (int b = 0; b < static_cast<int>(nodes.size()); b++)
  {
    if (b != a)
    {
      w *= (x - nodes[b]) / (nodes[a] - nodes[b]);
    }
  }
  return w;
}

bool InsideInterval(const std::vector<double> &nodes, double x)
{
  const double tol = 1.0e-12 * std::max(std::abs(nodes.front()), std::abs(nodes.back()));
  return x >= nodes.front() - tol && x <= nodes.back() + tol;
}

}  // namespace

StaggeredLayout LayoutOf(const Trajectory &traj)
{
  return {traj.num_interface, traj.patch_size, traj.grid_n};
}

Eigen::VectorXd AssembleStaggered(const StaggeredLayout &layout, const Eigen::VectorXd &lambda,
                                  const Eigen::VectorXd &patch1, const Eigen::VectorXd &patch2)
{
  CheckLayout(layout);
  const int ng = layout.num_interface, np = layout.PatchLength();
  Require(lambda.size() == ng && patch1.size() == np && patch2.size() == np,
          ErrorKind::LayoutMismatch, "staggered state parts do not match the layout");
  Eigen::VectorXd y(layout.Size());
  y << lambda, patch1, patch2;
  return y;
}

void SplitStaggered(const StaggeredLayout &layout, const Eigen::VectorXd &y,
                    Eigen::VectorXd &lambda, Eigen::VectorXd &patch1, Eigen::VectorXd &patch2)
{
  CheckLayout(layout);
  Require(y.size() == layout.Size(), ErrorKind::LayoutMismatch,
          "staggered state size does not match the layout");
  const int ng = layout.num_interface, np = layout.PatchLength();
  lambda = y.head(ng);
  patch1 = y.segment(ng, np);
  patch2 = y.tail(np);
}

SnapshotSet CollectSnapshots(std::span<const Trajectory> trajectories, double mu1, double mu2)
{
  SnapshotSet snap;
  snap.mu1 = mu1;
  snap.mu2 = mu2;
  snap.offsets.push_back(0);
  if (trajectories.empty())
  {
    return snap;
  }
  snap.layout = LayoutOf(trajectories.front());
  CheckLayout(snap.layout);
  const int ng = snap.layout.num_interface, np = snap.layout.PatchLength();
  int total = 0;
  for (const Trajectory &traj : trajectories)
  {
    Require(LayoutOf(traj) == snap.layout, ErrorKind::LayoutMismatch,
            "trajectories have different staggered layouts");
    const int q = static_cast<int>(traj.lambda.size());
    Require(static_cast<int>(traj.patch1.size()) == q + 1 &&
                static_cast<int>(traj.patch2.size()) == q + 1,
            ErrorKind::LayoutMismatch, "trajectory does not record interface patches");
    total += std::max(0, q - 1);
  }
  snap.y.resize(snap.layout.Size(), total);
  snap.next_lambda.resize(ng, total);
  int col = 0;
  for (const Trajectory &traj : trajectories)
  {
    const int q = static_cast<int>(traj.lambda.size());
    for (int j = 0; j + 1 < q; j++, col++)
    {
      snap.y.col(col).head(ng) = traj.lambda[j];
      snap.y.col(col).segment(ng, np) = traj.patch1[j + 1];
      snap.y.col(col).tail(np) = traj.patch2[j + 1];
      snap.next_lambda.col(col) = traj.lambda[j + 1];
    }
    snap.offsets.push_back(col);
  }
  return snap;
}

DmdFluxOperator DmdFluxOperator::Factored(const OperatorInfo &info, Eigen::MatrixXd p,
                                          Eigen::MatrixXd q)
{
  CheckLayout(info.layout);
  Require(p.rows() == info.layout.num_interface && q.cols() == info.layout.Size() &&
              p.cols() == q.rows() && p.cols() == info.rank && info.rank >= 1,
          ErrorKind::LayoutMismatch, "factored operator shapes do not match its layout");
  DmdFluxOperator op;
  op.info_ = info;
  op.factored_ = true;
  op.p_ = std::move(p);
  op.q_ = std::move(q);
  op.Prepare();
  return op;
}

DmdFluxOperator DmdFluxOperator::Dense(const OperatorInfo &info, Eigen::MatrixXd a)
{
  CheckLayout(info.layout);
  Require(a.rows() == info.layout.num_interface && a.cols() == info.layout.Size() &&
              info.rank >= 1,
          ErrorKind::LayoutMismatch, "dense operator shape does not match its layout");
  DmdFluxOperator op;
  op.info_ = info;
  op.factored_ = false;
  op.a_ = std::move(a);
  op.Prepare();
  return op;
}

void DmdFluxOperator::Prepare()
{
  if (!factored_)
  {
    use_dense_ = true;
    return;
  }
  const long ng = info_.layout.num_interface, n = info_.layout.Size(), k = info_.rank;
  use_dense_ = ng * n < k * (n + ng);
  if (use_dense_)
  {
    a_ = p_ * q_;
  }
}

Eigen::MatrixXd DmdFluxOperator::ToDense() const
{
  return factored_ ? Eigen::MatrixXd(p_ * q_) : a_;
}

void DmdFluxOperator::ApplyInto(const Eigen::VectorXd &y, Eigen::VectorXd &lambda,
                                Eigen::VectorXd &work) const
{
  Require(y.size() == info_.layout.Size(), ErrorKind::LayoutMismatch,
          "staggered state size does not match the operator");
  if (use_dense_)
  {
    lambda.noalias() = a_ * y;
  }
  else
  {
    work.noalias() = q_ * y;
    lambda.noalias() = p_ * work;
  }
}

Eigen::VectorXd DmdFluxOperator::Apply(const Eigen::VectorXd &y) const
{
  Eigen::VectorXd lambda, work;
  ApplyInto(y, lambda, work);
  return lambda;
}

DmdFluxOperator TrainFluxOperator(const SnapshotSet &snap, double eps)
{
  Require(snap.NumColumns() > 0, ErrorKind::InvalidArgument, "no snapshot pairs to train on");
  Require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument,
          "energy threshold must lie in (0, 1)");
  Require(snap.y.cwiseAbs().maxCoeff() > 0.0, ErrorKind::InvalidArgument,
          "snapshots are all zero");
  const ThinSvd svd = ComputeThinSvd(snap.y);
  const std::span<const double> sigma(svd.sigma.data(), svd.sigma.size());
  const int k = SelectRank(sigma, eps);
  const double cutoff = kPseudoInverseCutoff * sigma[0];
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(k);
  for (int i = 0; i < k; i++)
  {
    inv(i) = sigma[i] > cutoff ? 1.0 / sigma[i] : 0.0;
  }
  Eigen::MatrixXd p = (snap.next_lambda * svd.v.leftCols(k)) * inv.asDiagonal();
  Eigen::MatrixXd q = svd.u.leftCols(k).transpose();
  OperatorInfo info{snap.layout, k, snap.mu1, snap.mu2, eps};
  return DmdFluxOperator::Factored(info, std::move(p), std::move(q));
}

std::vector<double> ReplayErrors(const DmdFluxOperator &op, const SnapshotSet &snap)
{
  Require(op.info().layout == snap.layout, ErrorKind::LayoutMismatch,
          "operator and snapshots have different layouts");
  std::vector<double> errors(snap.NumColumns());
  Eigen::VectorXd lambda, work;
  for (int j = 0; j < snap.NumColumns(); j++)
  {
    op.ApplyInto(snap.y.col(j), lambda, work);
    const double ref = snap.next_lambda.col(j).norm();
    const double diff = (lambda - snap.next_lambda.col(j)).norm();
    errors[j] = ref > 0.0 ? diff / ref : diff;
  }
  return errors;
}

SnapshotSet GenerateTrainingSnapshots(const CoupledProblem &problem,
                                      const TrainingOptions &options)
{
  const Scenario &base = problem.scenario();
  const std::vector<GaussianHill> hills =
      GaussianTrainingSet(problem.spec(), options.spacing_factor, options.width_factor);
  Require(!hills.empty(), ErrorKind::InvalidArgument, "training set is empty");
  auto schur = std::make_shared<const SchurSystem>(
      BuildSchur(problem.ops(1), problem.ops(2), MassVariant::Consistent));
  RunOptions run;
  run.variant = MassVariant::Consistent;
  run.patch_size = options.patch_size;
  std::vector<Trajectory> trajectories;
  trajectories.reserve(hills.size());
  for (std::size_t j = 0; j < hills.size(); j++)
  {
    const GaussianHill hill = hills[j];
    const CoupledProblem sample = problem.WithScenario(WithInitial(
        base, [hill](int, double x, double y) { return hill(x, y); },
        base.name + "-gaussian-" + std::to_string(j)));
    SchurSynchronizer sync(schur);
    trajectories.push_back(RunPartitioned(sync, sample, options.dt, run));
  }
  return CollectSnapshots(trajectories, base.kappa1, base.kappa2);
}

DmdSynchronizer::DmdSynchronizer(std::shared_ptr<const DmdFluxOperator> op,
                                 const CoupledProblem &problem, Bootstrap bootstrap,
                                 std::shared_ptr<const SchurSystem> schur)
  : op_(std::move(op)), bootstrap_(bootstrap), schur_(std::move(schur))
{
  Require(op_ != nullptr, ErrorKind::InvalidArgument, "no flux operator");
  const StaggeredLayout &layout = op_->info().layout;
  Require(layout.num_interface == problem.NumInterface() &&
              layout.grid_n == problem.spec().n,
          ErrorKind::LayoutMismatch,
          "flux operator was trained on N = " + std::to_string(layout.grid_n) +
              " but the problem has N = " + std::to_string(problem.spec().n));
  Require(bootstrap_ != Bootstrap::Schur || schur_ != nullptr, ErrorKind::InvalidArgument,
          "Schur bootstrap needs a Schur system");
  patch1_ = PatchIndices(problem.mesh(1), layout.patch_size);
  patch2_ = PatchIndices(problem.mesh(2), layout.patch_size);
  y_ = Eigen::VectorXd::Zero(layout.Size());
  rhs_.resize(layout.num_interface);
}

void DmdSynchronizer::Reset()
{
  y_.setZero();
}

void DmdSynchronizer::Synchronize(const SyncInput &in, Eigen::VectorXd &lambda)
{
  const int ng = op_->info().layout.num_interface;
  const int np = static_cast<int>(patch1_.size());
  if (in.step == 0 && bootstrap_ == Bootstrap::Schur)
  {
    SchurSyncInto(*schur_, in.b1, in.b2, rhs_, lambda);
    y_.head(ng) = lambda;
    return;
  }
  // y_ already holds lambda_{k-1} in its head.
  for (int j = 0; j < np; j++)
  {
    y_(ng + j) = in.u1(patch1_[j]);
    y_(ng + np + j) = in.u2(patch2_[j]);
  }
  op_->ApplyInto(y_, lambda, work_);
  y_.head(ng) = lambda;
}

std::vector<double> RkoiWeights(std::span<const ParameterSample> samples, double mu1,
                                double mu2, double radius)
{
  Require(!samples.empty(), ErrorKind::InvalidArgument, "no parameter samples");
  Require(radius > 0.0, ErrorKind::InvalidArgument, "interpolation radius must be positive");
  std::vector<int> selected;
  std::vector<double> xs, ys;
  for (int j = 0; j < static_cast<int>(samples.size()); j++)
  {
    if (std::hypot(samples[j].mu1 - mu1, samples[j].mu2 - mu2) <= radius)
    {
      selected.push_back(j);
      xs.push_back(samples[j].mu1);
      ys.push_back(samples[j].mu2);
    }
  }
  Require(!selected.empty(), ErrorKind::HullViolation,
          "no parameter samples within the interpolation radius");
  const std::vector<double> gx = DistinctValues(xs), gy = DistinctValues(ys);
  Require(gx.size() * gy.size() == selected.size(), ErrorKind::InvalidArgument,
          "parameter samples do not form a tensor grid");
  Require(InsideInterval(gx, mu1) && InsideInterval(gy, mu2), ErrorKind::HullViolation,
          "parameter (" + std::to_string(mu1) + ", " + std::to_string(mu2) +
              ") is outside the sample hull");
  std::vector<double> weights(samples.size(), 0.0);
  std::vector<bool> seen(gx.size() * gy.size(), false);
  for (int j : selected)
  {
    const int a = IndexOf(gx, samples[j].mu1), b = IndexOf(gy, samples[j].mu2);
    Require(a >= 0 && b >= 0 && !seen[a * gy.size() + b], ErrorKind::InvalidArgument,
            "parameter samples do not form a tensor grid");
    seen[a * gy.size() + b] = true;
    weights[j] = LagrangeBasis(gx, a, mu1) * LagrangeBasis(gy, b, mu2);
  }
  return weights;
}

DmdFluxOperator Rkoi(std::span<const ParameterSample> samples, double mu1, double mu2,
                     double radius)
{
  const std::vector<double> w = RkoiWeights(samples, mu1, mu2, radius);
  const OperatorInfo &first = samples.front().op->info();
  OperatorInfo info{first.layout, 0, mu1, mu2, first.eps};
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(first.layout.num_interface, first.layout.Size());
  for (std::size_t j = 0; j < samples.size(); j++)
  {
    const DmdFluxOperator &op = *samples[j].op;
    Require(op.info().layout == first.layout, ErrorKind::LayoutMismatch,
            "parameter samples have operators with different layouts");
    info.rank = std::max(info.rank, op.info().rank);
    info.eps = std::max(info.eps, op.info().eps);
    if (w[j] != 0.0)
    {
      a += w[j] * op.ToDense();
    }
  }
  return DmdFluxOperator::Dense(info, std::move(a));
}

}  // namespace partflux
