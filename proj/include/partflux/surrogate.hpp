// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_SURROGATE_HPP
#define PARTFLUX_SURROGATE_HPP

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <vector>
#include <Eigen/Dense>
#include "partflux/solvers.hpp"

namespace partflux
{

// Shape of the staggered surrogate state y = (lambda, patch_1, patch_2).
struct StaggeredLayout
{
  int num_interface = 0;
  int patch_size = 0;
  int grid_n = 0;

  int Size() const { return (2 * patch_size + 1) * num_interface; }
  int PatchLength() const { return patch_size * num_interface; }
  bool operator==(const StaggeredLayout &) const = default;
};

StaggeredLayout LayoutOf(const Trajectory &traj);

Eigen::VectorXd AssembleStaggered(const StaggeredLayout &layout, const Eigen::VectorXd &lambda,
                                  const Eigen::VectorXd &patch1, const Eigen::VectorXd &patch2);
void SplitStaggered(const StaggeredLayout &layout, const Eigen::VectorXd &y,
                    Eigen::VectorXd &lambda, Eigen::VectorXd &patch1, Eigen::VectorXd &patch2);

//
// Snapshot pairs of staggered states. Only the flux rows of the successor matrix are
// kept since the trained operator predicts lambda alone.
//
struct SnapshotSet
{
  StaggeredLayout layout;
  Eigen::MatrixXd y;            // y_0 .. y_{q-2} of every trajectory, concatenated
  Eigen::MatrixXd next_lambda;  // lambda rows of y_1 .. y_{q-1}
  std::vector<int> offsets;     // first column of each trajectory, plus the end
  double mu1 = 0.0, mu2 = 0.0;

  int NumColumns() const { return static_cast<int>(y.cols()); }
  int NumTrajectories() const { return static_cast<int>(offsets.size()) - 1; }
};

// Staggered states y_j = (lambda_j, u_{1,j+1}|patch, u_{2,j+1}|patch), j = 0..q-1. Pairs
// never cross from one trajectory into the next. Trajectories must record patches.
SnapshotSet CollectSnapshots(std::span<const Trajectory> trajectories, double mu1 = 0.0,
                             double mu2 = 0.0);

struct OperatorInfo
{
  StaggeredLayout layout;
  int rank = 0;
  double mu1 = 0.0, mu2 = 0.0;
  double eps = 0.0;
  bool operator==(const OperatorInfo &) const = default;
};

//
// Flux rows A_lambda of the DMD operator. Trained operators are stored as A = P Q with
// P of size n_gamma x k and Q of size k x N_FS; interpolated ones are dense.
//
class DmdFluxOperator
{
public:
  static DmdFluxOperator Factored(const OperatorInfo &info, Eigen::MatrixXd p,
                                  Eigen::MatrixXd q);
  static DmdFluxOperator Dense(const OperatorInfo &info, Eigen::MatrixXd a);

  const OperatorInfo &info() const { return info_; }
  bool IsFactored() const { return factored_; }
  const Eigen::MatrixXd &p() const { return p_; }
  const Eigen::MatrixXd &q() const { return q_; }

  Eigen::MatrixXd ToDense() const;

  // lambda = A y, through whichever stored form needs fewer multiplies. work holds the
  // k coefficients Q y, so one operator can serve several callers.
  void ApplyInto(const Eigen::VectorXd &y, Eigen::VectorXd &lambda,
                 Eigen::VectorXd &work) const;
  Eigen::VectorXd Apply(const Eigen::VectorXd &y) const;

private:
  DmdFluxOperator() = default;
  void Prepare();

  OperatorInfo info_;
  bool factored_ = false;
  Eigen::MatrixXd p_, q_;  // factored payload
  Eigen::MatrixXd a_;      // dense payload, or cached product when cheaper to apply
  bool use_dense_ = false;
};

// Singular values below this fraction of the largest are treated as zero in Sigma^+.
inline constexpr double kPseudoInverseCutoff = 1.0e-14;

// Truncated-SVD DMD of the snapshot set with the rank picked by the energy threshold.
DmdFluxOperator TrainFluxOperator(const SnapshotSet &snap, double eps);

// Relative l2 errors |A y_j - lambda_{j+1}| / |lambda_{j+1}| over the snapshot columns;
// columns with a zero target report the absolute error.
std::vector<double> ReplayErrors(const DmdFluxOperator &op, const SnapshotSet &snap);

struct TrainingOptions
{
  double dt = 0.0;
  double eps = 1.0e-13;
  int patch_size = 2;
  double spacing_factor = 2.0;  // Gaussian centers every spacing_factor * h
  double width_factor = 2.0;    // standard deviation width_factor * h
};

// IVR(C) runs of the problem's source and boundary data started from every Gaussian of
// the training set, collected into one snapshot set tagged with the problem's kappas.
SnapshotSet GenerateTrainingSnapshots(const CoupledProblem &problem,
                                      const TrainingOptions &options);

enum class Bootstrap
{
  Zero,   // lambda_{-1} = 0
  Schur,  // lambda_0 from one IVR(C) solve
};

// Online DMD-FS synchronization: lambda_k = A (lambda_{k-1}, u_{1,k}|patch, u_{2,k}|patch).
class DmdSynchronizer : public Synchronizer
{
public:
  DmdSynchronizer(std::shared_ptr<const DmdFluxOperator> op, const CoupledProblem &problem,
                  Bootstrap bootstrap = Bootstrap::Zero,
                  std::shared_ptr<const SchurSystem> schur = nullptr);

  void Reset() override;
  void Synchronize(const SyncInput &in, Eigen::VectorXd &lambda) override;
  std::string Name() const override { return "dmdfs"; }

private:
  std::shared_ptr<const DmdFluxOperator> op_;
  Bootstrap bootstrap_;
  std::shared_ptr<const SchurSystem> schur_;
  std::vector<int> patch1_, patch2_;
  Eigen::VectorXd y_, rhs_, work_;
};

struct ParameterSample
{
  double mu1 = 0.0, mu2 = 0.0;
  std::shared_ptr<const DmdFluxOperator> op;
};

// Tensor-product Lagrange weights of the samples inside the ball B(mu, radius). The
// selected samples must form a full tensor grid whose bounding box contains mu.
std::vector<double> RkoiWeights(std::span<const ParameterSample> samples, double mu1,
                                double mu2,
                                double radius = std::numeric_limits<double>::infinity());

// A(mu) = sum_j l_j(mu) A(mu_j), stored densely.
DmdFluxOperator Rkoi(std::span<const ParameterSample> samples, double mu1, double mu2,
                     double radius = std::numeric_limits<double>::infinity());

}  // namespace partflux

#endif  // PARTFLUX_SURROGATE_HPP
