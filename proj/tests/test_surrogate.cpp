// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <random>
#include "partflux/error.hpp"
#include "partflux/surrogate.hpp"

using namespace partflux;

namespace
{

Eigen::MatrixXd Random(int rows, int cols, unsigned seed)
{
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  return Eigen::MatrixXd::NullaryExpr(rows, cols, [&]() { return dist(gen); });
}

// Snapshot pairs generated by an exact linear flux map.
SnapshotSet LinearSnapshots(const StaggeredLayout &layout, const Eigen::MatrixXd &a,
                            const Eigen::MatrixXd &y)
{
  SnapshotSet s;
  s.layout = layout;
  s.y = y;
  s.next_lambda = a * y;
  s.offsets = {0, static_cast<int>(y.cols())};
  return s;
}

std::shared_ptr<const DmdFluxOperator> Constant(const StaggeredLayout &layout, double value)
{
  OperatorInfo info;
  info.layout = layout;
  info.rank = 1;
  return std::make_shared<DmdFluxOperator>(DmdFluxOperator::Dense(
      info, Eigen::MatrixXd::Constant(layout.num_interface, layout.Size(), value)));
}

Trajectory RecordedRun(const CoupledProblem &problem, double dt)
{
  SchurSynchronizer sync(std::make_shared<SchurSystem>(
      BuildSchur(problem.ops(1), problem.ops(2), MassVariant::Consistent)));
  RunOptions opts;
  opts.patch_size = 2;
  return RunPartitioned(sync, problem, dt, opts);
}

const StaggeredLayout kSmall{3, 1, 4};

}  // namespace

TEST_CASE("staggered state layout")
{
  const StaggeredLayout layout{63, 2, 64};
  CHECK(layout.Size() == 315);
  CHECK(layout.PatchLength() == 126);

  const Eigen::VectorXd l = Eigen::VectorXd::Constant(3, 1.0);
  const Eigen::VectorXd p1 = Eigen::VectorXd::Constant(3, 2.0);
  const Eigen::VectorXd p2 = Eigen::VectorXd::Constant(3, 3.0);
  const Eigen::VectorXd y = AssembleStaggered(kSmall, l, p1, p2);
  CHECK(y.size() == 9);
  CHECK(y(0) == 1.0);
  CHECK(y(3) == 2.0);
  CHECK(y(8) == 3.0);
  Eigen::VectorXd a, b, c;
  SplitStaggered(kSmall, y, a, b, c);
  CHECK(a == l);
  CHECK(b == p1);
  CHECK(c == p2);
  CHECK_THROWS_AS(AssembleStaggered(kSmall, l, p1, Eigen::VectorXd(2)), Error);
}

TEST_CASE("full-rank linear map is recovered exactly")
{
  const Eigen::MatrixXd a = Random(3, 9, 1);
  const SnapshotSet snap = LinearSnapshots(kSmall, a, Random(9, 60, 2));
  const DmdFluxOperator op = TrainFluxOperator(snap, 1e-14);
  CHECK(op.info().rank == 9);
  CHECK(op.IsFactored());
  CHECK((op.ToDense() - a).norm() <= 1e-12 * a.norm());
  for (double e : ReplayErrors(op, snap))
  {
    CHECK(e <= 1e-12);
  }
}

TEST_CASE("map on a low-dimensional orbit")
{
  // States confined to a 4-dimensional subspace: the rank follows the data and the
  // trained operator acts like the true one on that subspace.
  const Eigen::MatrixXd basis = Random(9, 4, 3);
  const Eigen::MatrixXd y = basis * Random(4, 40, 4);
  const Eigen::MatrixXd a = Random(3, 9, 5);
  const SnapshotSet snap = LinearSnapshots(kSmall, a, y);
  const DmdFluxOperator op = TrainFluxOperator(snap, 1e-12);
  CHECK(op.info().rank == 4);
  const Eigen::VectorXd probe = basis * Eigen::Vector4d(0.3, -1.0, 2.0, 0.5);
  CHECK((op.Apply(probe) - a * probe).norm() <= 1e-10 * (a * probe).norm());
}

TEST_CASE("looser thresholds give smaller ranks")
{
  const Eigen::MatrixXd y = Random(9, 30, 6) * Eigen::VectorXd::LinSpaced(30, 1.0, 1e-4).asDiagonal();
  const SnapshotSet snap = LinearSnapshots(kSmall, Random(3, 9, 7), y);
  int prev = 0;
  for (double eps : {1e-1, 1e-3, 1e-6, 1e-12})
  {
    const int k = TrainFluxOperator(snap, eps).info().rank;
    CHECK(k >= prev);
    prev = k;
  }
}

TEST_CASE("operator application")
{
  OperatorInfo info;
  info.layout = kSmall;
  info.rank = 2;
  const Eigen::MatrixXd p = Random(3, 2, 8), q = Random(2, 9, 9);
  const DmdFluxOperator f = DmdFluxOperator::Factored(info, p, q);
  const DmdFluxOperator d = DmdFluxOperator::Dense(info, p * q);
  CHECK(f.Apply(Eigen::VectorXd::Zero(9)).norm() == 0.0);
  const Eigen::VectorXd y = Random(9, 1, 10);
  CHECK((f.Apply(y) - d.Apply(y)).norm() <= 1e-14);
  CHECK_THROWS_AS(f.Apply(Eigen::VectorXd::Zero(8)), Error);
  CHECK_THROWS_AS(DmdFluxOperator::Factored(info, p, Random(2, 8, 1)), Error);
}

TEST_CASE("training rejects empty or zero data")
{
  SnapshotSet empty;
  empty.layout = kSmall;
  empty.y.resize(9, 0);
  empty.next_lambda.resize(3, 0);
  CHECK_THROWS_AS(TrainFluxOperator(empty, 1e-8), Error);
  const SnapshotSet zero = LinearSnapshots(kSmall, Random(3, 9, 1), Eigen::MatrixXd::Zero(9, 5));
  CHECK_THROWS_AS(TrainFluxOperator(zero, 1e-8), Error);
}

TEST_CASE("snapshots from a coupled run")
{
  Scenario s = PatchScenario(1e-3, 1e-3);
  s.final_time = 0.1;
  const CoupledProblem problem(DomainSpec{8}, s);
  const Trajectory traj = RecordedRun(problem, 0.025);
  REQUIRE(traj.steps == 4);
  const SnapshotSet snap = CollectSnapshots(std::span(&traj, 1), 1e-3, 1e-3);
  CHECK(snap.layout == StaggeredLayout{7, 2, 8});
  CHECK(snap.NumColumns() == 3);
  CHECK(snap.offsets == std::vector<int>{0, 3});
  // Column j pairs lambda_j with the patches at t_{j+1}; its successor holds lambda_{j+1}.
  CHECK(snap.y.col(1).head(7) == traj.lambda[1]);
  CHECK(snap.y.col(1).segment(7, 14) == traj.patch1[2]);
  CHECK(snap.next_lambda.col(1) == traj.lambda[2]);

  const std::vector<Trajectory> two{traj, traj};
  const SnapshotSet both = CollectSnapshots(two);
  CHECK(both.NumColumns() == 6);
  CHECK(both.NumTrajectories() == 2);

  Trajectory bare = traj;
  bare.patch1.clear();
  CHECK_THROWS_AS(CollectSnapshots(std::span(&bare, 1)), Error);

  Scenario s2 = s;
  const Trajectory other = RecordedRun(CoupledProblem(DomainSpec{4}, s2), 0.025);
  const std::vector<Trajectory> mixed{traj, other};
  try
  {
    CollectSnapshots(mixed);
    FAIL("mixed layouts accepted");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::LayoutMismatch);
  }
}

TEST_CASE("gaussian training snapshots")
{
  Scenario s = CombinationScenario(1e-3, 2e-3);
  s.final_time = 0.1;
  const CoupledProblem problem(DomainSpec{8}, s);
  TrainingOptions opts;
  opts.dt = 0.025;
  opts.spacing_factor = 1.0;  // centers at x = 1/8, 2/8, 3/8
  const SnapshotSet snap = GenerateTrainingSnapshots(problem, opts);
  CHECK(snap.NumTrajectories() == 3);
  CHECK(snap.NumColumns() == 9);
  CHECK(snap.mu1 == 1e-3);
  CHECK(snap.mu2 == 2e-3);
}

TEST_CASE("dmd synchronizer")
{
  Scenario s = PatchScenario(1e-3, 1e-3);
  s.final_time = 0.1;
  const CoupledProblem problem(DomainSpec{8}, s);
  const auto schur = std::make_shared<SchurSystem>(
      BuildSchur(problem.ops(1), problem.ops(2), MassVariant::Consistent));

  CHECK_THROWS_AS(DmdSynchronizer(Constant(kSmall, 0.0), problem), Error);

  // A zero operator with the Schur bootstrap gives the consistent flux at step 0 only.
  const StaggeredLayout layout{7, 2, 8};
  DmdSynchronizer dmd(Constant(layout, 0.0), problem, Bootstrap::Schur, schur);
  SchurSynchronizer ivr(schur);
  RunOptions opts;
  const Trajectory a = RunPartitioned(dmd, problem, 0.025, opts);
  const Trajectory b = RunPartitioned(ivr, problem, 0.025, opts);
  CHECK((a.lambda[0] - b.lambda[0]).norm() <= 1e-14 * b.lambda[0].norm());
  CHECK(a.lambda[1].norm() == 0.0);

  DmdSynchronizer zero(Constant(layout, 0.0), problem);
  CHECK(RunPartitioned(zero, problem, 0.025, opts).lambda[0].norm() == 0.0);
}

TEST_CASE("rkoi weights")
{
  std::vector<ParameterSample> corners;
  for (double m1 : {1.0, 2.0})
  {
    for (double m2 : {3.0, 4.0})
    {
      corners.push_back({m1, m2, Constant(kSmall, m1 + 10 * m2)});
    }
  }
  for (std::size_t j = 0; j < corners.size(); j++)
  {
    const auto w = RkoiWeights(corners, corners[j].mu1, corners[j].mu2);
    for (std::size_t i = 0; i < w.size(); i++)
    {
      CHECK(w[i] == (i == j ? 1.0 : 0.0));
    }
  }
  const auto mid = RkoiWeights(corners, 1.5, 3.0);
  CHECK(mid[0] == doctest::Approx(0.5));
  CHECK(mid[2] == doctest::Approx(0.5));
  CHECK(mid[1] == 0.0);
  for (double w : RkoiWeights(corners, 1.5, 3.5))
  {
    CHECK(w == doctest::Approx(0.25));
  }
  const DmdFluxOperator center = Rkoi(corners, 1.5, 3.5);
  CHECK(center.ToDense()(1, 4) == doctest::Approx(1.5 + 35.0));

  try
  {
    RkoiWeights(corners, 2.5, 3.5);
    FAIL("query outside the samples accepted");
  }
  catch (const Error &e)
  {
    CHECK(e.kind() == ErrorKind::HullViolation);
  }
  std::vector<ParameterSample> three(corners.begin(), corners.begin() + 3);
  CHECK_THROWS_AS(RkoiWeights(three, 1.2, 3.2), Error);
}

TEST_CASE("rkoi on a 3x3 grid")
{
  // Biquadratic data are reproduced by the tensor Lagrange weights.
  const auto f = [](double a, double b) { return 1.0 + a - 2.0 * a * a + a * b * b + b; };
  std::vector<ParameterSample> grid;
  for (double m1 : {1.0, 2.0, 3.0})
  {
    for (double m2 : {1.0, 2.0, 3.0})
    {
      grid.push_back({m1, m2, Constant(kSmall, f(m1, m2))});
    }
  }
  const DmdFluxOperator op = Rkoi(grid, 1.3, 2.6);
  CHECK(op.ToDense()(0, 0) == doctest::Approx(f(1.3, 2.6)).epsilon(1e-12));

  // A radius covering only the lower-left cell falls back to bilinear weights.
  const auto w = RkoiWeights(grid, 1.5, 1.5, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < w.size(); i++)
  {
    const bool cell = grid[i].mu1 <= 2.0 && grid[i].mu2 <= 2.0;
    CHECK((cell ? w[i] == doctest::Approx(0.25) : w[i] == 0.0));
    total += w[i];
  }
  CHECK(total == doctest::Approx(1.0));
}
