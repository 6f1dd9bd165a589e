// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runs. Prints one PASS/FAIL line per criterion followed by its measured
// values, also written to the file given with --report. The exit status is 0 once every
// criterion has been evaluated; with --strict it is the number of failed criteria.
//

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>
#include "partflux/error.hpp"
#include "partflux/experiment.hpp"
#include "partflux/linalg.hpp"
#include "partflux/metrics.hpp"
#include "partflux/operator_io.hpp"
#include "partflux/surrogate.hpp"

using namespace partflux;

namespace
{

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string Fmt(const char *format, auto... args)
{
  char buf[512];
  std::snprintf(buf, sizeof buf, format, args...);
  return buf;
}

std::map<int, std::string> g_results;
int g_failed = 0;

// Criteria are evaluated in the order that shares the most work; lines are printed by id.
void Report(int id, bool pass, const std::string &detail)
{
  g_results[id] = Fmt("criterion %2d: %s  %s", id, pass ? "PASS" : "FAIL", detail.c_str());
  std::fprintf(stderr, "[%s]\n", g_results[id].c_str());
  g_failed += pass ? 0 : 1;
}

double Now()
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

SpaceTimeField PatchExact(double k1, double k2)
{
  return [k1, k2](int side, double x, double y, double t)
  { return PatchSolution(k1, k2, side, x, y, t); };
}

std::shared_ptr<const SchurSystem> Schur(const CoupledProblem &problem, MassVariant v)
{
  return std::make_shared<SchurSystem>(BuildSchur(problem.ops(1), problem.ops(2), v));
}

Trajectory RunIvr(const CoupledProblem &problem, MassVariant v, double dt,
                  bool record_states = false)
{
  SchurSynchronizer sync(Schur(problem, v));
  RunOptions opts;
  opts.variant = v;
  opts.record_states = record_states;
  return RunPartitioned(sync, problem, dt, opts);
}

// Closed-loop DMD-FS run; instabilities are returned as a message instead of thrown.
struct DmdRun
{
  bool ok = false;
  Trajectory traj;
  std::string failure;
};

DmdRun RunDmd(const CoupledProblem &problem, std::shared_ptr<const DmdFluxOperator> op,
              double dt)
{
  DmdRun run;
  try
  {
    DmdSynchronizer sync(std::move(op), problem);
    run.traj = RunPartitioned(sync, problem, dt, RunOptions{});
    run.ok = true;
  }
  catch (const Error &e)
  {
    run.failure = std::string(ToString(e.kind())) + ": " + e.what();
  }
  return run;
}

struct Trained
{
  SnapshotSet snap;
  std::shared_ptr<const DmdFluxOperator> op;
};

Trained Train(const CoupledProblem &problem, double dt, double eps)
{
  TrainingOptions opts;
  opts.dt = dt;
  opts.eps = eps;
  Trained t;
  t.snap = GenerateTrainingSnapshots(problem, opts);
  t.op = std::make_shared<DmdFluxOperator>(TrainFluxOperator(t.snap, eps));
  return t;
}

// Largest relative nodal difference over all time levels, both subdomains together.
double MaxNodalDifference(const CoupledProblem &problem, const Trajectory &traj,
                          const MonolithicTrajectory &mono)
{
  const SubdomainMesh full = BuildFullMesh(problem.spec());
  const Scenario &s = problem.scenario();
  double worst = 0.0;
  for (std::size_t k = 0; k < traj.states.size(); k++)
  {
    const double t = traj.states[k].t;
    const Eigen::VectorXd m = ExpandToNodes(full, mono.states[k], s, k * mono.dt);
    double diff = 0.0, scale = 0.0;
    for (int side : {1, 2})
    {
      const SubdomainMesh &mesh = problem.mesh(side);
      const Eigen::VectorXd &u = side == 1 ? traj.states[k].u1 : traj.states[k].u2;
      const Eigen::VectorXd x = ExpandToNodes(mesh, u, s, t);
      const Eigen::VectorXd ref = RestrictNodes(full, m, mesh);
      diff = std::max(diff, (x - ref).cwiseAbs().maxCoeff());
      scale = std::max(scale, ref.cwiseAbs().maxCoeff());
    }
    worst = std::max(worst, scale > 0.0 ? diff / scale : (diff > 0.0 ? kInf : 0.0));
  }
  return worst;
}

// Shared single-material patch-test data at N = 64.
struct SinglePatch64
{
  std::unique_ptr<CoupledProblem> problem;
  double dt = 0.0;
  Trained trained;
};

// ---------------------------------------------------------------------------------------

void Criterion1()
{
  const double k1 = 1.5e-3, k2 = 2.5e-3, dt = DefaultTimeStep(64);
  const CoupledProblem problem(DomainSpec{64}, PatchScenario(k1, k2));
  const Trajectory traj = RunIvr(problem, MassVariant::Consistent, dt);
  const RelativeError e = CompareToField(problem, traj.final_state, PatchExact(k1, k2));
  Report(1, e.l2 <= 1e-10 && e.h1 <= 1e-8,
         Fmt("multi-material patch N=64: E0=%.3e (<=1e-10) E1=%.3e (<=1e-8)", e.l2, e.h1));
}

void Criterion2()
{
  bool pass = true;
  std::string detail = "max relative nodal difference:";
  for (const char *name : {"patch", "combination"})
  {
    for (int n : {16, 32})
    {
      const Scenario s = std::string(name) == "patch" ? PatchScenario(1e-3, 1e-3)
                                                      : CombinationScenario(1e-3, 1e-3);
      const double dt = DefaultTimeStep(n);
      const CoupledProblem problem(DomainSpec{n}, s);
      const Trajectory traj = RunIvr(problem, MassVariant::Consistent, dt, true);
      const MonolithicTrajectory mono =
          RunMonolithic(DomainSpec{n}, s, dt, InitialMethod::Projection, true);
      const double d = MaxNodalDifference(problem, traj, mono);
      pass = pass && d <= 1e-10;
      detail += Fmt(" %s/N=%d %.2e", name, n, d);
    }
  }
  Report(2, pass, detail + " (<=1e-10)");
}

void Criterion3And4(SinglePatch64 &shared)
{
  const double ref[] = {1.16e-3, 4.17e-4, 1.49e-4};
  const int grids[] = {16, 32, 64};
  double ec[3], el[3];
  for (int i = 0; i < 3; i++)
  {
    const int n = grids[i];
    const double dt = DefaultTimeStep(n);
    auto problem = std::make_unique<CoupledProblem>(DomainSpec{n}, PatchScenario(1e-3, 1e-3));
    ec[i] = CompareToField(*problem, RunIvr(*problem, MassVariant::Consistent, dt).final_state,
                           PatchExact(1e-3, 1e-3))
                .l2;
    el[i] = CompareToField(*problem, RunIvr(*problem, MassVariant::Lumped, dt).final_state,
                           PatchExact(1e-3, 1e-3))
                .l2;
    if (n == 64)
    {
      shared.problem = std::move(problem);
      shared.dt = dt;
    }
  }
  Report(3, std::max({ec[0], ec[1], ec[2]}) <= 1e-10,
         Fmt("IVR(C) single patch E0: N=16 %.2e, N=32 %.2e, N=64 %.2e (<=1e-10)", ec[0], ec[1],
             ec[2]));

  const double r1 = el[0] / el[1], r2 = el[1] / el[2];
  bool pass = el[0] > el[1] && el[1] > el[2] && r1 >= 1.5 && r1 <= 4.0 && r2 >= 1.5 &&
              r2 <= 4.0;
  for (int i = 0; i < 3; i++)
  {
    pass = pass && el[i] >= ref[i] / 3.0 && el[i] <= ref[i] * 3.0;
  }
  Report(4, pass,
         Fmt("IVR(L) single patch E0: %.3e, %.3e, %.3e; ratios %.2f, %.2f (in [1.5,4]); "
             "reference %.2e, %.2e, %.2e (within x3)",
             el[0], el[1], el[2], r1, r2, ref[0], ref[1], ref[2]));
}

void Criterion9And5(SinglePatch64 &shared)
{
  const double eps = 1e-13;
  shared.trained = Train(*shared.problem, shared.dt, eps);
  const SnapshotSet &snap = shared.trained.snap;
  const int k = shared.trained.op->info().rank;
  const ThinSvd svd = ComputeThinSvd(snap.y);
  const std::span<const double> sigma(svd.sigma.data(), svd.sigma.size());
  const double deficit = EnergyDeficit(sigma, k);
  const double below = k > 1 ? EnergyDeficit(sigma, k - 1) : kInf;
  const bool minimal = deficit <= eps && below > eps && SelectRank(sigma, eps) == k;
  Report(9, k >= 25 && k <= 65 && minimal,
         Fmt("N=64 patch, eps=1e-13: rank %d (in [25,65]); deficit(k)=%.2e <= eps, "
             "deficit(k-1)=%.2e > eps: %s",
             k, deficit, below, minimal ? "minimal" : "NOT minimal"));

  const std::vector<double> err = ReplayErrors(*shared.trained.op, snap);
  std::vector<double> sorted = err;
  std::sort(sorted.begin(), sorted.end());
  const auto over = std::count_if(err.begin(), err.end(), [](double e) { return e > 1e-6; });
  Report(5, sorted.back() <= 1e-6,
         Fmt("replay over %zu training steps: max %.2e, median %.2e, %td steps above 1e-6",
             err.size(), sorted.back(), sorted[sorted.size() / 2], over));
}

void Criterion6()
{
  const int n = 32;
  const double dt = DefaultTimeStep(n);
  const CoupledProblem problem(DomainSpec{n}, PatchScenario(1e-3, 1e-3));
  const Trained trained = Train(problem, dt, 1e-11);
  const DmdRun run = RunDmd(problem, trained.op, dt);
  if (!run.ok)
  {
    Report(6, false, "DMD-FS run failed: " + run.failure);
    return;
  }
  const RelativeError e = CompareToField(problem, run.traj.final_state, PatchExact(1e-3, 1e-3));
  Report(6, e.l2 <= 1e-4,
         Fmt("N=32 single patch, eps=1e-11, rank %d: DMD-FS E0=%.3e (<=1e-4)",
             trained.op->info().rank, e.l2));
}

void Criterion7And8()
{
  const int n = 64;
  const double dt = DefaultTimeStep(n), eps = 1e-13;
  const double q1 = 1.5e-3, q2 = 3.5e-3;
  std::vector<ParameterSample> samples;
  std::string ranks;
  for (double m1 : {1e-3, 2e-3})
  {
    for (double m2 : {3e-3, 4e-3})
    {
      const CoupledProblem corner(DomainSpec{n}, CombinationScenario(m1, m2));
      samples.push_back({m1, m2, Train(corner, dt, eps).op});
      ranks += Fmt(" %d", samples.back().op->info().rank);
    }
  }

  double worst = 0.0;
  for (const ParameterSample &s : samples)
  {
    const Eigen::MatrixXd a = s.op->ToDense();
    worst = std::max(worst, (Rkoi(samples, s.mu1, s.mu2).ToDense() - a).norm() / a.norm());
  }
  Report(8, worst <= 1e-12,
         Fmt("rKOI at the four training corners: max relative Frobenius difference %.2e "
             "(<=1e-12)",
             worst));

  const CoupledProblem problem(DomainSpec{n}, CombinationScenario(q1, q2));
  const MonolithicTrajectory mono = RunMonolithic(DomainSpec{n}, problem.scenario(), dt);
  const RelativeError el =
      CompareToMonolithic(problem, RunIvr(problem, MassVariant::Lumped, dt).final_state, mono);
  const auto op = std::make_shared<DmdFluxOperator>(Rkoi(samples, q1, q2));
  const DmdRun run = RunDmd(problem, op, dt);
  double ed = run.ok ? CompareToMonolithic(problem, run.traj.final_state, mono).l2 : kInf;
  ed = std::isfinite(ed) ? ed : kInf;
  std::string detail = Fmt("combination N=64, corner ranks%s, query (1.5,3.5)e-3: ", ranks.c_str());
  if (!run.ok)
  {
    detail += "DMD-FS diverged (" + run.failure + ")";
  }
  else if (!std::isfinite(ed))
  {
    const double peak = std::max(run.traj.final_state.u1.cwiseAbs().maxCoeff(),
                                 run.traj.final_state.u2.cwiseAbs().maxCoeff());
    detail += Fmt("DMD-FS diverged (max |u(T)| = %.2e, error norm overflows)", peak);
  }
  else
  {
    detail += Fmt("DMD-FS E0=%.3e (<=3e-2)", ed);
  }
  detail += Fmt(", IVR(L) E0=%.3e", el.l2);
  Report(7, ed <= 3e-2 && ed < el.l2, detail);
}

void Criterion10(const SinglePatch64 &shared)
{
  const CoupledProblem &problem = *shared.problem;
  const int repeats = 3;
  const auto schur_c = Schur(problem, MassVariant::Consistent);
  const auto schur_l = Schur(problem, MassVariant::Lumped);
  std::map<std::string, std::vector<double>> sync;
  for (int r = 0; r < repeats; r++)
  {
    for (MassVariant v : {MassVariant::Consistent, MassVariant::Lumped})
    {
      SchurSynchronizer s(v == MassVariant::Consistent ? schur_c : schur_l);
      RunOptions opts;
      opts.variant = v;
      sync[s.Name()].push_back(RunPartitioned(s, problem, shared.dt, opts).sync_seconds);
    }
    DmdSynchronizer d(shared.trained.op, problem);
    sync["dmdfs"].push_back(RunPartitioned(d, problem, shared.dt, RunOptions{}).sync_seconds);
  }
  const double tc = Median(sync["ivrc"]), tl = Median(sync["ivrl"]), td = Median(sync["dmdfs"]);
  Report(10, td < tl && tl < tc && tc / td >= 3.0,
         Fmt("N=64 median sync seconds: DMD-FS %.4f, IVR(L) %.4f, IVR(C) %.4f; "
             "speedup DMD-FS vs IVR(C) %.1f (>=3)",
             td, tl, tc, tc / td));
}

void Criterion11()
{
  std::vector<std::string> broken;
  for (int n : {2, 4, 8, 16, 32, 64})
  {
    const CoupledProblem problem(DomainSpec{n}, PatchScenario(1e-3, 2e-3));
    for (MassVariant v : {MassVariant::Consistent, MassVariant::Lumped})
    {
      try
      {
        BuildSchur(problem.ops(1), problem.ops(2), v);
      }
      catch (const Error &e)
      {
        broken.push_back(Fmt("Schur N=%d: %s", n, e.what()));
      }
    }
    if (problem.ops(1).constraint != problem.ops(2).constraint)
    {
      broken.push_back(Fmt("G1 != G2 at N=%d", n));
    }
    const Eigen::VectorXd lambda = Eigen::VectorXd::LinSpaced(problem.NumInterface(), 1.0, 2.0);
    Eigen::VectorXd f1 = Eigen::VectorXd::Zero(problem.ops(1).num_free);
    Eigen::VectorXd f2 = Eigen::VectorXd::Zero(problem.ops(2).num_free);
    AddInterfaceLoad(problem.ops(1), lambda, f1);
    AddInterfaceLoad(problem.ops(2), lambda, f2);
    if ((f1 + f2).norm() != 0.0)
    {
      broken.push_back(Fmt("action-reaction at N=%d", n));
    }
  }

  std::vector<double> sigma(60);
  for (std::size_t i = 0; i < sigma.size(); i++)
  {
    sigma[i] = std::pow(0.6, static_cast<double>(i));
  }
  int prev = 0;
  for (double eps = 0.5; eps > 1e-15; eps /= 10.0)
  {
    const int k = SelectRank(sigma, eps);
    if (k < prev || EnergyDeficit(sigma, k) > eps)
    {
      broken.push_back(Fmt("select_rank at eps=%.0e", eps));
    }
    prev = k;
  }

  OperatorInfo info;
  info.layout = StaggeredLayout{7, 2, 8};
  info.rank = 3;
  info.eps = 1e-13;
  const DmdFluxOperator op = DmdFluxOperator::Factored(
      info, Eigen::MatrixXd::Random(7, 3), Eigen::MatrixXd::Random(3, 35));
  const std::string bytes = SerializeOperator(op);
  if (SerializeOperator(DeserializeOperator(bytes)) != bytes)
  {
    broken.push_back("operator round trip");
  }

  auto [left, right] = BuildMeshes(DomainSpec{16});
  const ErrorNorm norm(left, right);
  const Eigen::VectorXd m1 = Eigen::VectorXd::Random(left.NumNodes());
  const Eigen::VectorXd m2 = Eigen::VectorXd::Random(right.NumNodes());
  const RelativeError e = norm.Relative(2 * m1, 2 * m2, m1, m2);
  if (std::abs(e.l2 - 1.0) > 1e-12 || std::abs(e.h1 - 1.0) > 1e-12)
  {
    broken.push_back("relative error homogeneity");
  }

  std::string detail = "Schur SPD, action-reaction, rank selection, persistence, homogeneity";
  for (const std::string &b : broken)
  {
    detail += "; broken: " + b;
  }
  Report(11, broken.empty(), detail);
}

}  // namespace

int main(int argc, char **argv)
{
  bool strict = false;
  const char *report = nullptr;
  for (int i = 1; i < argc; i++)
  {
    if (std::strcmp(argv[i], "--strict") == 0)
      strict = true;
    else if (std::strcmp(argv[i], "--report") == 0 && i + 1 < argc)
      report = argv[++i];
  }
  const double start = Now();
  try
  {
    Criterion11();
    Criterion1();
    Criterion2();
    SinglePatch64 shared;
    Criterion3And4(shared);
    Criterion9And5(shared);
    Criterion6();
    Criterion10(shared);
    Criterion7And8();
  }
  catch (const std::exception &e)
  {
    std::printf("acceptance aborted: %s\n", e.what());
    return 100;
  }
  std::string summary;
  for (const auto &[id, line] : g_results)
  {
    summary += line + "\n";
  }
  summary += Fmt("%d of %zu criteria failed (%.0f s)\n", g_failed, g_results.size(), Now() - start);
  std::fputs(summary.c_str(), stdout);
  if (report != nullptr)
  {
    if (std::FILE *f = std::fopen(report, "w"))
    {
      std::fputs(summary.c_str(), f);
      std::fclose(f);
    }
  }
  return strict ? g_failed : 0;
}
