// SPDX-License-Identifier: Apache-2.0

#ifndef PARTFLUX_EXPERIMENT_HPP
#define PARTFLUX_EXPERIMENT_HPP

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>
#include "partflux/metrics.hpp"
#include "partflux/surrogate.hpp"

namespace partflux
{

//
// Settings of one experiment. The text form is line-oriented "key = value" with "#"
// comments; keys are the field names below.
//
struct RunConfig
{
  int grid = 64;
  std::string scenario = "patch";  // patch | combination
  double kappa1 = 1.0e-3, kappa2 = 1.0e-3;
  std::string scheme = "ivrc";  // monolithic | ivrc | ivrl | dmdfs
  double dt = 0.0;              // 0 picks the default for the grid
  double eps = 1.0e-13;
  int patch_size = 2;
  std::vector<double> train_kappa1, train_kappa2;  // sample grid; empty trains at kappa
  std::string bootstrap = "zero";                  // zero | schur
  std::string initial = "projection";              // projection | interpolation
  double spacing_factor = 2.0, width_factor = 2.0;
  std::string operators = "operators";  // directory holding the trained operators
  std::string output = "out";
  int repeats = 3;
  unsigned seed = 0;  // reserved

  // Sets one field from its text form; unknown keys and bad values throw.
  void Set(std::string_view key, std::string_view value);
  // Checks cross-field requirements.
  void Validate() const;

  static RunConfig Parse(std::string_view text);
  std::string Serialize() const;
  bool operator==(const RunConfig &) const = default;
};

RunConfig LoadConfig(const std::filesystem::path &path);

double TimeStepOf(const RunConfig &config);
Scenario MakeScenario(const RunConfig &config, double kappa1, double kappa2);

struct OperatorRecord
{
  std::string file;
  double mu1 = 0.0, mu2 = 0.0;
  int rank = 0;
};

// Trains one operator per sample of the tensor grid (or at the query kappas), writes
// them with a manifest into config.operators and returns the manifest entries.
std::vector<OperatorRecord> TrainCommand(const RunConfig &config);

std::vector<OperatorRecord> ReadManifest(const std::filesystem::path &dir);

// Flux operator for the query kappas: the trained one at a sample, interpolated otherwise.
std::shared_ptr<const DmdFluxOperator> OperatorForQuery(const RunConfig &config);

struct SolveResult
{
  std::string scheme;
  CoupledState final_state;  // monolithic runs are restricted to the subdomains
  std::vector<Eigen::VectorXd> lambda;
  double loop_seconds = 0.0;
  double sync_seconds = 0.0;
};

// Runs config.scheme once. Offline setup (assembly, factorizations, operator loading)
// is outside the timed loop.
SolveResult RunScheme(const RunConfig &config, const std::string &scheme);

// RunScheme plus CSV output of the final nodal solution and the flux history.
SolveResult SolveCommand(const RunConfig &config);

struct CompareRow
{
  std::string scheme;
  RelativeError error;
  double online_seconds = 0.0;  // median loop time
  double speedup = 0.0;         // median of time(ivrc) / time(scheme) over the repeats
};

// Every scheme against the monolithic benchmark; dmdfs is included when operators exist.
std::vector<CompareRow> CompareCommand(const RunConfig &config);

struct BenchRow
{
  std::string scheme;
  double sync_seconds = 0.0;  // median synchronize time per run
  double loop_seconds = 0.0;  // median loop time per run
};

std::vector<BenchRow> BenchCommand(const RunConfig &config);

double Median(std::vector<double> values);

}  // namespace partflux

#endif  // PARTFLUX_EXPERIMENT_HPP
