// SPDX-License-Identifier: Apache-2.0

#include "partflux/experiment.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include "partflux/error.hpp"
#include "partflux/operator_io.hpp"

namespace partflux
{

namespace
{

constexpr const char *kManifest = "manifest.txt";

std::string_view Trim(std::string_view s)
{
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos)
  {
    return {};
  }
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

double ParseDouble(std::string_view key, std::string_view text)
{
  text = Trim(text);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  Require(ec == std::errc() && ptr == text.data() + text.size() && std::isfinite(v),
          ErrorKind::Format,
          "bad number '" + std::string(text) + "' for key " + std::string(key));
  return v;
}

long ParseInt(std::string_view key, std::string_view text)
{
  text = Trim(text);
  long v = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  Require(ec == std::errc() && ptr == text.data() + text.size(), ErrorKind::Format,
          "bad integer '" + std::string(text) + "' for key " + std::string(key));
  return v;
}

std::vector<double> ParseList(std::string_view key, std::string_view text)
{
  std::vector<double> out;
  std::string item;
  std::istringstream in{std::string(text)};
  while (std::getline(in, item, ','))
  {
    if (!Trim(item).empty())
    {
      out.push_back(ParseDouble(key, item));
    }
  }
  return out;
}

std::string FormatDouble(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string Sci(double v)
{
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.6e", v);
  return buf;
}

std::string JoinList(const std::vector<double> &v)
{
  std::string out;
  for (std::size_t i = 0; i < v.size(); i++)
  {
    out += (i ? ", " : "") + FormatDouble(v[i]);
  }
  return out;
}

void RequireOneOf(std::string_view key, const std::string &value,
                  std::initializer_list<std::string_view> allowed)
{
  for (std::string_view a : allowed)
  {
    if (value == a)
    {
      return;
    }
  }
  Fail(ErrorKind::InvalidArgument, "unknown " + std::string(key) + " '" + value + "'");
}

InitialMethod InitialOf(const RunConfig &config)
{
  return config.initial == "interpolation" ? InitialMethod::Interpolation
                                           : InitialMethod::Projection;
}

std::ofstream OpenOutput(const std::filesystem::path &path)
{
  if (path.has_parent_path())
  {
    std::filesystem::create_directories(path.parent_path());
  }
  std::ofstream out(path);
  Require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path.string() + " for writing");
  return out;
}

//
// Offline data shared by repeated online runs of the partitioned schemes.
//
class SchemeRunner
{
public:
  explicit SchemeRunner(const RunConfig &config)
    : config_(config), problem_(DomainSpec{config.grid},
                                MakeScenario(config, config.kappa1, config.kappa2)),
      dt_(TimeStepOf(config))
  {
  }

  const CoupledProblem &problem() const { return problem_; }
  double dt() const { return dt_; }

  Trajectory Run(const std::string &scheme)
  {
    RunOptions options;
    options.initial = InitialOf(config_);
    if (scheme == "ivrc" || scheme == "ivrl")
    {
      options.variant = scheme == "ivrc" ? MassVariant::Consistent : MassVariant::Lumped;
      SchurSynchronizer sync(Schur(options.variant));
      return RunPartitioned(sync, problem_, dt_, options);
    }
    Require(scheme == "dmdfs", ErrorKind::InvalidArgument,
            "scheme '" + scheme + "' is not partitioned");
    if (!op_)
    {
      op_ = OperatorForQuery(config_);
    }
    const bool schur = config_.bootstrap == "schur";
    DmdSynchronizer sync(op_, problem_, schur ? Bootstrap::Schur : Bootstrap::Zero,
                         schur ? Schur(MassVariant::Consistent) : nullptr);
    return RunPartitioned(sync, problem_, dt_, options);
  }

private:
  std::shared_ptr<const SchurSystem> Schur(MassVariant variant)
  {
    auto &slot = variant == MassVariant::Consistent ? consistent_ : lumped_;
    if (!slot)
    {
      slot = std::make_shared<const SchurSystem>(
          BuildSchur(problem_.ops(1), problem_.ops(2), variant));
    }
    return slot;
  }

  RunConfig config_;
  CoupledProblem problem_;
  double dt_;
  std::shared_ptr<const SchurSystem> consistent_, lumped_;
  std::shared_ptr<const DmdFluxOperator> op_;
};

bool HasOperators(const RunConfig &config)
{
  return std::filesystem::exists(std::filesystem::path(config.operators) / kManifest);
}

}  // namespace

void RunConfig::Set(std::string_view key, std::string_view value)
{
  const std::string v(Trim(value));
  if (key == "grid")
    grid = static_cast<int>(ParseInt(key, v));
  else if (key == "scenario")
    scenario = v;
  else if (key == "kappa1")
    kappa1 = ParseDouble(key, v);
  else if (key == "kappa2")
    kappa2 = ParseDouble(key, v);
  else if (key == "scheme")
    scheme = v;
  else if (key == "dt")
    dt = ParseDouble(key, v);
  else if (key == "eps")
    eps = ParseDouble(key, v);
  else if (key == "patch_size")
    patch_size = static_cast<int>(ParseInt(key, v));
  else if (key == "train_kappa1")
    train_kappa1 = ParseList(key, v);
  else if (key == "train_kappa2")
    train_kappa2 = ParseList(key, v);
  else if (key == "bootstrap")
    bootstrap = v;
  else if (key == "initial")
    initial = v;
  else if (key == "spacing_factor")
    spacing_factor = ParseDouble(key, v);
  else if (key == "width_factor")
    width_factor = ParseDouble(key, v);
  else if (key == "operators")
    operators = v;
  else if (key == "output")
    output = v;
  else if (key == "repeats")
    repeats = static_cast<int>(ParseInt(key, v));
  else if (key == "seed")
    seed = static_cast<unsigned>(ParseInt(key, v));
  else
    Fail(ErrorKind::Format, "unknown configuration key '" + std::string(key) + "'");
}

void RunConfig::Validate() const
{
  Require(grid >= 2 && grid % 2 == 0, ErrorKind::InvalidArgument,
          "grid must be even and at least 2");
  RequireOneOf("scenario", scenario, {"patch", "combination"});
  RequireOneOf("scheme", scheme, {"monolithic", "ivrc", "ivrl", "dmdfs"});
  RequireOneOf("bootstrap", bootstrap, {"zero", "schur"});
  RequireOneOf("initial", initial, {"projection", "interpolation"});
  Require(kappa1 > 0.0 && kappa2 > 0.0, ErrorKind::InvalidArgument,
          "diffusion coefficients must be positive");
  Require(dt >= 0.0, ErrorKind::InvalidArgument, "dt must be nonnegative");
  if (dt == 0.0)
    DefaultTimeStep(grid);  // throws for grids without a default step
  Require(eps > 0.0 && eps < 1.0, ErrorKind::InvalidArgument, "eps must lie in (0, 1)");
  Require(patch_size >= 1 && patch_size <= grid / 2, ErrorKind::InvalidArgument,
          "patch_size must lie in [1, grid / 2]");
  Require(train_kappa1.empty() == train_kappa2.empty(), ErrorKind::InvalidArgument,
          "train_kappa1 and train_kappa2 must be given together");
  for (double k : train_kappa1)
    Require(k > 0.0, ErrorKind::InvalidArgument, "training kappas must be positive");
  for (double k : train_kappa2)
    Require(k > 0.0, ErrorKind::InvalidArgument, "training kappas must be positive");
  Require(spacing_factor > 0.0 && width_factor > 0.0, ErrorKind::InvalidArgument,
          "Gaussian spacing and width factors must be positive");
  Require(repeats >= 1, ErrorKind::InvalidArgument, "repeats must be at least 1");
}

RunConfig RunConfig::Parse(std::string_view text)
{
  RunConfig config;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line))
  {
    lineno++;
    std::string_view s = line;
    if (const auto hash = s.find('#'); hash != std::string_view::npos)
    {
      s = s.substr(0, hash);
    }
    s = Trim(s);
    if (s.empty())
    {
      continue;
    }
    const auto eq = s.find('=');
    Require(eq != std::string_view::npos, ErrorKind::Format,
            "line " + std::to_string(lineno) + ": expected 'key = value'");
    config.Set(Trim(s.substr(0, eq)), s.substr(eq + 1));
  }
  return config;
}

std::string RunConfig::Serialize() const
{
  std::ostringstream out;
  out << "grid = " << grid << "\n"
      << "scenario = " << scenario << "\n"
      << "kappa1 = " << FormatDouble(kappa1) << "\n"
      << "kappa2 = " << FormatDouble(kappa2) << "\n"
      << "scheme = " << scheme << "\n"
      << "dt = " << FormatDouble(dt) << "\n"
      << "eps = " << FormatDouble(eps) << "\n"
      << "patch_size = " << patch_size << "\n"
      << "train_kappa1 = " << JoinList(train_kappa1) << "\n"
      << "train_kappa2 = " << JoinList(train_kappa2) << "\n"
      << "bootstrap = " << bootstrap << "\n"
      << "initial = " << initial << "\n"
      << "spacing_factor = " << FormatDouble(spacing_factor) << "\n"
      << "width_factor = " << FormatDouble(width_factor) << "\n"
      << "operators = " << operators << "\n"
      << "output = " << output << "\n"
      << "repeats = " << repeats << "\n"
      << "seed = " << seed << "\n";
  return out.str();
}

RunConfig LoadConfig(const std::filesystem::path &path)
{
  std::ifstream in(path);
  Require(static_cast<bool>(in), ErrorKind::Io, "cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  return RunConfig::Parse(buf.str());
}

double TimeStepOf(const RunConfig &config)
{
  return config.dt > 0.0 ? config.dt : DefaultTimeStep(config.grid);
}

Scenario MakeScenario(const RunConfig &config, double kappa1, double kappa2)
{
  if (config.scenario == "patch")
  {
    return PatchScenario(kappa1, kappa2);
  }
  Require(config.scenario == "combination", ErrorKind::InvalidArgument,
          "unknown scenario '" + config.scenario + "'");
  return CombinationScenario(kappa1, kappa2);
}

std::vector<OperatorRecord> TrainCommand(const RunConfig &config)
{
  config.Validate();
  std::vector<std::pair<double, double>> samples;
  if (config.train_kappa1.empty())
  {
    samples.emplace_back(config.kappa1, config.kappa2);
  }
  for (double k1 : config.train_kappa1)
  {
    for (double k2 : config.train_kappa2)
    {
      samples.emplace_back(k1, k2);
    }
  }
  const std::filesystem::path dir(config.operators);
  std::filesystem::create_directories(dir);
  TrainingOptions options;
  options.dt = TimeStepOf(config);
  options.eps = config.eps;
  options.patch_size = config.patch_size;
  options.spacing_factor = config.spacing_factor;
  options.width_factor = config.width_factor;
  std::vector<OperatorRecord> records;
  for (std::size_t j = 0; j < samples.size(); j++)
  {
    const auto [k1, k2] = samples[j];
    const CoupledProblem problem(DomainSpec{config.grid}, MakeScenario(config, k1, k2));
    const DmdFluxOperator op =
        TrainFluxOperator(GenerateTrainingSnapshots(problem, options), config.eps);
    const std::string file = "op_" + std::to_string(j) + ".dmdf";
    SaveOperator(op, dir / file);
    records.push_back({file, k1, k2, op.info().rank});
  }
  std::ofstream out = OpenOutput(dir / kManifest);
  out << "# file mu1 mu2 rank\n";
  for (const OperatorRecord &r : records)
  {
    out << r.file << " " << FormatDouble(r.mu1) << " " << FormatDouble(r.mu2) << " " << r.rank
        << "\n";
  }
  Require(static_cast<bool>(out), ErrorKind::Io, "cannot write the operator manifest");
  return records;
}

std::vector<OperatorRecord> ReadManifest(const std::filesystem::path &dir)
{
  std::ifstream in(dir / kManifest);
  Require(static_cast<bool>(in), ErrorKind::Io,
          "no operator manifest in " + dir.string() + "; run train first");
  std::vector<OperatorRecord> records;
  std::string line;
  while (std::getline(in, line))
  {
    if (Trim(line).empty() || Trim(line).front() == '#')
    {
      continue;
    }
    std::istringstream fields(line);
    OperatorRecord r;
    std::string mu1, mu2, rank;
    Require(static_cast<bool>(fields >> r.file >> mu1 >> mu2 >> rank), ErrorKind::Format,
            "bad manifest line '" + line + "'");
    r.mu1 = ParseDouble("mu1", mu1);
    r.mu2 = ParseDouble("mu2", mu2);
    r.rank = static_cast<int>(ParseInt("rank", rank));
    records.push_back(r);
  }
  Require(!records.empty(), ErrorKind::Format, "operator manifest is empty");
  return records;
}

std::shared_ptr<const DmdFluxOperator> OperatorForQuery(const RunConfig &config)
{
  const std::filesystem::path dir(config.operators);
  std::vector<ParameterSample> samples;
  for (const OperatorRecord &r : ReadManifest(dir))
  {
    auto op = std::make_shared<const DmdFluxOperator>(LoadOperator(dir / r.file));
    if (op->info().mu1 == config.kappa1 && op->info().mu2 == config.kappa2)
    {
      return op;
    }
    samples.push_back({r.mu1, r.mu2, std::move(op)});
  }
  return std::make_shared<const DmdFluxOperator>(Rkoi(samples, config.kappa1, config.kappa2));
}

SolveResult RunScheme(const RunConfig &config, const std::string &scheme)
{
  config.Validate();
  SolveResult result;
  result.scheme = scheme;
  if (scheme == "monolithic")
  {
    const DomainSpec spec{config.grid};
    const Scenario scenario = MakeScenario(config, config.kappa1, config.kappa2);
    const MonolithicTrajectory mono =
        RunMonolithic(spec, scenario, TimeStepOf(config), InitialOf(config));
    const SubdomainMesh full = BuildFullMesh(spec);
    const auto [left, right] = BuildMeshes(spec);
    const Eigen::VectorXd nodal =
        ExpandToNodes(full, mono.final_free, scenario, mono.final_time);
    result.final_state = {mono.final_time, RestrictToSubdomain(full, nodal, left),
                          RestrictToSubdomain(full, nodal, right), {}};
    result.loop_seconds = mono.loop_seconds;
    return result;
  }
  SchemeRunner runner(config);
  Trajectory traj = runner.Run(scheme);
  result.final_state = std::move(traj.final_state);
  result.lambda = std::move(traj.lambda);
  result.loop_seconds = traj.loop_seconds;
  result.sync_seconds = traj.sync_seconds;
  return result;
}

SolveResult SolveCommand(const RunConfig &config)
{
  SolveResult result = RunScheme(config, config.scheme);
  const DomainSpec spec{config.grid};
  const Scenario scenario = MakeScenario(config, config.kappa1, config.kappa2);
  const auto [left, right] = BuildMeshes(spec);
  const std::filesystem::path dir(config.output);

  std::ofstream sol = OpenOutput(dir / ("solution_" + config.scheme + ".csv"));
  sol << "side,x,y,u\n";
  const CoupledState &s = result.final_state;
  for (int side = 1; side <= 2; side++)
  {
    const SubdomainMesh &mesh = side == 1 ? left : right;
    const Eigen::VectorXd nodal =
        ExpandToNodes(mesh, side == 1 ? s.u1 : s.u2, scenario, s.t);
    for (int r = 0; r < mesh.NumNodes(); r++)
    {
      sol << side << "," << Sci(mesh.node(r).x) << "," << Sci(mesh.node(r).y) << ","
          << Sci(nodal(r)) << "\n";
    }
  }
  Require(static_cast<bool>(sol), ErrorKind::Io, "cannot write the solution file");

  if (!result.lambda.empty())
  {
    std::ofstream lam = OpenOutput(dir / ("lambda_" + config.scheme + ".csv"));
    lam << "step,t";
    for (Eigen::Index i = 0; i < result.lambda.front().size(); i++)
    {
      lam << ",lambda" << i;
    }
    lam << "\n";
    const double dt = TimeStepOf(config);
    for (std::size_t k = 0; k < result.lambda.size(); k++)
    {
      lam << k << "," << Sci(k * dt);
      for (double v : result.lambda[k])
      {
        lam << "," << Sci(v);
      }
      lam << "\n";
    }
    Require(static_cast<bool>(lam), ErrorKind::Io, "cannot write the flux history");
  }
  return result;
}

std::vector<CompareRow> CompareCommand(const RunConfig &config)
{
  config.Validate();
  SchemeRunner runner(config);
  const CoupledProblem &problem = runner.problem();
  const MonolithicTrajectory mono =
      RunMonolithic(problem.spec(), problem.scenario(), runner.dt(), InitialOf(config));

  std::vector<std::string> schemes = {"ivrc", "ivrl"};
  if (HasOperators(config))
  {
    schemes.push_back("dmdfs");
  }
  std::map<std::string, std::vector<double>> times;
  std::vector<CompareRow> rows(schemes.size());
  for (int rep = 0; rep < config.repeats; rep++)
  {
    for (std::size_t s = 0; s < schemes.size(); s++)
    {
      const Trajectory traj = runner.Run(schemes[s]);
      times[schemes[s]].push_back(traj.loop_seconds);
      if (rep == 0)
      {
        rows[s].scheme = schemes[s];
        rows[s].error = CompareToMonolithic(problem, traj.final_state, mono);
      }
    }
  }
  for (CompareRow &row : rows)
  {
    const std::vector<double> &t = times[row.scheme];
    std::vector<double> ratios;
    for (std::size_t r = 0; r < t.size(); r++)
    {
      ratios.push_back(times["ivrc"][r] / t[r]);
    }
    row.online_seconds = Median(t);
    row.speedup = Median(ratios);
  }

  std::ofstream out = OpenOutput(std::filesystem::path(config.output) / "compare.csv");
  out << "scheme,N,kappa1,kappa2,E0,E1,online_seconds,speedup\n";
  for (const CompareRow &row : rows)
  {
    out << row.scheme << "," << config.grid << "," << Sci(config.kappa1) << ","
        << Sci(config.kappa2) << "," << Sci(row.error.l2) << "," << Sci(row.error.h1) << ","
        << Sci(row.online_seconds) << "," << Sci(row.speedup) << "\n";
  }
  Require(static_cast<bool>(out), ErrorKind::Io, "cannot write compare.csv");
  return rows;
}

std::vector<BenchRow> BenchCommand(const RunConfig &config)
{
  config.Validate();
  SchemeRunner runner(config);
  std::vector<std::string> schemes = {"ivrc", "ivrl"};
  if (HasOperators(config))
  {
    schemes.push_back("dmdfs");
  }
  std::map<std::string, std::vector<double>> sync, loop;
  for (int rep = 0; rep < config.repeats; rep++)
  {
    for (const std::string &s : schemes)
    {
      const Trajectory traj = runner.Run(s);
      sync[s].push_back(traj.sync_seconds);
      loop[s].push_back(traj.loop_seconds);
    }
  }
  std::vector<BenchRow> rows;
  std::ofstream out = OpenOutput(std::filesystem::path(config.output) / "bench.csv");
  out << "scheme,N,sync_seconds,loop_seconds\n";
  for (const std::string &s : schemes)
  {
    rows.push_back({s, Median(sync[s]), Median(loop[s])});
    out << s << "," << config.grid << "," << Sci(rows.back().sync_seconds) << ","
        << Sci(rows.back().loop_seconds) << "\n";
  }
  Require(static_cast<bool>(out), ErrorKind::Io, "cannot write bench.csv");
  return rows;
}

double Median(std::vector<double> values)
{
  Require(!values.empty(), ErrorKind::InvalidArgument, "median of an empty set");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

}  // namespace partflux
