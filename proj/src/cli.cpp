#include "smc/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "smc/analysis.hpp"
#include "smc/ensemble.hpp"
#include "smc/figures.hpp"
#include "smc/plot.hpp"
#include "smc/scenario.hpp"
#include "smc/trajectory_io.hpp"

namespace smc::cli
{
namespace
{
namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

constexpr const char* out_dir_env = "SMC_OUT_DIR";
constexpr const char* default_out_dir = "smc_out";

struct Options
{
  std::string scenario;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::size_t ensemble = 0;
  std::string figure;
  std::string trajectory;
  unsigned threads = 0;
  bool quiet = false;
  bool verbose = false;
};

class Log
{
public:
  Log(std::ostream& err, const Options& opt)
    : err_(err), level_(opt.quiet ? 0 : (opt.verbose ? 2 : 1))
  {
  }

  void info(const std::string& msg) const
  {
    if (level_ >= 1)
    {
      err_ << msg << '\n';
    }
  }
  void debug(const std::string& msg) const
  {
    if (level_ >= 2)
    {
      err_ << msg << '\n';
    }
  }
  bool quiet() const { return level_ == 0; }

private:
  std::ostream& err_;
  int level_;
};

/// Raised for invocation mistakes that CLI11 cannot catch on its own.
class UsageError : public Error
{
public:
  using Error::Error;
};

fs::path output_dir(const Options& opt)
{
  if (!opt.out.empty())
  {
    return opt.out;
  }
  if (const char* env = std::getenv(out_dir_env); env != nullptr && *env != '\0')
  {
    return env;
  }
  return default_out_dir;
}

Scenario load(const Options& opt, const Log& log)
{
  if (opt.scenario.empty())
  {
    throw UsageError("no scenario given (pass a file path or bundled name)");
  }
  std::vector<std::string> defaults;
  Scenario s = resolve_scenario(opt.scenario, &defaults);
  for (const std::string& line : defaults)
  {
    log.info("scenario " + s.name + ": " + line);
  }
  if (opt.seed)
  {
    s.sim.seed = *opt.seed;
  }
  return s;
}

ordered_json point(const Vec2& p) { return ordered_json::array({p.x(), p.y()}); }

ordered_json optional_time(const std::optional<double>& t)
{
  return t ? ordered_json(*t) : ordered_json(nullptr);
}

/// Expectation outcome of one manifold check on one run.
bool manifold_ok(const ManifoldCheck& m, const std::optional<double>& escape)
{
  return m.expect == ManifoldCheck::Expect::Escape ? escape.has_value() : !escape.has_value();
}

/// Per-run summary shared by `run`, `analyze` and ensemble members.
ordered_json summarize(const Scenario& s, const Trajectory& traj, bool& passed)
{
  ordered_json j;
  j["scenario"] = s.name;
  j["seed"] = traj.sim.seed;
  j["variant"] = std::string(to_string(s.control.variant));
  j["samples"] = traj.samples();
  j["final_time"] = traj.samples() ? traj.times.back() : 0.0;
  j["final_metric"] = traj.samples() ? traj.metric.back() : 0.0;

  const std::size_t violations = boundary_violations(traj);
  j["boundary_violations"] = violations;
  if (s.sim.boundary != BoundaryPolicy::None && violations != 0)
  {
    passed = false;
  }

  ordered_json agents = ordered_json::array();
  for (std::size_t i = 0; i < traj.agents(); ++i)
  {
    ordered_json a;
    a["id"] = i;
    a["initial"] = point(traj.positions.front()[i]);
    a["final"] = point(traj.positions.back()[i]);
    a["stalled"] = stall_detector(traj, i, s.analyses.stall_window, s.analyses.stall_tol);
    agents.push_back(a);
  }
  j["stall_window"] = s.analyses.stall_window;
  j["stall_tol"] = s.analyses.stall_tol;
  j["agents"] = agents;

  ordered_json manifolds = ordered_json::array();
  for (const ManifoldCheck& m : s.analyses.manifolds)
  {
    const auto escape = escape_time(traj, m.agent, Manifold(m.kind, s.domain), m.delta);
    const bool ok = manifold_ok(m, escape);
    passed = passed && ok;
    manifolds.push_back({{"agent", m.agent},
                         {"kind", std::string(to_string(m.kind))},
                         {"delta", m.delta},
                         {"expect", m.expect == ManifoldCheck::Expect::Escape ? "escape"
                                                                               : "confined"},
                         {"escape_time", optional_time(escape)},
                         {"passed", ok}});
  }
  j["manifolds"] = manifolds;

  if (s.control.contracting() && s.control.sigma == 0.0 && s.sim.boundary == BoundaryPolicy::None)
  {
    bool bounded = true;
    for (std::size_t i = 0; i < traj.agents(); ++i)
    {
      bounded = bounded && deterministic_bound_check(traj, i, s.control);
    }
    j["pathwise_bound_holds"] = bounded;
    passed = passed && bounded;
  }
  return j;
}

void write_json(const fs::path& path, const ordered_json& j)
{
  write_text_file(path, j.dump(2) + "\n");
}

int cmd_run(const Options& opt, std::ostream& out, const Log& log)
{
  const Scenario s = load(opt, log);
  log.debug("computing target coefficients for " + std::to_string(s.kx) + " x " +
            std::to_string(s.ky) + " modes");
  const SpectralModel model = build_model(s);
  log.debug("running " + std::to_string(s.sim.steps()) + " steps");
  Trajectory traj = run_scenario(model, s.control, s.sim, s.agents);

  const fs::path dir = output_dir(opt);
  write_trajectory(traj, dir / (s.name + ".csv"));
  PlotOptions plot;
  plot.title = s.name;
  write_plot(traj, build_density(s), dir / (s.name + ".svg"), plot);

  bool passed = true;
  ordered_json summary = summarize(s, traj, passed);
  summary["passed"] = passed;
  write_json(dir / (s.name + ".summary.json"), summary);

  if (!log.quiet())
  {
    out << s.name << ": " << (passed ? "PASS" : "FAIL") << " (final metric "
        << summary["final_metric"].dump() << ", outputs in " << dir.string() << ")\n";
  }
  return passed ? exit_ok : exit_check_failed;
}

ordered_json distribution(std::vector<double> values, std::size_t members)
{
  ordered_json j;
  j["escaped"] = values.size();
  j["members"] = members;
  std::sort(values.begin(), values.end());
  if (!values.empty())
  {
    j["min"] = values.front();
    j["median"] = values[values.size() / 2];
    j["max"] = values.back();
  }
  return j;
}

int cmd_ensemble(const Options& opt, std::ostream& out, const Log& log)
{
  const Scenario s = load(opt, log);
  const std::size_t members =
      opt.ensemble != 0 ? opt.ensemble : static_cast<std::size_t>(s.analyses.ensemble);
  if (members < 2)
  {
    throw UsageError("ensemble needs --ensemble M with M >= 2");
  }
  const SpectralModel model = build_model(s);
  EnsembleOptions eo;
  eo.members = members;
  eo.master_seed = s.sim.seed;
  eo.threads = opt.threads;
  log.debug("running " + std::to_string(members) + " members");
  const std::vector<Trajectory> runs = run_ensemble(model, s.control, s.sim, s.agents, eo);

  bool passed = true;
  ordered_json root;
  root["scenario"] = s.name;
  root["master_seed"] = s.sim.seed;
  root["members"] = members;

  ordered_json per_seed = ordered_json::array();
  std::vector<std::vector<double>> escapes(s.analyses.manifolds.size());
  for (std::size_t i = 0; i < runs.size(); ++i)
  {
    bool member_ok = true;
    ordered_json m = summarize(s, runs[i], member_ok);
    m["passed"] = member_ok;
    passed = passed && member_ok;
    for (std::size_t c = 0; c < s.analyses.manifolds.size(); ++c)
    {
      const ordered_json& t = m["manifolds"][c]["escape_time"];
      if (!t.is_null())
      {
        escapes[c].push_back(t.get<double>());
      }
    }
    per_seed.push_back(m);
  }

  if (s.control.contracting())
  {
    ordered_json msb = ordered_json::array();
    for (std::size_t a = 0; a < s.agents.size(); ++a)
    {
      const double bound = msb_bound(s.control, std::span<const Vec2>(&s.agents[a], 1));
      const MsbReport r = msb_check(runs, a, bound, s.analyses.msb_slack);
      msb.push_back({{"agent", a},
                     {"sup_mean_sq", r.sup_mean_sq},
                     {"bound", r.bound},
                     {"slack", s.analyses.msb_slack},
                     {"sample_count", r.sample_count},
                     {"passed", r.passed}});
      passed = passed && r.passed;
    }
    root["msb"] = msb;
  }

  ordered_json dist = ordered_json::array();
  for (std::size_t c = 0; c < s.analyses.manifolds.size(); ++c)
  {
    const ManifoldCheck& m = s.analyses.manifolds[c];
    ordered_json d = distribution(escapes[c], members);
    d["agent"] = m.agent;
    d["kind"] = std::string(to_string(m.kind));
    d["delta"] = m.delta;
    dist.push_back(d);
  }
  root["escape_times"] = dist;
  root["passed"] = passed;
  root["runs"] = per_seed;

  const fs::path dir = output_dir(opt);
  write_json(dir / (s.name + ".ensemble.json"), root);
  if (!log.quiet())
  {
    out << s.name << " x" << members << ": " << (passed ? "PASS" : "FAIL") << " (report in "
        << (dir / (s.name + ".ensemble.json")).string() << ")\n";
  }
  return passed ? exit_ok : exit_check_failed;
}

int cmd_analyze(const Options& opt, std::ostream& out, const Log& log)
{
  if (opt.trajectory.empty())
  {
    throw UsageError("analyze needs --trajectory FILE");
  }
  const Scenario s = load(opt, log);
  Trajectory traj = read_trajectory(opt.trajectory);
  if (traj.agents() != s.agents.size())
  {
    throw ConfigError("trajectory has " + std::to_string(traj.agents()) +
                      " agents but the scenario has " + std::to_string(s.agents.size()));
  }
  traj.domain = s.domain;
  traj.control = s.control;
  traj.sim = s.sim;

  bool passed = true;
  ordered_json summary = summarize(s, traj, passed);
  summary["trajectory"] = opt.trajectory;
  summary["passed"] = passed;
  const fs::path dir = output_dir(opt);
  write_json(dir / (s.name + ".analysis.json"), summary);
  if (!log.quiet())
  {
    out << s.name << " analysis: " << (passed ? "PASS" : "FAIL") << '\n';
  }
  return passed ? exit_ok : exit_check_failed;
}

int cmd_reproduce(const Options& opt, std::ostream& out, const Log& log)
{
  const std::string figure = !opt.figure.empty() ? opt.figure : opt.scenario;
  if (figure.empty())
  {
    throw UsageError("reproduce needs a figure id (fig1a, fig1b, fig2a, fig2b)");
  }
  std::vector<std::string> defaults;
  Scenario s = load_bundled(figure_scenario(figure), &defaults);
  for (const std::string& line : defaults)
  {
    log.info("scenario " + s.name + ": " + line);
  }
  if (opt.seed)
  {
    s.sim.seed = *opt.seed;
  }
  const SpectralModel model = build_model(s);
  const Trajectory traj = run_scenario(model, s.control, s.sim, s.agents);

  FigureReport report;
  report.figure = figure;
  report.scenario = s.name;
  report.seed = s.sim.seed;
  report.checks = figure_checks(figure, s, traj);

  const fs::path dir = output_dir(opt);
  write_trajectory(traj, dir / (figure + ".csv"));
  PlotOptions plot;
  plot.title = figure;
  write_plot(traj, build_density(s), dir / (figure + ".svg"), plot);
  write_text_file(dir / (figure + ".report.json"), report_json(report));

  if (!log.quiet())
  {
    for (const FigureCheck& c : report.checks)
    {
      std::ostringstream value;
      value.precision(10);
      value << c.value;
      out << (c.passed ? "PASS " : "FAIL ") << figure << ' ' << c.name << ": " << value.str()
          << ' ' << c.comparison << ' ' << c.threshold << '\n';
    }
  }
  return report.passed() ? exit_ok : exit_check_failed;
}

void add_common(CLI::App* cmd, Options& opt)
{
  cmd->add_option("--out", opt.out, std::string("Output directory (default: $") + out_dir_env +
                                        " or ./" + default_out_dir + ")");
  cmd->add_option("--seed", opt.seed, "Override the scenario's (master) seed");
  auto* quiet = cmd->add_flag("-q,--quiet", opt.quiet, "Only report through the exit status");
  cmd->add_flag("-v,--verbose", opt.verbose, "Log progress")->excludes(quiet);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  CLI::App app{"Multi-agent spectral multiscale coverage simulator", "smc"};
  app.require_subcommand(1);
  Options opt;

  auto* run_cmd = app.add_subcommand("run", "Simulate one scenario; write trajectory, plot, summary");
  run_cmd->add_option("scenario,--scenario", opt.scenario, "Scenario file or bundled name")
      ->required();
  add_common(run_cmd, opt);

  auto* ens_cmd =
      app.add_subcommand("ensemble", "Run M seeds (master XOR i); write summaries, MSB and escape statistics");
  ens_cmd->add_option("scenario,--scenario", opt.scenario, "Scenario file or bundled name")
      ->required();
  ens_cmd->add_option("-M,--ensemble", opt.ensemble, "Number of members (at least 2)");
  ens_cmd->add_option("--threads", opt.threads, "Worker threads (default: all cores)");
  add_common(ens_cmd, opt);

  auto* an_cmd = app.add_subcommand("analyze", "Re-run the scenario's analyses on a trajectory file");
  an_cmd->add_option("--scenario", opt.scenario, "Scenario the trajectory came from")->required();
  an_cmd->add_option("trajectory,--trajectory", opt.trajectory, "Trajectory file")->required();
  add_common(an_cmd, opt);

  auto* rep_cmd = app.add_subcommand("reproduce", "Reproduce a figure and check its claims");
  rep_cmd->add_option("figure,--figure", opt.figure, "fig1a, fig1b, fig2a or fig2b")->required();
  add_common(rep_cmd, opt);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try
  {
    app.parse(reversed);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_ok : exit_usage;
  }

  const Log log(err, opt);
  try
  {
    if (run_cmd->parsed())
    {
      return cmd_run(opt, out, log);
    }
    if (ens_cmd->parsed())
    {
      return cmd_ensemble(opt, out, log);
    }
    if (an_cmd->parsed())
    {
      return cmd_analyze(opt, out, log);
    }
    return cmd_reproduce(opt, out, log);
  }
  catch (const NumericalError& e)
  {
    err << "numerical failure: " << e.what() << '\n';
    return exit_numerical;
  }
  catch (const std::exception& e)
  {
    err << "error: " << e.what() << '\n';
    return exit_usage;
  }
}

int main(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

}  // namespace smc::cli
