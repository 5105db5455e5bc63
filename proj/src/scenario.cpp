#include "smc/scenario.hpp"

#include <algorithm>
#include <fstream>
#include <initializer_list>
#include <sstream>
#include <string>

#include <json.hpp>

namespace smc
{
using nlohmann::json;
using nlohmann::ordered_json;

bool operator==(const DensitySpec& a, const DensitySpec& b)
{
  if (a.kind != b.kind || a.sigma_rho != b.sigma_rho ||
      a.components.size() != b.components.size())
  {
    return false;
  }
  for (std::size_t i = 0; i < a.components.size(); ++i)
  {
    const GaussianComponent& x = a.components[i];
    const GaussianComponent& y = b.components[i];
    if (x.weight != y.weight || x.mean != y.mean || x.sigma != y.sigma)
    {
      return false;
    }
  }
  return true;
}

bool operator==(const Scenario& a, const Scenario& b)
{
  return a.name == b.name && a.description == b.description && a.domain == b.domain &&
         a.density == b.density && a.kx == b.kx && a.ky == b.ky &&
         a.quadrature.nx == b.quadrature.nx && a.quadrature.ny == b.quadrature.ny &&
         a.control == b.control && a.sim == b.sim && a.agents == b.agents &&
         a.analyses == b.analyses;
}

namespace
{
std::string_view to_string(ManifoldCheck::Expect e)
{
  return e == ManifoldCheck::Expect::Confined ? "confined" : "escape";
}

/// Field access with path-qualified diagnostics and default bookkeeping.
class Fields
{
public:
  Fields(const json& obj, std::string path, std::vector<std::string>* defaults)
    : obj_(obj), path_(std::move(path)), defaults_(defaults)
  {
    if (!obj_.is_object())
    {
      fail("expected an object");
    }
  }

  /// Rejects keys outside `allowed`, which catches misspelled fields.
  void only(std::initializer_list<std::string_view> allowed) const
  {
    for (auto it = obj_.begin(); it != obj_.end(); ++it)
    {
      if (std::find(allowed.begin(), allowed.end(), it.key()) == allowed.end())
      {
        throw ConfigError("scenario field '" + qualify(it.key()) + "': unknown field");
      }
    }
  }

  bool has(const char* key) const { return obj_.contains(key); }

  const json& at(const char* key) const
  {
    if (!obj_.contains(key))
    {
      throw ConfigError("scenario field '" + qualify(key) + "': required field missing");
    }
    return obj_.at(key);
  }

  Fields child(const char* key) const { return Fields(at(key), qualify(key), defaults_); }

  double number(const char* key) const { return as_number(at(key), qualify(key)); }

  double number(const char* key, double fallback) const
  {
    if (!has(key))
    {
      note(key, json(fallback).dump());
      return fallback;
    }
    return number(key);
  }

  long integer(const char* key, long fallback) const
  {
    if (!has(key))
    {
      note(key, std::to_string(fallback));
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_number_integer())
    {
      throw ConfigError("scenario field '" + qualify(key) + "': expected an integer");
    }
    return v.get<long>();
  }

  std::uint64_t unsigned_integer(const char* key, std::uint64_t fallback) const
  {
    if (!has(key))
    {
      note(key, std::to_string(fallback));
      return fallback;
    }
    const json& v = at(key);
    if (!v.is_number_unsigned())
    {
      throw ConfigError("scenario field '" + qualify(key) + "': expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
  }

  std::string text(const char* key) const
  {
    const json& v = at(key);
    if (!v.is_string())
    {
      throw ConfigError("scenario field '" + qualify(key) + "': expected a string");
    }
    return v.get<std::string>();
  }

  std::string text(const char* key, const std::string& fallback, bool log = true) const
  {
    if (!has(key))
    {
      if (log)
      {
        note(key, fallback);
      }
      return fallback;
    }
    return text(key);
  }

  Vec2 point(const char* key) const { return as_point(at(key), qualify(key)); }

  Vec2 point(const char* key, const Vec2& fallback) const
  {
    if (!has(key))
    {
      note(key, "[" + json(fallback.x()).dump() + ", " + json(fallback.y()).dump() + "]");
      return fallback;
    }
    return point(key);
  }

  const json& array(const char* key) const
  {
    const json& v = at(key);
    if (!v.is_array())
    {
      throw ConfigError("scenario field '" + qualify(key) + "': expected an array");
    }
    return v;
  }

  void note(const char* key, const std::string& value) const
  {
    if (defaults_ != nullptr)
    {
      defaults_->push_back(qualify(key) + " = " + value + " (default)");
    }
  }

  std::string qualify(std::string_view key) const
  {
    return path_.empty() ? std::string(key) : path_ + "." + std::string(key);
  }

  static double as_number(const json& v, const std::string& where)
  {
    if (!v.is_number())
    {
      throw ConfigError("scenario field '" + where + "': expected a number");
    }
    return v.get<double>();
  }

  static Vec2 as_point(const json& v, const std::string& where)
  {
    if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    {
      throw ConfigError("scenario field '" + where + "': expected [x, y]");
    }
    return {v[0].get<double>(), v[1].get<double>()};
  }

  std::vector<std::string>* defaults() const { return defaults_; }

private:
  [[noreturn]] void fail(const std::string& msg) const
  {
    throw ConfigError("scenario field '" + (path_.empty() ? std::string("<root>") : path_) +
                      "': " + msg);
  }

  const json& obj_;
  std::string path_;
  std::vector<std::string>* defaults_;
};

DensitySpec parse_density(const Fields& f)
{
  f.only({"kind", "sigma_rho", "components"});
  DensitySpec spec;
  const std::string kind = f.text("kind", "quadrimodal");
  if (kind == "quadrimodal")
  {
    spec.kind = DensitySpec::Kind::Quadrimodal;
    spec.sigma_rho = f.number("sigma_rho", 100.0);
    if (f.has("components"))
    {
      throw ConfigError("scenario field 'density.components': not used by a quadrimodal density");
    }
  }
  else if (kind == "mixture")
  {
    spec.kind = DensitySpec::Kind::Mixture;
    if (f.has("sigma_rho"))
    {
      throw ConfigError("scenario field 'density.sigma_rho': set sigma per component instead");
    }
    const json& list = f.array("components");
    for (std::size_t i = 0; i < list.size(); ++i)
    {
      Fields c(list[i], f.qualify("components") + "[" + std::to_string(i) + "]", nullptr);
      c.only({"weight", "mean", "sigma"});
      spec.components.push_back({c.number("weight"), c.point("mean"), c.number("sigma")});
    }
  }
  else
  {
    throw ConfigError("scenario field 'density.kind': expected \"quadrimodal\" or \"mixture\"");
  }
  return spec;
}

ControlConfig parse_control(const Fields& f)
{
  f.only({"variant", "u_max", "epsilon", "k", "sigma", "center"});
  ControlConfig c;
  const std::string variant = f.text("variant");
  try
  {
    c.variant = parse_variant(variant);
  }
  catch (const ConfigError& e)
  {
    throw ConfigError("scenario field 'control.variant': " + std::string(e.what()));
  }
  c.u_max = f.number("u_max", c.u_max);
  c.epsilon = f.number("epsilon", c.epsilon);
  c.k_contraction = f.number("k", c.k_contraction);
  c.sigma = f.number("sigma", c.sigma);
  c.contraction_center = f.point("center", c.contraction_center);
  return c;
}

SimConfig parse_sim(const Fields& f)
{
  f.only({"dt", "horizon", "seed", "boundary", "record_stride"});
  SimConfig s;
  s.dt = f.number("dt", s.dt);
  s.horizon = f.number("horizon", s.horizon);
  s.seed = f.unsigned_integer("seed", s.seed);
  const std::string boundary = f.text("boundary", std::string(to_string(s.boundary)));
  try
  {
    s.boundary = parse_boundary(boundary);
  }
  catch (const ConfigError& e)
  {
    throw ConfigError("scenario field 'sim.boundary': " + std::string(e.what()));
  }
  s.record_stride = static_cast<int>(f.integer("record_stride", s.record_stride));
  return s;
}

AnalysisSpec parse_analyses(const Fields& f)
{
  f.only({"manifolds", "stall", "msb_slack", "ensemble"});
  AnalysisSpec a;
  if (f.has("manifolds"))
  {
    const json& list = f.array("manifolds");
    for (std::size_t i = 0; i < list.size(); ++i)
    {
      Fields m(list[i], f.qualify("manifolds") + "[" + std::to_string(i) + "]", nullptr);
      m.only({"agent", "kind", "delta", "expect"});
      ManifoldCheck check;
      check.agent = static_cast<std::size_t>(m.unsigned_integer("agent", 0));
      try
      {
        check.kind = parse_manifold(m.text("kind"));
      }
      catch (const ConfigError& e)
      {
        throw ConfigError("scenario field '" + m.qualify("kind") + "': " + e.what());
      }
      check.delta = m.number("delta");
      const std::string expect = m.text("expect");
      if (expect == "confined")
      {
        check.expect = ManifoldCheck::Expect::Confined;
      }
      else if (expect == "escape")
      {
        check.expect = ManifoldCheck::Expect::Escape;
      }
      else
      {
        throw ConfigError("scenario field '" + m.qualify("expect") +
                          "': expected \"confined\" or \"escape\"");
      }
      a.manifolds.push_back(check);
    }
  }
  if (f.has("stall"))
  {
    Fields s = f.child("stall");
    s.only({"window", "tol"});
    a.stall_window = s.number("window", a.stall_window);
    a.stall_tol = s.number("tol", a.stall_tol);
  }
  a.msb_slack = f.number("msb_slack", a.msb_slack);
  a.ensemble = static_cast<int>(f.integer("ensemble", a.ensemble));
  return a;
}

std::string read_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw IoError("cannot open '" + path.string() + "'");
  }
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ordered_json point_json(const Vec2& p) { return ordered_json::array({p.x(), p.y()}); }

}  // namespace

void Scenario::validate() const
{
  if (agents.empty())
  {
    throw ConfigError("scenario needs at least one agent");
  }
  for (std::size_t i = 0; i < agents.size(); ++i)
  {
    if (!domain.contains(agents[i]))
    {
      throw ConfigError("initial position of agent " + std::to_string(i) +
                        " lies outside the domain");
    }
  }
  if (kx < 1 || ky < 1)
  {
    throw ConfigError("mode counts must be positive");
  }
  if (quadrature.nx < 2 || quadrature.ny < 2 || quadrature.nx % 2 != 0 ||
      quadrature.ny % 2 != 0)
  {
    throw ConfigError("quadrature cell counts must be positive and even");
  }
  control.validate();
  sim.validate();
  (void)build_density(*this);
  for (const ManifoldCheck& m : analyses.manifolds)
  {
    if (m.agent >= agents.size())
    {
      throw ConfigError("manifold check refers to agent " + std::to_string(m.agent) +
                        " but the scenario has " + std::to_string(agents.size()));
    }
    if (!(m.delta > 0.0))
    {
      throw ConfigError("manifold check radius must be positive");
    }
    (void)Manifold(m.kind, domain);
  }
  if (!(analyses.stall_window > 0.0) || !(analyses.stall_tol > 0.0))
  {
    throw ConfigError("stall window and tolerance must be positive");
  }
  if (!(analyses.msb_slack >= 1.0))
  {
    throw ConfigError("msb_slack must be at least 1");
  }
  if (analyses.ensemble < 0)
  {
    throw ConfigError("ensemble size must be non-negative");
  }
}

Scenario parse_scenario(std::string_view text, std::vector<std::string>* defaults)
{
  json root;
  try
  {
    root = json::parse(text.begin(), text.end());
  }
  catch (const json::parse_error& e)
  {
    throw ConfigError(std::string("scenario is not valid JSON: ") + e.what());
  }

  Fields f(root, "", defaults);
  f.only({"name", "description", "domain", "density", "modes", "quadrature", "control", "sim",
          "agents", "analyses"});

  Scenario s;
  s.name = f.text("name", "unnamed");
  s.description = f.text("description", "", false);

  if (f.has("domain"))
  {
    Fields d = f.child("domain");
    d.only({"lx", "ly"});
    s.domain = RectDomain(d.number("lx"), d.number("ly"));
  }
  else
  {
    f.note("domain", "{\"lx\": 2000.0, \"ly\": 2000.0}");
  }

  if (f.has("density"))
  {
    s.density = parse_density(f.child("density"));
  }
  else
  {
    f.note("density", "quadrimodal, sigma_rho = 100.0");
  }

  if (f.has("modes"))
  {
    Fields m = f.child("modes");
    m.only({"kx", "ky"});
    s.kx = static_cast<int>(m.integer("kx", s.kx));
    s.ky = static_cast<int>(m.integer("ky", s.ky));
  }
  else
  {
    f.note("modes", "25 x 25");
  }

  if (f.has("quadrature"))
  {
    Fields q = f.child("quadrature");
    q.only({"nx", "ny"});
    s.quadrature.nx = static_cast<int>(q.integer("nx", s.quadrature.nx));
    s.quadrature.ny = static_cast<int>(q.integer("ny", s.quadrature.ny));
  }
  else
  {
    f.note("quadrature", "512 x 512");
  }

  s.control = parse_control(f.child("control"));

  if (f.has("sim"))
  {
    s.sim = parse_sim(f.child("sim"));
  }
  else
  {
    f.note("sim", "dt = 0.1, horizon = 150.0, seed = 0, boundary = Reflect");
  }

  const json& agents = f.array("agents");
  for (std::size_t i = 0; i < agents.size(); ++i)
  {
    s.agents.push_back(Fields::as_point(agents[i], "agents[" + std::to_string(i) + "]"));
  }

  if (f.has("analyses"))
  {
    s.analyses = parse_analyses(f.child("analyses"));
  }

  s.validate();
  return s;
}

Scenario load_scenario(const std::filesystem::path& path, std::vector<std::string>* defaults)
{
  const std::string text = read_file(path);
  try
  {
    return parse_scenario(text, defaults);
  }
  catch (const ConfigError& e)
  {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

std::string to_json(const Scenario& s)
{
  ordered_json root;
  root["name"] = s.name;
  root["description"] = s.description;
  root["domain"] = {{"lx", s.domain.lx()}, {"ly", s.domain.ly()}};

  ordered_json density;
  if (s.density.kind == DensitySpec::Kind::Quadrimodal)
  {
    density["kind"] = "quadrimodal";
    density["sigma_rho"] = s.density.sigma_rho;
  }
  else
  {
    density["kind"] = "mixture";
    ordered_json list = ordered_json::array();
    for (const GaussianComponent& c : s.density.components)
    {
      list.push_back({{"weight", c.weight}, {"mean", point_json(c.mean)}, {"sigma", c.sigma}});
    }
    density["components"] = list;
  }
  root["density"] = density;
  root["modes"] = {{"kx", s.kx}, {"ky", s.ky}};
  root["quadrature"] = {{"nx", s.quadrature.nx}, {"ny", s.quadrature.ny}};
  root["control"] = {{"variant", std::string(to_string(s.control.variant))},
                     {"u_max", s.control.u_max},
                     {"epsilon", s.control.epsilon},
                     {"k", s.control.k_contraction},
                     {"sigma", s.control.sigma},
                     {"center", point_json(s.control.contraction_center)}};
  root["sim"] = {{"dt", s.sim.dt},
                 {"horizon", s.sim.horizon},
                 {"seed", s.sim.seed},
                 {"boundary", std::string(to_string(s.sim.boundary))},
                 {"record_stride", s.sim.record_stride}};
  ordered_json agents = ordered_json::array();
  for (const Vec2& p : s.agents)
  {
    agents.push_back(point_json(p));
  }
  root["agents"] = agents;

  ordered_json manifolds = ordered_json::array();
  for (const ManifoldCheck& m : s.analyses.manifolds)
  {
    manifolds.push_back({{"agent", m.agent},
                         {"kind", std::string(to_string(m.kind))},
                         {"delta", m.delta},
                         {"expect", std::string(to_string(m.expect))}});
  }
  root["analyses"] = {
      {"manifolds", manifolds},
      {"stall", {{"window", s.analyses.stall_window}, {"tol", s.analyses.stall_tol}}},
      {"msb_slack", s.analyses.msb_slack},
      {"ensemble", s.analyses.ensemble}};
  return root.dump(2) + "\n";
}

void save_scenario(const Scenario& scenario, const std::filesystem::path& path)
{
  std::ofstream out(path, std::ios::binary);
  if (!out)
  {
    throw IoError("cannot write '" + path.string() + "'");
  }
  out << to_json(scenario);
  if (!out)
  {
    throw IoError("write to '" + path.string() + "' failed");
  }
}

Scenario load_bundled(std::string_view name, std::vector<std::string>* defaults)
{
  // "fig2" names the perturbed run from fig1b's initial positions.
  if (name == "fig2")
  {
    name = "fig2b";
  }
  std::string known;
  for (const BundledScenario& b : bundled_scenarios())
  {
    if (b.name == name)
    {
      try
      {
        return parse_scenario(b.json, defaults);
      }
      catch (const ConfigError& e)
      {
        throw ConfigError("bundled scenario '" + std::string(name) + "': " + e.what());
      }
    }
    known += (known.empty() ? "" : ", ") + std::string(b.name);
  }
  throw ConfigError("no scenario file or bundled scenario named '" + std::string(name) +
                    "' (bundled: " + known + ")");
}

Scenario resolve_scenario(const std::string& ref, std::vector<std::string>* defaults)
{
  std::error_code ec;
  if (std::filesystem::is_regular_file(ref, ec))
  {
    return load_scenario(ref, defaults);
  }
  if (ref.find('/') != std::string::npos || ref.ends_with(".json"))
  {
    throw IoError("scenario file '" + ref + "' does not exist");
  }
  return load_bundled(ref, defaults);
}

GaussianMixture build_density(const Scenario& s)
{
  if (s.density.kind == DensitySpec::Kind::Quadrimodal)
  {
    return make_quadrimodal(s.domain, s.density.sigma_rho);
  }
  return GaussianMixture(s.domain, s.density.components);
}

SpectralModel build_model(const Scenario& s)
{
  const GaussianMixture density = build_density(s);
  ModeSet modes(s.kx, s.ky);
  SpectralCoefficients mu = target_coefficients(density, modes, s.domain, s.quadrature);
  return SpectralModel{s.domain, std::move(modes), std::move(mu)};
}

}  // namespace smc
