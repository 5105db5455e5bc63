#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "smc/analysis.hpp"
#include "smc/control.hpp"
#include "smc/density.hpp"
#include "smc/simulator.hpp"
#include "smc/spectral.hpp"

namespace smc
{
/// Reference density of a scenario: either the four-mode layout generated
/// from sigma_rho, or an explicit list of components.
struct DensitySpec
{
  enum class Kind
  {
    Quadrimodal,
    Mixture,
  };

  Kind kind = Kind::Quadrimodal;
  double sigma_rho = 100.0;                  ///< Quadrimodal only
  std::vector<GaussianComponent> components;  ///< Mixture only

  friend bool operator==(const DensitySpec& a, const DensitySpec& b);
};

/// A manifold an agent is expected either to stay on (within delta) or to
/// leave (farther than delta at some recorded time).
struct ManifoldCheck
{
  enum class Expect
  {
    Confined,
    Escape,
  };

  std::size_t agent = 0;
  ManifoldKind kind = ManifoldKind::Origin;
  double delta = 1.0;
  Expect expect = Expect::Escape;

  friend bool operator==(const ManifoldCheck&, const ManifoldCheck&) = default;
};

struct AnalysisSpec
{
  std::vector<ManifoldCheck> manifolds;
  double stall_window = 10.0;
  double stall_tol = 1.0;
  double msb_slack = 1.0;
  /// Default member count for ensemble runs; 0 when the scenario does not ask
  /// for one.
  int ensemble = 0;

  friend bool operator==(const AnalysisSpec&, const AnalysisSpec&) = default;
};

struct Scenario
{
  std::string name;
  std::string description;
  RectDomain domain{2000.0, 2000.0};
  DensitySpec density;
  int kx = 25;
  int ky = 25;
  QuadratureGrid quadrature;
  ControlConfig control;
  SimConfig sim;
  std::vector<Vec2> agents;
  AnalysisSpec analyses;

  /// Throws ConfigError / ParameterError naming the violated requirement.
  void validate() const;

  friend bool operator==(const Scenario& a, const Scenario& b);
};

/// Parses scenario JSON. Optional fields that are absent take their defaults;
/// a line describing each substitution is appended to `defaults` when given.
/// Errors are ConfigError with the line (syntax) or field path (content).
Scenario parse_scenario(std::string_view text, std::vector<std::string>* defaults = nullptr);
Scenario load_scenario(const std::filesystem::path& path,
                       std::vector<std::string>* defaults = nullptr);

/// Canonical JSON text: every field written, doubles in shortest round-trip
/// form, keys in a fixed order. parse_scenario(to_json(s)) == s.
std::string to_json(const Scenario& scenario);
void save_scenario(const Scenario& scenario, const std::filesystem::path& path);

struct BundledScenario
{
  std::string_view name;
  std::string_view json;
};

/// Scenario files shipped in scenarios/, compiled into the library.
const std::vector<BundledScenario>& bundled_scenarios();

/// Bundled scenario by name; throws ConfigError listing the known names.
Scenario load_bundled(std::string_view name, std::vector<std::string>* defaults = nullptr);

/// An existing file path is loaded from disk; anything else is looked up
/// among the bundled scenarios.
Scenario resolve_scenario(const std::string& ref, std::vector<std::string>* defaults = nullptr);

GaussianMixture build_density(const Scenario& scenario);

/// Mode set and target coefficients for the scenario's density.
SpectralModel build_model(const Scenario& scenario);

}  // namespace smc
