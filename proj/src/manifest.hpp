#ifndef HOLOMOD_MANIFEST_HPP
#define HOLOMOD_MANIFEST_HPP

#include <optional>
#include <string>
#include <vector>

#include "holomod/fields.hpp"
#include "holomod/holonomy.hpp"
#include "holomod/path.hpp"

namespace holomod {

// One path specifier from the manifest. Kinds:
//   constant-loop   point, covector, duration
//   stationary-loop point, covector_const/cos/sin, frequency, duration
//   flow            start, covector_const/cos/sin, frequency, duration
//   lift-circle     center, axis_a, axis_b (gamma = c + cos * A + sin * B)
//   samples         t0, t1, closed, base columns, alpha columns
struct PathSpec {
  std::string label;
  std::string kind;
  Vec point;                  // constant/stationary base point, flow start,
                              // or circle center
  Vec covector;               // constant-loop covector
  Vec covector_const, covector_cos, covector_sin;
  double frequency = 1.0;
  double duration = 1.0;
  Vec axis_a, axis_b;
  double t0 = 0.0, t1 = 1.0;
  bool closed = false;
  Mat base_samples, alpha_samples;

  // Realize the specifier against a structure. `intervals` is the sample
  // count from the numeric config.
  CotangentPath build(const BivectorField& pi, int intervals) const;
};

struct NumericConfig {
  int steps_per_unit = 4096;
  int samples = kDefaultPathSamples;
  unsigned seed = 7;
  int probes = 100;              // modular-suite probe points
  int random_pairs = 10;         // (f, path) pairs in the integrals suite
  std::optional<double> sigma_override;  // forces the arbiter sign, for diagnostics
  IntegratorOptions integrator;  // tolerance overrides land here
  double tau_theorem = 1e-5;
  double tau_oracle_const = 1e-6;
  double tau_oracle_var = 1e-5;
  double tau_modular = 1e-9;
  double tau_lie_derivative = 1e-10;
  double tau_hamiltonian = 1e-7;
  double tau_loop_integral = 1e-8;
  double tau_gauge_loop = 1e-7;
  double tau_coset = 1e-6;
  double tau_homotopy = 1e-6;
};

struct FamilySpec {
  std::string label;
  std::vector<PathSpec> members;
};

struct Manifest {
  int dimension = 0;
  std::string preset;            // empty for a custom bivector
  BivectorField bivector = BivectorField::from_entries(1, {});
  VolumeDensity density = VolumeDensity::flat(1);
  std::vector<PathSpec> paths;
  std::vector<FamilySpec> families;
  std::vector<std::string> suites;
  NumericConfig numeric;

  const PathSpec& path(const std::string& label) const;
};

// Parse and validate a manifest document; throws Error with a field path on
// any malformed, unknown, or inconsistent entry. The bivector is probed for
// the Jacobi identity at seeded random points.
Manifest load_manifest(const std::string& file);
Manifest parse_manifest(const std::string& text, const std::string& origin);

}  // namespace holomod

#endif
