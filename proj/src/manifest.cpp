#include "manifest.hpp"

#include <cmath>
#include <fstream>
#include <json.hpp>
#include <random>
#include <set>
#include <sstream>

#include "holomod/presets.hpp"

namespace holomod {

namespace {

using nlohmann::json;

const double kTau = 2.0 * M_PI;

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw Error("manifest: " + where + ": " + what);
}

void require_keys(const json& obj, const std::string& where,
                  const std::set<std::string>& allowed) {
  if (!obj.is_object()) fail(where, "expected an object");
  for (const auto& [key, value] : obj.items())
    if (!allowed.count(key)) fail(where, "unknown field '" + key + "'");
}

double number_at(const json& obj, const std::string& where, const std::string& key,
                 std::optional<double> fallback = std::nullopt) {
  if (!obj.contains(key)) {
    if (fallback) return *fallback;
    fail(where, "missing field '" + key + "'");
  }
  if (!obj[key].is_number()) fail(where + "." + key, "expected a number");
  return obj[key].get<double>();
}

Vec vec_at(const json& obj, const std::string& where, const std::string& key, int dim,
           bool required = true) {
  if (!obj.contains(key)) {
    if (!required) return Vec::Zero(dim);
    fail(where, "missing field '" + key + "'");
  }
  const json& arr = obj[key];
  if (!arr.is_array() || static_cast<int>(arr.size()) != dim)
    fail(where + "." + key, "expected an array of " + std::to_string(dim) + " numbers");
  Vec v(dim);
  for (int i = 0; i < dim; ++i) {
    if (!arr[static_cast<size_t>(i)].is_number())
      fail(where + "." + key, "expected numeric entries");
    v[i] = arr[static_cast<size_t>(i)].get<double>();
  }
  return v;
}

Polynomial poly_from_terms(const json& terms, const std::string& where, int dim) {
  if (!terms.is_array()) fail(where, "expected an array of terms");
  Polynomial p(dim);
  for (size_t k = 0; k < terms.size(); ++k) {
    std::string tw = where + "[" + std::to_string(k) + "]";
    require_keys(terms[k], tw, {"exponents", "coeff"});
    const json& ex = terms[k].contains("exponents") ? terms[k]["exponents"] : json();
    if (!ex.is_array() || static_cast<int>(ex.size()) != dim)
      fail(tw + ".exponents", "expected " + std::to_string(dim) + " exponents");
    std::vector<int> exps;
    for (const auto& e : ex) {
      if (!e.is_number_integer() || e.get<int>() < 0)
        fail(tw + ".exponents", "exponents must be non-negative integers");
      exps.push_back(e.get<int>());
    }
    p.add_term(exps, number_at(terms[k], tw, "coeff"));
  }
  return p;
}

BivectorField bivector_from(const json& spec, const std::string& where, int dim,
                            std::string& preset_name) {
  require_keys(spec, where, {"preset", "entries"});
  if (spec.contains("preset") == spec.contains("entries"))
    fail(where, "give exactly one of 'preset' or 'entries'");
  if (spec.contains("preset")) {
    if (!spec["preset"].is_string()) fail(where + ".preset", "expected a string");
    preset_name = spec["preset"].get<std::string>();
    const auto known = presets::names();
    if (std::find(known.begin(), known.end(), preset_name) == known.end())
      fail(where + ".preset", "unknown preset '" + preset_name + "'");
    BivectorField pi = presets::bivector(preset_name);
    if (pi.dim() != dim)
      fail(where + ".preset", "preset dimension " + std::to_string(pi.dim()) +
                                  " does not match manifest dimension");
    return pi;
  }
  const json& entries = spec["entries"];
  if (!entries.is_array()) fail(where + ".entries", "expected an array");
  std::vector<std::tuple<int, int, Polynomial>> rows;
  for (size_t k = 0; k < entries.size(); ++k) {
    std::string ew = where + ".entries[" + std::to_string(k) + "]";
    require_keys(entries[k], ew, {"i", "j", "terms"});
    int i = static_cast<int>(number_at(entries[k], ew, "i"));
    int j = static_cast<int>(number_at(entries[k], ew, "j"));
    if (i < 0 || j >= dim || i >= j)
      fail(ew, "entries are the upper triangle: need 0 <= i < j < dimension");
    rows.emplace_back(i, j, poly_from_terms(entries[k]["terms"], ew + ".terms", dim));
  }
  return BivectorField::from_entries(dim, rows);
}

PathSpec path_from(const json& spec, const std::string& where, int dim) {
  require_keys(spec, where,
               {"label", "kind", "point", "covector", "covector_const", "covector_cos",
                "covector_sin", "frequency", "duration", "axis_a", "axis_b", "t0", "t1",
                "closed", "base", "alpha"});
  PathSpec p;
  if (!spec.contains("label") || !spec["label"].is_string())
    fail(where, "missing string field 'label'");
  p.label = spec["label"].get<std::string>();
  if (!spec.contains("kind") || !spec["kind"].is_string())
    fail(where, "missing string field 'kind'");
  p.kind = spec["kind"].get<std::string>();
  p.duration = number_at(spec, where, "duration", 1.0);
  p.frequency = number_at(spec, where, "frequency", 1.0);
  if (p.duration <= 0.0) fail(where + ".duration", "must be positive");

  if (p.kind == "constant-loop") {
    p.point = vec_at(spec, where, "point", dim);
    p.covector = vec_at(spec, where, "covector", dim);
  } else if (p.kind == "stationary-loop" || p.kind == "flow") {
    p.point = vec_at(spec, where, p.kind == "flow" ? "point" : "point", dim);
    p.covector_const = vec_at(spec, where, "covector_const", dim, false);
    p.covector_cos = vec_at(spec, where, "covector_cos", dim, false);
    p.covector_sin = vec_at(spec, where, "covector_sin", dim, false);
  } else if (p.kind == "lift-circle") {
    p.point = vec_at(spec, where, "point", dim);
    p.axis_a = vec_at(spec, where, "axis_a", dim);
    p.axis_b = vec_at(spec, where, "axis_b", dim);
  } else if (p.kind == "samples") {
    p.t0 = number_at(spec, where, "t0", 0.0);
    p.t1 = number_at(spec, where, "t1", 1.0);
    p.closed = spec.contains("closed") && spec["closed"].is_boolean()
                   ? spec["closed"].get<bool>()
                   : false;
    auto grid = [&](const char* key) {
      if (!spec.contains(key) || !spec[key].is_array())
        fail(where, std::string("missing array field '") + key + "'");
      const json& cols = spec[key];
      Mat m(dim, cols.size());
      for (size_t c = 0; c < cols.size(); ++c) {
        if (!cols[c].is_array() || static_cast<int>(cols[c].size()) != dim)
          fail(where + "." + key, "each column needs " + std::to_string(dim) + " numbers");
        for (int r = 0; r < dim; ++r) m(r, static_cast<int>(c)) = cols[c][static_cast<size_t>(r)].get<double>();
      }
      return m;
    };
    p.base_samples = grid("base");
    p.alpha_samples = grid("alpha");
  } else {
    fail(where + ".kind", "unknown path kind '" + p.kind + "'");
  }
  return p;
}

void apply_tolerances(const json& tol, const std::string& where, NumericConfig& num) {
  require_keys(tol, where,
               {"tau_rank", "tau_drift", "tau_leaf", "tau_cot", "tau_theorem",
                "tau_oracle_const", "tau_oracle_var", "tau_modular", "tau_lie_derivative",
                "tau_hamiltonian", "tau_loop_integral", "tau_gauge_loop", "tau_coset",
                "tau_homotopy"});
  auto set = [&](const char* key, double& slot) {
    if (tol.contains(key)) {
      double v = number_at(tol, where, key);
      if (v <= 0.0) fail(where + "." + key, "tolerances must be positive");
      slot = v;
    }
  };
  set("tau_rank", num.integrator.tau_rank);
  set("tau_drift", num.integrator.tau_drift);
  set("tau_leaf", num.integrator.tau_leaf);
  set("tau_cot", num.integrator.tau_cot);
  set("tau_theorem", num.tau_theorem);
  set("tau_oracle_const", num.tau_oracle_const);
  set("tau_oracle_var", num.tau_oracle_var);
  set("tau_modular", num.tau_modular);
  set("tau_lie_derivative", num.tau_lie_derivative);
  set("tau_hamiltonian", num.tau_hamiltonian);
  set("tau_loop_integral", num.tau_loop_integral);
  set("tau_gauge_loop", num.tau_gauge_loop);
  set("tau_coset", num.tau_coset);
  set("tau_homotopy", num.tau_homotopy);
}

}  // namespace

CotangentPath PathSpec::build(const BivectorField& pi, int intervals) const {
  if (kind == "constant-loop") return constant_loop(pi, point, covector, duration, intervals);
  if (kind == "stationary-loop") {
    auto a = [this](double t) {
      double u = kTau * frequency * t / duration;
      return Vec(covector_const + covector_cos * std::cos(u) + covector_sin * std::sin(u));
    };
    return stationary_path(pi, point, a, duration, intervals);
  }
  if (kind == "flow") {
    auto a = [this](double t) {
      double u = kTau * frequency * t / duration;
      return Vec(covector_const + covector_cos * std::cos(u) + covector_sin * std::sin(u));
    };
    return flow_path(pi, point, a, duration, intervals, 32);
  }
  if (kind == "lift-circle") {
    TangentPath base = TangentPath::parametric(
        pi.dim(),
        [this](double t) {
          double u = kTau * t / duration;
          return Vec(point + axis_a * std::cos(u) + axis_b * std::sin(u));
        },
        0.0, duration, intervals, true);
    return lift_min_norm(pi, base);
  }
  if (kind == "samples") {
    TangentPath base = TangentPath::from_samples(t0, t1, base_samples, closed);
    return CotangentPath({CotangentSegment::make(std::move(base), alpha_samples)});
  }
  throw Error("PathSpec::build: unknown kind '" + kind + "'");
}

const PathSpec& Manifest::path(const std::string& label) const {
  for (const auto& p : paths)
    if (p.label == label) return p;
  throw Error("manifest: no path labelled '" + label + "'");
}

Manifest parse_manifest(const std::string& text, const std::string& origin) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error("manifest: " + origin + ": " + e.what());
  }
  require_keys(doc, origin,
               {"dimension", "bivector", "density", "paths", "families", "suites", "numeric"});

  Manifest m;
  if (!doc.contains("dimension") || !doc["dimension"].is_number_integer())
    fail(origin, "missing integer field 'dimension'");
  m.dimension = doc["dimension"].get<int>();
  if (m.dimension <= 0) fail(origin + ".dimension", "must be positive");

  if (!doc.contains("bivector")) fail(origin, "missing field 'bivector'");
  m.bivector = bivector_from(doc["bivector"], origin + ".bivector", m.dimension, m.preset);

  if (doc.contains("density")) {
    require_keys(doc["density"], origin + ".density", {"log_terms"});
    if (!doc["density"].contains("log_terms"))
      fail(origin + ".density", "missing field 'log_terms'");
    m.density = VolumeDensity(
        poly_from_terms(doc["density"]["log_terms"], origin + ".density.log_terms",
                        m.dimension));
  } else {
    m.density = VolumeDensity::flat(m.dimension);
  }

  if (doc.contains("numeric")) {
    const json& num = doc["numeric"];
    std::string nw = origin + ".numeric";
    require_keys(num, nw,
                 {"steps_per_unit", "samples", "seed", "probes", "random_pairs",
                  "sigma_override", "tolerances"});
    m.numeric.steps_per_unit = static_cast<int>(number_at(num, nw, "steps_per_unit", 4096));
    m.numeric.samples = static_cast<int>(number_at(num, nw, "samples", kDefaultPathSamples));
    m.numeric.seed = static_cast<unsigned>(number_at(num, nw, "seed", 7));
    m.numeric.probes = static_cast<int>(number_at(num, nw, "probes", 100));
    m.numeric.random_pairs = static_cast<int>(number_at(num, nw, "random_pairs", 10));
    if (m.numeric.steps_per_unit < 2) fail(nw + ".steps_per_unit", "need at least 2");
    if (m.numeric.samples < 8 || m.numeric.samples % 2 != 0)
      fail(nw + ".samples", "need an even count of at least 8");
    if (num.contains("sigma_override")) {
      double s = number_at(num, nw, "sigma_override");
      if (s != 1.0 && s != -1.0) fail(nw + ".sigma_override", "must be +1 or -1");
      m.numeric.sigma_override = s;
    }
    if (num.contains("tolerances"))
      apply_tolerances(num["tolerances"], nw + ".tolerances", m.numeric);
  }
  m.numeric.integrator.steps_per_unit = m.numeric.steps_per_unit;

  std::set<std::string> labels;
  if (doc.contains("paths")) {
    if (!doc["paths"].is_array()) fail(origin + ".paths", "expected an array");
    for (size_t k = 0; k < doc["paths"].size(); ++k) {
      PathSpec p = path_from(doc["paths"][k],
                             origin + ".paths[" + std::to_string(k) + "]", m.dimension);
      if (!labels.insert(p.label).second)
        fail(origin + ".paths", "duplicate label '" + p.label + "'");
      m.paths.push_back(std::move(p));
    }
  }

  if (doc.contains("families")) {
    if (!doc["families"].is_array()) fail(origin + ".families", "expected an array");
    for (size_t k = 0; k < doc["families"].size(); ++k) {
      std::string fw = origin + ".families[" + std::to_string(k) + "]";
      const json& fam = doc["families"][k];
      require_keys(fam, fw, {"label", "members"});
      FamilySpec f;
      if (!fam.contains("label") || !fam["label"].is_string())
        fail(fw, "missing string field 'label'");
      f.label = fam["label"].get<std::string>();
      if (!labels.insert(f.label).second) fail(fw, "duplicate label '" + f.label + "'");
      if (!fam.contains("members") || !fam["members"].is_array() || fam["members"].size() < 2)
        fail(fw, "need an array of at least 2 members");
      for (size_t j = 0; j < fam["members"].size(); ++j)
        f.members.push_back(path_from(fam["members"][j],
                                      fw + ".members[" + std::to_string(j) + "]",
                                      m.dimension));
      m.families.push_back(std::move(f));
    }
  }

  static const std::set<std::string> kSuites = {"holonomy", "theorem-main", "modular",
                                               "integrals", "oracles", "homotopy"};
  if (doc.contains("suites")) {
    if (!doc["suites"].is_array()) fail(origin + ".suites", "expected an array");
    for (const auto& s : doc["suites"]) {
      if (!s.is_string() || !kSuites.count(s.get<std::string>()))
        fail(origin + ".suites", "unknown suite " + s.dump());
      m.suites.push_back(s.get<std::string>());
    }
  } else {
    m.suites = {"holonomy", "theorem-main", "modular", "integrals"};
  }
  if (std::find(m.suites.begin(), m.suites.end(), "oracles") != m.suites.end() &&
      !presets::is_lie_poisson(m.preset))
    fail(origin + ".suites", "the oracles suite needs a linear (Lie-Poisson) preset");

  // Jacobi gate for custom structures, at seeded probe points.
  if (m.preset.empty()) {
    std::mt19937 rng(m.numeric.seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int k = 0; k < 25; ++k) {
      Vec x(m.dimension);
      for (int i = 0; i < m.dimension; ++i) x[i] = u(rng);
      double defect = jacobi_defect(m.bivector, x);
      if (defect > 1e-10) {
        std::ostringstream os;
        os << origin << ".bivector: Jacobi identity fails (defect " << defect
           << ") at probe point [";
        for (int i = 0; i < m.dimension; ++i) os << (i ? ", " : "") << x[i];
        os << "]";
        throw Error(os.str());
      }
    }
  }
  return m;
}

Manifest load_manifest(const std::string& file) {
  std::ifstream in(file);
  if (!in) throw Error("manifest: cannot open '" + file + "'");
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_manifest(buf.str(), file);
}

}  // namespace holomod
