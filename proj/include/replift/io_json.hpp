/**
 * @file io_json.hpp
 * @brief JSON interchange: atom sums, bijection tables, verification reports,
 *        and run configuration, plus hashing and atomic file writes.
 */
#pragma once

#include <cstdio>
#include <fstream>
#include <iomanip>

#include <json.hpp>

#include "replift/shannon.hpp"
#include "replift/verification.hpp"

namespace replift {

using json = nlohmann::json;

inline constexpr int kSchemaVersion = 1;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// --- atoms -------------------------------------------------------------------

inline json atom_to_json(const TensorAtom& a) {
  json j;
  j["coeff_re"] = a.coeff.real();
  j["coeff_im"] = a.coeff.imag();
  j["power"] = a.radial.power;
  j["interval"] = {a.radial.interval.a, a.radial.interval.b};
  j["lin_phase"] = a.radial.lin_phase;
  j["quad_phase"] = a.radial.quad_phase;
  json fib;
  fib["kind"] = (a.fiber_domain == FiberKind::Circle) ? "circle" : "line";
  if (a.fiber_domain == FiberKind::Line)
    fib["interval"] = {a.fiber.interval.a, a.fiber.interval.b};
  fib["freq"] = a.fiber.freq;
  j["fiber"] = fib;
  return j;
}

inline TensorAtom atom_from_json(const json& j) {
  try {
    TensorAtom a;
    a.coeff = {j.at("coeff_re").get<double>(), j.value("coeff_im", 0.0)};
    a.radial.power = j.value("power", 0.0);
    auto iv = j.at("interval");
    a.radial.interval = {iv.at(0).get<double>(), iv.at(1).get<double>()};
    a.radial.lin_phase = j.value("lin_phase", 0.0);
    a.radial.quad_phase = j.value("quad_phase", 0.0);
    const json& fib = j.at("fiber");
    std::string kind = fib.value("kind", "line");
    if (kind == "circle") {
      a.fiber_domain = FiberKind::Circle;
      a.fiber = {{0.0, 1.0}, fib.at("freq").get<double>()};
    } else if (kind == "line") {
      a.fiber_domain = FiberKind::Line;
      auto fiv = fib.at("interval");
      a.fiber = {{fiv.at(0).get<double>(), fiv.at(1).get<double>()},
                 fib.value("freq", 0.0)};
    } else {
      throw ConfigError("atom: fiber.kind must be \"line\" or \"circle\"");
    }
    a.validate();
    return a;
  } catch (const json::exception& e) {
    throw ConfigError(std::string("atom: ") + e.what());
  }
}

inline json atoms_to_json(const AtomSum& f) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["fiber"] = (f.fiber_domain == FiberKind::Circle) ? "circle" : "line";
  j["atoms"] = json::array();
  for (const auto& a : f.atoms) j["atoms"].push_back(atom_to_json(a));
  return j;
}

inline AtomSum atoms_from_json(const json& j) {
  std::string kind = j.value("fiber", "line");
  AtomSum f(kind == "circle" ? FiberKind::Circle : FiberKind::Line);
  for (const auto& aj : j.at("atoms")) f.add(atom_from_json(aj));
  return f;
}

// --- bijection override ---------------------------------------------------------

/// Table format: {"pairs": [[[k, l], n], ...]}.
inline BijectionDR bijection_from_json(const json& j) {
  std::map<std::pair<std::int64_t, std::int64_t>, std::int64_t> table;
  for (const auto& entry : j.at("pairs")) {
    auto kl = entry.at(0);
    table[{kl.at(0).get<std::int64_t>(), kl.at(1).get<std::int64_t>()}] =
        entry.at(1).get<std::int64_t>();
  }
  try {
    return BijectionDR::from_table(table);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
}

// --- hashing & atomic writes ------------------------------------------------------

/// FNV-1a 64-bit hash, hex-encoded.
inline std::string fnv1a_hex(const std::string& data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

/// Write-then-rename so readers never observe a partial file.
inline void atomic_write(const std::string& path, const std::string& body) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot open for writing: " + tmp);
    out << body;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw std::runtime_error("cannot rename into place: " + path);
}

// --- reports -----------------------------------------------------------------------

inline json report_to_json(const VerificationReport& r,
                           const std::string& config_hash,
                           bool include_runtime = true) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["check"] = r.check_name;
  j["case"] = r.case_params;
  j["params"] = r.notes;
  j["maxDefect"] = r.max_defect;
  j["tolerance"] = r.tolerance;
  j["pass"] = r.pass;
  j["samples"] = r.sample_count;
  if (include_runtime) j["runtimeSeconds"] = r.runtime_seconds;
  j["notes"] = r.notes;
  json metrics = json::object();
  for (const auto& [name, value] : r.metrics) metrics[name] = value;
  j["metrics"] = metrics;
  j["configHash"] = config_hash;
  return j;
}

// --- run configuration ----------------------------------------------------------------

/// One case entry of a run configuration.
struct CaseSpec {
  std::string name = "L";
  double alpha = 0.0;

  CaseTag tag() const {
    try {
      if (name == "L") return CaseTag::L();
      if (name == "Q") return CaseTag::Q();
      if (name == "I") return CaseTag::I(alpha);
      if (name == "II") return CaseTag::II();
      if (name == "III") return CaseTag::III(alpha);
      if (name == "IV") return CaseTag::IV(alpha);
    } catch (const CaseMismatch& e) {
      throw ConfigError("alpha=" + std::to_string(alpha) + " invalid for case " +
                        name);
    }
    throw ConfigError("unknown case tag: " + name);
  }
};

struct RunConfig {
  std::vector<std::string> checks;  ///< empty = full suite
  std::vector<CaseSpec> cases;
  std::string generator = "DR";  ///< DR (line fiber) or DT (circle fiber)
  IndexBox box;
  int fiber_box = 2;
  double tol_exact = 1e-12;
  double tol_quadrature = 1e-8;
  double tol_intertwine = 1e-10;
  int samples = 256;
  int elements = 20;
  int points = 64;
  std::uint64_t seed = 20260823;
  std::int64_t band_depth = kDefaultBandDepth;
  std::string output_dir = "reports";
};

inline void parse_range(const json& j, int& lo, int& hi, const char* field) {
  if (!j.is_array() || j.size() != 2)
    throw ConfigError(std::string("field '") + field + "' must be [lo, hi]");
  lo = j.at(0).get<int>();
  hi = j.at(1).get<int>();
  if (lo > hi) throw ConfigError(std::string("field '") + field + "': lo > hi");
}

inline RunConfig config_from_json(const json& j) {
  RunConfig cfg;
  try {
    if (j.contains("checks")) cfg.checks = j["checks"].get<std::vector<std::string>>();
    if (j.contains("cases")) {
      for (const auto& cj : j["cases"]) {
        CaseSpec spec;
        spec.name = cj.at("case").get<std::string>();
        spec.alpha = cj.value("alpha", 0.0);
        spec.tag();  // validate now so config errors surface before any work
        cfg.cases.push_back(spec);
      }
    }
    if (j.contains("generator")) {
      cfg.generator = j["generator"].get<std::string>();
      if (cfg.generator != "DR" && cfg.generator != "DT")
        throw ConfigError("generator must be DR or DT");
    }
    if (j.contains("box")) {
      const json& b = j["box"];
      if (b.contains("k")) parse_range(b["k"], cfg.box.k_min, cfg.box.k_max, "box.k");
      if (b.contains("m")) parse_range(b["m"], cfg.box.m_min, cfg.box.m_max, "box.m");
    }
    cfg.fiber_box = j.value("fiberBox", cfg.fiber_box);
    if (j.contains("tolerances")) {
      const json& t = j["tolerances"];
      cfg.tol_exact = t.value("exact", cfg.tol_exact);
      cfg.tol_quadrature = t.value("quadrature", cfg.tol_quadrature);
      cfg.tol_intertwine = t.value("intertwine", cfg.tol_intertwine);
    }
    cfg.samples = j.value("samples", cfg.samples);
    cfg.elements = j.value("elements", cfg.elements);
    cfg.points = j.value("points", cfg.points);
    cfg.seed = j.value("seed", cfg.seed);
    cfg.band_depth = j.value("bandDepth", cfg.band_depth);
    cfg.output_dir = j.value("output", cfg.output_dir);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  return cfg;
}

inline json config_to_json(const RunConfig& cfg) {
  json j;
  j["schemaVersion"] = kSchemaVersion;
  j["checks"] = cfg.checks;
  j["cases"] = json::array();
  for (const auto& c : cfg.cases) {
    json cj;
    cj["case"] = c.name;
    if (c.name == "I" || c.name == "III" || c.name == "IV") cj["alpha"] = c.alpha;
    j["cases"].push_back(cj);
  }
  j["generator"] = cfg.generator;
  j["box"] = {{"k", {cfg.box.k_min, cfg.box.k_max}},
              {"m", {cfg.box.m_min, cfg.box.m_max}}};
  j["fiberBox"] = cfg.fiber_box;
  j["tolerances"] = {{"exact", cfg.tol_exact},
                     {"quadrature", cfg.tol_quadrature},
                     {"intertwine", cfg.tol_intertwine}};
  j["samples"] = cfg.samples;
  j["elements"] = cfg.elements;
  j["points"] = cfg.points;
  j["seed"] = cfg.seed;
  j["bandDepth"] = cfg.band_depth;
  j["output"] = cfg.output_dir;
  return j;
}

inline std::string config_hash(const RunConfig& cfg) {
  return fnv1a_hex(config_to_json(cfg).dump());
}

inline json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open: " + path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

}  // namespace replift
