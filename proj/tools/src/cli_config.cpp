#include "cli_config.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace caslayer::cli {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw ConfigValidationError(ConfigError{path, message});
}

void require_keys(const json& obj, const std::string& path,
                  const std::set<std::string>& allowed) {
  for (const auto& item : obj.items()) {
    if (!allowed.count(item.key())) {
      fail(path.empty() ? item.key() : path + "." + item.key(),
           "unknown field (strict mode)");
    }
  }
}

const json& require_field(const json& obj, const std::string& path,
                          const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) {
    fail(path.empty() ? key : path + "." + key, "missing required field");
  }
  return *it;
}

double get_finite_number(const json& j, const std::string& path) {
  if (!j.is_number()) fail(path, "expected a number");
  const double v = j.get<double>();
  if (!std::isfinite(v)) fail(path, "expected a finite number");
  return v;
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get<std::string>();
}

Material parse_material(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected a material object");
  const std::string type = get_string(require_field(j, path, "type"),
                                      path + ".type");
  if (type == "vacuum") {
    require_keys(j, path, {"type"});
    return Vacuum{};
  }
  if (type == "conductor") {
    require_keys(j, path, {"type"});
    return PerfectConductor{};
  }
  if (type == "weyl") {
    require_keys(j, path, {"type", "b"});
    const double b = get_finite_number(require_field(j, path, "b"),
                                       path + ".b");
    return WeylSemimetal{b};
  }
  if (type == "dielectric") {
    const std::string model = get_string(require_field(j, path, "model"),
                                         path + ".model");
    if (model == "constant") {
      require_keys(j, path, {"type", "model", "eps"});
      const double eps = get_finite_number(require_field(j, path, "eps"),
                                           path + ".eps");
      if (eps < 1.0) fail(path + ".eps", "permittivity must be >= 1");
      return Dielectric{ConstantEps{eps}};
    }
    if (model == "plasma") {
      require_keys(j, path, {"type", "model", "omega_p"});
      const double wp = get_finite_number(
          require_field(j, path, "omega_p"), path + ".omega_p");
      if (wp < 0.0) fail(path + ".omega_p", "plasma frequency must be >= 0");
      return Dielectric{PlasmaEps{wp}};
    }
    if (model == "drude") {
      require_keys(j, path, {"type", "model", "omega_p", "gamma"});
      const double wp = get_finite_number(
          require_field(j, path, "omega_p"), path + ".omega_p");
      const double g = get_finite_number(require_field(j, path, "gamma"),
                                         path + ".gamma");
      if (wp < 0.0) fail(path + ".omega_p", "plasma frequency must be >= 0");
      if (g < 0.0) fail(path + ".gamma", "relaxation rate must be >= 0");
      return Dielectric{DrudeEps{wp, g}};
    }
    fail(path + ".model",
         "unknown dielectric model (expected constant | plasma | drude)");
  }
  fail(path + ".type",
       "unknown material type (expected vacuum | conductor | dielectric | "
       "weyl)");
}

LayerStack parse_stack(const json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
  require_keys(j, path, {"regions"});
  const json& regions = require_field(j, path, "regions");
  if (!regions.is_array() || regions.size() < 2) {
    fail(path + ".regions", "expected an array of at least two regions");
  }
  std::vector<Region> out;
  for (std::size_t i = 0; i < regions.size(); ++i) {
    const std::string rpath = path + ".regions[" + std::to_string(i) + "]";
    const json& r = regions[i];
    if (!r.is_object()) fail(rpath, "expected a region object");
    require_keys(r, rpath, {"material", "width"});
    Material m = parse_material(require_field(r, rpath, "material"),
                                rpath + ".material");
    const json& w = require_field(r, rpath, "width");
    const bool is_end = (i == 0 || i + 1 == regions.size());
    double width = 0.0;
    if (w.is_string()) {
      if (w.get<std::string>() != "infinite") {
        fail(rpath + ".width", "the only allowed string value is \"infinite\"");
      }
      if (!is_end) {
        fail(rpath + ".width", "only the two end regions may be infinite");
      }
      width = std::numeric_limits<double>::infinity();
    } else {
      const double v = get_finite_number(w, rpath + ".width");
      if (is_end) {
        fail(rpath + ".width",
             "end regions are semi-infinite; use the string \"infinite\"");
      }
      if (v < 0.0) fail(rpath + ".width", "width must be >= 0");
      width = v;
    }
    try {
      validate_material(m);
    } catch (const std::exception& e) {
      fail(rpath + ".material", e.what());
    }
    out.push_back({std::move(m), width});
  }
  try {
    return LayerStack(std::move(out));
  } catch (const std::exception& e) {
    fail(path, e.what());
  }
}

Observable parse_observable(const json& j, const std::string& path) {
  const std::string s = get_string(j, path);
  if (s == "energy") return Observable::Energy;
  if (s == "force") return Observable::Force;
  if (s == "work") return Observable::Work;
  if (s == "identity-check") return Observable::IdentityCheck;
  fail(path,
       "unknown observable (expected energy | force | work | "
       "identity-check)");
}

std::size_t get_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    fail(path, "expected a non-negative integer index");
  }
  return static_cast<std::size_t>(j.get<long long>());
}

}  // namespace

const char* observable_name(Observable o) {
  switch (o) {
    case Observable::Energy: return "energy";
    case Observable::Force: return "force";
    case Observable::Work: return "work";
    case Observable::IdentityCheck: return "identity-check";
  }
  return "?";
}

RunConfig parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    fail("", std::string("malformed JSON: ") + e.what());
  }
  if (!doc.is_object()) fail("", "top level must be a JSON object");
  require_keys(doc, "",
               {"schema_version", "stack", "observable", "target", "thermal",
                "quadrature", "basis", "padding", "identity", "sweep",
                "output", "unit"});

  RunConfig c;

  const json& sv = require_field(doc, "", "schema_version");
  if (!sv.is_number_integer() || sv.get<int>() != kSchemaVersion) {
    fail("schema_version",
         "unsupported schema version (this build understands version " +
             std::to_string(kSchemaVersion) + ")");
  }

  c.stack = parse_stack(require_field(doc, "", "stack"), "stack");
  c.observable =
      parse_observable(require_field(doc, "", "observable"), "observable");
  const std::size_t nslab = c.stack.num_slabs();

  // target
  if (doc.contains("target")) {
    const json& t = doc["target"];
    if (!t.is_object()) fail("target", "expected an object");
    require_keys(t, "target", {"gap", "body", "triple"});
    if (t.contains("gap")) {
      c.target.gap = get_index(t["gap"], "target.gap");
    }
    if (t.contains("body")) {
      c.target.body = get_index(t["body"], "target.body");
    }
    if (t.contains("triple")) {
      const json& tr = t["triple"];
      if (!tr.is_array() || tr.size() != 3) {
        fail("target.triple", "expected an array [l, k, j] of three indices");
      }
      CavityTriple ct;
      ct.l = get_index(tr[0], "target.triple[0]");
      ct.k = get_index(tr[1], "target.triple[1]");
      ct.j = get_index(tr[2], "target.triple[2]");
      c.target.triple = ct;
    }
  }
  switch (c.observable) {
    case Observable::Force: {
      const bool has_gap = c.target.gap.has_value();
      const bool has_body = c.target.body.has_value();
      if (has_gap == has_body) {
        fail("target", "force needs exactly one of target.gap, target.body");
      }
      if (c.target.triple) fail("target.triple", "not a force target");
      if (has_gap && (*c.target.gap < 1 || *c.target.gap > nslab)) {
        fail("target.gap", "must be an interior region index");
      }
      if (has_body && (*c.target.body < 2 || *c.target.body + 1 > nslab)) {
        fail("target.body",
             "the body needs interior regions on both sides");
      }
      break;
    }
    case Observable::Work: {
      if (!c.target.triple) fail("target.triple", "work needs a triple");
      if (c.target.gap || c.target.body) {
        fail("target", "work takes only target.triple");
      }
      const CavityTriple ct = *c.target.triple;
      if (!(ct.l < ct.k && ct.k < ct.j) || ct.j > nslab + 1) {
        fail("target.triple", "indices must satisfy l < k < j <= N+1");
      }
      if (ct.k < 1 || ct.k > nslab) {
        fail("target.triple", "the middle index must be an interior region");
      }
      break;
    }
    case Observable::Energy:
    case Observable::IdentityCheck:
      if (c.target.gap || c.target.body || c.target.triple) {
        fail("target", std::string(observable_name(c.observable)) +
                           " takes no target");
      }
      break;
  }

  // thermal
  if (doc.contains("thermal")) {
    const json& t = doc["thermal"];
    if (!t.is_object()) fail("thermal", "expected an object");
    require_keys(t, "thermal", {"temperature"});
    if (t.contains("temperature")) {
      const double temp =
          get_finite_number(t["temperature"], "thermal.temperature");
      if (temp < 0.0) fail("thermal.temperature", "must be >= 0");
      c.thermal.temperature = temp;
    }
  }

  // quadrature
  if (doc.contains("quadrature")) {
    const json& q = doc["quadrature"];
    if (!q.is_object()) fail("quadrature", "expected an object");
    require_keys(q, "quadrature", {"rel_tol", "max_evals"});
    if (q.contains("rel_tol")) {
      const double rt = get_finite_number(q["rel_tol"], "quadrature.rel_tol");
      if (!(rt > 0.0 && rt < 1.0)) {
        fail("quadrature.rel_tol", "must lie in (0, 1)");
      }
      c.quadrature.rel_tol = rt;
    }
    if (q.contains("max_evals")) {
      const json& me = q["max_evals"];
      if (!me.is_number_integer() || me.get<long long>() <= 0) {
        fail("quadrature.max_evals", "expected a positive integer");
      }
      c.quadrature.max_evals =
          static_cast<std::size_t>(me.get<long long>());
    }
  }

  // basis
  if (doc.contains("basis")) {
    const std::string b = get_string(doc["basis"], "basis");
    if (b == "auto") {
      c.basis = BasisChoice::Auto;
    } else if (b == "tmte") {
      c.basis = BasisChoice::TMTE;
    } else if (b == "helicity") {
      c.basis = BasisChoice::Helicity;
    } else {
      fail("basis", "expected auto | tmte | helicity");
    }
  }
  if (c.basis == BasisChoice::TMTE && c.stack.has_weyl()) {
    fail("basis",
         "Weyl regions make the scattering non-diagonalizable in the TM/TE "
         "basis; use auto or helicity");
  }

  // padding
  if (doc.contains("padding")) {
    const json& p = doc["padding"];
    if (!p.is_object()) fail("padding", "expected an object");
    require_keys(p, "padding", {"scale"});
    PaddingSpec ps;
    if (p.contains("scale")) {
      ps.scale = get_finite_number(p["scale"], "padding.scale");
      if (ps.scale < 100.0) fail("padding.scale", "must be >= 100");
    }
    if (c.observable != Observable::Energy) {
      fail("padding", "far-boundary padding only applies to the energy "
                      "observable");
    }
    c.padding = ps;
  }
  if (c.observable == Observable::Energy && !c.padding) {
    const std::size_t last = c.stack.num_regions() - 1;
    if (!is_perfect_conductor(c.stack.material(0)) ||
        !is_perfect_conductor(c.stack.material(last))) {
      fail("padding",
           "the energy observable needs perfect-conductor end regions; add "
           "a padding section to emulate open boundaries");
    }
  }

  // identity
  if (doc.contains("identity")) {
    if (c.observable != Observable::IdentityCheck) {
      fail("identity", "only applies to the identity-check observable");
    }
    const json& id = doc["identity"];
    if (!id.is_object()) fail("identity", "expected an object");
    require_keys(id, "identity", {"samples", "seed"});
    if (id.contains("samples")) {
      const json& s = id["samples"];
      if (!s.is_number_integer() || s.get<long long>() <= 0) {
        fail("identity.samples", "expected a positive integer");
      }
      c.identity.samples = static_cast<std::size_t>(s.get<long long>());
    }
    if (id.contains("seed")) {
      const json& s = id["seed"];
      if (!s.is_number_integer() || s.get<long long>() < 0) {
        fail("identity.seed", "expected a non-negative integer");
      }
      c.identity.seed = static_cast<std::uint64_t>(s.get<long long>());
    }
  }

  // sweep
  if (doc.contains("sweep")) {
    const json& s = doc["sweep"];
    if (!s.is_object()) fail("sweep", "expected an object");
    require_keys(s, "sweep", {"path", "values"});
    c.sweep.path = get_string(require_field(s, "sweep", "path"), "sweep.path");
    if (c.sweep.path.empty() || c.sweep.path[0] != '/') {
      fail("sweep.path", "expected a JSON pointer starting with '/'");
    }
    try {
      const json::json_pointer ptr(c.sweep.path);
      if (!doc.contains(ptr)) {
        fail("sweep.path", "does not resolve inside this config");
      }
      if (!doc.at(ptr).is_number()) {
        fail("sweep.path", "must point at a numeric field");
      }
    } catch (const json::parse_error&) {
      fail("sweep.path", "not a valid JSON pointer");
    }
    const json& vals = require_field(s, "sweep", "values");
    if (!vals.is_array()) fail("sweep.values", "expected an array");
    const bool positivity =
        c.sweep.path.size() >= 6 &&
            c.sweep.path.compare(c.sweep.path.size() - 6, 6, "/width") == 0;
    const bool positivity_temp =
        c.sweep.path.size() >= 12 &&
        c.sweep.path.compare(c.sweep.path.size() - 12, 12,
                             "/temperature") == 0;
    for (std::size_t i = 0; i < vals.size(); ++i) {
      const double v = get_finite_number(
          vals[i], "sweep.values[" + std::to_string(i) + "]");
      if ((positivity || positivity_temp) && !(v > 0.0)) {
        fail("sweep.values[" + std::to_string(i) + "]",
             "swept widths and temperatures must be strictly positive");
      }
      c.sweep.values.push_back(v);
    }
  }

  // output
  if (doc.contains("output")) {
    const json& o = doc["output"];
    if (!o.is_object()) fail("output", "expected an object");
    require_keys(o, "output", {"path", "format"});
    if (o.contains("path")) {
      c.output.path = get_string(o["path"], "output.path");
    }
    if (o.contains("format")) {
      const std::string f = get_string(o["format"], "output.format");
      if (f == "csv") {
        c.output.format = OutputFormat::Csv;
      } else if (f == "tsv") {
        c.output.format = OutputFormat::Tsv;
      } else {
        fail("output.format", "expected csv | tsv");
      }
    }
  }

  // unit
  if (doc.contains("unit")) {
    const json& u = doc["unit"];
    if (!u.is_object()) fail("unit", "expected an object");
    require_keys(u, "unit", {"length_nm"});
    if (u.contains("length_nm")) {
      const double v = get_finite_number(u["length_nm"], "unit.length_nm");
      if (!(v > 0.0)) fail("unit.length_nm", "must be > 0");
      c.unit_length_nm = v;
    }
  }

  // Canonicalize: materialize every default the parse filled in, so that
  // serialize -> parse round-trips to an identical document and the config
  // hash covers the effective settings rather than the typed-in subset.
  json canon = doc;
  canon["schema_version"] = kSchemaVersion;
  canon["thermal"] = {{"temperature", c.thermal.temperature}};
  canon["quadrature"] = {{"rel_tol", c.quadrature.rel_tol},
                         {"max_evals", c.quadrature.max_evals}};
  canon["basis"] = (c.basis == BasisChoice::Auto)
                       ? "auto"
                       : (c.basis == BasisChoice::TMTE ? "tmte" : "helicity");
  canon["output"] = {
      {"path", c.output.path},
      {"format", c.output.format == OutputFormat::Csv ? "csv" : "tsv"}};
  canon["unit"] = {{"length_nm", c.unit_length_nm}};
  if (c.padding) canon["padding"] = {{"scale", c.padding->scale}};
  if (c.observable == Observable::IdentityCheck) {
    canon["identity"] = {{"samples", c.identity.samples},
                         {"seed", c.identity.seed}};
  }
  c.document = std::move(canon);
  return c;
}

std::string serialize_config(const RunConfig& config) {
  return config.document.dump(2) + "\n";
}

std::string config_hash(const RunConfig& config) {
  const std::string s = config.document.dump();
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a 64 offset basis
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;  // FNV-1a 64 prime
  }
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx",
                static_cast<unsigned long long>(h));
  return std::string(buf);
}

RunConfig apply_overrides(const RunConfig& config, const CliOverrides& o) {
  nlohmann::json doc = config.document;
  if (o.observable) doc["observable"] = *o.observable;
  if (o.tolerance) doc["quadrature"]["rel_tol"] = *o.tolerance;
  if (o.output_path) doc["output"]["path"] = *o.output_path;
  if (o.format) doc["output"]["format"] = *o.format;
  return parse_config(doc.dump());
}

}  // namespace caslayer::cli
