#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "caslayer/materials.hpp"
#include "caslayer/stack.hpp"
#include "caslayer/thermo.hpp"

namespace caslayer::cli {

// Exit codes of the command-line tool (also the contract for scripting).
inline constexpr int kExitOk = 0;
inline constexpr int kExitValidation = 2;
inline constexpr int kExitNonConvergence = 3;
inline constexpr int kExitNumericFailure = 4;

inline constexpr int kSchemaVersion = 1;

// Conversion constant between natural units (hbar = c = 1) and SI-flavoured
// output: hbar*c in eV*nm.  With the configured length unit expressed in
// nanometres, an observable of natural dimension length^-d converts to
// eV/nm^(d-1) through value * hbar_c / unit_nm^d.
inline constexpr double kHbarC_eV_nm = 197.3269804;

enum class Observable { Energy, Force, Work, IdentityCheck };
enum class OutputFormat { Csv, Tsv };
enum class BasisChoice { Auto, TMTE, Helicity };

struct ConfigError {
  std::string path;     // dotted field path, e.g. "stack.regions[2].width"
  std::string message;  // human-readable reason
};

struct SweepSpec {
  std::string path;            // JSON pointer into the config document
  std::vector<double> values;  // one run per value; empty = header only
};

struct TargetSpec {
  std::optional<std::size_t> gap;   // force: interior gap index
  std::optional<std::size_t> body;  // force: interior body index
  std::optional<CavityTriple> triple;  // work: (l, k, j) boundaries
};

struct IdentitySpec {
  std::size_t samples = 1000;
  std::uint64_t seed = 20240913;
};

struct PaddingSpec {
  double scale = 2.0e4;  // far-boundary padding in units of the widest slab
};

struct OutputSpec {
  std::string path;  // empty = stdout
  OutputFormat format = OutputFormat::Csv;
};

// Fully validated run configuration.  `document` keeps the canonical JSON it
// was built from (defaults filled in), so a config round-trips losslessly
// and the sweep machinery can patch it by JSON pointer.
struct RunConfig {
  nlohmann::json document;
  LayerStack stack{std::vector<Region>{{Vacuum{}, 0.0}, {Vacuum{}, 0.0}}};
  Observable observable = Observable::Energy;
  TargetSpec target;
  ThermalSpec thermal;
  QuadratureSpec quadrature;
  BasisChoice basis = BasisChoice::Auto;
  std::optional<PaddingSpec> padding;
  IdentitySpec identity;
  SweepSpec sweep;
  OutputSpec output;
  double unit_length_nm = 1.0;  // one natural length unit, in nanometres

  Basis working_basis() const {
    if (basis == BasisChoice::Helicity) return Basis::Helicity;
    if (basis == BasisChoice::TMTE) return Basis::TMTE;
    return stack.has_weyl() ? Basis::Helicity : Basis::TMTE;
  }
};

// Thrown on any parse or semantic validation problem; carries the offending
// field path so callers can report "where", not just "what".
class ConfigValidationError : public std::runtime_error {
 public:
  explicit ConfigValidationError(const ConfigError& e)
      : std::runtime_error(e.path.empty() ? e.message
                                          : e.path + ": " + e.message),
        error_(e) {}
  const ConfigError& error() const { return error_; }

 private:
  ConfigError error_;
};

// Parse a JSON config document (strict: unknown fields are rejected,
// schema_version is mandatory).  Throws ConfigValidationError.
RunConfig parse_config(const std::string& text);

// Re-serialize the canonical document; parse_config(serialize_config(c))
// yields an identical configuration.
std::string serialize_config(const RunConfig& config);

// FNV-1a 64-bit hash of the canonical document, hex-encoded; stamped into
// the output header so results stay traceable to their exact inputs.
std::string config_hash(const RunConfig& config);

// Command-line overrides applied on top of the parsed document (each one
// re-validates, so an override cannot smuggle in an inconsistent state).
struct CliOverrides {
  std::optional<std::string> observable;
  std::optional<double> tolerance;
  std::optional<std::string> output_path;
  std::optional<std::string> format;
};

RunConfig apply_overrides(const RunConfig& config, const CliOverrides& o);

const char* observable_name(Observable o);

}  // namespace caslayer::cli
