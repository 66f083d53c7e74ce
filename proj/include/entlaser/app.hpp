#pragma once

#include <array>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "entlaser/config.hpp"
#include "entlaser/entanglement.hpp"
#include "entlaser/oracle.hpp"

namespace entlaser {

/// %.17g
std::string format_double(double v);

struct RunOutcome {
  SimulationResult result;
  EntanglementReport report;
};

RunOutcome execute_run(const RunConfig& cfg);

/// `# key=value` metadata lines followed by t,variance_sum,photon_number,entangled.
void write_csv(std::ostream& os, const RunConfig& cfg, const RunOutcome& run);
void write_json(std::ostream& os, const RunConfig& cfg, const RunOutcome& run);
/// Human-readable report, one item per line.
std::string report_summary(const RunOutcome& run);

/// Sweep axes are PhysicalParams fields plus `kappa` (both cavity rates) and
/// `gamma` (all four decay rates).
void set_sweep_parameter(PhysicalParams& p, std::string_view axis, double value);

struct SweepRow {
  double value = 0.0;
  std::optional<EntanglementReport> report;
  std::optional<std::string> notice;
  std::string error;  ///< empty on success
};

/// Rows are computed independently on up to `threads` workers (0: hardware
/// concurrency); a failing row records its error and the sweep continues.
std::vector<SweepRow> run_sweep(const RunConfig& base, std::string_view axis,
                                std::span<const double> values, unsigned threads = 0);
void write_sweep_csv(std::ostream& os, std::string_view axis, std::span<const SweepRow> rows);

enum class OracleKind { Field, Micro };
std::string_view to_string(OracleKind k);
OracleKind oracle_kind_from_string(std::string_view name);

/// Pointwise: max_t |x_oracle - x_theory| / max(|x_theory|, 1e-12).
/// ScaleNormalised: max_t |x_oracle - x_theory| / max_t |x_theory|.
enum class DeviationMetric { Pointwise, ScaleNormalised };

/// Per-moment deviation in the order b1, b2, n1, n2, m.
std::array<double, 5> moment_deviation(std::span<const MomentState> oracle,
                                       std::span<const MomentState> theory,
                                       DeviationMetric metric);

inline constexpr std::array<const char*, 5> kMomentNames = {"b1", "b2", "n1", "n2", "m"};

struct OracleOptions {
  OracleKind kind = OracleKind::Field;
  int n_max = 24;
  double threshold = 1e-3;
  std::size_t samples = 201;
};

struct OracleComparison {
  OracleKind kind = OracleKind::Field;
  int n_max = 0;
  DeviationMetric metric = DeviationMetric::Pointwise;
  std::vector<double> times;
  std::vector<MomentState> oracle;
  std::vector<MomentState> theory;
  std::vector<double> leakage;
  std::vector<double> trace_drift;  ///< Tr rho(t) - Tr rho(0)
  std::vector<double> hermiticity;
  std::array<double, 5> deviation{};
  double max_deviation = 0.0;
  double max_photons = 0.0;
  double threshold = 1e-3;
  bool leakage_exceeded = false;
  double last_valid_time = 0.0;
  double step = 0.0;
  bool passed() const { return !leakage_exceeded && max_deviation < threshold; }
};

/// Field: effective generator from the config's coefficients; Micro: the
/// atom (x) field generator started from the atomic steady state. The
/// initial field must be vacuum or coherent. Leakage is reported in the
/// result, never thrown.
OracleComparison compare_oracle(const RunConfig& cfg, const OracleOptions& opts);
std::string oracle_summary(const OracleComparison& cmp);
void write_oracle_csv(std::ostream& os, const OracleComparison& cmp);

/// CoefficientSet, P-parameters, parametric limits and regime as JSON text.
std::string coefficients_json(const RunConfig& cfg);

}  // namespace entlaser
