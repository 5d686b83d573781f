#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bhed/entanglement.hpp"
#include "bhed/error.hpp"
#include "bhed/hamiltonian.hpp"

namespace bhed {

/// Configuration error tied to a line of the input text (0 when not line-specific).
class ConfigError : public InvalidArgument {
 public:
  ConfigError(int line, const std::string& message)
      : InvalidArgument(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

enum class OutputFormat { Csv, Json };

struct ModelConfig {
  int M = 0;
  int N = 0;  ///< resolved: M/2 under half filling
  bool half_filling = true;
  int n_max = 1;  ///< resolved: 1 for hard-core, min(N, 5) otherwise
  Boundary boundary = Boundary::Open;
  bool hardcore = false;
  double t2 = -1.0;
};

struct GridConfig {
  std::vector<double> t1_over_t2{1.0};
  std::vector<double> Uprime{0.0};
};

struct SolverConfig {
  double tol = 1e-10;
  int max_iter = 20000;
  std::uint64_t seed = 12345;
};

struct ObservableSet {
  bool momentum = true;
  bool chiral = true;
  bool dimer_xy = true;
  bool dimer_zz = true;
  bool half_chain_entropy = true;
  bool ggm = true;
  GgmScope ggm_scope = GgmScope::All;
  int ggm_ceiling = 16;
};

struct OutputConfig {
  std::string path = "sweep.csv";
  OutputFormat format = OutputFormat::Csv;
  int N_q = 1000;
};

struct SweepConfig {
  ModelConfig model;
  GridConfig grid;
  SolverConfig solver;
  ObservableSet observables;
  OutputConfig output;

  std::size_t planned_runs() const { return grid.t1_over_t2.size() * grid.Uprime.size(); }
};

/// Parses the sectioned key = value format documented in README.md. Unknown
/// sections or keys, duplicates and constraint violations raise ConfigError
/// with the offending line.
SweepConfig parse_config(std::string_view text);
SweepConfig load_config(const std::string& path);

/// One parameter set of the chain.
struct PointSpec {
  int M = 0;
  int N = 0;
  int n_max = 1;
  Boundary boundary = Boundary::Open;
  bool hardcore = false;
  double t1 = 0.0;
  double t2 = -1.0;
  double U = 0.0;
  double Uprime = 0.0;
};

inline constexpr int kSchemaVersion = 1;

struct SweepResultRecord {
  int schema_version = kSchemaVersion;
  PointSpec point;
  std::optional<double> E0;
  std::optional<double> gap;
  std::optional<bool> degenerate;
  std::optional<double> eta;
  std::optional<double> q_max;
  std::optional<std::string> commensurate;
  std::optional<double> Sq_norm;
  std::optional<double> kappa_bar;
  std::optional<double> Dxy_bar_kinetic;
  std::optional<double> Dxy_bar_current;
  std::optional<double> Dzz_bar;
  std::optional<double> E_half;
  std::optional<double> ggm;
  std::optional<std::uint64_t> ggm_argmax_bitmask;
  std::optional<int> solver_iters;
  std::optional<double> residual;
  /// Error or skip reasons; not part of the CSV columns.
  std::string note;

  bool completed() const { return E0.has_value(); }
};

/// Solves one point and evaluates the requested observables. Observables that
/// do not apply (odd M for the half-chain entropy, M < 4 for dimers, M above
/// the GGM ceiling) are left empty with a reason in `note`.
SweepResultRecord evaluate_point(const PointSpec& point, const SolverConfig& solver, const ObservableSet& observables,
                                 int n_q);

/// Grid points in output order (ratio-major, then U').
std::vector<PointSpec> plan_points(const SweepConfig& config);

struct SweepOutcome {
  std::vector<SweepResultRecord> records;
  std::size_t failed = 0;
  std::size_t reused = 0;
};

/// Runs every grid point, reusing completed rows already present in the output
/// file, and rewrites the output after each batch. The output location is
/// checked for writability before any solve starts.
SweepOutcome run_sweep(const SweepConfig& config);

// Serialization.

/// Exact CSV header (schema_version 1).
const std::vector<std::string>& csv_columns();
std::string format_csv(const std::vector<SweepResultRecord>& records);
std::vector<SweepResultRecord> parse_csv(std::string_view text);
std::string format_json(const std::vector<SweepResultRecord>& records);
std::vector<SweepResultRecord> parse_json(std::string_view text);

/// Value matrix over the sweep grid for one CSV column: rows are t1/t2, columns U'.
struct PlotMatrix {
  std::string quantity;
  std::vector<double> ratios;
  std::vector<double> uprimes;
  std::vector<std::vector<std::optional<double>>> values;  ///< [ratio][uprime]
};

PlotMatrix emit_plot_data(const std::vector<SweepResultRecord>& records, const std::string& quantity);
std::string format_plot_csv(const PlotMatrix& matrix);

/// printf("%.17g")
std::string format_double(double value);

}  // namespace bhed
