#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "bhed/correlators.hpp"
#include "bhed/dimer_oracle.hpp"
#include "bhed/entanglement.hpp"
#include "bhed/fock.hpp"
#include "bhed/kernels.hpp"
#include "bhed/parallel.hpp"
#include "bhed/sweep.hpp"

namespace {

using namespace bhed;

int run_sweep_command(const std::string& config_path, bool quiet) {
  SweepConfig config;
  try {
    config = load_config(config_path);
  } catch (const InvalidArgument& e) {
    std::cerr << "config error: " << config_path << ": " << e.what() << "\n";
    return 1;
  }
  SweepOutcome outcome;
  try {
    outcome = run_sweep(config);
  } catch (const std::exception& e) {
    std::cerr << "sweep error: " << e.what() << "\n";
    return 1;
  }
  if (!quiet) {
    std::cerr << "sweep: " << outcome.records.size() << " points (" << outcome.reused << " reused, " << outcome.failed
              << " failed) -> " << config.output.path << "\n";
    for (const auto& r : outcome.records) {
      if (!r.note.empty()) {
        std::cerr << "  t1=" << format_double(r.point.t1) << " U'=" << format_double(r.point.Uprime) << ": " << r.note
                  << "\n";
      }
    }
  }
  if (outcome.failed == 0) return 0;
  return outcome.failed == outcome.records.size() ? 2 : 3;
}

struct PointArgs {
  int M = 8;
  int N = -1;
  int n_max = -1;
  double t1 = 1.0;
  double t2 = -1.0;
  double U = 0.0;
  std::string boundary = "open";
  bool hardcore = false;
  std::uint64_t seed = 12345;
  double tol = 1e-10;
  int max_iter = 20000;
  int n_q = 1000;
  std::string ggm_scope = "all";
  int ggm_ceiling = 16;
  bool json = false;
};

int run_point_command(const PointArgs& a) {
  PointSpec p;
  try {
    p.M = a.M;
    p.N = a.N < 0 ? a.M / 2 : a.N;
    p.hardcore = a.hardcore;
    p.n_max = a.n_max < 0 ? (a.hardcore ? 1 : default_n_max(p.N)) : a.n_max;
    if (a.hardcore && p.n_max != 1) throw InvalidArgument("--hardcore requires --nmax 1");
    if (a.U < 0.0) throw InvalidArgument("--U must be non-negative");
    if (a.n_q < a.M) throw InvalidArgument("--nq must be at least M");
    p.boundary = parse_boundary(a.boundary);
    p.t1 = a.t1;
    p.t2 = a.t2;
    p.U = a.U;
    p.Uprime = a.t2 != 0.0 ? a.U / std::abs(a.t2) : 0.0;
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  SolverConfig solver{a.tol, a.max_iter, a.seed};
  ObservableSet obs;
  try {
    obs.ggm_scope = parse_ggm_scope(a.ggm_scope);
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  obs.ggm_ceiling = a.ggm_ceiling;
  const SweepResultRecord r = evaluate_point(p, solver, obs, a.n_q);
  std::cout << (a.json ? format_json({r}) : format_csv({r}));
  if (!r.note.empty()) std::cerr << "note: " << r.note << "\n";
  return r.completed() ? 0 : 2;
}

int run_oracle_command(int sites, double tol) {
  if (sites < 8 || sites % 2 != 0) {
    std::cerr << "error: oracle needs even M >= 8\n";
    return 1;
  }
  const GroundState dimer = perfect_dimer_state(sites);
  bool ok = true;
  char line[256];
  const auto report = [&](const char* label, double numeric, double closed) {
    const double err = std::abs(numeric - closed);
    const bool pass = err <= tol;
    ok = ok && pass;
    std::snprintf(line, sizeof line, "%-22s numeric % .15f  closed % .15f  |diff| %.2e  %s\n", label, numeric, closed,
                  err, pass ? "ok" : "MISMATCH");
    std::cout << line;
  };
  std::cout << "perfect dimer state, M = " << sites << ", current-bond dimer operators\n";
  for (int d = 0; d <= sites - 3; ++d) {
    std::string label = "D_xy(Delta=" + std::to_string(d) + ")";
    report(label.c_str(), dimer_correlator(dimer, d, DimerChannel::XY, DimerVariant::CurrentBond),
           dimer_xy_delta_closed(sites, d));
  }
  for (int d = 0; d <= sites - 3; ++d) {
    std::string label = "D_zz(Delta=" + std::to_string(d) + ")";
    report(label.c_str(), dimer_correlator(dimer, d, DimerChannel::ZZ), dimer_zz_delta_closed(sites, d));
  }
  report("D_xy average", dimer_average(dimer, DimerChannel::XY, DimerVariant::CurrentBond),
         dimer_average_closed(sites, DimerChannel::XY));
  report("D_zz average", dimer_average(dimer, DimerChannel::ZZ), dimer_average_closed(sites, DimerChannel::ZZ));

  CouplingParams params;
  params.t1 = 2.0;
  params.t2 = -1.0;
  params.hardcore = true;
  params.n_max = 1;
  const SparseOperator H = build_hamiltonian(*dimer.basis, params);
  const auto h_psi = bhed::apply(H, dimer.amplitudes);
  const double energy = -params.t1 * sites / 2.0;
  double res = 0.0;
  for (std::size_t k = 0; k < h_psi.size(); ++k) res += std::norm(h_psi[k] - energy * dimer.amplitudes[k]);
  report("||H psi - E psi||", std::sqrt(res), 0.0);
  report("E_half", half_chain_entropy(dimer), 0.0);
  if (sites <= 16) report("ggm", ggm(dimer).value, 0.0);
  std::cout << (ok ? "oracle: all checks passed\n" : "oracle: MISMATCH\n");
  return ok ? 0 : 1;
}

int run_plotdata_command(const std::string& input, const std::string& quantity, const std::string& output) {
  std::ifstream in(input, std::ios::binary);
  if (!in) {
    std::cerr << "error: cannot read '" << input << "'\n";
    return 1;
  }
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  try {
    const auto first = text.find_first_not_of(" \t\r\n");
    const bool json = first != std::string::npos && text[first] == '[';
    const auto records = json ? parse_json(text) : parse_csv(text);
    const std::string csv = format_plot_csv(emit_plot_data(records, quantity));
    if (output.empty() || output == "-") {
      std::cout << csv;
    } else {
      std::ofstream out(output, std::ios::binary | std::ios::trunc);
      if (!out || !(out << csv)) {
        std::cerr << "error: cannot write '" << output << "'\n";
        return 1;
      }
    }
  } catch (const InvalidArgument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact diagonalization of the frustrated 1D Bose-Hubbard chain"};
  app.require_subcommand(1);
  app.set_version_flag("--version", "bhed 0.1.0");

  auto* info = app.add_subcommand("info", "Show worker count and the active SIMD kernel set");

  std::string config_path;
  bool quiet = false;
  auto* sweep = app.add_subcommand("sweep", "Run a parameter grid from a config file");
  sweep->add_option("config", config_path, "Config file")->required();
  sweep->add_flag("-q,--quiet", quiet, "Suppress the summary on stderr");

  PointArgs pa;
  auto* point = app.add_subcommand("point", "Solve one parameter set and print its record");
  point->add_option("--M", pa.M, "Number of sites")->check(CLI::Range(2, 64));
  point->add_option("--N", pa.N, "Number of bosons (default M/2)");
  point->add_option("--nmax", pa.n_max, "Occupation cap (default 1 with --hardcore, else min(N, 5))");
  point->add_option("--t1", pa.t1, "Nearest-neighbour hopping");
  point->add_option("--t2", pa.t2, "Next-nearest-neighbour hopping");
  point->add_option("--U", pa.U, "On-site interaction");
  point->add_option("--boundary", pa.boundary, "open or periodic");
  point->add_flag("--hardcore", pa.hardcore, "Hard-core bosons (n_max = 1)");
  point->add_option("--seed", pa.seed, "Krylov start-vector seed");
  point->add_option("--tol", pa.tol, "Residual tolerance");
  point->add_option("--max-iter", pa.max_iter, "Matrix-vector product budget");
  point->add_option("--nq", pa.n_q, "Momentum grid size");
  point->add_option("--ggm-scope", pa.ggm_scope, "all or contiguous+parity");
  point->add_option("--ggm-ceiling", pa.ggm_ceiling, "Largest M for scope=all");
  point->add_flag("--json", pa.json, "Print JSON instead of CSV");

  int oracle_sites = 20;
  double oracle_tol = 1e-12;
  auto* oracle = app.add_subcommand("oracle", "Compare perfect-dimer closed forms with numerics");
  oracle->add_option("--M", oracle_sites, "Even number of sites, at least 8");
  oracle->add_option("--tol", oracle_tol, "Allowed absolute deviation");

  std::string plot_input, plot_quantity, plot_output;
  auto* plot = app.add_subcommand("plotdata", "Emit a t1/t2 x U' matrix for one result column");
  plot->add_option("--input", plot_input, "Sweep output (CSV or JSON)")->required();
  plot->add_option("--quantity", plot_quantity, "Column name, e.g. ggm")->required();
  plot->add_option("--output", plot_output, "Destination file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    if (*info) {
      std::cout << "workers " << worker_count() << "\nsimd " << kernels::isa_name(kernels::active().isa) << "\n";
      return 0;
    }
    if (*sweep) return run_sweep_command(config_path, quiet);
    if (*point) return run_point_command(pa);
    if (*oracle) return run_oracle_command(oracle_sites, oracle_tol);
    if (*plot) return run_plotdata_command(plot_input, plot_quantity, plot_output);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
