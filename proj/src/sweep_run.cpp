#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bhed/correlators.hpp"
#include "bhed/eigensolver.hpp"
#include "bhed/fock.hpp"
#include "bhed/momentum.hpp"
#include "bhed/sweep.hpp"

namespace bhed {

namespace {

namespace fs = std::filesystem;

/// Requested observables that cannot be evaluated at this point, with reasons.
std::vector<std::string> skip_reasons(const PointSpec& p, const ObservableSet& obs) {
  std::vector<std::string> out;
  if (obs.momentum && p.N == 0) out.push_back("momentum skipped: empty chain");
  if ((obs.dimer_xy || obs.dimer_zz) && p.M < 4) out.push_back("dimer skipped: needs M >= 4");
  if (obs.half_chain_entropy && p.M % 2 != 0) out.push_back("E_half skipped: odd M");
  if (obs.ggm && obs.ggm_scope == GgmScope::All && p.M > obs.ggm_ceiling) {
    out.push_back("ggm skipped: scope=all limited to M <= " + std::to_string(obs.ggm_ceiling));
  }
  return out;
}

bool wants_momentum(const PointSpec& p, const ObservableSet& o) { return o.momentum && p.N > 0; }
bool wants_dimer(const PointSpec& p) { return p.M >= 4; }
bool wants_half(const PointSpec& p, const ObservableSet& o) { return o.half_chain_entropy && p.M % 2 == 0; }
bool wants_ggm(const PointSpec& p, const ObservableSet& o) {
  return o.ggm && !(o.ggm_scope == GgmScope::All && p.M > o.ggm_ceiling);
}

/// A stored row can stand in for a fresh solve only if every value this
/// configuration asks for is present.
bool reusable(const SweepResultRecord& r, const ObservableSet& o) {
  const auto& p = r.point;
  if (!r.E0 || !r.gap || !r.degenerate || !r.solver_iters || !r.residual) return false;
  if (wants_momentum(p, o) && !(r.eta && r.q_max && r.commensurate && r.Sq_norm)) return false;
  if (o.chiral && !r.kappa_bar) return false;
  if (o.dimer_xy && wants_dimer(p) && !(r.Dxy_bar_kinetic && r.Dxy_bar_current)) return false;
  if (o.dimer_zz && wants_dimer(p) && !r.Dzz_bar) return false;
  if (wants_half(p, o) && !r.E_half) return false;
  if (wants_ggm(p, o) && !(r.ggm && r.ggm_argmax_bitmask)) return false;
  return true;
}

bool same_key(const PointSpec& a, const PointSpec& b) {
  return a.M == b.M && a.N == b.N && a.n_max == b.n_max && a.boundary == b.boundary && a.hardcore == b.hardcore &&
         a.t1 == b.t1 && a.t2 == b.t2 && a.U == b.U && a.Uprime == b.Uprime;
}

std::string join_notes(const std::vector<std::string>& notes) {
  std::string out;
  for (const auto& n : notes) {
    if (!out.empty()) out += "; ";
    out += n;
  }
  return out;
}

void write_atomically(const fs::path& path, const std::string& content) {
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot write '" + tmp.string() + "'");
    out << content;
    if (!out.flush()) throw Error("write failed for '" + tmp.string() + "'");
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error("cannot replace '" + path.string() + "': " + ec.message());
}

std::string notes_csv(const std::vector<SweepResultRecord>& records) {
  std::string out = "t1,t2,Uprime,note\n";
  for (const auto& r : records) {
    if (r.note.empty()) continue;
    std::string quoted = "\"";
    for (const char c : r.note) {
      if (c == '"') quoted += '"';
      quoted += c;
    }
    quoted += '"';
    out += format_double(r.point.t1) + "," + format_double(r.point.t2) + "," + format_double(r.point.Uprime) + "," +
           quoted + "\n";
  }
  return out;
}

struct Evaluation {
  SweepResultRecord record;
  bool errored = false;
};

Evaluation evaluate(const PointSpec& p, const SolverConfig& solver, const ObservableSet& obs, int n_q) {
  Evaluation ev;
  auto& r = ev.record;
  r.point = p;
  std::vector<std::string> notes = skip_reasons(p, obs);
  const auto fail = [&](const std::string& what, const std::exception& e) {
    notes.push_back(what + " error: " + e.what());
    ev.errored = true;
  };

  GroundState gs;
  try {
    auto basis = std::make_shared<const FockBasis>(p.M, p.N, p.n_max);
    CouplingParams params;
    params.t1 = p.t1;
    params.t2 = p.t2;
    params.U = p.U;
    params.boundary = p.boundary;
    params.hardcore = p.hardcore;
    params.n_max = p.n_max;
    const SparseOperator H = build_hamiltonian(*basis, params);
    SolverOptions opts;
    opts.tol = solver.tol;
    opts.max_iter = solver.max_iter;
    opts.seed = solver.seed;
    gs = ground_state(H, basis, opts);
  } catch (const std::exception& e) {
    fail("solver", e);
    r.note = join_notes(notes);
    return ev;
  }
  r.E0 = gs.energy;
  r.gap = gs.gap_estimate;
  r.degenerate = gs.degenerate;
  r.solver_iters = gs.iterations;
  r.residual = gs.residual_norm;

  if (wants_momentum(p, obs)) {
    try {
      const MomentumProfile prof = momentum_profile(gs, n_q);
      r.eta = prof.eta;
      r.q_max = prof.q_max;
      r.commensurate = to_string(classify_commensurate(prof));
      r.Sq_norm = prof.S_q_normalized;
    } catch (const std::exception& e) {
      fail("momentum", e);
    }
  }
  if (obs.chiral) {
    try {
      r.kappa_bar = chiral_average(gs);
    } catch (const std::exception& e) {
      fail("chiral", e);
    }
  }
  if (obs.dimer_xy && wants_dimer(p)) {
    try {
      r.Dxy_bar_kinetic = dimer_average(gs, DimerChannel::XY, DimerVariant::KineticBond);
      r.Dxy_bar_current = dimer_average(gs, DimerChannel::XY, DimerVariant::CurrentBond);
    } catch (const std::exception& e) {
      fail("dimer_xy", e);
    }
  }
  if (obs.dimer_zz && wants_dimer(p)) {
    try {
      r.Dzz_bar = dimer_average(gs, DimerChannel::ZZ);
    } catch (const std::exception& e) {
      fail("dimer_zz", e);
    }
  }
  if (wants_half(p, obs)) {
    try {
      r.E_half = half_chain_entropy(gs);
    } catch (const std::exception& e) {
      fail("E_half", e);
    }
  }
  if (wants_ggm(p, obs)) {
    try {
      const GgmResult g = ggm(gs, obs.ggm_scope, obs.ggm_ceiling);
      r.ggm = g.value;
      r.ggm_argmax_bitmask = g.argmax.mask;
    } catch (const std::exception& e) {
      fail("ggm", e);
    }
  }
  r.note = join_notes(notes);
  return ev;
}

std::vector<SweepResultRecord> read_existing(const fs::path& path, OutputFormat format) {
  std::error_code ec;
  if (!fs::exists(path, ec)) return {};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read existing output '" + path.string() + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const std::string text = buffer.str();
  if (text.empty()) return {};
  try {
    return format == OutputFormat::Csv ? parse_csv(text) : parse_json(text);
  } catch (const InvalidArgument& e) {
    throw Error("existing output '" + path.string() + "' is not a sweep result file (" + e.what() +
                "); refusing to overwrite");
  }
}

void check_writable(const fs::path& path) {
  const fs::path parent = path.has_parent_path() ? path.parent_path() : fs::path(".");
  std::error_code ec;
  if (!fs::is_directory(parent, ec)) throw Error("output directory '" + parent.string() + "' does not exist");
  if (fs::is_directory(path, ec)) throw Error("output path '" + path.string() + "' is a directory");
  fs::path probe = path;
  probe += ".tmp";
  std::ofstream out(probe, std::ios::binary | std::ios::app);
  if (!out) throw Error("output path '" + path.string() + "' is not writable");
  out.close();
  fs::remove(probe, ec);
}

}  // namespace

SweepResultRecord evaluate_point(const PointSpec& point, const SolverConfig& solver, const ObservableSet& observables,
                                 int n_q) {
  return evaluate(point, solver, observables, n_q).record;
}

std::vector<PointSpec> plan_points(const SweepConfig& config) {
  std::vector<PointSpec> points;
  points.reserve(config.planned_runs());
  const auto& m = config.model;
  for (const double ratio : config.grid.t1_over_t2) {
    for (const double uprime : config.grid.Uprime) {
      PointSpec p;
      p.M = m.M;
      p.N = m.N;
      p.n_max = m.n_max;
      p.boundary = m.boundary;
      p.hardcore = m.hardcore;
      p.t2 = m.t2;
      p.t1 = ratio * m.t2;
      p.Uprime = uprime;
      p.U = uprime * std::abs(m.t2);
      points.push_back(p);
    }
  }
  return points;
}

SweepOutcome run_sweep(const SweepConfig& config) {
  const fs::path path(config.output.path);
  check_writable(path);
  const std::vector<SweepResultRecord> existing = read_existing(path, config.output.format);
  const std::vector<PointSpec> points = plan_points(config);

  const auto serialize = [&](const std::vector<SweepResultRecord>& records) {
    return config.output.format == OutputFormat::Csv ? format_csv(records) : format_json(records);
  };
  fs::path notes_path = path;
  notes_path += ".notes.csv";

  SweepOutcome outcome;
  outcome.records.reserve(points.size());
  for (const auto& p : points) {
    const SweepResultRecord* stored = nullptr;
    for (const auto& r : existing) {
      if (same_key(r.point, p) && reusable(r, config.observables)) {
        stored = &r;
        break;
      }
    }
    if (stored != nullptr) {
      SweepResultRecord r = *stored;
      r.note = join_notes(skip_reasons(p, config.observables));
      outcome.records.push_back(std::move(r));
      ++outcome.reused;
      continue;
    }
    Evaluation ev = evaluate(p, config.solver, config.observables, config.output.N_q);
    if (ev.errored) ++outcome.failed;
    outcome.records.push_back(std::move(ev.record));

    // Completed points so far plus the still-unvisited stored rows, so an
    // interrupted run loses nothing that was already on disk.
    std::vector<SweepResultRecord> snapshot = outcome.records;
    for (std::size_t k = outcome.records.size(); k < points.size(); ++k) {
      for (const auto& r : existing) {
        if (same_key(r.point, points[k]) && r.completed()) {
          snapshot.push_back(r);
          break;
        }
      }
    }
    write_atomically(path, serialize(snapshot));
  }
  write_atomically(path, serialize(outcome.records));

  const bool any_note = std::any_of(outcome.records.begin(), outcome.records.end(),
                                    [](const SweepResultRecord& r) { return !r.note.empty(); });
  std::error_code ec;
  if (config.output.format == OutputFormat::Csv && any_note) {
    write_atomically(notes_path, notes_csv(outcome.records));
  } else {
    fs::remove(notes_path, ec);
  }
  return outcome;
}

}  // namespace bhed
