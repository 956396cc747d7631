// pfc: find, certify and explore steady states of the phase-field-crystal
// equation. Exit codes: 0 ok, 2 verification failed, 3 bad configuration,
// 4 numerical failure.

#include <omp.h>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "pfc/ansatz.hpp"
#include "pfc/census.hpp"
#include "pfc/connection.hpp"
#include "pfc/continuation.hpp"
#include "pfc/errors.hpp"
#include "pfc/flow.hpp"
#include "pfc/io.hpp"
#include "pfc/phase_diagram.hpp"

namespace fs = std::filesystem;
using namespace pfc;

namespace {

constexpr int kExitVerification = 2;
constexpr int kExitConfig = 3;
constexpr int kExitNumerical = 4;

struct RunConfig {
  std::string model = "OneMode";
  double psibar = 0.07, beta = 0.025, q = 1.0;
  int nx = 4, ny = 2;
  int m = 20;
  double nu = 1.05;
  double newton_tol = 1e-13;
  int newton_max_iter = 60;
  std::uint64_t seed = 1;
  int threads = 0;
  std::string input;
  std::string output;
  std::string ansatz = "Atoms";
  bool random_start = false;
  bool no_stability = false;
  int emit_field = 0;
  // flow and connections
  double dt = 0.05;
  int steps = 10000;
  int trace_every = 0;
  double epsilon = 1e-3;
  int max_steps = 200000;
  double match_tol = 1e-6;
  int random_per_dim = 8;
  bool no_pairs = false;
  bool explore = false;
  int max_sources = -1;
  // continuation
  double ds = 4e-3, ds_min = 1e-6, ds_max = 1e-2;
  int max_points = 3000;
  int direction = 1;
  int max_folds = 0;
  // phase diagram and census
  std::vector<double> psibar_range{0.02, 0.12, 5};
  std::vector<double> beta_range{0.005, 0.05, 5};
  int n_random = 4;
  int trials = 200;
  bool with_ansatz = false;

  ModelSpec spec() const {
    ModelSpec s;
    s.kind = model_kind_from_string(model);
    s.psibar = psibar;
    s.beta = beta;
    s.q = q;
    s.nx = nx;
    s.ny = ny;
    s.validate();
    return s;
  }
  ProofConfig proof() const {
    ProofConfig p;
    p.m = m;
    p.nu = nu;
    p.validate();
    return p;
  }
  NewtonOptions newton() const {
    NewtonOptions o;
    o.tol = newton_tol;
    o.max_iter = newton_max_iter;
    o.nu = nu;
    return o;
  }
  RecordOptions record() const {
    RecordOptions r;
    r.proof = proof();
    r.newton = newton();
    r.stability = !no_stability;
    return r;
  }
  std::map<std::string, std::string> as_map() const {
    char buf[40];
    auto d = [&](double v) {
      std::snprintf(buf, sizeof buf, "%.17g", v);
      return std::string(buf);
    };
    return {{"model", model},      {"psibar", d(psibar)}, {"beta", d(beta)}, {"q", d(q)},
            {"nx", std::to_string(nx)}, {"ny", std::to_string(ny)}, {"M", std::to_string(m)}, {"nu", d(nu)},
            {"newton-tol", d(newton_tol)}, {"seed", std::to_string(seed)}};
  }
};

std::string out_or(const RunConfig& c, const std::string& d) { return c.output.empty() ? d : c.output; }

void print_certificate(const RadiiCertificate& c) {
  std::printf("verified      %s\n", c.verified ? "yes" : "no");
  std::printf("M, nu         %d, %.4g\n", c.m, c.nu);
  std::printf("Y0            %.6e\n", c.y0.hi());
  std::printf("Z0, Z1        %.6e, %.6e\n", c.z0.hi(), c.z1.hi());
  std::printf("Z2            %.6e + %.6e r\n", c.z20.hi(), c.z21.hi());
  std::printf("||abar||      %.6e\n", c.abar_norm.hi());
  if (c.verified) {
    std::printf("r_existence   %.6e\n", c.rstar_lo);
    std::printf("r_uniqueness  %.6e\n", c.rstar_hi);
    std::printf("contraction   %.6e\n", c.contraction.hi());
  } else {
    std::printf("reason        %s\n", c.message.c_str());
  }
}

void print_energy(const EnergyReport& e) {
  std::printf("E[abar]-E0    %.10e\n", e.offset().mid());
  std::printf("E enclosure   [%.12e, %.12e]%s\n", e.e_enclosure.lo(), e.e_enclosure.hi(), e.rigorous ? "" : " (not rigorous)");
  std::printf("error bound   %.6e\n", e.e_err.hi());
}

void print_stability(const StabilityReport& s) {
  std::printf("morse index   %d%s%s\n", s.morse, s.partial ? " (partial: eigenvalues above -1 only)" : "",
              s.inconclusive ? " (inconclusive)" : "");
}

void print_record(const StateRecord& r) {
  std::printf("id            %s (shift %s)\n", r.id.c_str(), shift_name(r.shift).c_str());
  print_certificate(r.cert);
  if (r.has_energy) print_energy(r.energy);
  if (r.has_stability) print_stability(r.stability);
  if (!r.error.empty()) std::printf("error         %s\n", r.error.c_str());
}

void maybe_emit_field(const RunConfig& c, const CoeffGrid& a, const ModelSpec& spec, const std::string& base) {
  if (c.emit_field > 0) write_file_atomic(base + ".field.csv", field_csv(a, spec, c.emit_field));
}

// Initial grid from --input (state or grid file), --random or --ansatz.
std::pair<CoeffGrid, ModelSpec> initial_grid(const RunConfig& c, std::string& provenance) {
  if (!c.input.empty()) {
    const StateRecord r = read_state(c.input);
    provenance = "file:" + c.input;
    return {resized(r.grid, c.m), r.spec};
  }
  const ModelSpec spec = c.spec();
  if (c.random_start) {
    std::mt19937_64 rng(job_seed(c.seed, 0));
    provenance = "random:seed=" + std::to_string(c.seed);
    return {random_initial(spec, c.m, rng), spec};
  }
  provenance = "ansatz:" + c.ansatz;
  return {make_ansatz(ansatz_from_string(c.ansatz), spec, c.m), spec};
}

StateRecord load_input(const RunConfig& c) {
  if (c.input.empty()) throw ConfigError("--input is required for this command");
  return read_state(c.input);
}

int finish_record(const RunConfig& c, const StateRecord& rec, const std::string& path) {
  write_state(path, rec, c.as_map(), !rec.verified());
  maybe_emit_field(c, rec.grid, rec.spec, path);
  print_record(rec);
  std::printf("wrote         %s\n", path.c_str());
  return rec.verified() ? 0 : kExitVerification;
}

int cmd_find(const RunConfig& c) {
  std::string prov;
  const auto [a0, spec] = initial_grid(c, prov);
  const NewtonResult nr = newton_solve(a0, spec, c.m, c.newton());
  std::printf("newton        %s after %d iterations, residual %.3e\n", to_string(nr.status).c_str(), nr.iterations,
              nr.residuals.empty() ? 0.0 : nr.residuals.back());
  if (!nr.ok()) throw NumericalError("Newton iteration " + to_string(nr.status));
  StateRecord rec = make_record(nr.a, spec, c.record(), prov);
  std::printf("distance to initial grid %.6e\n", l1nu_distance(a0, nr.a, c.nu));
  return finish_record(c, rec, out_or(c, "state.txt"));
}

// Re-certifies a stored state at the configured (M, nu).
StateRecord recertify(const RunConfig& c, bool stability) {
  const StateRecord in = load_input(c);
  RecordOptions opt = c.record();
  opt.stability = stability;
  return make_record(in.grid, in.spec, opt, in.provenance);
}

int cmd_verify(const RunConfig& c) {
  const StateRecord rec = recertify(c, false);
  if (!c.output.empty()) return finish_record(c, rec, c.output);
  print_record(rec);
  return rec.verified() ? 0 : kExitVerification;
}

int cmd_energy(const RunConfig& c) {
  const StateRecord rec = recertify(c, false);
  if (!rec.verified()) throw VerificationFailure("state did not verify: " + rec.cert.message);
  std::printf("id            %s\n", rec.id.c_str());
  print_energy(rec.energy);
  std::printf("sup-norm gap  %.6e\n", supnorm_gap(rec.cert));
  return 0;
}

int cmd_stability(const RunConfig& c) {
  const StateRecord rec = recertify(c, true);
  if (!rec.verified()) throw VerificationFailure("state did not verify: " + rec.cert.message);
  if (!rec.has_stability) throw NumericalError("stability analysis failed: " + rec.error);
  std::printf("id            %s\n", rec.id.c_str());
  print_stability(rec.stability);
  for (std::size_t k = 0; k < rec.stability.eigs.size() && k < 12; ++k)
    std::printf("  eig %2zu      [%.8e, %.8e]\n", k, rec.stability.eigs[k].lo(), rec.stability.eigs[k].hi());
  if (!c.output.empty()) write_state(c.output, rec, c.as_map());
  return 0;
}

int cmd_simulate(const RunConfig& c) {
  std::string prov;
  auto [a, spec] = initial_grid(c, prov);
  const FlowStepper stepper(spec, c.m, c.dt);
  std::string trace = "step,energy,residual\n";
  char buf[96];
  auto log = [&](int step) {
    std::snprintf(buf, sizeof buf, "%d,%.17g,%.17g\n", step, energy(a, spec),
                  norm_l1nu_float(apply_F(a, spec, c.m), c.nu));
    trace += buf;
  };
  if (c.trace_every > 0) log(0);
  for (int s = 1; s <= c.steps; ++s) {
    stepper.step(a);
    if (c.trace_every > 0 && s % c.trace_every == 0) log(s);
  }
  const std::string path = out_or(c, "flow.txt");
  StateRecord rec;
  rec.grid = a;
  rec.spec = spec;
  rec.provenance = prov + ",flow:steps=" + std::to_string(c.steps);
  rec.residual = norm_l1nu_float(apply_F(a, spec, c.m), c.nu);
  const StateIdentity sid = state_identity(a);
  rec.id = sid.id;
  rec.shift = sid.shift;
  write_state(path, rec, c.as_map(), true);
  if (c.trace_every > 0) write_file_atomic(path + ".trace.csv", trace);
  maybe_emit_field(c, a, spec, path);
  std::printf("steps %d, energy %.12e, residual %.3e, wrote %s\n", c.steps, energy(a, spec), rec.residual, path.c_str());
  return 0;
}

ConnectionOptions connection_options(const RunConfig& c) {
  ConnectionOptions o;
  o.epsilon = c.epsilon;
  o.dt = c.dt;
  o.max_steps = c.max_steps;
  o.match_tol = c.match_tol;
  o.random_per_dim = c.random_per_dim;
  o.include_pairs = !c.no_pairs;
  o.seed = c.seed;
  o.record = c.record();
  o.record.stability = true;
  return o;
}

void write_library(const RunConfig& c, const StateLibrary& lib, const fs::path& dir) {
  for (std::size_t k = 0; k < lib.states.size(); ++k) {
    const StateRecord& s = lib.states[k];
    const std::string name = std::to_string(k) + "_" + s.id + "_" + shift_name(s.shift) + ".state";
    write_state((dir / name).string(), s, c.as_map(), !s.verified());
    maybe_emit_field(c, s.grid, s.spec, (dir / name).string());
  }
}

void print_library(const StateLibrary& lib, double nu) {
  std::printf("%zu certified states, %d after merging half-period shifts\n", lib.states.size(), lib.class_count(nu));
  for (std::size_t k = 0; k < lib.states.size(); ++k) {
    const StateRecord& s = lib.states[k];
    std::printf("  %2zu %s %-4s morse %d  E-E0 %.8e\n", k, s.id.c_str(), shift_name(s.shift).c_str(),
                s.has_stability ? s.stability.morse : -1, s.has_energy ? s.energy.offset().mid() : 0.0);
  }
}

int cmd_connect(const RunConfig& c) {
  const StateRecord src = load_input(c);
  const ConnectionOptions opt = connection_options(c);
  StateLibrary lib;
  StateRecord rec = make_record(resized(src.grid, c.m), src.spec, opt.record, src.provenance);
  if (!rec.verified()) throw VerificationFailure("source state did not verify: " + rec.cert.message);
  lib.add(std::move(rec));
  std::vector<ConnectionEdge> edges;
  if (c.explore) {
    edges = explore_connections(lib, opt, c.max_sources).edges;
  } else {
    edges = connection_search(0, lib, opt);
  }
  const fs::path dir = out_or(c, "connect_out");
  write_library(c, lib, dir);
  write_file_atomic((dir / "edges.csv").string(), edges_csv(edges));
  print_library(lib, c.nu);
  std::printf("%zu edges, wrote %s\n", edges.size(), dir.string().c_str());
  return 0;
}

int cmd_continue(const RunConfig& c) {
  std::string prov;
  const auto [a0, spec] = initial_grid(c, prov);
  ContinuationOptions o;
  o.ds = c.ds;
  o.ds_min = c.ds_min;
  o.ds_max = c.ds_max;
  o.max_points = c.max_points;
  o.direction = c.direction;
  o.max_folds = c.max_folds;
  o.newton_tol = std::max(c.newton_tol, 1e-12);
  o.nu = c.nu;
  const Branch b = continue_branch(a0, spec, c.m, o);
  const std::string path = out_or(c, "branch.csv");
  write_file_atomic(path, branch_csv(b));
  std::printf("%zu points%s%s\n", b.points.size(), b.closed ? ", closed loop" : "", b.partial ? ", partial" : "");
  for (const Fold& f : b.folds) std::printf("fold at psibar %.6f\n", f.psibar);
  for (const AmplitudeCrossing& x : b.crossings)
    std::printf("amplitude a_{Nx,Ny} changes sign at psibar %.6f (+- %.1e)\n", x.psibar, x.resolution);
  if (!b.message.empty()) std::printf("%s\n", b.message.c_str());
  std::printf("wrote %s\n", path.c_str());
  return b.partial ? kExitNumerical : 0;
}

std::vector<double> linspace(const std::vector<double>& r, const char* name) {
  if (r.size() != 3 || r[2] < 1 || r[2] != double(int(r[2])))
    throw ConfigError(std::string(name) + " needs three values: lo hi count");
  const int n = int(r[2]);
  std::vector<double> v(static_cast<std::size_t>(n));
  for (int k = 0; k < n; ++k) v[std::size_t(k)] = n == 1 ? r[0] : r[0] + (r[1] - r[0]) * k / (n - 1);
  return v;
}

int cmd_phase_diagram(const RunConfig& c) {
  PhaseOptions o;
  o.base = c.spec();
  o.m = c.m;
  o.nu = c.nu;
  o.n_random = c.n_random;
  o.seed = c.seed;
  o.newton = c.newton();
  const auto pts = phase_diagram(linspace(c.psibar_range, "--psibar-range"), linspace(c.beta_range, "--beta-range"), o);
  const std::string path = out_or(c, "phase.csv");
  write_file_atomic(path, phase_csv(pts));
  int unsound = 0;
  for (const PhasePoint& p : pts) {
    std::printf("psibar %.5f beta %.5f  %-9s (%d certified)\n", p.psibar, p.beta, p.label.c_str(), p.n_certified);
    if (!label_is_sound(p)) ++unsound;
  }
  std::printf("wrote %s\n", path.c_str());
  if (unsound) throw VerificationFailure(std::to_string(unsound) + " labels failed the disjointness re-check");
  return 0;
}

int cmd_census(const RunConfig& c) {
  const ModelSpec spec = c.spec();
  CensusOptions o;
  o.trials = c.trials;
  o.seed = c.seed;
  o.record = c.record();
  CensusResult r = run_census(spec, o);
  std::printf("%d trials: %d Newton failures, %d converged but unverified\n", c.trials, r.newton_failures, r.uncertified);
  if (c.with_ansatz) {
    for (AnsatzKind k : {AnsatzKind::Constant, AnsatzKind::Stripes, AnsatzKind::Atoms, AnsatzKind::Donuts}) {
      CoeffGrid a0;
      try {
        a0 = make_ansatz(k, spec, c.m);
      } catch (const ConfigError& e) {
        std::printf("ansatz %s skipped: %s\n", to_string(k).c_str(), e.what());
        continue;
      }
      const NewtonResult nr = newton_solve(a0, spec, c.m, c.newton());
      if (!nr.ok() || r.library.find(nr.a, c.nu) >= 0) continue;
      StateRecord rec = make_record(nr.a, spec, o.record, "ansatz:" + to_string(k));
      if (rec.verified()) r.library.add(std::move(rec));
    }
  }
  std::vector<ConnectionEdge> edges;
  if (c.explore) {
    ConnectionOptions co = connection_options(c);
    edges = explore_connections(r.library, co, c.max_sources).edges;
  }
  r.hits.resize(r.library.states.size(), 0);
  r.class_count = r.library.class_count(c.nu);
  const fs::path dir = out_or(c, "census_out");
  write_library(c, r.library, dir);
  write_file_atomic((dir / "census.csv").string(), census_csv(r));
  if (c.explore) write_file_atomic((dir / "edges.csv").string(), edges_csv(edges));
  print_library(r.library, c.nu);
  std::printf("wrote %s\n", dir.string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Find, certify and explore steady states of the phase-field-crystal equation"};
  app.set_config("--config", "", "key=value configuration file; command-line flags override it");
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig c;

  app.add_option("--model", c.model, "OneMode or TwoMode")->capture_default_str();
  app.add_option("--psibar", c.psibar, "mean density")->capture_default_str();
  app.add_option("--beta", c.beta, "temperature-like parameter")->capture_default_str();
  app.add_option("--q", c.q, "second wavenumber (two-mode)")->capture_default_str();
  app.add_option("--nx", c.nx, "hexagonal cells along x")->capture_default_str();
  app.add_option("--ny", c.ny, "hexagonal cells along y")->capture_default_str();
  auto* m_opt = app.add_option("-M,--modes", c.m, "truncation order M (default: from --input, else 20)");
  auto* nu_opt = app.add_option("--nu", c.nu, "weight of the l1 norm, > 1 (default: from --input, else 1.05)");
  app.add_option("--newton-tol", c.newton_tol, "Newton residual tolerance")->capture_default_str();
  app.add_option("--newton-max-iter", c.newton_max_iter)->capture_default_str();
  app.add_option("--seed", c.seed, "base random seed")->capture_default_str();
  app.add_option("--threads", c.threads, "OpenMP threads (0 keeps the runtime default)")->capture_default_str();
  app.add_option("-i,--input", c.input, "state or grid file");
  app.add_option("-o,--output", c.output, "output file or directory");
  app.add_option("--ansatz", c.ansatz, "Constant, Stripes, Atoms, Donuts or Checkers")->capture_default_str();
  app.add_flag("--random", c.random_start, "start from a random grid instead of an ansatz");
  app.add_flag("--no-stability", c.no_stability, "skip the Morse index computation");
  app.add_option("--emit-field", c.emit_field, "also write an N x N real-space sample CSV");
  app.add_option("--dt", c.dt, "flow time step")->capture_default_str();
  app.add_option("--steps", c.steps, "flow steps (simulate)")->capture_default_str();
  app.add_option("--trace-every", c.trace_every, "energy trace interval (simulate)");
  app.add_option("--epsilon", c.epsilon, "perturbation size along unstable directions")->capture_default_str();
  app.add_option("--max-steps", c.max_steps, "flow step budget per direction")->capture_default_str();
  app.add_option("--match-tol", c.match_tol, "l1-nu distance counted as reaching a state")->capture_default_str();
  app.add_option("--random-per-dim", c.random_per_dim, "random directions per unstable dimension")->capture_default_str();
  app.add_flag("--no-pairs", c.no_pairs, "skip pairwise diagonal directions");
  app.add_flag("--explore", c.explore, "search from every unstable state found, not only the source");
  app.add_option("--max-sources", c.max_sources, "limit on searched sources with --explore");
  app.add_option("--ds", c.ds, "initial arclength step")->capture_default_str();
  app.add_option("--ds-min", c.ds_min)->capture_default_str();
  app.add_option("--ds-max", c.ds_max)->capture_default_str();
  app.add_option("--max-points", c.max_points)->capture_default_str();
  app.add_option("--direction", c.direction, "+1 or -1: initial sign of d psibar / ds")->capture_default_str();
  app.add_option("--max-folds", c.max_folds, "stop after this many folds (0: no limit)");
  app.add_option("--psibar-range", c.psibar_range, "lo hi count")->expected(3);
  app.add_option("--beta-range", c.beta_range, "lo hi count")->expected(3);
  app.add_option("--n-random", c.n_random, "random grids per phase-diagram point")->capture_default_str();
  app.add_option("--trials", c.trials, "random trials (census)")->capture_default_str();
  app.add_flag("--with-ansatz", c.with_ansatz, "also seed the census with the basic ansatz states");

  struct Cmd {
    const char* name;
    const char* help;
    int (*run)(const RunConfig&);
  };
  const Cmd cmds[] = {
      {"find", "Newton from an ansatz, random grid or file, then certify", cmd_find},
      {"verify", "re-certify a stored state", cmd_verify},
      {"energy", "rigorous energy enclosure of a stored state", cmd_energy},
      {"stability", "verified Morse index of a stored state", cmd_stability},
      {"simulate", "run the gradient flow", cmd_simulate},
      {"connect", "search for connections from the unstable manifold of a state", cmd_connect},
      {"continue", "pseudo-arclength continuation in psibar", cmd_continue},
      {"phase-diagram", "verified phase labels on a (psibar, beta) grid", cmd_phase_diagram},
      {"census", "certify the distinct states reached from random grids", cmd_census},
  };
  std::vector<std::pair<CLI::App*, const Cmd*>> subs;
  for (const Cmd& cmd : cmds) subs.emplace_back(app.add_subcommand(cmd.name, cmd.help), &cmd);

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitConfig;
  }

  try {
    if (c.threads > 0) omp_set_num_threads(c.threads);
    if (!c.input.empty() && (m_opt->count() == 0 || nu_opt->count() == 0)) {
      const StateRecord in = read_state(c.input);
      if (m_opt->count() == 0) c.m = in.grid.m;
      if (nu_opt->count() == 0 && in.cert.nu > 1.0) c.nu = in.cert.nu;
    }
    for (const auto& [sub, cmd] : subs)
      if (sub->parsed()) return cmd->run(c);
  } catch (const VerificationFailure& e) {
    std::cerr << "verification failed: " << e.what() << '\n';
    return kExitVerification;
  } catch (const ConfigError& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "configuration error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << '\n';
    return kExitNumerical;
  }
  return kExitConfig;
}
