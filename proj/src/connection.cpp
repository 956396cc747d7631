#include "pfc/connection.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "pfc/errors.hpp"
#include "pfc/flow.hpp"

namespace pfc {

std::string to_string(EdgeStatus s) {
  switch (s) {
    case EdgeStatus::reached: return "reached";
    case EdgeStatus::stagnated: return "stagnated";
    case EdgeStatus::max_steps: return "max_steps";
  }
  return "unknown";
}

namespace {

// In-place reduced row echelon form of the rows of b (g x n).
void rref(Matrix& b) {
  const int g = int(b.rows()), n = int(b.cols());
  const double scale = b.cwiseAbs().maxCoeff();
  int r = 0;
  for (int c = 0; c < n && r < g; ++c) {
    int piv = r;
    for (int k = r + 1; k < g; ++k)
      if (std::abs(b(k, c)) > std::abs(b(piv, c))) piv = k;
    if (std::abs(b(piv, c)) <= 1e-6 * scale) continue;
    b.row(r).swap(b.row(piv));
    b.row(r) /= b(r, c);
    for (int k = 0; k < g; ++k)
      if (k != r) b.row(k) -= b(k, c) * b.row(r);
    ++r;
  }
}

CoeffGrid combine(const std::vector<CoeffGrid>& basis, const std::vector<double>& c) {
  CoeffGrid d(basis.front().m);
  for (std::size_t i = 0; i < basis.size(); ++i)
    for (std::size_t k = 0; k < d.size(); ++k) d.vals[k] += c[i] * basis[i].vals[k];
  return d;
}

struct FlowOutcome {
  EdgeStatus status = EdgeStatus::max_steps;
  int steps = 0;
  int matched = -1;       // library index matched during the flow
  bool polished = false;  // endpoint came from a converged Newton polish
  CoeffGrid endpoint;
};

FlowOutcome run_flow(CoeffGrid a, const StateLibrary& lib, int source, const ModelSpec& spec,
                     const ConnectionOptions& opt) {
  const int m = opt.record.proof.m;
  const double nu = opt.record.proof.nu;
  // Flows run one per thread; kernels inside stay serial.
  const FlowStepper stepper(spec, m, opt.dt, Exec::serial);
  FlowOutcome out;
  double e_prev = energy(a, spec, Exec::serial);
  NewtonOptions nopt = opt.record.newton;
  nopt.nu = nu;
  nopt.exec = Exec::serial;
  for (int step = 1; step <= opt.max_steps; ++step) {
    stepper.step(a);
    out.steps = step;
    if (step % opt.check_every == 0) {
      const auto [k, d] = lib.nearest(a, nu);
      if (k >= 0 && k != source && d < opt.match_tol) {
        out.status = EdgeStatus::reached;
        const NewtonResult nr = newton_solve(a, spec, m, nopt);
        out.polished = nr.ok();
        out.endpoint = nr.ok() ? nr.a : a;
        out.matched = k;
        return out;
      }
    }
    if (step % opt.window == 0) {
      const double e = energy(a, spec, Exec::serial);
      const double res = norm_l1nu_float(apply_F(a, spec, m, Exec::serial), nu);
      const double rel = std::abs(e - e_prev) / std::max(std::abs(e), 1e-300);
      e_prev = e;
      if (res < opt.stagnation_residual && rel < opt.stagnation_energy_rtol) {
        out.status = EdgeStatus::stagnated;
        const NewtonResult nr = newton_solve(a, spec, m, nopt);
        out.polished = nr.ok();
        out.endpoint = nr.ok() ? nr.a : a;
        return out;
      }
    }
  }
  out.endpoint = a;
  return out;
}

}  // namespace

std::vector<CoeffGrid> canonical_unstable_basis(const StabilityReport& st, double rel_tol) {
  std::vector<CoeffGrid> out;
  const auto& lam = st.pos_eigenvalues;
  std::size_t i = 0;
  while (i < lam.size()) {
    std::size_t j = i + 1;
    while (j < lam.size() && std::abs(lam[j] - lam[i]) <= rel_tol * std::max(std::abs(lam[i]), 1e-300)) ++j;
    const CoeffGrid& ref = st.pos_eigenvectors[i];
    Matrix b(Eigen::Index(j - i), Eigen::Index(ref.size()));
    for (std::size_t r = i; r < j; ++r)
      for (std::size_t k = 0; k < ref.size(); ++k) b(Eigen::Index(r - i), Eigen::Index(k)) = st.pos_eigenvectors[r].vals[k];
    if (j - i > 1) rref(b);
    for (Eigen::Index r = 0; r < b.rows(); ++r) {
      CoeffGrid v(ref.m);
      const double mx = b.row(r).cwiseAbs().maxCoeff();
      for (std::size_t k = 0; k < v.size(); ++k) v.vals[k] = b(r, Eigen::Index(k)) / mx;
      out.push_back(std::move(v));
    }
    i = j;
  }
  return out;
}

std::vector<std::vector<double>> connection_directions(int k, const ConnectionOptions& opt) {
  std::vector<std::vector<double>> dirs;
  for (int i = 0; i < k; ++i)
    for (double s : {1.0, -1.0}) {
      std::vector<double> c(std::size_t(k), 0.0);
      c[std::size_t(i)] = s;
      dirs.push_back(c);
    }
  if (opt.include_pairs)
    for (int i = 0; i < k; ++i)
      for (int j = i + 1; j < k; ++j)
        for (double si : {1.0, -1.0})
          for (double sj : {1.0, -1.0}) {
            std::vector<double> c(std::size_t(k), 0.0);
            c[std::size_t(i)] = si;
            c[std::size_t(j)] = sj;
            dirs.push_back(c);
          }
  std::mt19937_64 rng(opt.seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  for (int r = 0; r < opt.random_per_dim * k; ++r) {
    std::vector<double> c(static_cast<std::size_t>(k));
    double n2 = 0.0;
    for (auto& x : c) {
      x = nd(rng);
      n2 += x * x;
    }
    for (auto& x : c) x /= std::sqrt(n2);
    dirs.push_back(c);
  }
  return dirs;
}

std::vector<ConnectionEdge> connection_search(int source, StateLibrary& library, const ConnectionOptions& opt) {
  if (source < 0 || source >= int(library.states.size())) throw ConfigError("connection source not in library");
  const StateRecord& src = library.states[std::size_t(source)];
  if (!src.verified() || !src.has_stability) throw ConfigError("connection source must be verified with stability");
  if (src.stability.morse < 1) return {};
  const ModelSpec spec = src.spec;
  const std::string src_id = src.id;
  const double nu = opt.record.proof.nu;
  const std::vector<CoeffGrid> basis = canonical_unstable_basis(src.stability);
  const auto dirs = connection_directions(int(basis.size()), opt);
  const CoeffGrid origin = resized(src.grid, opt.record.proof.m);
  // src is not used past this point: adding states may reallocate.
  const StateLibrary snapshot = library;

  std::vector<FlowOutcome> outcomes(dirs.size());
#pragma omp parallel for schedule(dynamic, 1)
  for (int d = 0; d < int(dirs.size()); ++d) {
    CoeffGrid dir = resized(combine(basis, dirs[std::size_t(d)]), opt.record.proof.m);
    const double len = norm_l1nu_float(dir, nu);
    CoeffGrid a = origin;
    if (opt.epsilon != 0.0 && len > 0.0)
      for (std::size_t k = 1; k < a.size(); ++k) a.vals[k] += opt.epsilon * dir.vals[k] / len;
    if (opt.epsilon == 0.0) {
      outcomes[std::size_t(d)].endpoint = a;
      outcomes[std::size_t(d)].matched = source;
      continue;
    }
    outcomes[std::size_t(d)] = run_flow(a, snapshot, source, spec, opt);
  }

  // Library updates happen serially in direction order so results do not
  // depend on scheduling.
  std::vector<ConnectionEdge> edges;
  for (std::size_t d = 0; d < dirs.size(); ++d) {
    FlowOutcome& o = outcomes[d];
    if (o.matched == source) continue;  // zero perturbation: no edge
    ConnectionEdge e;
    e.from_index = source;
    e.coefficients = dirs[d];
    e.steps = o.steps;
    e.status = o.status;
    int to = -1;
    if (o.polished) {
      to = library.find(o.endpoint, nu);
      if (to < 0) {
        StateRecord rec = make_record(o.endpoint, spec, opt.record, "flow:" + src_id + "/" + std::to_string(d));
        if (rec.verified() && rec.has_stability) to = library.add(std::move(rec));
      }
    }
    const StateRecord& from = library.states[std::size_t(source)];
    e.from_id = from.id;
    e.energy_from = from.energy.e_enclosure;
    e.morse_from = from.stability.morse;
    if (to >= 0 && to != source) {
      const StateRecord& t = library.states[std::size_t(to)];
      e.to_index = to;
      e.to_id = t.id;
      e.energy_to = t.energy.e_enclosure;
      e.morse_to = t.has_stability ? t.stability.morse : -1;
      e.metastable = e.status == EdgeStatus::stagnated && e.morse_to > 0;
    } else if (e.status == EdgeStatus::reached) {
      e.status = EdgeStatus::stagnated;  // matched but the polish did not confirm it
    }
    edges.push_back(std::move(e));
  }
  return edges;
}

Exploration explore_connections(StateLibrary& library, const ConnectionOptions& opt, int max_sources) {
  Exploration ex;
  std::vector<bool> done;
  for (;;) {
    done.resize(library.states.size(), false);
    int next = -1;
    for (std::size_t k = 0; k < library.states.size() && next < 0; ++k) {
      const StateRecord& s = library.states[k];
      if (!done[k] && s.verified() && s.has_stability && s.stability.morse > 0) next = int(k);
    }
    if (next < 0 || (max_sources >= 0 && int(ex.sources.size()) >= max_sources)) break;
    done[std::size_t(next)] = true;
    ex.sources.push_back(next);
    auto edges = connection_search(next, library, opt);
    ex.edges.insert(ex.edges.end(), edges.begin(), edges.end());
  }
  return ex;
}

}  // namespace pfc
