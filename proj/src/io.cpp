#include "pfc/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pfc/errors.hpp"

namespace pfc {

namespace {

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string one_line(std::string s) {
  for (char& c : s)
    if (c == '\n' || c == '\r') c = ' ';
  return s;
}

double to_double(const std::string& key, const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') throw ConfigError("state file: bad number for " + key + ": '" + s + "'");
  return v;
}

int to_int(const std::string& key, const std::string& s) {
  char* end = nullptr;
  const long v = std::strtol(s.c_str(), &end, 10);
  if (end == s.c_str() || *end != '\0') throw ConfigError("state file: bad integer for " + key + ": '" + s + "'");
  return int(v);
}

struct Fields {
  std::map<std::string, std::string> kv;

  bool has(const std::string& k) const { return kv.count(k) != 0; }
  const std::string& str(const std::string& k) const {
    const auto it = kv.find(k);
    if (it == kv.end()) throw ConfigError("state file: missing key '" + k + "'");
    return it->second;
  }
  std::string str_or(const std::string& k, const std::string& d) const { return has(k) ? str(k) : d; }
  double dbl(const std::string& k) const { return to_double(k, str(k)); }
  int integer(const std::string& k) const { return to_int(k, str(k)); }
  bool flag(const std::string& k) const { return has(k) && str(k) == "true"; }
  Interval iv(const std::string& k) const { return parse_interval(str(k)); }
};

const char* tf(bool b) { return b ? "true" : "false"; }

}  // namespace

void write_file_atomic(const std::string& path, const std::string& content) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  const std::string tmp = path + ".tmp";
  {
    std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
    if (!os) throw ConfigError("cannot write " + tmp);
    os << content;
    if (!os.flush()) throw ConfigError("write failed for " + tmp);
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

std::string format_interval(const Interval& x) { return "[" + num(x.lo()) + ", " + num(x.hi()) + "]"; }

Interval parse_interval(const std::string& s) {
  const auto a = s.find('['), c = s.find(','), b = s.find(']');
  if (a == std::string::npos || c == std::string::npos || b == std::string::npos || !(a < c && c < b))
    throw ConfigError("bad interval '" + s + "'");
  auto trim = [](std::string t) {
    const auto i = t.find_first_not_of(' '), j = t.find_last_not_of(' ');
    return i == std::string::npos ? std::string() : t.substr(i, j - i + 1);
  };
  const double lo = to_double("interval", trim(s.substr(a + 1, c - a - 1)));
  const double hi = to_double("interval", trim(s.substr(c + 1, b - c - 1)));
  if (std::isinf(lo) || std::isinf(hi)) return Interval::whole();
  if (!(lo <= hi)) throw ConfigError("bad interval '" + s + "': lower end above upper end");
  return Interval(lo, hi);
}

std::string format_state(const StateRecord& rec, const std::map<std::string, std::string>& config, bool partial) {
  std::ostringstream os;
  os << "# pfc-state format-version=" << kStateFormatVersion << '\n';
  for (const auto& [k, v] : config) os << "# config " << k << '=' << one_line(v) << '\n';
  os << "id=" << rec.id << '\n'
     << "shift=" << shift_name(rec.shift) << '\n'
     << "provenance=" << one_line(rec.provenance) << '\n'
     << "partial=" << tf(partial) << '\n'
     << "newton_tol=" << num(rec.newton_tol) << '\n'
     << "residual=" << num(rec.residual) << '\n';
  const RadiiCertificate& c = rec.cert;
  os << "verified=" << tf(c.verified) << '\n'
     << "proof_m=" << c.m << '\n'
     << "proof_nu=" << num(c.nu) << '\n'
     << "y0=" << format_interval(c.y0) << '\n'
     << "z0=" << format_interval(c.z0) << '\n'
     << "z1=" << format_interval(c.z1) << '\n'
     << "z20=" << format_interval(c.z20) << '\n'
     << "z21=" << format_interval(c.z21) << '\n'
     << "abar_norm=" << format_interval(c.abar_norm) << '\n'
     << "r_existence=" << num(c.rstar_lo) << '\n'
     << "r_uniqueness=" << num(c.rstar_hi) << '\n'
     << "p_existence=" << format_interval(c.p_lo) << '\n'
     << "p_uniqueness=" << format_interval(c.p_hi) << '\n'
     << "contraction=" << format_interval(c.contraction) << '\n'
     << "message=" << one_line(c.message) << '\n';
  if (rec.has_energy) {
    const EnergyReport& e = rec.energy;
    os << "energy_abar=" << format_interval(e.e_abar) << '\n'
       << "energy_error=" << format_interval(e.e_err) << '\n'
       << "energy=" << format_interval(e.e_enclosure) << '\n'
       << "energy_constant=" << format_interval(e.e0) << '\n'
       << "energy_offset=" << format_interval(e.offset()) << '\n'
       << "s1=" << format_interval(e.s1) << '\n'
       << "s2=" << format_interval(e.s2) << '\n'
       << "rho=" << num(e.rho) << '\n'
       << "energy_rigorous=" << tf(e.rigorous) << '\n';
  }
  if (rec.has_stability) {
    const StabilityReport& s = rec.stability;
    os << "morse=" << s.morse << '\n'
       << "n_pos=" << s.n_pos << '\n'
       << "tail_ok=" << tf(s.tail_ok) << '\n'
       << "signature_transfers=" << tf(s.signature_transfers) << '\n'
       << "inconclusive=" << tf(s.inconclusive) << '\n'
       << "stability_partial=" << tf(s.partial) << '\n'
       << "h2_lower_bound=" << tf(s.h2_lower_bound) << '\n'
       << "eigenvalues=";
    for (std::size_t k = 0; k < s.eigs.size(); ++k) os << (k ? ";" : "") << format_interval(s.eigs[k]);
    os << '\n';
  }
  if (!rec.error.empty()) os << "error=" << one_line(rec.error) << '\n';
  os << "[grid]\n";
  write_grid(os, rec.grid, rec.spec, c.nu > 1.0 ? c.nu : 1.05);
  return os.str();
}

StateRecord parse_state(const std::string& text) {
  std::istringstream is(text);
  Fields f;
  std::string line;
  bool grid = false;
  while (std::getline(is, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    if (line == "[grid]") {
      grid = true;
      break;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("state file: expected key=value, got '" + line + "'");
    f.kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  if (!grid) throw ConfigError("state file: missing [grid] block");
  const GridFile g = read_grid(is);

  StateRecord r;
  r.grid = g.grid;
  r.spec = g.spec;
  r.id = f.str_or("id", "");
  r.shift = f.has("shift") ? shift_from_name(f.str("shift")) : 0;
  r.provenance = f.str_or("provenance", "");
  r.error = f.str_or("error", "");
  if (f.has("newton_tol")) r.newton_tol = f.dbl("newton_tol");
  if (f.has("residual")) r.residual = f.dbl("residual");
  if (f.has("verified")) {
    RadiiCertificate& c = r.cert;
    c.verified = f.flag("verified");
    c.m = f.integer("proof_m");
    c.nu = f.dbl("proof_nu");
    c.y0 = f.iv("y0");
    c.z0 = f.iv("z0");
    c.z1 = f.iv("z1");
    c.z20 = f.iv("z20");
    c.z21 = f.iv("z21");
    c.abar_norm = f.iv("abar_norm");
    c.rstar_lo = f.dbl("r_existence");
    c.rstar_hi = f.dbl("r_uniqueness");
    c.p_lo = f.iv("p_existence");
    c.p_hi = f.iv("p_uniqueness");
    c.contraction = f.iv("contraction");
    c.message = f.str_or("message", "");
  }
  if (f.has("energy")) {
    EnergyReport& e = r.energy;
    e.e_abar = f.iv("energy_abar");
    e.e_err = f.iv("energy_error");
    e.e_enclosure = f.iv("energy");
    e.e0 = f.iv("energy_constant");
    e.s1 = f.iv("s1");
    e.s2 = f.iv("s2");
    e.rho = f.dbl("rho");
    e.rigorous = f.flag("energy_rigorous");
    r.has_energy = true;
  }
  if (f.has("morse")) {
    StabilityReport& s = r.stability;
    s.morse = f.integer("morse");
    s.n_pos = f.integer("n_pos");
    s.tail_ok = f.flag("tail_ok");
    s.signature_transfers = f.flag("signature_transfers");
    s.inconclusive = f.flag("inconclusive");
    s.partial = f.flag("stability_partial");
    s.h2_lower_bound = f.flag("h2_lower_bound");
    std::istringstream es(f.str_or("eigenvalues", ""));
    std::string tok;
    while (std::getline(es, tok, ';'))
      if (!tok.empty()) s.eigs.push_back(parse_interval(tok));
    r.has_stability = true;
  }
  return r;
}

void write_state(const std::string& path, const StateRecord& rec, const std::map<std::string, std::string>& config,
                 bool partial) {
  write_file_atomic(path, format_state(rec, config, partial));
}

StateRecord read_state(const std::string& path) { return parse_state(read_file(path)); }

std::string edges_csv(const std::vector<ConnectionEdge>& edges) {
  std::ostringstream os;
  os << "from_id,to_id,status,steps,energy_from,energy_to,morse_from,morse_to,metastable,coefficients\n";
  for (const ConnectionEdge& e : edges) {
    os << e.from_id << ',' << e.to_id << ',' << to_string(e.status) << ',' << e.steps << ','
       << num(e.energy_from.mid()) << ',' << (e.to_id.empty() ? std::string() : num(e.energy_to.mid())) << ','
       << e.morse_from << ',' << e.morse_to << ',' << tf(e.metastable) << ',';
    for (std::size_t k = 0; k < e.coefficients.size(); ++k) os << (k ? ";" : "") << num(e.coefficients[k]);
    os << '\n';
  }
  return os.str();
}

std::string branch_csv(const Branch& b) {
  std::ostringstream os;
  os << "arclength,psibar,l2norm,energy_minus_e0,fold_flag,hex_amp\n";
  for (const BranchPoint& p : b.points)
    os << num(p.arclength) << ',' << num(p.psibar) << ',' << num(p.l2norm) << ',' << num(p.energy_minus_e0) << ','
       << (p.fold ? 1 : 0) << ',' << num(p.hex_amp) << '\n';
  return os.str();
}

std::string phase_csv(const std::vector<PhasePoint>& pts) {
  std::ostringstream os;
  os << "psibar,beta,label,n_certified,winner_energy_hi,runnerup_energy_lo\n";
  for (const PhasePoint& p : pts)
    os << num(p.psibar) << ',' << num(p.beta) << ',' << p.label << ',' << p.n_certified << ','
       << num(p.winner_energy_hi) << ',' << num(p.runnerup_energy_lo) << '\n';
  return os.str();
}

std::string census_csv(const CensusResult& r) {
  std::ostringstream os;
  os << "index,id,shift,hits,morse,energy_lo,energy_hi,provenance\n";
  for (std::size_t k = 0; k < r.library.states.size(); ++k) {
    const StateRecord& s = r.library.states[k];
    os << k << ',' << s.id << ',' << shift_name(s.shift) << ',' << (k < r.hits.size() ? r.hits[k] : 0) << ','
       << (s.has_stability ? s.stability.morse : -1) << ',' << num(s.energy.e_enclosure.lo()) << ','
       << num(s.energy.e_enclosure.hi()) << ',' << s.provenance << '\n';
  }
  return os.str();
}

std::string field_csv(const CoeffGrid& a, const ModelSpec& spec, int n) {
  if (n < 2) throw ConfigError("field sample count must be at least 2");
  std::ostringstream os;
  for (int r = 0; r < n; ++r) {
    const double y = spec.ly() * double(r) / double(n - 1);
    for (int c = 0; c < n; ++c) {
      const double x = spec.lx() * double(c) / double(n - 1);
      os << (c ? "," : "") << num(eval_field(a, spec, x, y));
    }
    os << '\n';
  }
  return os.str();
}

}  // namespace pfc
