#include "nctgabor/report.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "nctgabor/error.hpp"

namespace nct {

json to_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json to_json(const TorusParams& p) {
  return json{{"alpha", p.alpha}, {"beta", p.beta}, {"r", p.r}, {"s", p.s}, {"q", p.q}};
}

json to_json(const GridSpec& g) { return json{{"L", g.period}, {"N", g.samples}, {"channels", g.channels}}; }

json to_json(const Tolerances& t) {
  return json{{"eps0", t.eps0}, {"algebra", t.algebra()}, {"frame", t.frame()}, {"chern", t.chern()},
              {"solver", t.solver()}};
}

json to_json(const WindowSpec& w) {
  json j{{"kind", to_string(w.kind)}, {"describe", w.describe()}};
  if (!w.weights.empty()) {
    json ws = json::array();
    for (cplx v : w.weights) ws.push_back(to_json(v));
    j["weights"] = ws;
  }
  j["lam"] = to_json(w.lam);
  if (w.kind == WindowKind::Hermite || w.kind == WindowKind::Perturbed) j["order"] = w.order;
  if (w.kind == WindowKind::Perturbed) j["eps"] = w.eps;
  if (w.kind == WindowKind::File) j["path"] = w.path;
  return j;
}

json to_json(const ExperimentConfig& c) {
  json tasks = json::array();
  for (Task t : c.tasks) tasks.push_back(to_string(t));
  return json{{"params", to_json(c.params)}, {"grid", to_json(c.grid)}, {"radius", c.radius},
              {"eps0", c.eps0},             {"window", to_json(c.window)}, {"tasks", tasks},
              {"seed", c.seed},             {"probes", c.probes}};
}

json to_json(const FrameBounds& b) {
  return json{{"A", b.lower}, {"B", b.upper}, {"section_radius", b.section_radius}, {"probes", b.probes},
              {"iterations", b.iterations}};
}

json to_json(const ChernReport& r) {
  return json{{"params", to_json(r.params)},
              {"window", r.window},
              {"radius", r.radius},
              {"L", r.period},
              {"N", r.samples},
              {"A", r.lower_bound},
              {"B", r.upper_bound},
              {"c1", to_json(r.c1)},
              {"c1_sum", to_json(r.c1_sum)},
              {"c1_rounded", r.c1_rounded},
              {"energy", r.energy},
              {"energy_window", r.energy_window},
              {"gap", r.gap},
              {"sd_plus", r.sd_plus},
              {"sd_minus", r.sd_minus},
              {"W_residual_plus", r.w_residual_plus},
              {"W_residual_minus", r.w_residual_minus},
              {"wexler_raz", r.wexler_raz},
              {"idempotence", r.idempotence},
              {"self_adjointness", r.self_adjointness}};
}

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string csv_header() {
  return "alpha,beta,r,s,q,A,B,c1_re,c1_im,energy,gap,sd_plus,sd_minus,W_residual,radius,N,L";
}

std::string csv_row(const ChernReport& r) {
  std::ostringstream os;
  os << num(r.params.alpha) << ',' << num(r.params.beta) << ',' << r.params.r << ',' << r.params.s << ','
     << r.params.q << ',' << num(r.lower_bound) << ',' << num(r.upper_bound) << ',' << num(r.c1.real()) << ','
     << num(r.c1.imag()) << ',' << num(r.energy) << ',' << num(r.gap) << ',' << num(r.sd_plus) << ','
     << num(r.sd_minus) << ',' << num(r.w_residual()) << ',' << num(r.radius) << ',' << r.samples << ','
     << num(r.period);
  return os.str();
}

std::string csv_row_continuous(int q, cplx c1, double energy, const GridSpec& grid) {
  std::ostringstream os;
  os << ",,,," << q << ",,," << num(c1.real()) << ',' << num(c1.imag()) << ',' << num(energy) << ','
     << num(energy - std::abs(c1)) << ",,,,," << grid.samples << ',' << num(grid.period);
  return os.str();
}

void write_text(const std::string& path, const std::string& content) {
  std::ofstream out(path);
  if (!out) fail(ErrorCode::Io, "cannot write " + path);
  out << content;
  if (!out) fail(ErrorCode::Io, "write failed for " + path);
}

void write_columns(const std::string& path, const std::vector<std::string>& names,
                   const std::vector<std::vector<double>>& rows) {
  std::ostringstream os;
  os << '#';
  for (const auto& n : names) os << ' ' << n;
  os << '\n';
  for (const auto& row : rows) {
    for (size_t i = 0; i < row.size(); ++i) os << (i ? " " : "") << num(row[i]);
    os << '\n';
  }
  write_text(path, os.str());
}

void write_symbol_heatmap(const std::string& path, const LaurentSymbol& s) {
  std::vector<std::vector<double>> rows;
  for (int i = 0; i < s.grid; ++i)
    for (int j = 0; j < s.grid; ++j)
      rows.push_back({double(i) / s.grid, double(j) / s.grid, std::abs(s.values[static_cast<size_t>(i) * s.grid + j])});
  write_columns(path, {"t1", "t2", "absF"}, rows);
}

}  // namespace nct
