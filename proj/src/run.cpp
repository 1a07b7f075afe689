#include "nctgabor/run.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ctime>

#include "nctgabor/error.hpp"
#include "nctgabor/moyal.hpp"

namespace nct {

LatticeSeq random_sequence(const TorusParams& p, LatticeKind kind, double radius, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  LatticeSeq a(p, kind, radius);
  IndexBox box = index_box(lattice_basis(p, kind), radius);
  for (long n1 = box.n1_lo; n1 <= box.n1_hi; ++n1)
    for (long n2 = box.n2_lo; n2 <= box.n2_hi; ++n2) {
      double re = u(rng), im = u(rng);
      a.set(n1, n2, cplx(re, im));
    }
  return a;
}

double AxiomResiduals::worst() const { return std::max({cocycle, associativity, involution, trace, leibniz}); }

AxiomResiduals axiom_suite(const TorusParams& p, int instances, std::uint64_t seed, double radius) {
  p.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::uniform_int_distribution<int> ch(0, p.q - 1);
  AxiomResiduals res;
  res.instances = instances;
  auto point = [&] { return PhasePoint{u(rng), ch(rng), u(rng), ch(rng)}; };
  for (int i = 0; i < instances; ++i) {
    PhasePoint x = point(), y = point(), z = point();
    cplx lhs = cocycle(x, y, p.q) * cocycle(add(x, y, p.q), z, p.q);
    cplx rhs = cocycle(x, add(y, z, p.q), p.q) * cocycle(y, z, p.q);
    res.cocycle = std::max(res.cocycle, std::abs(lhs - rhs));

    for (LatticeKind kind : {LatticeKind::TimeFrequency, LatticeKind::Adjoint}) {
      LatticeSeq a = random_sequence(p, kind, radius, rng);
      LatticeSeq b = random_sequence(p, kind, radius, rng);
      LatticeSeq c = random_sequence(p, kind, radius, rng);
      double na = a.l1(), nb = b.l1(), nc = c.l1();
      LatticeSeq ab = twisted_conv(a, b);

      double assoc = (twisted_conv(ab, c) - twisted_conv(a, twisted_conv(b, c))).l1() / (na * nb * nc);
      res.associativity = std::max(res.associativity, assoc);

      double inv = (twisted_star(ab) - twisted_conv(twisted_star(b), twisted_star(a))).l1() / (na * nb);
      res.involution = std::max(res.involution, inv);

      auto tr = [&](const LatticeSeq& s) { return kind == LatticeKind::TimeFrequency ? trace_l(s) : trace_r(s); };
      double cyc = std::abs(tr(ab) - tr(twisted_conv(b, a))) / (na * nb);
      res.trace = std::max(res.trace, cyc);

      for (int j = 1; j <= 2; ++j) {
        LatticeSeq da = derive(a, j), db = derive(b, j);
        LatticeSeq diff = derive(ab, j) - twisted_conv(da, b) - twisted_conv(a, db);
        double scale = da.l1() * nb + na * db.l1();
        res.leibniz = std::max(res.leibniz, diff.l1() / scale);
      }
    }
  }
  return res;
}

bool RunResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return c.pass; });
}

namespace {

struct Runner {
  const ExperimentConfig& cfg;
  const RunOutputs& out;
  Tolerances tol;
  RunResult result;
  json results = json::object();
  std::optional<GridSignal> window;
  std::optional<FrameSystem> system;

  void check(const std::string& name, double value, double tolerance) {
    result.checks.push_back({name, value, tolerance, value < tolerance});
  }

  const GridSignal& g() {
    if (!window) window = build_window(cfg.window, cfg.signal_grid(), cfg.params, cfg.radius);
    return *window;
  }

  FrameSystem& sys() {
    if (!system) {
      system.emplace(g(), cfg.params, cfg.radius);
      frame_bounds(*system, cfg.probes, cfg.seed);
    }
    return *system;
  }

  const GridSignal& dual() {
    FrameSystem& s = sys();
    if (!s.dual()) canonical_dual(s, tol.solver());
    return *s.dual();
  }

  void axioms() {
    AxiomResiduals r = axiom_suite(cfg.params, 100, cfg.seed);
    results["axioms"] = json{{"instances", r.instances},   {"cocycle", r.cocycle},
                             {"associativity", r.associativity}, {"involution", r.involution},
                             {"trace", r.trace},           {"leibniz", r.leibniz}};
    check("cocycle", r.cocycle, tol.algebra());
    check("associativity", r.associativity, tol.algebra());
    check("involution", r.involution, tol.algebra());
    check("trace_cyclicity", r.trace, tol.algebra());
    check("leibniz", r.leibniz, tol.algebra());
  }

  void frame() {
    FrameSystem& s = sys();
    const FrameBounds& fb = *s.bounds();
    FrameVerdict v = frame_verdict(g(), cfg.params, cfg.radius, cfg.seed);
    json j = to_json(fb);
    j["radius"] = cfg.radius;
    j["N"] = cfg.grid.samples;
    j["L"] = cfg.grid.period;
    j["lower_doubled_section"] = v.lower_doubled;
    j["is_frame"] = v.is_frame;
    check("frame_condition_number", fb.upper / fb.lower, 1e6);
    check("frame_trend", v.is_frame ? 0.0 : 1.0, 0.5);

    if (soliton_admissible(cfg.params).integral) {
      LaurentSymbol sym = laurent_symbol(g(), cfg.params, 64, cfg.radius);
      j["symbol"] = json{{"min_abs", sym.min_abs}, {"max_abs", sym.max_abs}, {"max_imag", sym.max_imag},
                         {"riesz", sym.riesz}};
      if (!out.symbol_path.empty()) write_symbol_heatmap(out.symbol_path, sym);
    }
    if (!out.dual_path.empty()) {
      const GridSignal& h = dual();
      save_signal(out.dual_path, h);
      const DualDiagnostics& d = s.dual_diagnostics();
      double wr = wexler_raz_residual(g(), h, cfg.params, cfg.radius);
      j["dual"] = json{{"path", out.dual_path},
                       {"iterations", d.iterations},
                       {"algebraic_residual", d.algebraic_residual},
                       {"operator_residual", d.operator_residual},
                       {"wexler_raz", wr}};
      check("dual_wexler_raz", wr, tol.frame());
    }
    if (!out.tight_path.empty()) {
      GridSignal t = canonical_tight(s, tol.solver());
      save_signal(out.tight_path, t);
      double wr = wexler_raz_residual(t, t, cfg.params, cfg.radius);
      j["tight"] = json{{"path", out.tight_path}, {"wexler_raz", wr}};
      check("tight_wexler_raz", wr, tol.frame());
    }
    results["frame"] = j;
  }

  void wexler_raz() {
    const GridSignal& h = dual();
    double wr = wexler_raz_residual(g(), h, cfg.params, cfg.radius);
    std::mt19937_64 rng(cfg.seed);
    double recon = 0.0;
    for (int i = 0; i < 10; ++i) {
      GridSignal f = random_probe(g().spec(), rng);
      recon = std::max(recon, reconstruction_residual(f, g(), h, cfg.params, cfg.radius));
    }
    results["wexler_raz"] = json{{"residual", wr}, {"reconstruction", recon}, {"probes", 10}};
    check("wexler_raz", wr, tol.frame());
    check("reconstruction", recon, tol.frame());
  }

  const ChernReport& chern_report() {
    if (!result.chern) {
      ExperimentOptions opt;
      opt.radius = cfg.radius;
      opt.tol = tol;
      opt.seed = cfg.seed;
      opt.probes = cfg.probes;
      result.chern = soliton_experiment(cfg.params, cfg.window, cfg.signal_grid(), opt);
      result.csv_rows.push_back(csv_row(*result.chern));
      results["chern_report"] = to_json(*result.chern);
    }
    return *result.chern;
  }

  void chern() {
    const ChernReport& r = chern_report();
    check("c1_integrality", std::abs(r.c1.real() - double(r.c1_rounded)), tol.chern());
    check("c1_imaginary", std::abs(r.c1.imag()), tol.chern());
    check("c1_two_formulas", std::abs(r.c1 - r.c1_sum), tol.chern());
  }

  void energy() {
    const ChernReport& r = chern_report();
    check("energy_bound", -r.gap, tol.chern());
  }

  void soliton() {
    const ChernReport& r = chern_report();
    Admissibility adm = soliton_admissible(cfg.params);
    results["admissibility"] = json{{"admissible", adm.admissible},
                                    {"integral", adm.integral},
                                    {"subcritical", adm.subcritical},
                                    {"integrality_value", adm.integrality_value},
                                    {"density", adm.density}};
    const double q = cfg.params.q;
    check("c1_equals_q", std::abs(r.c1 - q), tol.chern());
    check("energy_equals_q", std::abs(r.energy - q), tol.chern());
    check("self_duality", std::min(r.sd_plus, r.sd_minus), tol.chern());
    check("window_membership", r.w_residual(), tol.frame());
  }

  void moyal() {
    const GridSignal& w = g();
    std::mt19937_64 rng(cfg.seed);
    GridSignal f = random_probe(w.spec(), rng);
    MoyalCheck mc = moyal_check(f, w, cfg.workers);
    double e = continuous_energy(w, cfg.workers);
    cplx c1 = continuous_chern(w);
    EigenFit plus = eigen_residual(w, 1), minus = eigen_residual(w, -1);
    TraceCompatibility tc = trace_compatibility(f, w);
    results["moyal"] = json{{"lhs", mc.lhs},
                            {"rhs", mc.rhs},
                            {"relative_error", mc.relative_error},
                            {"energy", e},
                            {"c1", to_json(c1)},
                            {"eigen_plus", json{{"lambda", to_json(plus.lambda)}, {"residual", plus.residual}}},
                            {"eigen_minus", json{{"lambda", to_json(minus.lambda)}, {"residual", minus.residual}}},
                            {"trace_compatibility", tc.residual}};
    result.csv_rows.push_back(csv_row_continuous(cfg.params.q, c1, e, cfg.grid));
    const double q = cfg.params.q;
    check("moyal_identity", mc.relative_error, tol.algebra());
    check("continuous_energy_bound", q - e, tol.chern());
    check("continuous_c1", std::abs(c1 - q), tol.chern());
    check("trace_compatibility", tc.residual, tol.algebra());
  }
};

std::string utc_now() {
  std::time_t t = std::time(nullptr);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
  return buf;
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& c, const RunOutputs& out) {
  c.validate();
  auto start = std::chrono::steady_clock::now();
  std::string started = utc_now();
  Runner r{c, out, c.ladder(), {}, json::object(), std::nullopt, std::nullopt};
  for (Task t : ordered_tasks(c.tasks)) {
    switch (t) {
      case Task::Axioms: r.axioms(); break;
      case Task::Frame: r.frame(); break;
      case Task::WexlerRaz: r.wexler_raz(); break;
      case Task::Chern: r.chern(); break;
      case Task::Energy: r.energy(); break;
      case Task::Soliton: r.soliton(); break;
      case Task::Moyal: r.moyal(); break;
    }
  }
  json checks = json::array();
  for (const Check& ch : r.result.checks)
    checks.push_back(json{{"name", ch.name}, {"value", ch.value}, {"tolerance", ch.tolerance}, {"pass", ch.pass}});
  json& rep = r.result.report;
  rep["version"] = kLibraryVersion;
  rep["config"] = to_json(c);
  rep["ladder"] = to_json(c.ladder());
  rep["radius"] = c.radius;
  rep["seed"] = c.seed;
  rep["results"] = r.results;
  rep["checks"] = checks;
  rep["passed"] = r.result.passed();
  rep["timing"] = json{{"started", started},
                       {"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()}};
  return std::move(r.result);
}

}  // namespace nct
