// nctgabor: Gabor frames and solitons over noncommutative tori from the command line.
#include <atomic>
#include <fstream>
#include <iostream>
#include <map>
#include <thread>

#include <CLI11.hpp>

#include "nctgabor/error.hpp"
#include "nctgabor/run.hpp"

namespace {

using namespace nct;

enum Exit {
  kOk = 0,
  kIdentityFailed = 1,
  kConfigError = 2,
  kNotAFrame = 3,
  kSolverFailed = 4,
  kNotAProjection = 5,
  kNotDual = 6,
  kNoSymbol = 7,
  kIoError = 8,
  kPeriodTooSmall = 9,
  kNotCoprime = 10,
  kBadArgument = 11,
};

int exit_code(ErrorCode code) {
  switch (code) {
    case ErrorCode::Config: return kConfigError;
    case ErrorCode::NotAFrame: return kNotAFrame;
    case ErrorCode::CgStagnation: return kSolverFailed;
    case ErrorCode::NotAProjection: return kNotAProjection;
    case ErrorCode::NotDual: return kNotDual;
    case ErrorCode::LaurentUnavailable: return kNoSymbol;
    case ErrorCode::Io: return kIoError;
    case ErrorCode::PeriodTooSmall: return kPeriodTooSmall;
    case ErrorCode::NotCoprime: return kNotCoprime;
    case ErrorCode::InvalidArgument:
    case ErrorCode::SpecMismatch:
    case ErrorCode::LatticeMismatch: return kBadArgument;
  }
  return kBadArgument;
}

// Flags that map one-to-one onto config keys.
struct Flags {
  std::map<std::string, std::string> single;
  std::vector<std::string> weights;
  std::vector<std::string> tasks;
  std::string config;
  std::string out;
  std::string window_out;
  std::string symbol_out;
  std::string csv;
  std::string plot;
  std::map<std::string, CLI::Option*> given;
};

void add_common(CLI::App& app, Flags& f) {
  static const std::vector<std::pair<std::string, std::string>> keys = {
      {"alpha", "time step of the lattice (a:b:step in sweeps)"},
      {"beta", "frequency step of the lattice (a:b:step in sweeps)"},
      {"r", "time slope, 0 <= r < q"},
      {"s", "frequency slope, 0 <= s < q"},
      {"q", "number of channels"},
      {"L", "period of the sampling circle"},
      {"N", "samples per channel"},
      {"radius", "truncation radius"},
      {"eps0", "base of the tolerance ladder"},
      {"seed", "random seed"},
      {"probes", "random starts for the bound estimates"},
      {"workers", "worker threads"},
      {"window", "gaussian | lifted_gaussian | hermite | perturbed | file"},
      {"lam", "Gaussian phase parameter, e.g. 1+0.5i"},
      {"order", "Hermite order"},
      {"eps", "perturbation size"},
      {"path", "window file for --window file"},
  };
  for (const auto& [key, help] : keys) f.given[key] = app.add_option("--" + key, f.single[key], help);
  f.given["weight"] = app.add_option("--weight", f.weights, "channel weight (repeat once per channel)");
  app.add_option("--config", f.config, "key = value config file; flags override it");
  app.add_option("--out", f.out, "JSON report path (stdout when omitted)");
}

KeyValues flag_keys(const Flags& f, const std::vector<std::string>& skip = {}) {
  KeyValues kv;
  for (const auto& [key, opt] : f.given) {
    if (opt->count() == 0 || key == "weight") continue;
    if (std::find(skip.begin(), skip.end(), key) != skip.end()) continue;
    kv.add(key, f.single.at(key));
  }
  for (const auto& w : f.weights) kv.add("weight", w);
  for (const auto& t : f.tasks) kv.add("task", t);
  return kv;
}

ExperimentConfig build_config(const Flags& f, std::vector<Task> default_tasks,
                              const std::vector<std::string>& skip = {}) {
  ExperimentConfig base;
  base.tasks = std::move(default_tasks);
  if (!f.config.empty()) base = load_config(f.config, base);
  return apply_keys(flag_keys(f, skip), base);
}

void emit(const std::string& path, const json& report) {
  std::string text = report.dump(2) + "\n";
  if (path.empty())
    std::cout << text;
  else
    write_text(path, text);
}

void print_checks(const std::vector<Check>& checks) {
  for (const Check& c : checks)
    std::cerr << (c.pass ? "PASS " : "FAIL ") << c.name << " value=" << c.value << " tol=" << c.tolerance << "\n";
}

int run_single(const Flags& f, std::vector<Task> tasks, const RunOutputs& outputs) {
  ExperimentConfig cfg = build_config(f, std::move(tasks));
  RunResult r = run_experiment(cfg, outputs);
  emit(f.out, r.report);
  print_checks(r.checks);
  return r.passed() ? kOk : kIdentityFailed;
}

int run_sweep(const Flags& f) {
  ExperimentConfig base = build_config(f, {Task::Energy}, {"alpha", "beta"});
  auto range_of = [&](const std::string& key, double fallback) {
    auto it = f.given.find(key);
    if (it != f.given.end() && it->second->count() > 0) return parse_range(f.single.at(key));
    return std::vector<double>{fallback};
  };
  std::vector<double> alphas = range_of("alpha", base.params.alpha);
  std::vector<double> betas = range_of("beta", base.params.beta);
  std::vector<ExperimentConfig> points;
  for (double a : alphas)
    for (double b : betas) {
      ExperimentConfig c = base;
      c.params.alpha = a;
      c.params.beta = b;
      c.workers = 1;
      c.validate();
      points.push_back(c);
    }

  struct Outcome {
    std::optional<RunResult> result;
    std::string error;
    int code = kOk;
  };
  std::vector<Outcome> outcomes(points.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < points.size(); i = next++) {
      try {
        outcomes[i].result = run_experiment(points[i]);
      } catch (const Error& e) {
        outcomes[i].error = e.what();
        outcomes[i].code = exit_code(e.code());
      }
    }
  };
  int nworkers = std::max(1, std::min<int>(base.workers, static_cast<int>(points.size())));
  std::vector<std::thread> pool;
  for (int t = 0; t < nworkers; ++t) pool.emplace_back(worker);
  for (auto& th : pool) th.join();

  json runs = json::array();
  std::string csv = csv_header() + "\n";
  std::vector<std::vector<double>> curve;
  int code = kOk;
  for (size_t i = 0; i < points.size(); ++i) {
    const Outcome& o = outcomes[i];
    if (!o.result) {
      runs.push_back(json{{"config", to_json(points[i])}, {"error", o.error}});
      std::cerr << "FAIL point alpha=" << points[i].params.alpha << " beta=" << points[i].params.beta << ": "
                << o.error << "\n";
      if (code == kOk) code = o.code;
      continue;
    }
    runs.push_back(o.result->report);
    for (const auto& row : o.result->csv_rows) csv += row + "\n";
    if (o.result->chern)
      curve.push_back({points[i].params.alpha, points[i].params.beta, o.result->chern->energy});
    print_checks(o.result->checks);
    if (!o.result->passed() && code == kOk) code = kIdentityFailed;
  }
  json report{{"version", kLibraryVersion}, {"ladder", to_json(base.ladder())}, {"radius", base.radius},
              {"seed", base.seed},          {"points", runs.size()},           {"runs", runs}};
  emit(f.out, report);
  if (!f.csv.empty()) write_text(f.csv, csv);
  else std::cout << csv;
  if (!f.plot.empty()) write_columns(f.plot, {"alpha", "beta", "energy"}, curve);
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gabor frames, twisted convolution algebras and solitons over noncommutative tori"};
  app.require_subcommand(1);
  Flags flags;
  add_common(app, flags);

  auto sub = [&](const char* name, const char* help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->fallthrough();
    return s;
  };
  CLI::App* axioms = sub("check-axioms", "cocycle, twisted convolution, involution, trace and Leibniz identities");
  CLI::App* frame = sub("frame", "frame bounds, trend verdict and Laurent symbol");
  frame->add_option("--symbol-out", flags.symbol_out, "write t1 t2 |F| heatmap data");
  CLI::App* dual = sub("dual", "canonical dual window");
  dual->add_option("--window-out", flags.window_out, "dual window file")->required();
  CLI::App* tight = sub("tight", "canonical tight window");
  tight->add_option("--window-out", flags.window_out, "tight window file")->required();
  CLI::App* chern = sub("chern", "Connes-Chern number by two formulas");
  CLI::App* energy = sub("energy", "energy of the dual-pair projection");
  CLI::App* soliton = sub("verify-soliton", "full soliton pipeline with self-duality checks");
  CLI::App* moyal = sub("moyal", "continuous picture: Moyal identity, energy and Chern number");
  CLI::App* sweep = sub("sweep", "parameter sweep with CSV output");
  sweep->add_option("--task", flags.tasks, "task per point (repeatable)");
  sweep->add_option("--csv", flags.csv, "CSV path (stdout when omitted)");
  sweep->add_option("--plot", flags.plot, "energy-vs-parameter data file");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kConfigError;
  }

  try {
    if (axioms->parsed()) return run_single(flags, {Task::Axioms}, {});
    if (frame->parsed()) return run_single(flags, {Task::Frame}, RunOutputs{"", "", flags.symbol_out});
    if (dual->parsed()) return run_single(flags, {Task::Frame, Task::WexlerRaz}, RunOutputs{flags.window_out, "", ""});
    if (tight->parsed()) return run_single(flags, {Task::Frame}, RunOutputs{"", flags.window_out, ""});
    if (chern->parsed()) return run_single(flags, {Task::Chern}, {});
    if (energy->parsed()) return run_single(flags, {Task::Energy}, {});
    if (soliton->parsed()) return run_single(flags, {Task::Chern, Task::Energy, Task::Soliton}, {});
    if (moyal->parsed()) return run_single(flags, {Task::Moyal}, {});
    if (sweep->parsed()) return run_sweep(flags);
  } catch (const Error& e) {
    std::cerr << "error (" << to_string(e.code()) << "): " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadArgument;
  }
  return kOk;
}
