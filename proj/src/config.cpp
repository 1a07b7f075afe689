#include "nctgabor/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <sstream>

#include "nctgabor/error.hpp"

namespace nct {

void KeyValues::add(std::string key, std::string value) { entries_.emplace_back(std::move(key), std::move(value)); }

std::optional<std::string> KeyValues::last(const std::string& key) const {
  for (auto it = entries_.rbegin(); it != entries_.rend(); ++it)
    if (it->first == key) return it->second;
  return std::nullopt;
}

std::vector<std::string> KeyValues::all(const std::string& key) const {
  std::vector<std::string> out;
  for (const auto& [k, v] : entries_)
    if (k == key) out.push_back(v);
  return out;
}

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

KeyValues parse_key_values(std::istream& is, const std::string& origin) {
  KeyValues kv;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    size_t eq = line.find('=');
    if (eq == std::string::npos)
      fail(ErrorCode::Config, origin + ":" + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    if (key.empty()) fail(ErrorCode::Config, origin + ":" + std::to_string(lineno) + ": empty key");
    kv.add(key, trim(line.substr(eq + 1)));
  }
  return kv;
}

double parse_real(const std::string& text, const std::string& what) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Config, what + ": not a number: '" + text + "'");
  }
  if (used != text.size()) fail(ErrorCode::Config, what + ": trailing characters in '" + text + "'");
  return v;
}

long parse_int(const std::string& text, const std::string& what) {
  size_t used = 0;
  long v = 0;
  try {
    v = std::stol(text, &used);
  } catch (const std::exception&) {
    fail(ErrorCode::Config, what + ": not an integer: '" + text + "'");
  }
  if (used != text.size()) fail(ErrorCode::Config, what + ": trailing characters in '" + text + "'");
  return v;
}

cplx parse_complex(const std::string& raw) {
  std::string text = trim(raw);
  if (text.empty()) fail(ErrorCode::Config, "empty complex number");
  if (text.back() != 'i') return parse_real(text, "complex");
  std::string body = text.substr(0, text.size() - 1);
  // split at the last sign that is not part of an exponent
  size_t cut = std::string::npos;
  for (size_t i = body.size(); i-- > 1;) {
    if ((body[i] == '+' || body[i] == '-') && body[i - 1] != 'e' && body[i - 1] != 'E') {
      cut = i;
      break;
    }
  }
  auto imag_part = [](const std::string& s) {
    if (s.empty() || s == "+") return 1.0;
    if (s == "-") return -1.0;
    return parse_real(s, "complex");
  };
  if (cut == std::string::npos) return cplx(0.0, imag_part(body));
  return cplx(parse_real(body.substr(0, cut), "complex"), imag_part(body.substr(cut)));
}

std::vector<double> parse_range(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.size() == 1) return {parse_real(parts[0], "range")};
  if (parts.size() != 3) fail(ErrorCode::Config, "range must be a:b:step, got '" + text + "'");
  double a = parse_real(parts[0], "range"), b = parse_real(parts[1], "range"), step = parse_real(parts[2], "range");
  if (!(step > 0.0) || b < a) fail(ErrorCode::Config, "range needs a <= b and step > 0: '" + text + "'");
  long count = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
  std::vector<double> out;
  for (long i = 0; i < count; ++i) out.push_back(a + i * step);
  return out;
}

const char* to_string(Task t) {
  switch (t) {
    case Task::Axioms: return "axioms";
    case Task::Frame: return "frame";
    case Task::WexlerRaz: return "wexler_raz";
    case Task::Chern: return "chern";
    case Task::Energy: return "energy";
    case Task::Soliton: return "soliton";
    case Task::Moyal: return "moyal";
  }
  return "?";
}

Task parse_task(const std::string& name) {
  for (Task t : {Task::Axioms, Task::Frame, Task::WexlerRaz, Task::Chern, Task::Energy, Task::Soliton, Task::Moyal})
    if (name == to_string(t)) return t;
  fail(ErrorCode::Config, "unknown task '" + name + "'");
}

std::vector<Task> ordered_tasks(std::vector<Task> tasks) {
  std::sort(tasks.begin(), tasks.end());
  tasks.erase(std::unique(tasks.begin(), tasks.end()), tasks.end());
  return tasks;
}

const char* to_string(WindowKind k) {
  switch (k) {
    case WindowKind::Gaussian: return "gaussian";
    case WindowKind::LiftedGaussian: return "lifted_gaussian";
    case WindowKind::Hermite: return "hermite";
    case WindowKind::Perturbed: return "perturbed";
    case WindowKind::File: return "file";
  }
  return "?";
}

WindowKind parse_window_kind(const std::string& name) {
  for (WindowKind k : {WindowKind::Gaussian, WindowKind::LiftedGaussian, WindowKind::Hermite, WindowKind::Perturbed,
                       WindowKind::File})
    if (name == to_string(k)) return k;
  fail(ErrorCode::Config, "unknown window '" + name + "'");
}

void ExperimentConfig::validate() const {
  params.validate();
  try {
    signal_grid().validate();
  } catch (const Error& e) {
    fail(ErrorCode::Config, e.what());
  }
  if (tasks.empty()) fail(ErrorCode::Config, "no tasks requested");
  if (!(radius > 0.0)) fail(ErrorCode::Config, "radius must be positive");
  if (!(eps0 > 0.0)) fail(ErrorCode::Config, "eps0 must be positive");
  if (probes < 16) fail(ErrorCode::Config, "probes must be at least 16");
  if (workers < 1) fail(ErrorCode::Config, "workers must be at least 1");
  if (!window.weights.empty() && static_cast<int>(window.weights.size()) != params.q)
    fail(ErrorCode::Config, "window has " + std::to_string(window.weights.size()) + " weights but q = " +
                                std::to_string(params.q));
  if (window.kind == WindowKind::File && window.path.empty()) fail(ErrorCode::Config, "file window needs a path");
  if (window.kind == WindowKind::Hermite && window.order < 0) fail(ErrorCode::Config, "negative Hermite order");
}

ExperimentConfig apply_keys(const KeyValues& kv, ExperimentConfig c) {
  static const std::vector<std::string> known = {"alpha", "beta",  "r",      "s",    "q",      "L",     "N",
                                                 "radius", "eps0", "seed",   "probes", "workers", "window",
                                                 "lam",   "weight", "order", "eps",  "path",   "task"};
  for (const auto& [k, v] : kv.entries())
    if (std::find(known.begin(), known.end(), k) == known.end()) fail(ErrorCode::Config, "unknown key '" + k + "'");

  auto real = [&](const char* key, double& dst) {
    if (auto v = kv.last(key)) dst = parse_real(*v, key);
  };
  auto integer = [&](const char* key, auto& dst) {
    if (auto v = kv.last(key)) dst = static_cast<std::decay_t<decltype(dst)>>(parse_int(*v, key));
  };
  real("alpha", c.params.alpha);
  real("beta", c.params.beta);
  integer("r", c.params.r);
  integer("s", c.params.s);
  integer("q", c.params.q);
  real("L", c.grid.period);
  integer("N", c.grid.samples);
  real("radius", c.radius);
  real("eps0", c.eps0);
  integer("seed", c.seed);
  integer("probes", c.probes);
  integer("workers", c.workers);
  if (auto v = kv.last("window")) c.window.kind = parse_window_kind(*v);
  if (auto v = kv.last("lam")) c.window.lam = parse_complex(*v);
  if (kv.has("weight")) {
    c.window.weights.clear();
    for (const auto& w : kv.all("weight")) c.window.weights.push_back(parse_complex(w));
  }
  integer("order", c.window.order);
  real("eps", c.window.eps);
  if (auto v = kv.last("path")) c.window.path = *v;
  if (kv.has("task")) {
    c.tasks.clear();
    for (const auto& t : kv.all("task")) c.tasks.push_back(parse_task(t));
  }
  c.tasks = ordered_tasks(c.tasks);
  return c;
}

ExperimentConfig load_config(const std::string& path, ExperimentConfig base) {
  std::ifstream in(path);
  if (!in) fail(ErrorCode::Io, "cannot open config " + path);
  return apply_keys(parse_key_values(in, path), std::move(base));
}

}  // namespace nct
