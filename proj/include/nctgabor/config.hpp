#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nctgabor/geometry.hpp"
#include "nctgabor/tolerance.hpp"

namespace nct {

// Flat "key = value" text. '#' starts a comment; repeating a key builds an array.
class KeyValues {
 public:
  void add(std::string key, std::string value);
  std::optional<std::string> last(const std::string& key) const;
  std::vector<std::string> all(const std::string& key) const;
  bool has(const std::string& key) const { return last(key).has_value(); }
  const std::vector<std::pair<std::string, std::string>>& entries() const { return entries_; }

 private:
  std::vector<std::pair<std::string, std::string>> entries_;
};

KeyValues parse_key_values(std::istream& is, const std::string& origin = "<config>");

// "1", "-0.5i", "1+2i", "0.3-1e-2i"
cplx parse_complex(const std::string& text);
// "a:b:step" (inclusive of b up to rounding) or a single number.
std::vector<double> parse_range(const std::string& text);
double parse_real(const std::string& text, const std::string& what);
long parse_int(const std::string& text, const std::string& what);

enum class Task { Axioms, Frame, WexlerRaz, Chern, Energy, Soliton, Moyal };
const char* to_string(Task t);
Task parse_task(const std::string& name);
// Sorted so that frame work precedes what depends on it; duplicates removed.
std::vector<Task> ordered_tasks(std::vector<Task> tasks);

struct ExperimentConfig {
  TorusParams params;
  GridSpec grid{16.0, 512, 1};
  double radius = 6.0;
  double eps0 = 1e-8;
  WindowSpec window;
  std::vector<Task> tasks;
  std::uint64_t seed = 1;
  int probes = 16;
  int workers = 1;

  Tolerances ladder() const { return Tolerances{eps0}; }
  GridSpec signal_grid() const { return GridSpec{grid.period, grid.samples, params.q}; }
  void validate() const;
};

// "gaussian", "lifted_gaussian", "hermite", "perturbed", "file"
WindowKind parse_window_kind(const std::string& name);
const char* to_string(WindowKind k);

// Known keys: alpha beta r s q L N radius eps0 seed probes workers window lam weight order eps path task.
ExperimentConfig apply_keys(const KeyValues& kv, ExperimentConfig base = {});
ExperimentConfig load_config(const std::string& path, ExperimentConfig base = {});

}  // namespace nct
