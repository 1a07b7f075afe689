#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nctgabor/config.hpp"
#include "nctgabor/report.hpp"

namespace nct {

// Uniform complex entries in the unit square on the index box of the given radius.
LatticeSeq random_sequence(const TorusParams& p, LatticeKind kind, double radius, std::mt19937_64& rng);

// Worst relative residuals over random instances on both lattices.
struct AxiomResiduals {
  double cocycle = 0.0;        // phi(a,b) phi(a+b,c) = phi(a,b+c) phi(b,c)
  double associativity = 0.0;  // (a b) c = a (b c)
  double involution = 0.0;     // (a b)* = b* a*
  double trace = 0.0;          // tr(a b) = tr(b a)
  double leibniz = 0.0;        // d(a b) = (da) b + a (db)
  int instances = 0;
  double worst() const;
};
AxiomResiduals axiom_suite(const TorusParams& p, int instances, std::uint64_t seed, double radius = 1.0);

// Passes when value < tolerance.
struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct RunOutputs {
  std::string dual_path;    // canonical dual window, columnar signal format
  std::string tight_path;   // canonical tight window
  std::string symbol_path;  // t1 t2 |F| heatmap when the symbol exists
};

struct RunResult {
  json report;
  std::vector<Check> checks;
  std::optional<ChernReport> chern;
  std::vector<std::string> csv_rows;
  bool passed() const;
};

// Tasks run in dependency order; frame failures and solver failures propagate as nct::Error.
RunResult run_experiment(const ExperimentConfig& c, const RunOutputs& out = {});

}  // namespace nct
