#pragma once

namespace nct {

// One base value; each layer of truncated sums gets a looser rung.
struct Tolerances {
  double eps0 = 1e-8;

  double algebra() const { return eps0; }
  double frame() const { return 1e2 * eps0; }
  double chern() const { return 1e3 * eps0; }
  // CG and Newton-Schulz stopping rule, well below the algebra rung.
  double solver() const { return 1e-4 * eps0; }
};

}  // namespace nct
