#pragma once

#include <cstdint>
#include <vector>

#include "covercert/arith.hpp"
#include "covercert/covering.hpp"

// Data-parallel residue sweeps. Each kernel comes in two forms: a chunked
// OpenMP version used in production, and a naive serial reference kept for
// equivalence tests and the benchmark. Both are deterministic.
namespace covercert::sweep {

struct Stride {
  uint64_t residue;
  uint64_t modulus;
};

struct CoverSweepInput {
  uint64_t period;  // residues 0..period-1
  std::vector<Stride> classes;
};

CoverReport cover_sweep(const CoverSweepInput& in, int threads);
CoverReport cover_sweep_reference(const CoverSweepInput& in);

/// One congruence class with its certified prime: n in the class is "hit"
/// when (k * b^n + beta) = 0 (mod p).
struct DivisibilityClass {
  uint64_t residue;
  uint64_t modulus;
  Int prime;
  Int k_mod_p;
  Int beta_mod_p;
};

struct DivisibilitySweepInput {
  uint64_t period;  // n runs over [1, period]
  Int base;
  std::vector<DivisibilityClass> classes;
};

struct DivisibilityReport {
  bool complete = false;       // every n in [1, period] was hit
  std::vector<uint64_t> missed;  // up to 10 smallest unhit n
};

DivisibilityReport divisibility_sweep(const DivisibilitySweepInput& in, int threads);
DivisibilityReport divisibility_sweep_reference(const DivisibilitySweepInput& in);

}  // namespace covercert::sweep
