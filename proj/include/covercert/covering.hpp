#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <vector>

#include "covercert/arith.hpp"

namespace covercert {

struct BoundExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A finite list of residue classes claiming to cover every integer.
/// Construction order is preserved so serialized output is byte-stable.
struct CoveringSystem {
  std::vector<ResidueClass> congruences;
  Int lcm{1};

  static CoveringSystem from(std::vector<ResidueClass> congruences);
  bool operator==(const CoveringSystem&) const = default;
};

bool moduli_distinct(const CoveringSystem& system);

struct CoverReport {
  bool is_cover = false;
  std::vector<uint64_t> uncovered_witnesses;            // up to 10, smallest first
  std::map<uint64_t, uint64_t> multiplicity_histogram;  // cover count -> residue count
};

struct CoverVerifyOptions {
  uint64_t exhaustive_bound = 100'000'000;
  int threads = 1;
  bool reference_kernel = false;  // force the serial reference sweep
};

/// Exhaustive sweep over [0, lcm). Throws BoundExceeded when the lcm is too
/// large to sweep; a covering claim is never certified by sampling.
CoverReport verify_cover(const CoveringSystem& system, const CoverVerifyOptions& options = {});

/// The power-of-two ladder merged with an arithmetic progression mod q:
///   { 2^(j-1)-1 (mod 2^j)        : 1 <= j <= m }
///   { a_j       (mod q * 2^j)    : 0 <= j <= m },  a_j = j (mod q), 2^m-1 (mod 2^j).
/// Requires odd prime q <= m+1.
CoveringSystem build_power2_cover(uint32_t q, uint32_t m);

/// The 2q^2+2q congruence system with moduli 2^j * 3^jj * q^j'
/// (0 <= j <= q, 1 <= jj <= q, 0 <= j' <= 1) for prime q >= 5.
CoveringSystem build_236_cover(uint32_t q);

/// Pair notation ([A_1..A_v],[B_1..B_v]): the single class A (mod lcm B_i)
/// with A = A_i (mod B_i) for all i.
struct CongruencePair {
  std::vector<Int> residues;
  std::vector<Int> moduli;
};

CoveringSystem expand_pair_notation(std::span<const CongruencePair> pairs);

}  // namespace covercert
