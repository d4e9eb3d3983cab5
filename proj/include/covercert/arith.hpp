#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covercert {

using Int = mpz_class;

struct ArithmeticError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NotCoprime : ArithmeticError {
  using ArithmeticError::ArithmeticError;
};
struct Incompatible : ArithmeticError {
  using ArithmeticError::ArithmeticError;
};
struct DividesBase : ArithmeticError {
  using ArithmeticError::ArithmeticError;
};
struct IncompleteFactorization : ArithmeticError {
  using ArithmeticError::ArithmeticError;
};
struct BadParameters : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// A residue class r (mod m). Residues are normalized into [0, m).
struct ResidueClass {
  Int residue{0};
  Int modulus{1};

  ResidueClass() = default;
  ResidueClass(Int r, Int m);

  bool contains(const Int& n) const;
  bool operator==(const ResidueClass&) const = default;
};

/// Effort bounds for factoring and primitive-prime searches. The rho budget
/// is work-normalized: for multi-limb operands the iteration count is scaled
/// down by the square of the limb count, so a budget costs roughly the same
/// wall time regardless of operand size.
struct SearchBudget {
  uint64_t trial_division_bound = 1'000'000;
  uint64_t rho_iterations = 10'000'000;
  uint64_t progression_scan_bound = uint64_t{1} << 32;

  static SearchBudget search_defaults() { return {}; }
  static SearchBudget factor_defaults() { return {1u << 13, 4'000'000, 0}; }
};

struct Factorization {
  Int n{1};
  std::vector<std::pair<Int, unsigned>> factors;  // (prime, exponent), primes ascending
  Int cofactor{1};                                // 1 when the factorization is complete

  bool complete() const { return cofactor == 1; }
  Int reassemble() const;
};

/// a mod m with the result in [0, m); m >= 1.
Int floor_mod(const Int& a, const Int& m);

/// base^exp mod m for exp >= 0; negative bases are reduced first.
Int mod_pow(const Int& base, const Int& exp, const Int& m);

/// Inverse of a modulo m; throws NotCoprime when gcd(a, m) > 1.
Int mod_inv(const Int& a, const Int& m);

/// base^exp mod p for prime p not dividing base; exp may be negative
/// (reduced mod p-1 by Fermat).
Int pow_mod_prime(const Int& base, const Int& exp, const Int& p);

/// base^exp mod m for gcd(base, m) = 1 and exp of either sign, with the
/// exponent reduced mod phi (a multiple of the order of base works too).
Int pow_mod_coprime(const Int& base, const Int& exp, const Int& m, const Int& phi);

/// Merge two residue classes into the unique class mod lcm contained in both.
/// Throws Incompatible when r1 != r2 (mod gcd(m1, m2)).
ResidueClass crt_pair(const ResidueClass& c1, const ResidueClass& c2);

/// Left fold of crt_pair over the list; the empty list yields 0 (mod 1).
/// On conflict names the offending input pair.
ResidueClass crt_list(std::span<const ResidueClass> classes);

/// Deterministic below 2^64 (fixed 12-witness strong-probable-prime set);
/// above, strong-probable-prime testing against the first 24 primes.
bool is_prime(const Int& n);

/// Human-readable description of the is_prime policy, recorded in
/// certificate metadata.
extern const char* const kPrimalityPolicy;

/// Trial division up to the budget bound, then deterministic Pollard rho.
/// Never fails: an unfactored part is returned as the cofactor.
Factorization factor(const Int& n, const SearchBudget& budget = SearchBudget::factor_defaults());

/// Smallest d >= 1 with b^d = 1 (mod p) for prime p; requires a complete
/// factorization of p-1. Throws DividesBase when p | b.
Int mult_order(const Int& b, const Int& p,
               const SearchBudget& budget = SearchBudget::search_defaults());

/// Value of the m-th cyclotomic polynomial at b, via
/// prod_{d|m} (b^d - 1)^{mu(m/d)} with exact division.
Int cyclotomic_value(const Int& m, const Int& b);

/// Salt for the deterministic Pollard rho parameter sequence (CLI --seed).
void set_rho_seed(uint64_t seed);
uint64_t rho_seed();

}  // namespace covercert
