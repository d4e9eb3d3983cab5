#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "covercert/arith.hpp"
#include "covercert/covering.hpp"

namespace covercert {

struct ExceptionCase : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// True iff b^w - 1 has no primitive prime divisor: b = 2 with w in {1, 6},
/// or w = 2 with b+1 a power of 2.
bool zsigmondy_exception(const Int& b, const Int& w);

/// True iff p is prime to b and ord_p(b) = m, i.e. p divides b^m - 1 but no
/// b^l - 1 with l < m. Checked via b^m = 1 and b^(m/l) != 1 for primes l | m.
bool is_primitive_prime(const Int& p, const Int& b, const Int& m);

struct AssignedPrime {
  Int prime;
  std::string strategy;  // cyclotomic-trial | cyclotomic-rho | progression-scan
};

/// One primitive prime per modulus of a covering system.
struct PrimeAssignment {
  Int base{2};
  std::map<Int, AssignedPrime> entries;  // modulus -> prime

  std::vector<Int> primes() const;
};

/// Strategy cascade: trial-divide the (stripped) cyclotomic value, Pollard
/// rho on its cofactor, then scan the progression p = 1 (mod m). Returns the
/// smallest primitive prime found, or nullopt when every budget exhausts.
/// Throws ExceptionCase when (b, m) has no primitive prime at all.
std::optional<AssignedPrime> find_primitive_prime(
    const Int& b, const Int& m, const SearchBudget& budget = SearchBudget::search_defaults());

struct AssignmentResult {
  PrimeAssignment assignment;
  std::vector<Int> unresolved;  // moduli with no prime found within budget

  bool complete() const { return unresolved.empty(); }
};

/// Per-modulus find_primitive_prime over a distinct-moduli covering system.
/// Searches for different moduli are independent and may run on several
/// threads; results merge by modulus order.
AssignmentResult assign_primes(const Int& b, const CoveringSystem& system,
                               const SearchBudget& budget = SearchBudget::search_defaults(),
                               int threads = 1);

}  // namespace covercert
