#include "covercert/zsigmondy.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace covercert {

namespace {

using u64 = uint64_t;

bool is_power_of_two(const Int& x) { return x > 0 && mpz_popcount(x.get_mpz_t()) == 1; }

// prime factors of m, smallest first
std::vector<Int> prime_factors(const Int& m) {
  Factorization f = factor(m);
  if (!f.complete()) throw IncompleteFactorization("could not factor modulus " + m.get_str());
  std::vector<Int> ps;
  for (const auto& [p, e] : f.factors) ps.push_back(p);
  return ps;
}

bool has_order_exactly(const Int& b, const Int& m, const Int& p, std::span<const Int> m_primes) {
  if (floor_mod(b, p) == 0) return false;
  if (mod_pow(b, m, p) != 1) return false;
  for (const Int& l : m_primes) {
    if (mod_pow(b, m / l, p) == 1) return false;
  }
  return true;
}

// Cyclotomic values beyond this size are cheaper to bypass entirely: one
// prime with the right order is found faster in the progression p = 1 (mod m).
constexpr u64 kCyclotomicBitCap = 1u << 19;

double phi_of(const std::vector<Int>& m_primes, const Int& m) {
  double phi = m.get_d();
  for (const Int& p : m_primes) phi = phi / p.get_d() * (p.get_d() - 1.0);
  return phi;
}

}  // namespace

bool zsigmondy_exception(const Int& b, const Int& w) {
  if (b < 2 || w < 1) throw BadParameters("zsigmondy_exception requires b >= 2, w >= 1");
  if (b == 2 && (w == 1 || w == 6)) return true;
  if (w == 2 && is_power_of_two(b + 1)) return true;
  return false;
}

bool is_primitive_prime(const Int& p, const Int& b, const Int& m) {
  if (p < 2 || m < 1) return false;
  return has_order_exactly(b, m, p, prime_factors(m));
}

std::vector<Int> PrimeAssignment::primes() const {
  std::vector<Int> out;
  out.reserve(entries.size());
  for (const auto& [m, e] : entries) out.push_back(e.prime);
  return out;
}

std::optional<AssignedPrime> find_primitive_prime(const Int& b, const Int& m,
                                                  const SearchBudget& budget) {
  if (b < 2 || m < 1) throw BadParameters("find_primitive_prime requires b >= 2, m >= 1");
  if (zsigmondy_exception(b, m)) {
    throw ExceptionCase("b^m - 1 has no primitive prime divisor for b = " + b.get_str() +
                        ", m = " + m.get_str());
  }
  std::vector<Int> m_primes = prime_factors(m);
  auto primitive = [&](const Int& p) { return has_order_exactly(b, m, p, m_primes); };

  double phi_bits = phi_of(m_primes, m) * mpz_sizeinbase(b.get_mpz_t(), 2);
  if (phi_bits <= double(kCyclotomicBitCap)) {
    Int value = cyclotomic_value(m, b);
    if (!m_primes.empty()) {
      // the one possible non-primitive factor of Phi_m(b) is the largest
      // prime factor of m; strip it before searching
      const Int& intrinsic = m_primes.back();
      while (mpz_divisible_p(value.get_mpz_t(), intrinsic.get_mpz_t())) value /= intrinsic;
    }

    Factorization vf = factor(value, {budget.trial_division_bound, budget.rho_iterations, 0});
    for (const auto& [p, e] : vf.factors) {
      // factors are ascending, so the first primitive hit is the smallest
      if (primitive(p)) {
        return AssignedPrime{p, p <= budget.trial_division_bound ? "cyclotomic-trial"
                                                                 : "cyclotomic-rho"};
      }
    }
  }

  // progression scan: any prime p = 1 (mod m) with ord_p(b) = m will do
  if (mpz_fits_ulong_p(m.get_mpz_t())) {
    u64 mm = mpz_get_ui(m.get_mpz_t());
    for (Int p = m + 1; p <= budget.progression_scan_bound; p += mm) {
      if (!is_prime(p)) continue;
      if (primitive(p)) return AssignedPrime{p, "progression-scan"};
    }
  }
  return std::nullopt;
}

AssignmentResult assign_primes(const Int& b, const CoveringSystem& system,
                               const SearchBudget& budget, int threads) {
  if (!moduli_distinct(system)) {
    throw BadParameters("covering system has a repeated modulus; prime assignment needs distinct moduli");
  }
  for (const auto& c : system.congruences) {
    if (zsigmondy_exception(b, c.modulus)) {
      throw ExceptionCase("modulus " + c.modulus.get_str() + " is a Zsigmondy exception for b = " +
                          b.get_str());
    }
  }

  const auto n = static_cast<int64_t>(system.congruences.size());
  std::vector<std::optional<AssignedPrime>> found(n);
  std::exception_ptr error;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(threads, 1))
#else
  (void)threads;
#endif
  for (int64_t i = 0; i < n; ++i) {
    try {
      found[i] = find_primitive_prime(b, system.congruences[i].modulus, budget);
    } catch (...) {
#ifdef _OPENMP
#pragma omp critical
#endif
      error = std::current_exception();
    }
  }
  if (error) std::rethrow_exception(error);

  AssignmentResult out;
  out.assignment.base = b;
  for (int64_t i = 0; i < n; ++i) {
    const Int& m = system.congruences[i].modulus;
    if (found[i])
      out.assignment.entries.emplace(m, *found[i]);
    else
      out.unresolved.push_back(m);
  }

  std::set<Int> distinct;
  for (const auto& [m, e] : out.assignment.entries) {
    if (!distinct.insert(e.prime).second) {
      throw ArithmeticError("assigned primes are not distinct (prime " + e.prime.get_str() + ")");
    }
    if (gcd(e.prime, b - 1) != 1) {
      throw ArithmeticError("assigned prime " + e.prime.get_str() + " divides b-1");
    }
  }
  return out;
}

}  // namespace covercert
