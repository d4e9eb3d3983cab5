#include "covercert/arith.hpp"

#include <algorithm>
#include <atomic>
#include <map>
#include <mutex>

namespace covercert {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

std::atomic<u64> g_rho_seed{0};

u64 mulmod64(u64 a, u64 b, u64 m) { return static_cast<u64>(u128(a) * b % m); }

u64 powmod64(u64 a, u64 e, u64 m) {
  if (m == 1) return 0;
  u64 r = 1;
  a %= m;
  while (e) {
    if (e & 1) r = mulmod64(r, a, m);
    a = mulmod64(a, a, m);
    e >>= 1;
  }
  return r;
}

u64 gcd64(u64 a, u64 b) {
  while (b) {
    u64 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

// strong probable prime test to base a (n odd, n > 2)
bool sprp64(u64 n, u64 a) {
  a %= n;
  if (a == 0) return true;
  u64 d = n - 1;
  int s = __builtin_ctzll(d);
  d >>= s;
  u64 x = powmod64(a, d, n);
  if (x == 1 || x == n - 1) return true;
  for (int i = 1; i < s; ++i) {
    x = mulmod64(x, x, n);
    if (x == n - 1) return true;
  }
  return false;
}

// deterministic for all 64-bit n with this witness set
constexpr u64 kWitnesses64[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};

bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (n % p == 0) return n == p;
  }
  for (u64 a : kWitnesses64)
    if (!sprp64(n, a)) return false;
  return true;
}

// Brent's cycle variant; returns a nontrivial factor or 0 on budget exhaustion.
u64 brent_rho64(u64 n, u64 c, u64 max_iters) {
  if (n % 2 == 0) return 2;
  u64 y = 2, r = 1, q = 1, g = 1, x = 0, ys = 0, it = 0;
  const u64 batch = 128;
  while (g == 1 && it < max_iters) {
    x = y;
    for (u64 i = 0; i < r && it < max_iters; ++i, ++it) y = (mulmod64(y, y, n) + c) % n;
    for (u64 k = 0; k < r && g == 1 && it < max_iters;) {
      ys = y;
      u64 lim = std::min(batch, r - k);
      for (u64 i = 0; i < lim; ++i, ++it) {
        y = (mulmod64(y, y, n) + c) % n;
        q = mulmod64(q, x > y ? x - y : y - x, n);
      }
      g = gcd64(q, n);
      k += lim;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = (mulmod64(ys, ys, n) + c) % n;
      g = gcd64(x > ys ? x - ys : ys - x, n);
    } while (g == 1);
  }
  return (g == 1 || g == n) ? 0 : g;
}

Int brent_rho_mpz(const Int& n, u64 c, u64 max_iters) {
  if (mpz_even_p(n.get_mpz_t())) return 2;
  Int y = 2, x, ys, q = 1, g = 1, cc = c, diff;
  u64 r = 1, it = 0;
  const u64 batch = 128;
  while (g == 1 && it < max_iters) {
    x = y;
    for (u64 i = 0; i < r && it < max_iters; ++i, ++it) y = (y * y + cc) % n;
    for (u64 k = 0; k < r && g == 1 && it < max_iters;) {
      ys = y;
      u64 lim = std::min(batch, r - k);
      for (u64 i = 0; i < lim; ++i, ++it) {
        y = (y * y + cc) % n;
        diff = x - y;
        mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
        q = q * diff % n;
      }
      mpz_gcd(g.get_mpz_t(), q.get_mpz_t(), n.get_mpz_t());
      k += lim;
    }
    r <<= 1;
  }
  if (g == n) {
    do {
      ys = (ys * ys + cc) % n;
      diff = x - ys;
      mpz_abs(diff.get_mpz_t(), diff.get_mpz_t());
      mpz_gcd(g.get_mpz_t(), diff.get_mpz_t(), n.get_mpz_t());
    } while (g == 1);
  }
  if (g == 1 || g == n) return 0;
  return g;
}

constexpr u64 kSieveLimit = 1u << 20;

// shared prime table up to kSieveLimit, built once
const std::vector<uint32_t>& small_prime_table() {
  static const std::vector<uint32_t> table = [] {
    std::vector<bool> composite(kSieveLimit, false);
    std::vector<uint32_t> primes;
    for (u64 i = 2; i < kSieveLimit; ++i) {
      if (composite[i]) continue;
      primes.push_back(static_cast<uint32_t>(i));
      for (u64 j = i * i; j < kSieveLimit; j += i) composite[j] = true;
    }
    return primes;
  }();
  return table;
}

bool fits_u64(const Int& n) { return n >= 0 && mpz_fits_ulong_p(n.get_mpz_t()); }

// work-normalized iteration budget: operands up to 4 limbs get the full
// budget, larger ones are scaled down by the square of the size ratio so a
// budget costs about the same wall time at any width
u64 scaled_rho_iters(const Int& n, u64 budget) {
  size_t limbs = mpz_size(n.get_mpz_t());
  if (limbs <= 4) return budget;
  u64 scale = (u64(limbs) * limbs) / 16;
  return std::max<u64>(budget / scale, 256);
}

// Splits n (composite, no factor below the trial bound) into primes where the
// budget allows; anything unsplit lands in out.cofactor.
void rho_split(const Int& n, u64 rho_budget, std::map<Int, unsigned>& primes, Int& cofactor) {
  if (n == 1) return;
  if (is_prime(n)) {
    primes[n] += 1;
    return;
  }
  if (rho_budget == 0) {
    cofactor *= n;
    return;
  }
  Int f = 0;
  u64 salt = g_rho_seed.load(std::memory_order_relaxed);
  if (fits_u64(n)) {
    u64 nn = mpz_get_ui(n.get_mpz_t());
    u64 per_attempt = rho_budget / 8 + 1024;
    for (u64 attempt = 0; attempt < 8 && f == 0; ++attempt) {
      u64 g = brent_rho64(nn, 1 + salt + attempt, per_attempt);
      if (g) f = g;
    }
  } else {
    // restarting with a new polynomial resets cycle progress, so the first
    // attempt gets the whole scaled budget
    u64 scaled = scaled_rho_iters(n, rho_budget);
    f = brent_rho_mpz(n, 1 + salt, scaled);
    if (f == 0) f = brent_rho_mpz(n, 2 + salt, scaled / 2 + 256);
  }
  if (f == 0) {
    cofactor *= n;
    return;
  }
  rho_split(f, rho_budget, primes, cofactor);
  rho_split(n / f, rho_budget, primes, cofactor);
}

}  // namespace

const char* const kPrimalityPolicy = "miller-rabin: deterministic 12-witness set below 2^64, fixed first-24-prime bases above";

void set_rho_seed(uint64_t seed) { g_rho_seed.store(seed, std::memory_order_relaxed); }
uint64_t rho_seed() { return g_rho_seed.load(std::memory_order_relaxed); }

ResidueClass::ResidueClass(Int r, Int m) : modulus(std::move(m)) {
  if (modulus < 1) throw BadParameters("modulus must be positive");
  residue = floor_mod(r, modulus);
}

bool ResidueClass::contains(const Int& n) const { return floor_mod(n - residue, modulus) == 0; }

Int Factorization::reassemble() const {
  Int out = cofactor;
  for (const auto& [p, e] : factors) {
    for (unsigned i = 0; i < e; ++i) out *= p;
  }
  return out;
}

Int floor_mod(const Int& a, const Int& m) {
  if (m < 1) throw BadParameters("modulus must be positive");
  Int r;
  mpz_fdiv_r(r.get_mpz_t(), a.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int mod_pow(const Int& base, const Int& exp, const Int& m) {
  if (m < 1) throw BadParameters("modulus must be positive");
  if (exp < 0) throw BadParameters("mod_pow requires a non-negative exponent");
  Int b = floor_mod(base, m);
  Int r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), exp.get_mpz_t(), m.get_mpz_t());
  return r;
}

Int mod_inv(const Int& a, const Int& m) {
  if (m < 1) throw BadParameters("modulus must be positive");
  Int b = floor_mod(a, m);
  Int r;
  if (mpz_invert(r.get_mpz_t(), b.get_mpz_t(), m.get_mpz_t()) == 0) {
    throw NotCoprime("no inverse of " + Int(a).get_str() + " modulo " + m.get_str());
  }
  return r;
}

Int pow_mod_prime(const Int& base, const Int& exp, const Int& p) {
  return pow_mod_coprime(base, exp, p, p - 1);
}

Int pow_mod_coprime(const Int& base, const Int& exp, const Int& m, const Int& phi) {
  if (m == 1) return 0;
  Int b = floor_mod(base, m);
  if (b == 0) {
    if (exp > 0) return 0;
    if (exp == 0) return 1;
    throw NotCoprime("negative power of 0 modulo " + m.get_str());
  }
  Int e = floor_mod(exp, phi);
  if (exp < 0) mod_inv(b, m);  // fail loudly rather than reduce an invalid exponent
  Int r;
  mpz_powm(r.get_mpz_t(), b.get_mpz_t(), e.get_mpz_t(), m.get_mpz_t());
  return r;
}

ResidueClass crt_pair(const ResidueClass& c1, const ResidueClass& c2) {
  const Int &m1 = c1.modulus, &m2 = c2.modulus;
  Int g, u, v;
  mpz_gcdext(g.get_mpz_t(), u.get_mpz_t(), v.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
  Int diff = c2.residue - c1.residue;
  if (floor_mod(diff, g) != 0) {
    throw Incompatible("incompatible classes " + c1.residue.get_str() + " (mod " +
                       m1.get_str() + ") and " + c2.residue.get_str() + " (mod " + m2.get_str() +
                       ")");
  }
  Int m2g = m2 / g;
  // u * m1 + v * m2 = g, so (m1/g) * u = 1 (mod m2/g)
  Int t = floor_mod((diff / g) * u, m2g);
  Int x = c1.residue + m1 * t;
  return ResidueClass(x, m1 / g * m2);
}

ResidueClass crt_list(std::span<const ResidueClass> classes) {
  ResidueClass acc;  // 0 (mod 1)
  for (size_t i = 0; i < classes.size(); ++i) {
    try {
      acc = crt_pair(acc, classes[i]);
    } catch (const Incompatible&) {
      // name the first input pair that conflicts
      for (size_t j = 0; j < i; ++j) {
        try {
          crt_pair(classes[j], classes[i]);
        } catch (const Incompatible&) {
          throw Incompatible("classes " + std::to_string(j) + " and " + std::to_string(i) +
                             " are incompatible: " + classes[j].residue.get_str() + " (mod " +
                             classes[j].modulus.get_str() + ") vs " + classes[i].residue.get_str() +
                             " (mod " + classes[i].modulus.get_str() + ")");
        }
      }
      throw;
    }
  }
  return acc;
}

bool is_prime(const Int& n) {
  if (n < 2) return false;
  if (fits_u64(n)) return is_prime_u64(mpz_get_ui(n.get_mpz_t()));
  for (u64 p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
    if (mpz_divisible_ui_p(n.get_mpz_t(), p)) return false;
  }
  // n odd and > 2^64 here
  static constexpr u64 kBases[] = {2,  3,  5,  7,  11, 13, 17, 19, 23, 29, 31, 37,
                                   41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89};
  Int d = n - 1;
  auto s = mpz_scan1(d.get_mpz_t(), 0);
  mpz_fdiv_q_2exp(d.get_mpz_t(), d.get_mpz_t(), s);
  Int x, a;
  for (u64 base : kBases) {
    a = base;
    mpz_powm(x.get_mpz_t(), a.get_mpz_t(), d.get_mpz_t(), n.get_mpz_t());
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (mp_bitcnt_t i = 1; i < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

Factorization factor(const Int& n, const SearchBudget& budget) {
  if (n < 1) throw BadParameters("factor requires n >= 1");
  Factorization out;
  out.n = n;
  if (n == 1) return out;

  std::map<Int, unsigned> primes;
  Int rem = n;
  const auto& table = small_prime_table();
  for (uint32_t p : table) {
    if (p > budget.trial_division_bound) break;
    if (Int(p) * p > rem) break;
    if (mpz_divisible_ui_p(rem.get_mpz_t(), p)) {
      unsigned e = 0;
      do {
        mpz_divexact_ui(rem.get_mpz_t(), rem.get_mpz_t(), p);
        ++e;
      } while (mpz_divisible_ui_p(rem.get_mpz_t(), p));
      primes[Int(p)] += e;
    }
  }
  Int cofactor = 1;
  rho_split(rem, budget.rho_iterations, primes, cofactor);
  for (const auto& [p, e] : primes) out.factors.emplace_back(p, e);
  out.cofactor = cofactor;
  return out;
}

Int mult_order(const Int& b, const Int& p, const SearchBudget& budget) {
  if (p < 2) throw BadParameters("mult_order requires p >= 2");
  if (floor_mod(b, p) == 0) throw DividesBase("p = " + p.get_str() + " divides the base");
  Factorization f = factor(p - 1, budget);
  if (!f.complete()) {
    throw IncompleteFactorization("cannot certify ord mod " + p.get_str() +
                                  ": unfactored part " + f.cofactor.get_str() + " of p-1");
  }
  Int d = p - 1;
  for (const auto& [l, e] : f.factors) {
    for (unsigned i = 0; i < e; ++i) {
      Int cand = d / l;
      if (mod_pow(b, cand, p) == 1)
        d = cand;
      else
        break;
    }
  }
  return d;
}

Int cyclotomic_value(const Int& m, const Int& b) {
  if (m < 1) throw BadParameters("cyclotomic_value requires m >= 1");
  if (b < 2) throw BadParameters("cyclotomic_value requires b >= 2");
  if (!fits_u64(m)) throw BadParameters("cyclotomic modulus too large");
  u64 mm = mpz_get_ui(m.get_mpz_t());

  Factorization mf = factor(m);
  if (!mf.complete()) throw IncompleteFactorization("could not factor m = " + m.get_str());
  std::vector<u64> radical_primes;
  for (const auto& [p, e] : mf.factors) radical_primes.push_back(mpz_get_ui(p.get_mpz_t()));

  // Phi_m(b) = prod over squarefree s | m of (b^(m/s) - 1)^mu(s)
  Int num = 1, den = 1, term;
  const size_t k = radical_primes.size();
  for (u64 mask = 0; mask < (u64(1) << k); ++mask) {
    u64 s = 1;
    for (size_t i = 0; i < k; ++i)
      if (mask & (u64(1) << i)) s *= radical_primes[i];
    mpz_pow_ui(term.get_mpz_t(), b.get_mpz_t(), mm / s);
    term -= 1;
    if (__builtin_popcountll(mask) % 2 == 0)
      num *= term;
    else
      den *= term;
  }
  Int out;
  mpz_divexact(out.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return out;
}

}  // namespace covercert
