#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdint>
#include <random>

#include "covercert/arith.hpp"

using namespace covercert;

namespace {

// independent of mod_pow: plain multiplication loop
Int naive_pow_mod(const Int& base, uint64_t exp, const Int& m) {
  Int r = 1;
  Int b = floor_mod(base, m);
  for (uint64_t i = 0; i < exp; ++i) r = r * b % m;
  return r;
}

// brute-force inverse by scanning [1, m)
Int scan_inverse(const Int& a, const Int& m) {
  for (Int x = 1; x < m; ++x) {
    if (floor_mod(a * x, m) == 1) return x;
  }
  return -1;
}

Int pow2(unsigned e) { return Int(1) << e; }

}  // namespace

TEST_CASE("mod_pow basics and oracle") {
  CHECK(mod_pow(2, 4, 5) == 1);
  CHECK(mod_pow(7, 0, 13) == 1);
  CHECK(mod_pow(123456, 0, 1) == 0);  // mod 1 collapses everything
  CHECK(mod_pow(2, 47, 61681) == naive_pow_mod(2, 47, 61681));

  std::mt19937_64 rng(7);
  for (int i = 0; i < 200; ++i) {
    Int b = Int(static_cast<unsigned long>(rng() % 1000));
    uint64_t e = rng() % 500;
    Int m = Int(static_cast<unsigned long>(rng() % 997 + 1));
    CHECK(mod_pow(b, Int(static_cast<unsigned long>(e)), m) == naive_pow_mod(b, e, m));
  }
}

TEST_CASE("mod_pow reduces negative bases first") {
  // -3 = 2 (mod 5), 2^3 = 3 (mod 5)
  CHECK(mod_pow(-3, 3, 5) == 3);
  CHECK(mod_pow(-1, 2, 7) == 1);
}

TEST_CASE("mod_inv basics, oracle, failure") {
  CHECK(mod_inv(2, 5) == 3);
  CHECK(mod_inv(1, 97) == 1);
  Int x = mod_inv(2, 61681);
  CHECK(x == scan_inverse(2, 61681));
  CHECK(floor_mod(Int(2) * x, 61681) == 1);
  CHECK_THROWS_AS(mod_inv(6, 9), NotCoprime);
  CHECK_THROWS_AS(mod_inv(0, 4), NotCoprime);
}

TEST_CASE("mod_inv law on a random grid") {
  std::mt19937_64 rng(11);
  int tested = 0;
  while (tested < 300) {
    Int a = Int(static_cast<unsigned long>(rng() % 10000));
    Int m = Int(static_cast<unsigned long>(rng() % 9999 + 2));
    if (gcd(a, m) != 1) continue;
    CHECK(floor_mod(a * mod_inv(a, m), m) == 1);
    ++tested;
  }
}

TEST_CASE("crt_pair merges and rejects") {
  ResidueClass merged = crt_pair(ResidueClass(2, 3), ResidueClass(3, 5));
  CHECK(merged.residue == 8);
  CHECK(merged.modulus == 15);
  // scan oracle: 8 is the only value in [0,15) satisfying both
  for (Int n = 0; n < 15; ++n) {
    bool both = floor_mod(n, 3) == 2 && floor_mod(n, 5) == 3;
    CHECK(both == (n == merged.residue));
  }

  ResidueClass same = crt_pair(ResidueClass(4, 9), ResidueClass(4, 9));
  CHECK(same == ResidueClass(4, 9));

  // a_2 of the q=5, m=4 construction: 2 (mod 5) with 15 (mod 4)
  ResidueClass a2 = crt_pair(ResidueClass(2, 5), ResidueClass(15, 4));
  CHECK(a2.residue == 7);
  CHECK(a2.modulus == 20);

  CHECK_THROWS_AS(crt_pair(ResidueClass(0, 4), ResidueClass(1, 2)), Incompatible);
}

TEST_CASE("crt_pair on overlapping moduli") {
  ResidueClass merged = crt_pair(ResidueClass(3, 8), ResidueClass(7, 12));
  CHECK(merged.modulus == 24);
  CHECK(floor_mod(merged.residue, 8) == 3);
  CHECK(floor_mod(merged.residue, 12) == 7);
}

TEST_CASE("crt_list basics") {
  {
    std::vector<ResidueClass> cs{ResidueClass(15, 16), ResidueClass(2, 5)};
    ResidueClass r = crt_list(cs);
    CHECK(r.residue == 47);
    CHECK(r.modulus == 80);
  }
  {
    std::vector<ResidueClass> empty;
    ResidueClass r = crt_list(empty);
    CHECK(r.residue == 0);
    CHECK(r.modulus == 1);
  }
}

TEST_CASE("crt_list solves the nine published congruences") {
  // the script-T system for the b=2, q=5, alpha=beta=1 construction
  std::vector<ResidueClass> cs{
      ResidueClass(15, 16),
      ResidueClass(2, 3),
      ResidueClass(2, 17),
      ResidueClass(2, 257),
      ResidueClass(15, 31),
      ResidueClass(10, 11),
      ResidueClass(26, 41),
      ResidueClass(7168, 61681),
      ResidueClass(Int("4177983751"), Int("4278255361")),
  };
  ResidueClass r = crt_list(cs);
  CHECK(r.residue == Int("697952356997067358830863"));
  // modulus is 16 times the product of the eight primes
  Int expected_mod = 16;
  for (const auto& c : cs) {
    if (c.modulus != 16) expected_mod *= c.modulus;
  }
  CHECK(r.modulus == expected_mod);
  for (const auto& c : cs) CHECK(c.contains(r.residue));
}

TEST_CASE("crt_list uniqueness by exhaustive scan") {
  std::mt19937_64 rng(13);
  for (int round = 0; round < 50; ++round) {
    std::vector<ResidueClass> cs;
    Int lcm_all = 1;
    Int value = Int(static_cast<unsigned long>(rng() % 100000));
    for (int i = 0; i < 4; ++i) {
      Int m = Int(static_cast<unsigned long>(rng() % 30 + 1));
      cs.emplace_back(floor_mod(value, m), m);  // consistent by construction
      mpz_lcm(lcm_all.get_mpz_t(), lcm_all.get_mpz_t(), m.get_mpz_t());
    }
    ResidueClass r = crt_list(cs);
    CHECK(r.modulus == lcm_all);
    REQUIRE(lcm_all <= 1000000);
    // the solution is the unique one in [0, lcm)
    unsigned long matches = 0;
    for (Int n = 0; n < lcm_all; ++n) {
      bool all = true;
      for (const auto& c : cs) all = all && c.contains(n);
      if (all) {
        ++matches;
        CHECK(n == r.residue);
      }
    }
    CHECK(matches == 1);
  }
}

TEST_CASE("crt_list names the offending pair") {
  std::vector<ResidueClass> cs{ResidueClass(1, 4), ResidueClass(1, 3), ResidueClass(2, 4)};
  CHECK_THROWS_WITH_AS(crt_list(cs), doctest::Contains("classes 0 and 2"), Incompatible);
}

TEST_CASE("mult_order") {
  CHECK(mult_order(2, 5) == 4);
  CHECK(mult_order(2, 61681) == 40);
  CHECK(mult_order(2, Int("4278255361")) == 80);
  CHECK(mult_order(10, 7) == 6);
  CHECK_THROWS_AS(mult_order(10, 5), DividesBase);
}

TEST_CASE("mult_order divisibility laws") {
  std::vector<long> primes{3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 61681};
  for (long p : primes) {
    for (long b = 2; b <= 12; ++b) {
      if (b % p == 0) continue;
      Int d = mult_order(b, p);
      CHECK(floor_mod(Int(p) - 1, d) == 0);
      // b^e = 1 iff d | e
      for (long e = 1; e <= 50; ++e) {
        bool one = mod_pow(b, e, p) == 1;
        CHECK(one == (floor_mod(Int(e), d) == 0));
      }
    }
  }
}

TEST_CASE("is_prime small values against a sieve oracle") {
  std::vector<bool> composite(10000, false);
  for (uint64_t i = 2; i < composite.size(); ++i) {
    if (composite[i]) continue;
    for (uint64_t j = i * i; j < composite.size(); j += i) composite[j] = true;
  }
  for (uint64_t n = 0; n < composite.size(); ++n) {
    CHECK(is_prime(Int(static_cast<unsigned long>(n))) == (n >= 2 && !composite[n]));
  }
}

TEST_CASE("is_prime published values and edge cases") {
  CHECK(is_prime(61681));
  CHECK(is_prime(Int("4278255361")));
  CHECK_FALSE(is_prime(1));
  CHECK_FALSE(is_prime(0));
  CHECK_FALSE(is_prime(561));    // Carmichael
  CHECK_FALSE(is_prime(25326001));
  // beyond 64 bits: 2^89-1 is prime, 2^67-1 is not
  CHECK(is_prime((Int(1) << 89) - 1));
  CHECK_FALSE(is_prime((Int(1) << 67) - 1));
}

TEST_CASE("factor published examples") {
  Factorization f = factor(pow2(20) - 1);
  REQUIRE(f.complete());
  std::vector<std::pair<Int, unsigned>> expected{{3, 1}, {5, 2}, {11, 1}, {31, 1}, {41, 1}};
  CHECK(f.factors == expected);

  Factorization one = factor(1);
  CHECK(one.factors.empty());
  CHECK(one.cofactor == 1);

  Factorization f40 = factor(pow2(40) - 1);
  REQUIRE(f40.complete());
  bool has_61681 = false;
  for (const auto& [p, e] : f40.factors) has_61681 = has_61681 || p == 61681;
  CHECK(has_61681);
}

TEST_CASE("factor reassembles random 64-bit integers") {
  std::mt19937_64 rng(42);
  for (int i = 0; i < 10000; ++i) {
    uint64_t n = rng();
    if (n == 0) continue;
    Int v(static_cast<unsigned long>(n));
    Factorization f = factor(v);
    CHECK(f.reassemble() == v);
    for (const auto& [p, e] : f.factors) CHECK(is_prime(p));
  }
}

TEST_CASE("cyclotomic_value basics") {
  CHECK(cyclotomic_value(4, 2) == 5);
  CHECK(cyclotomic_value(1, 7) == 6);
  CHECK(cyclotomic_value(1, 2) == 1);
  CHECK(cyclotomic_value(2, 2) == 3);
  CHECK(cyclotomic_value(6, 2) == 3);
  Int v80 = cyclotomic_value(80, 2);
  CHECK(mpz_divisible_p(v80.get_mpz_t(), Int("4278255361").get_mpz_t()));
}

TEST_CASE("cyclotomic product identity") {
  for (long b : {2, 3, 5, 6, 10}) {
    for (long m = 1; m <= 64; ++m) {
      Int prod = 1;
      for (long d = 1; d <= m; ++d) {
        if (m % d == 0) prod *= cyclotomic_value(d, b);
      }
      Int direct;
      mpz_ui_pow_ui(direct.get_mpz_t(), b, m);
      direct -= 1;
      CHECK(prod == direct);
    }
  }
}

TEST_CASE("pow_mod_prime handles negative exponents") {
  // 2^-1 = 3 (mod 5)
  CHECK(pow_mod_prime(2, -1, 5) == 3);
  CHECK(pow_mod_prime(2, -47, 3) == 2);
  CHECK(pow_mod_prime(2, 4, 5) == 1);
  // exponent reduction must agree with the slow route
  for (long e = -20; e <= 20; ++e) {
    Int slow = e >= 0 ? naive_pow_mod(3, e, 41) : mod_inv(naive_pow_mod(3, -e, 41), 41);
    CHECK(pow_mod_prime(3, e, 41) == slow);
  }
}

TEST_CASE("residue classes normalize") {
  ResidueClass c(-1, 16);
  CHECK(c.residue == 15);
  CHECK(c.contains(-1));
  CHECK(c.contains(31));
  CHECK_FALSE(c.contains(0));
  CHECK_THROWS_AS(ResidueClass(0, 0), BadParameters);
}
