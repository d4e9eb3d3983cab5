#include "covercert/sweep.hpp"

#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace covercert::sweep {

namespace {

using u64 = uint64_t;
using u128 = unsigned __int128;

constexpr u64 kChunk = 1u << 16;
constexpr size_t kMaxWitnesses = 10;

// first member of r (mod m) that is >= lo
u64 first_member(u64 r, u64 m, u64 lo) {
  if (r >= lo) return r;
  u64 k = (lo - r + m - 1) / m;
  return r + k * m;
}

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

struct DivClass64 {
  u64 r, m, p, k, step, beta;  // step = b^m mod p
};

}  // namespace

CoverReport cover_sweep_reference(const CoverSweepInput& in) {
  CoverReport out;
  for (u64 n = 0; n < in.period; ++n) {
    u64 count = 0;
    for (const auto& c : in.classes) {
      if (n % c.modulus == c.residue) ++count;
    }
    out.multiplicity_histogram[count]++;
    if (count == 0 && out.uncovered_witnesses.size() < kMaxWitnesses) {
      out.uncovered_witnesses.push_back(n);
    }
  }
  out.is_cover = !out.multiplicity_histogram.contains(0);
  return out;
}

CoverReport cover_sweep(const CoverSweepInput& in, int threads) {
  const u64 L = in.period;
  const int64_t nchunks = static_cast<int64_t>((L + kChunk - 1) / kChunk);
  struct Partial {
    std::map<u64, u64> hist;
    std::vector<u64> uncovered;
  };
  std::vector<Partial> parts(nchunks);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(std::max(threads, 1))
#endif
  for (int64_t ci = 0; ci < nchunks; ++ci) {
    const u64 lo = u64(ci) * kChunk;
    const u64 hi = std::min(L, lo + kChunk);
    std::vector<uint32_t> counts(hi - lo, 0);
    for (const auto& c : in.classes) {
      for (u64 x = first_member(c.residue, c.modulus, lo); x < hi; x += c.modulus) {
        counts[x - lo]++;
      }
    }
    Partial& part = parts[ci];
    for (u64 i = 0; i < hi - lo; ++i) {
      part.hist[counts[i]]++;
      if (counts[i] == 0 && part.uncovered.size() < kMaxWitnesses) part.uncovered.push_back(lo + i);
    }
  }

  CoverReport out;
  for (const auto& part : parts) {
    for (const auto& [count, num] : part.hist) out.multiplicity_histogram[count] += num;
    for (u64 w : part.uncovered) {
      if (out.uncovered_witnesses.size() < kMaxWitnesses) out.uncovered_witnesses.push_back(w);
    }
  }
  out.is_cover = !out.multiplicity_histogram.contains(0);
  return out;
}

DivisibilityReport divisibility_sweep_reference(const DivisibilitySweepInput& in) {
  DivisibilityReport out;
  for (u64 n = 1; n <= in.period; ++n) {
    bool hit = false;
    for (const auto& c : in.classes) {
      if (n % c.modulus != c.residue) continue;
      Int e = floor_mod(c.k_mod_p * mod_pow(in.base, Int(n), c.prime) + c.beta_mod_p, c.prime);
      if (e == 0) {
        hit = true;
        break;
      }
    }
    if (!hit && out.missed.size() < kMaxWitnesses) out.missed.push_back(n);
  }
  out.complete = out.missed.empty();
  return out;
}

namespace {

// chunked kernel over [1, period]; Mark is called for every hit n
template <typename MarkClassHits>
DivisibilityReport chunked_divisibility(u64 period, MarkClassHits&& mark) {
  const u64 lo0 = 1, hi0 = period + 1;
  const int64_t nchunks = static_cast<int64_t>((hi0 - lo0 + kChunk - 1) / kChunk);
  std::vector<std::vector<u64>> missed_per_chunk(nchunks);

#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (int64_t ci = 0; ci < nchunks; ++ci) {
    const u64 lo = lo0 + u64(ci) * kChunk;
    const u64 hi = std::min(hi0, lo + kChunk);
    std::vector<uint8_t> hit(hi - lo, 0);
    mark(lo, hi, hit);
    auto& missed = missed_per_chunk[ci];
    for (u64 i = 0; i < hi - lo; ++i) {
      if (!hit[i] && missed.size() < kMaxWitnesses) missed.push_back(lo + i);
    }
  }

  DivisibilityReport out;
  for (const auto& v : missed_per_chunk) {
    for (u64 n : v) {
      if (out.missed.size() < kMaxWitnesses) out.missed.push_back(n);
    }
  }
  out.complete = out.missed.empty();
  return out;
}

}  // namespace

DivisibilityReport divisibility_sweep(const DivisibilitySweepInput& in, int threads) {
#ifdef _OPENMP
  omp_set_num_threads(std::max(threads, 1));
#else
  (void)threads;
#endif

  bool u64_ok = mpz_fits_ulong_p(in.base.get_mpz_t());
  for (const auto& c : in.classes) {
    u64_ok = u64_ok && c.prime > 0 && mpz_sizeinbase(c.prime.get_mpz_t(), 2) <= 62;
  }

  if (u64_ok) {
    std::vector<DivClass64> cls;
    cls.reserve(in.classes.size());
    for (const auto& c : in.classes) {
      DivClass64 d;
      d.r = c.residue;
      d.m = c.modulus;
      d.p = mpz_get_ui(c.prime.get_mpz_t());
      d.k = mpz_get_ui(floor_mod(c.k_mod_p, c.prime).get_mpz_t());
      d.beta = mpz_get_ui(floor_mod(c.beta_mod_p, c.prime).get_mpz_t());
      u64 b = mpz_get_ui(in.base.get_mpz_t()) % d.p;
      d.step = powmod64(b, d.m, d.p);
      cls.push_back(d);
    }
    u64 b = mpz_get_ui(in.base.get_mpz_t());
    return chunked_divisibility(in.period, [&](u64 lo, u64 hi, std::vector<uint8_t>& hit) {
      for (const auto& c : cls) {
        u64 n0 = first_member(c.r == 0 ? c.m : c.r, c.m, lo);
        if (n0 >= hi) continue;
        u64 cur = powmod64(b % c.p, n0, c.p);
        for (u64 n = n0; n < hi; n += c.m, cur = mulmod64(cur, c.step, c.p)) {
          if ((mulmod64(c.k, cur, c.p) + c.beta) % c.p == 0) hit[n - lo] = 1;
        }
      }
    });
  }

  // general path: same chunked walk with arbitrary-precision primes
  struct DivClassMpz {
    u64 r, m;
    Int p, k, step, beta;
  };
  std::vector<DivClassMpz> cls;
  cls.reserve(in.classes.size());
  for (const auto& c : in.classes) {
    DivClassMpz d;
    d.r = c.residue;
    d.m = c.modulus;
    d.p = c.prime;
    d.k = floor_mod(c.k_mod_p, c.prime);
    d.beta = floor_mod(c.beta_mod_p, c.prime);
    d.step = mod_pow(in.base, Int(c.modulus), c.prime);
    cls.push_back(std::move(d));
  }
  return chunked_divisibility(in.period, [&](u64 lo, u64 hi, std::vector<uint8_t>& hit) {
    Int cur, e;
    for (const auto& c : cls) {
      u64 n0 = first_member(c.r == 0 ? c.m : c.r, c.m, lo);
      if (n0 >= hi) continue;
      cur = mod_pow(in.base, Int(n0), c.p);
      for (u64 n = n0; n < hi; n += c.m) {
        e = (c.k * cur + c.beta) % c.p;
        if (e == 0) hit[n - lo] = 1;
        cur = cur * c.step % c.p;
      }
    }
  });
}

}  // namespace covercert::sweep
