#include "covercert/covering.hpp"

#include <set>

#include "covercert/sweep.hpp"

namespace covercert {

CoveringSystem CoveringSystem::from(std::vector<ResidueClass> congruences) {
  CoveringSystem out;
  out.lcm = 1;
  for (const auto& c : congruences) mpz_lcm(out.lcm.get_mpz_t(), out.lcm.get_mpz_t(), c.modulus.get_mpz_t());
  out.congruences = std::move(congruences);
  return out;
}

bool moduli_distinct(const CoveringSystem& system) {
  std::set<Int> seen;
  for (const auto& c : system.congruences) {
    if (!seen.insert(c.modulus).second) return false;
  }
  return true;
}

CoverReport verify_cover(const CoveringSystem& system, const CoverVerifyOptions& options) {
  if (system.lcm > options.exhaustive_bound || !mpz_fits_ulong_p(system.lcm.get_mpz_t())) {
    throw BoundExceeded("lcm " + system.lcm.get_str() + " exceeds the exhaustive sweep bound " +
                        std::to_string(options.exhaustive_bound));
  }
  sweep::CoverSweepInput in;
  in.period = mpz_get_ui(system.lcm.get_mpz_t());
  in.classes.reserve(system.congruences.size());
  for (const auto& c : system.congruences) {
    in.classes.push_back({mpz_get_ui(c.residue.get_mpz_t()), mpz_get_ui(c.modulus.get_mpz_t())});
  }
  if (options.reference_kernel) return sweep::cover_sweep_reference(in);
  return sweep::cover_sweep(in, options.threads);
}

CoveringSystem build_power2_cover(uint32_t q, uint32_t m) {
  if (q < 3 || !is_prime(Int(q))) throw BadParameters("q must be an odd prime");
  if (m < 2) throw BadParameters("m must be at least 2");
  if (q > m + 1) throw BadParameters("require q <= m+1 so the residues mod q cover");

  std::vector<ResidueClass> cs;
  cs.reserve(2 * m + 1);
  Int pow2 = 1;
  for (uint32_t j = 1; j <= m; ++j) {
    pow2 <<= 1;  // 2^j
    cs.emplace_back(pow2 / 2 - 1, pow2);
  }
  Int top = (Int(1) << m) - 1;  // every a_j = 2^m - 1 on its 2-power part
  pow2 = 1;
  for (uint32_t j = 0; j <= m; ++j) {
    cs.push_back(crt_pair(ResidueClass(Int(j), Int(q)), ResidueClass(top, pow2)));
    pow2 <<= 1;
  }
  return CoveringSystem::from(std::move(cs));
}

CoveringSystem build_236_cover(uint32_t q) {
  if (q < 5 || !is_prime(Int(q))) throw BadParameters("q must be a prime >= 5");

  std::vector<CongruencePair> pairs;
  pairs.reserve(2 * size_t(q) * q + 2 * q);
  auto p3 = [](uint32_t e) {
    Int r;
    mpz_ui_pow_ui(r.get_mpz_t(), 3, e);
    return r;
  };
  for (uint32_t jj = 1; jj <= q; ++jj) {
    pairs.push_back({{p3(jj - 1)}, {p3(jj)}});
  }
  for (uint32_t j = 1; j <= q; ++j) {
    for (uint32_t jj = 1; jj <= q; ++jj) {
      pairs.push_back({{Int(1) << (j - 1), 2 * p3(jj - 1)}, {Int(1) << j, p3(jj)}});
    }
  }
  for (uint32_t j = 1; j <= q; ++j) {
    for (uint32_t jj = 1; jj <= q; ++jj) {
      pairs.push_back({{Int(0), 2 * p3(jj - 1), Int(j)}, {Int(1) << j, p3(jj), Int(q)}});
    }
  }
  for (uint32_t jj = 1; jj <= q; ++jj) {
    pairs.push_back({{Int(0), Int(jj)}, {p3(jj), Int(q)}});
  }
  return expand_pair_notation(pairs);
}

CoveringSystem expand_pair_notation(std::span<const CongruencePair> pairs) {
  std::vector<ResidueClass> cs;
  cs.reserve(pairs.size());
  for (const auto& pair : pairs) {
    if (pair.residues.empty() || pair.residues.size() != pair.moduli.size()) {
      throw BadParameters("pair notation needs matching non-empty residue and modulus lists");
    }
    std::vector<ResidueClass> components;
    components.reserve(pair.residues.size());
    for (size_t i = 0; i < pair.residues.size(); ++i) {
      components.emplace_back(pair.residues[i], pair.moduli[i]);
    }
    cs.push_back(crt_list(components));
  }
  return CoveringSystem::from(std::move(cs));
}

}  // namespace covercert
