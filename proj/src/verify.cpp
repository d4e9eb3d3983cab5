#include "covercert/verify.hpp"

#include <algorithm>
#include <set>

#include "covercert/sweep.hpp"

namespace covercert {

namespace {

// residue of the multiplier k = T*b^T + alpha mod p, computed with the
// exponent reduced mod p-1 (valid: p is prime to b)
Int multiplier_mod_p(const Int& T, const Int& b, const Int& alpha, const Int& p) {
  Int k = floor_mod(T, p) * mod_pow(b, floor_mod(T, p - 1), p) + alpha;
  return floor_mod(k, p);
}

std::string class_label(const ResidueClass& c, const Int& p) {
  return c.residue.get_str() + " (mod " + c.modulus.get_str() + "), p=" + p.get_str();
}

void structural_validate(const Certificate& cert) {
  if (cert.covers.empty() || cert.covers.size() != cert.assignments.size()) {
    throw MalformedCertificate("certificate needs covers with matching assignments");
  }
  size_t expected = cert.family == Family::theorem4 ? 2 : 1;
  if (cert.covers.size() != expected) {
    throw MalformedCertificate("wrong number of covers for the certificate family");
  }
  if (cert.family != Family::theorem4 && (!cert.beta || *cert.beta == 0)) {
    throw MalformedCertificate("certificate is missing beta");
  }
  if (cert.b < 2) throw MalformedCertificate("b must be at least 2");
  if (cert.alpha == 0) throw MalformedCertificate("alpha must be nonzero");
  if (cert.q < 5 || !is_prime(Int(cert.q))) throw MalformedCertificate("q must be a prime >= 5");
  if (cert.M < 1) throw MalformedCertificate("M must be positive");
  if (cert.T < 0 || cert.T >= cert.M) throw MalformedCertificate("T must lie in [0, M)");
  for (size_t i = 0; i < cert.covers.size(); ++i) {
    const auto& cover = cert.covers[i];
    const auto& asg = cert.assignments[i];
    if (cover.congruences.empty()) throw MalformedCertificate("empty covering system");
    if (asg.base != cert.b) throw MalformedCertificate("assignment base differs from b");
    if (asg.entries.size() != cover.congruences.size()) {
      throw MalformedCertificate("assignment does not match its covering system");
    }
    for (const auto& c : cover.congruences) {
      if (c.modulus < 1 || c.residue < 0 || c.residue >= c.modulus) {
        throw MalformedCertificate("congruence residue out of range");
      }
      if (!asg.entries.contains(c.modulus)) {
        throw MalformedCertificate("no prime assigned to modulus " + c.modulus.get_str());
      }
    }
  }
}

Int backbone_for(const Certificate& cert) {
  if (cert.family == Family::theorem2) return Int(1) << (cert.q - 1);
  Int three_q;
  mpz_ui_pow_ui(three_q.get_mpz_t(), 3, cert.q);
  return (Int(1) << cert.q) * three_q;
}

}  // namespace

void VerifyReport::add(std::string name, bool pass, std::string witness) {
  checks.push_back({std::move(name), pass, std::move(witness)});
}

void VerifyReport::finalize() {
  overall = std::all_of(checks.begin(), checks.end(), [](const CheckResult& c) { return c.pass; });
}

VerifyReport verify_certificate(const Certificate& cert, const VerifyOptions& options) {
  structural_validate(cert);
  VerifyReport rep;

  // 1. each cover is exhaustively a covering system
  for (size_t i = 0; i < cert.covers.size(); ++i) {
    std::string name = "cover_exhaustive[" + std::to_string(i) + "]";
    try {
      CoverReport cr = verify_cover(
          cert.covers[i], {options.cover_bound, options.threads, options.reference_kernels});
      rep.add(name, cr.is_cover,
              cr.is_cover ? "" : "uncovered n=" + std::to_string(cr.uncovered_witnesses.at(0)));
    } catch (const BoundExceeded& e) {
      rep.add(name, false, e.what());
    }
  }

  // 2. distinct moduli
  for (size_t i = 0; i < cert.covers.size(); ++i) {
    rep.add("moduli_distinct[" + std::to_string(i) + "]", moduli_distinct(cert.covers[i]));
  }

  // 3. every assigned prime is prime and primitive for its modulus
  {
    bool pass = true;
    std::string witness;
    for (const auto& asg : cert.assignments) {
      for (const auto& [m, e] : asg.entries) {
        if (!is_prime(e.prime) || !is_primitive_prime(e.prime, cert.b, m)) {
          pass = false;
          witness = "p=" + e.prime.get_str() + " at m=" + m.get_str();
        }
      }
    }
    rep.add("primes_primitive", pass, witness);
  }

  // 4. primes pairwise distinct across assignments and coprime to b-1
  {
    bool pass = true;
    std::string witness;
    std::set<Int> seen;
    for (const auto& asg : cert.assignments) {
      for (const auto& [m, e] : asg.entries) {
        if (!seen.insert(e.prime).second) {
          pass = false;
          witness = "repeated prime " + e.prime.get_str();
        }
        if (gcd(e.prime, cert.b - 1) != 1) {
          pass = false;
          witness = "prime " + e.prime.get_str() + " divides b-1";
        }
      }
    }
    rep.add("primes_distinct_coprime", pass, witness);
  }

  // 5. per-class divisibility: p | (T*b^T + alpha)*b^r + beta
  for (size_t i = 0; i < cert.covers.size(); ++i) {
    const Int beta = cert.beta_for_cover(i);
    bool pass = true;
    std::string witness;
    for (const auto& c : cert.covers[i].congruences) {
      const Int& p = cert.assignments[i].entries.at(c.modulus).prime;
      Int k = multiplier_mod_p(cert.T, cert.b, cert.alpha, p);
      Int e = floor_mod(k * mod_pow(cert.b, c.residue, p) + beta, p);
      if (e != 0) {
        pass = false;
        witness = "E=" + e.get_str() + " at " + class_label(c, p);
      }
    }
    rep.add("class_divisibility[" + std::to_string(i) + "]", pass, witness);
  }

  // 6. full-period sweep: every n in [1, lcm] is struck by some class
  for (size_t i = 0; i < cert.covers.size(); ++i) {
    std::string name = "full_period_sweep[" + std::to_string(i) + "]";
    const auto& cover = cert.covers[i];
    if (!mpz_fits_ulong_p(cover.lcm.get_mpz_t()) || cover.lcm > options.cover_bound) {
      rep.add(name, false, "period too large to sweep");
      continue;
    }
    sweep::DivisibilitySweepInput in;
    in.period = mpz_get_ui(cover.lcm.get_mpz_t());
    in.base = cert.b;
    const Int beta = cert.beta_for_cover(i);
    for (const auto& c : cover.congruences) {
      const Int& p = cert.assignments[i].entries.at(c.modulus).prime;
      sweep::DivisibilityClass d;
      d.residue = mpz_get_ui(c.residue.get_mpz_t());
      d.modulus = mpz_get_ui(c.modulus.get_mpz_t());
      d.prime = p;
      d.k_mod_p = multiplier_mod_p(cert.T, cert.b, cert.alpha, p);
      d.beta_mod_p = floor_mod(beta, p);
      in.classes.push_back(std::move(d));
    }
    sweep::DivisibilityReport dr = options.reference_kernels
                                       ? sweep::divisibility_sweep_reference(in)
                                       : sweep::divisibility_sweep(in, options.threads);
    rep.add(name, dr.complete,
            dr.complete ? "" : "no divisor for n=" + std::to_string(dr.missed.at(0)));
  }

  // 7. gcd condition: gcd(T + alpha + beta, b-1) = 1 on every certified side
  // (T*b^T = T mod b-1, so this is the theorem's gcd claim)
  {
    bool pass = true;
    std::string witness;
    const Int bm1 = cert.b - 1;
    for (size_t i = 0; i < cert.covers.size(); ++i) {
      const Int beta = cert.beta_for_cover(i);
      Int g = gcd(floor_mod(cert.T + cert.alpha + beta, bm1), bm1);
      if (g != 1 && bm1 != 1) {
        pass = false;
        witness = "gcd=" + g.get_str() + " on side " + std::to_string(i);
      }
    }
    rep.add("gcd_condition", pass, witness);
  }

  // 8. stability: every modulus and prime divides M, and M is exactly the
  // lcm of the backbone parts, b-1, q, and the primes
  {
    bool pass = true;
    std::string witness;
    for (size_t i = 0; i < cert.covers.size() && pass; ++i) {
      for (const auto& c : cert.covers[i].congruences) {
        if (!mpz_divisible_p(cert.M.get_mpz_t(), c.modulus.get_mpz_t())) {
          pass = false;
          witness = "modulus " + c.modulus.get_str() + " does not divide M";
        }
      }
      for (const auto& [m, e] : cert.assignments[i].entries) {
        if (!mpz_divisible_p(cert.M.get_mpz_t(), e.prime.get_mpz_t())) {
          pass = false;
          witness = "prime " + e.prime.get_str() + " does not divide M";
        }
      }
    }
    Int expected = backbone_for(cert);
    Int bm1 = cert.b - 1;
    mpz_lcm(expected.get_mpz_t(), expected.get_mpz_t(), bm1.get_mpz_t());
    mpz_lcm_ui(expected.get_mpz_t(), expected.get_mpz_t(), cert.q);
    for (const auto& asg : cert.assignments) {
      for (const auto& [m, e] : asg.entries) {
        mpz_lcm(expected.get_mpz_t(), expected.get_mpz_t(), e.prime.get_mpz_t());
      }
    }
    if (expected != cert.M) {
      pass = false;
      witness = "M != lcm(backbone, b-1, q, primes) = " + expected.get_str();
    }
    rep.add("stability_M", pass, witness);
  }

  // 9. size condition, certified through bit-length estimates
  {
    Int t0 = smallest_valid_t(cert);
    rep.add("size_condition", t0 > 0, "smallest valid t = " + t0.get_str());
  }

  rep.finalize();
  return rep;
}

VerifyReport verify_translation_invariance(const Certificate& cert, uint32_t count,
                                           const VerifyOptions& options) {
  structural_validate(cert);
  VerifyReport rep;
  if (count == 0) {
    rep.add("translation_invariance", true, "count=0, vacuous");
    rep.finalize();
    return rep;
  }
  (void)options;
  for (uint32_t k = 1; k <= count; ++k) {
    Int shifted = cert.T + k * cert.M;
    bool pass = true;
    std::string witness;
    for (size_t i = 0; i < cert.covers.size(); ++i) {
      const Int beta = cert.beta_for_cover(i);
      for (const auto& c : cert.covers[i].congruences) {
        const Int& p = cert.assignments[i].entries.at(c.modulus).prime;
        Int k0 = multiplier_mod_p(cert.T, cert.b, cert.alpha, p);
        Int k1 = multiplier_mod_p(shifted, cert.b, cert.alpha, p);
        if (k0 != k1) {
          pass = false;
          witness = "multiplier changed mod p=" + p.get_str();
          break;
        }
        if (floor_mod(k1 * mod_pow(cert.b, c.residue, p) + beta, p) != 0) {
          pass = false;
          witness = "divisibility lost at " + class_label(c, p);
          break;
        }
      }
    }
    rep.add("translation_invariance[k=" + std::to_string(k) + "]", pass, witness);
  }
  rep.finalize();
  return rep;
}

VerifyReport verify_multiplier_divisibility(const Int& b, const Int& k, const Int& beta,
                                            const CoveringSystem& cover,
                                            const PrimeAssignment& primes,
                                            const VerifyOptions& options) {
  VerifyReport rep;
  bool class_pass = true;
  std::string witness;
  sweep::DivisibilitySweepInput in;
  if (!mpz_fits_ulong_p(cover.lcm.get_mpz_t())) {
    throw BoundExceeded("cover period too large to sweep");
  }
  in.period = mpz_get_ui(cover.lcm.get_mpz_t());
  in.base = b;
  for (const auto& c : cover.congruences) {
    auto it = primes.entries.find(c.modulus);
    if (it == primes.entries.end()) {
      throw MalformedCertificate("no prime assigned to modulus " + c.modulus.get_str());
    }
    const Int& p = it->second.prime;
    Int kp = floor_mod(k, p);
    Int e = floor_mod(kp * mod_pow(b, c.residue, p) + beta, p);
    if (e != 0) {
      class_pass = false;
      witness = "E=" + e.get_str() + " at " + class_label(c, p);
    }
    sweep::DivisibilityClass d;
    d.residue = mpz_get_ui(c.residue.get_mpz_t());
    d.modulus = mpz_get_ui(c.modulus.get_mpz_t());
    d.prime = p;
    d.k_mod_p = kp;
    d.beta_mod_p = floor_mod(beta, p);
    in.classes.push_back(std::move(d));
  }
  rep.add("class_divisibility", class_pass, witness);
  sweep::DivisibilityReport dr = options.reference_kernels
                                     ? sweep::divisibility_sweep_reference(in)
                                     : sweep::divisibility_sweep(in, options.threads);
  rep.add("full_period_sweep", dr.complete,
          dr.complete ? "" : "no divisor for n=" + std::to_string(dr.missed.at(0)));
  rep.finalize();
  return rep;
}

Corollary1Reproduction reproduce_corollary1(int threads) {
  Corollary1Reproduction out;
  VerifyReport& rep = out.report;

  CoveringSystem cover = build_power2_cover(5, 4);
  AssignmentResult ar = assign_primes(Int(2), cover, SearchBudget::search_defaults(), threads);
  if (!ar.complete()) {
    rep.add("prime_assignment", false, "unresolved moduli");
    rep.finalize();
    return out;
  }

  const std::vector<std::pair<long, const char*>> expected_primes = {
      {2, "3"},  {4, "5"},   {8, "17"},    {16, "257"},       {5, "31"},
      {10, "11"}, {20, "41"}, {40, "61681"}, {80, "4278255361"}};
  bool primes_ok = ar.assignment.entries.size() == expected_primes.size();
  std::string witness;
  for (const auto& [m, p] : expected_primes) {
    auto it = ar.assignment.entries.find(Int(m));
    if (it == ar.assignment.entries.end() || it->second.prime != Int(p)) {
      primes_ok = false;
      witness = "modulus " + std::to_string(m);
    }
  }
  rep.add("prime_set", primes_ok, witness);

  const Int expected_P("241785163922925834941235");
  const Int expected_M("3868562622766813359059760");
  const Int expected_tau(47);
  const Int expected_script_T("697952356997067358830863");
  const std::vector<std::pair<std::pair<int, int>, const char*>> cases = {
      {{1, 1}, "2245377406103792702454767"},
      {{1, -1}, "2215074033447763254589281"},
      {{-1, 1}, "1951609044082776021493089"},
      {{-1, -1}, "3334297893475587915471523"},
  };

  for (size_t i = 0; i < cases.size(); ++i) {
    const auto& [signs, expected_T] = cases[i];
    ConstructionParams params;
    params.b = 2;
    params.alpha = signs.first;
    params.beta = Int(signs.second);
    params.q = 5;
    params.family = Family::theorem2;
    Certificate cert = theorem2_construct(params, cover, ar.assignment);
    std::string name = "part" + std::to_string(i + 1) + "_T";
    bool ok = cert.T == Int(expected_T);
    rep.add(name, ok, ok ? "" : "computed " + cert.T.get_str() + ", expected " + expected_T);
    rep.add("part" + std::to_string(i + 1) + "_M", cert.M == expected_M,
            cert.M == expected_M ? "" : "computed " + cert.M.get_str());
    if (i == 0) {
      rep.add("part1_P", cert.P == expected_P, cert.P.get_str());
      rep.add("part1_tau", cert.tau == expected_tau, cert.tau.get_str());
      rep.add("part1_script_T", cert.script_T == expected_script_T, cert.script_T.get_str());
      bool a_ok = cert.flags.q_divides_P && cert.flags.a_index &&
                  *cert.flags.a_index == std::pair<uint32_t, uint32_t>{2, 0};
      rep.add("part1_a_index", a_ok);
    }
    out.certificates.push_back(std::move(cert));
  }
  rep.finalize();
  return out;
}

}  // namespace covercert
