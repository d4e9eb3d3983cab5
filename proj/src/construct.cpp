#include "covercert/construct.hpp"

#include <algorithm>
#include <set>

namespace covercert {

namespace {

bool is_power_of_two(const Int& x) { return x > 0 && mpz_popcount(x.get_mpz_t()) == 1; }

Int pow_int(uint32_t base, uint32_t e) {
  Int r;
  mpz_ui_pow_ui(r.get_mpz_t(), base, e);
  return r;
}

// (j, jbar) with m = 2^j * 3^jbar; anything else is a shape error
std::pair<uint32_t, uint32_t> decompose_23(Int m) {
  uint32_t j = 0, jbar = 0;
  while (mpz_even_p(m.get_mpz_t())) {
    m >>= 1;
    ++j;
  }
  while (mpz_divisible_ui_p(m.get_mpz_t(), 3)) {
    m /= 3;
    ++jbar;
  }
  if (m != 1) throw ArithmeticError("modulus is not of the form 2^j * 3^jbar");
  return {j, jbar};
}

struct Entry {
  Int residue;
  Int modulus;
  Int prime;
};

// pairs every congruence with its assigned prime; moduli must match exactly
std::vector<Entry> zip_cover(const CoveringSystem& cover, const PrimeAssignment& assignment) {
  if (cover.congruences.size() != assignment.entries.size()) {
    throw HypothesisViolation("prime assignment does not match the covering system");
  }
  std::vector<Entry> out;
  out.reserve(cover.congruences.size());
  for (const auto& c : cover.congruences) {
    auto it = assignment.entries.find(c.modulus);
    if (it == assignment.entries.end()) {
      throw HypothesisViolation("no prime assigned to modulus " + c.modulus.get_str());
    }
    out.push_back({c.residue, c.modulus, it->second.prime});
  }
  return out;
}

void require_modulus_shape(const CoveringSystem& cover, const std::set<Int>& expected,
                           const char* what) {
  std::set<Int> got;
  for (const auto& c : cover.congruences) got.insert(c.modulus);
  if (got != expected) {
    throw HypothesisViolation(std::string("covering system does not have the ") + what +
                              " modulus shape");
  }
}

std::set<Int> power2_moduli(uint32_t q, uint32_t m) {
  std::set<Int> s;
  for (uint32_t j = 1; j <= m; ++j) s.insert(Int(1) << j);
  for (uint32_t j = 0; j <= m; ++j) s.insert((Int(1) << j) * q);
  return s;
}

std::set<Int> moduli_236(uint32_t q) {
  std::set<Int> s;
  for (uint32_t j = 0; j <= q; ++j)
    for (uint32_t jj = 1; jj <= q; ++jj)
      for (uint32_t jp = 0; jp <= 1; ++jp) s.insert((Int(1) << j) * pow_int(3, jj) * pow_int(q, jp));
  return s;
}

void assert_satisfies(const Int& value, std::span<const ResidueClass> system, const char* what) {
  for (const auto& c : system) {
    if (!c.contains(value)) {
      throw ArithmeticError(std::string("internal inconsistency: ") + what +
                            " misses the congruence " + c.residue.get_str() + " (mod " +
                            c.modulus.get_str() + ")");
    }
  }
}

void check_common_hypotheses(const ConstructionParams& params) {
  if (params.b < 2) throw HypothesisViolation("b must be at least 2");
  if (params.alpha == 0) throw HypothesisViolation("alpha must be nonzero");
  if (params.q < 5 || !is_prime(Int(params.q))) throw HypothesisViolation("q must be a prime >= 5");
}

// the residue of the class whose assigned prime is the given one
Int residue_of_prime(std::span<const Entry> entries, const Int& p, const char* what) {
  for (const auto& e : entries) {
    if (e.prime == p) return e.residue;
  }
  throw ArithmeticError(std::string("internal inconsistency: prime not found for ") + what);
}

}  // namespace

void check_construction_hypotheses(const ConstructionParams& params) {
  check_common_hypotheses(params);
  switch (params.family) {
    case Family::theorem2:
      if (!params.beta || *params.beta == 0) throw HypothesisViolation("beta must be nonzero");
      if (is_power_of_two(params.b + 1)) throw HypothesisViolation("b+1 is a power of 2");
      break;
    case Family::theorem3:
      if (!params.beta || *params.beta == 0) throw HypothesisViolation("beta must be nonzero");
      if (params.b < 3) throw HypothesisViolation("b must be at least 3");
      break;
    case Family::theorem4:
      if (params.b < 3) throw HypothesisViolation("b must be at least 3");
      if (is_power_of_two(params.b + 1)) throw HypothesisViolation("b+1 is a power of 2");
      break;
  }
}

const char* family_name(Family family) {
  switch (family) {
    case Family::theorem2: return "theorem2";
    case Family::theorem3: return "theorem3";
    case Family::theorem4: return "theorem4";
  }
  throw BadParameters("unknown family");
}

Family family_from_name(const std::string& name) {
  if (name == "theorem2") return Family::theorem2;
  if (name == "theorem3") return Family::theorem3;
  if (name == "theorem4") return Family::theorem4;
  throw BadParameters("unknown family name: " + name);
}

Int Certificate::beta_for_cover(size_t index) const {
  if (family == Family::theorem4) return index == 0 ? Int(1) : Int(-1);
  return *beta;
}

std::pair<Int, CaseFlags> compute_P_and_case_flags(std::span<const PrimeAssignment> assignments,
                                                   uint32_t q) {
  Int P = 1;
  CaseFlags flags;
  for (const auto& asg : assignments) {
    for (const auto& [m, e] : asg.entries) {
      P *= e.prime;
      if (e.prime == q) {
        flags.q_divides_P = true;
        flags.a_index = decompose_23(m);
      }
      if (e.prime == 3) flags.three_divides_P = true;
    }
  }
  return {P, flags};
}

// Theorems 2 and 3 share one engine; only the backbone (2^(q-1) versus
// 2^q * 3^q) and the admissible cover shape differ.
static Certificate sierpinski_riesel_engine(const ConstructionParams& params,
                                            const CoveringSystem& cover,
                                            const PrimeAssignment& assignment,
                                            const Int& backbone,
                                            std::vector<Int> backbone_parts) {
  const Int& b = params.b;
  const Int& alpha = params.alpha;
  const Int& beta = *params.beta;
  const Int q = params.q;
  const Int bm1 = b - 1;

  auto entries = zip_cover(cover, assignment);
  for (const auto& e : entries) {
    if (!is_primitive_prime(e.prime, b, e.modulus)) {
      throw HypothesisViolation("prime " + e.prime.get_str() + " is not primitive for modulus " +
                                e.modulus.get_str());
    }
  }

  auto [P, flags] = compute_P_and_case_flags(std::span(&assignment, 1), params.q);

  const Int base = 1 - alpha - beta;

  // tau pins T on the backbone and mod q
  std::vector<ResidueClass> tau_sys;
  tau_sys.emplace_back(base, backbone);
  if (!flags.q_divides_P) {
    tau_sys.emplace_back(base, q);
  } else {
    Int r_a = residue_of_prime(entries, q, "tau");
    Int val = (-alpha - beta * pow_mod_prime(b, -r_a, q)) * pow_mod_prime(b, -base, q);
    tau_sys.emplace_back(val, q);
  }
  ResidueClass tau_class = crt_list(tau_sys);
  const Int& tau = tau_class.residue;

  // script T collects the per-prime congruences k = -beta * b^(-r) (mod p)
  // rewritten for the multiplier T itself
  std::vector<ResidueClass> st_sys;
  st_sys.emplace_back(base, backbone);
  st_sys.emplace_back(floor_mod(base, bm1), bm1);
  for (const auto& e : entries) {
    if (e.prime == q) continue;
    Int val =
        (-alpha - beta * pow_mod_prime(b, -e.residue, e.prime)) * pow_mod_prime(b, -tau, e.prime);
    st_sys.emplace_back(val, e.prime);
  }
  ResidueClass st_class = crt_list(st_sys);
  const Int& script_T = st_class.residue;

  // T merges script T with tau on the backbone * q
  Int gq = gcd(q, P);
  Int mod1 = bm1 * (P / gq);
  Int backbone_q = backbone * q;
  std::vector<ResidueClass> t_sys{ResidueClass(floor_mod(script_T, mod1), mod1),
                                  ResidueClass(tau, backbone_q)};
  ResidueClass t_class = crt_list(t_sys);

  Int M = P;
  backbone_parts.push_back(bm1);
  backbone_parts.push_back(q);
  for (const Int& part : backbone_parts) mpz_lcm(M.get_mpz_t(), M.get_mpz_t(), part.get_mpz_t());

  assert_satisfies(tau, tau_sys, "tau");
  assert_satisfies(script_T, st_sys, "script T");
  assert_satisfies(t_class.residue, t_sys, "T");
  if (!mpz_divisible_p(M.get_mpz_t(), t_class.modulus.get_mpz_t())) {
    throw ArithmeticError("internal inconsistency: CRT modulus for T does not divide M");
  }

  Certificate cert;
  cert.family = params.family;
  cert.b = b;
  cert.alpha = alpha;
  cert.beta = beta;
  cert.q = params.q;
  cert.covers = {cover};
  cert.assignments = {assignment};
  cert.P = P;
  cert.tau = tau;
  cert.script_T = script_T;
  cert.T = t_class.residue;
  cert.M = M;
  cert.flags = flags;
  cert.primality_policy = kPrimalityPolicy;
  return cert;
}

Certificate theorem2_construct(const ConstructionParams& params, const CoveringSystem& cover,
                               const PrimeAssignment& assignment) {
  ConstructionParams p2 = params;
  p2.family = Family::theorem2;
  check_construction_hypotheses(p2);
  require_modulus_shape(cover, power2_moduli(params.q, params.q - 1), "2^j / q*2^j");

  return sierpinski_riesel_engine(p2, cover, assignment, Int(1) << (params.q - 1),
                                  {Int(1) << (params.q - 1)});
}

Certificate theorem3_construct(const ConstructionParams& params, const CoveringSystem& cover,
                               const PrimeAssignment& assignment) {
  ConstructionParams p3 = params;
  p3.family = Family::theorem3;
  check_construction_hypotheses(p3);
  require_modulus_shape(cover, moduli_236(params.q), "2^j * 3^jj * q^j'");

  Int two_q = Int(1) << params.q;
  Int three_q = pow_int(3, params.q);
  return sierpinski_riesel_engine(p3, cover, assignment, two_q * three_q, {two_q, three_q});
}

Certificate theorem4_construct(const ConstructionParams& params, const CoveringSystem& cover1,
                               const CoveringSystem& cover2, const PrimeAssignment& assignment1,
                               const PrimeAssignment& assignment2) {
  ConstructionParams p4 = params;
  p4.family = Family::theorem4;
  check_construction_hypotheses(p4);
  require_modulus_shape(cover1, power2_moduli(params.q, params.q), "2^j / q*2^j");
  require_modulus_shape(cover2, moduli_236(params.q), "2^j * 3^jj * q^j'");

  const Int& b = params.b;
  const Int& alpha = params.alpha;
  const Int q = params.q;
  const Int bm1 = b - 1;
  const Int two_q = Int(1) << params.q;
  const Int three_q = pow_int(3, params.q);
  const Int phi_three_q = 2 * pow_int(3, params.q - 1);

  auto entries1 = zip_cover(cover1, assignment1);
  auto entries2 = zip_cover(cover2, assignment2);
  for (const auto& e : entries1)
    if (!is_primitive_prime(e.prime, b, e.modulus))
      throw HypothesisViolation("prime " + e.prime.get_str() + " is not primitive for modulus " +
                                e.modulus.get_str());
  for (const auto& e : entries2)
    if (!is_primitive_prime(e.prime, b, e.modulus))
      throw HypothesisViolation("prime " + e.prime.get_str() + " is not primitive for modulus " +
                                e.modulus.get_str());

  {
    std::set<Int> pool;
    for (const auto& e : entries1) pool.insert(e.prime);
    for (const auto& e : entries2) {
      if (!pool.insert(e.prime).second) {
        throw DistinctnessViolation("prime " + e.prime.get_str() +
                                    " appears in both assignments");
      }
    }
  }

  std::vector<PrimeAssignment> both{assignment1, assignment2};
  auto [P, flags] = compute_P_and_case_flags(both, params.q);

  // r_(1,0,0): the residue at modulus 2, which is where 3 sits whenever 3 | P
  const Int r100 = [&] {
    for (const auto& e : entries1)
      if (e.modulus == 2) return e.residue;
    throw ArithmeticError("cover1 has no modulus-2 congruence");
  }();
  if (flags.three_divides_P) {
    bool ok = false;
    for (const auto& e : entries1) ok = ok || (e.modulus == 2 && e.prime == 3);
    if (!ok) throw ArithmeticError("3 divides P but is not assigned at modulus 2");
  }

  // upsilon: the backbone residue used when both 3 and q divide P; computed
  // whenever it is defined (needs b invertible mod 3)
  std::optional<Int> upsilon;
  std::optional<Int> u3;
  if (!mpz_divisible_ui_p(b.get_mpz_t(), 3)) {
    u3 = floor_mod((-alpha - pow_mod_coprime(b, -r100, three_q, phi_three_q)) *
                       pow_mod_coprime(b, alpha, three_q, phi_three_q),
                   three_q);
    std::vector<ResidueClass> up_sys{ResidueClass(-alpha, two_q), ResidueClass(*u3, three_q)};
    upsilon = crt_list(up_sys).residue;
  }

  // tau: 2-part, 3-part (split on 3 | P), q-part (five-way split)
  std::vector<ResidueClass> tau_sys;
  tau_sys.emplace_back(-alpha, two_q);
  if (!flags.three_divides_P) {
    tau_sys.emplace_back(-alpha, three_q);
  } else {
    if (!u3) throw ArithmeticError("3 divides P but b is divisible by 3");
    tau_sys.emplace_back(*u3, three_q);
  }
  if (!flags.q_divides_P) {
    tau_sys.emplace_back(-alpha, q);
  } else {
    auto [a, abar] = *flags.a_index;
    const auto& entries_q = (abar == 0) ? entries1 : entries2;
    Int r_aa = residue_of_prime(entries_q, q, "tau q-part");
    Int binv_r = pow_mod_prime(b, -r_aa, q);
    Int scale = flags.three_divides_P ? pow_mod_prime(b, -*upsilon, q) : pow_mod_prime(b, alpha, q);
    Int val = abar == 0 ? Int(-alpha - binv_r) : Int(-alpha + binv_r);
    tau_sys.emplace_back(val * scale, q);
  }
  ResidueClass tau_class = crt_list(tau_sys);
  const Int& tau = tau_class.residue;

  // script T: 2^q and b-1 backbone parts, then one congruence per prime
  // outside {3, q}; the Riesel-side sign flips
  std::vector<ResidueClass> st_sys;
  st_sys.emplace_back(-alpha, two_q);
  st_sys.emplace_back(floor_mod(-alpha, bm1), bm1);
  for (const auto& e : entries1) {
    if (e.prime == 3 || e.prime == q) continue;
    Int val =
        (-alpha - pow_mod_prime(b, -e.residue, e.prime)) * pow_mod_prime(b, -tau, e.prime);
    st_sys.emplace_back(val, e.prime);
  }
  for (const auto& e : entries2) {
    if (e.prime == 3 || e.prime == q) continue;
    Int val =
        (-alpha + pow_mod_prime(b, -e.residue, e.prime)) * pow_mod_prime(b, -tau, e.prime);
    st_sys.emplace_back(val, e.prime);
  }
  ResidueClass st_class = crt_list(st_sys);
  const Int& script_T = st_class.residue;

  Int g3q = gcd(3 * q, P);
  Int mod1 = bm1 * (P / g3q);
  Int backbone_q = two_q * three_q * q;
  std::vector<ResidueClass> t_sys{ResidueClass(floor_mod(script_T, mod1), mod1),
                                  ResidueClass(tau, backbone_q)};
  ResidueClass t_class = crt_list(t_sys);

  Int M = P;
  for (const Int& part : {two_q, three_q, bm1, q})
    mpz_lcm(M.get_mpz_t(), M.get_mpz_t(), part.get_mpz_t());

  assert_satisfies(tau, tau_sys, "tau");
  assert_satisfies(script_T, st_sys, "script T");
  assert_satisfies(t_class.residue, t_sys, "T");
  if (!mpz_divisible_p(M.get_mpz_t(), t_class.modulus.get_mpz_t())) {
    throw ArithmeticError("internal inconsistency: CRT modulus for T does not divide M");
  }

  Certificate cert;
  cert.family = Family::theorem4;
  cert.b = b;
  cert.alpha = alpha;
  cert.beta = std::nullopt;
  cert.q = params.q;
  cert.covers = {cover1, cover2};
  cert.assignments = {assignment1, assignment2};
  cert.P = P;
  cert.tau = tau;
  cert.script_T = script_T;
  cert.upsilon = upsilon;
  cert.T = t_class.residue;
  cert.M = M;
  cert.flags = flags;
  cert.primality_policy = kPrimalityPolicy;
  return cert;
}

Int smallest_valid_t(const Certificate& cert) {
  Int max_p = 0;
  for (const auto& asg : cert.assignments)
    for (const auto& [m, e] : asg.entries) max_p = std::max(max_p, e.prime);

  auto abs_bits = [](const Int& x) {
    Int a = x;
    mpz_abs(a.get_mpz_t(), a.get_mpz_t());
    return a == 0 ? size_t{1} : mpz_sizeinbase(a.get_mpz_t(), 2);
  };
  const size_t need =
      mpz_sizeinbase(max_p.get_mpz_t(), 2) + mpz_sizeinbase(cert.b.get_mpz_t(), 2) +
      abs_bits(cert.alpha) + (cert.beta ? abs_bits(*cert.beta) : 1) + 8;

  Int t = cert.T > 0 ? cert.T : cert.M;
  while (true) {
    // bit-length lower bound: t*b^t has at least t*(bits(b)-1) bits
    Int lower = t * (long(mpz_sizeinbase(cert.b.get_mpz_t(), 2)) - 1);
    if (lower >= long(need)) return t;
    if (t < 100000) {
      // small enough to evaluate exactly
      Int value;
      mpz_pow_ui(value.get_mpz_t(), cert.b.get_mpz_t(), mpz_get_ui(t.get_mpz_t()));
      value = (t * value + cert.alpha) * cert.b + (cert.beta ? *cert.beta : Int(1));
      if (value >= max_p) return t;
    }
    t += cert.M;
  }
}

}  // namespace covercert
