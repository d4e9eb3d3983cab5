// Acceptance suite: one line per criterion, exit status = number of failures.
// Runs entirely with default budgets; every tolerance is pinned in code.
#include <chrono>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "covercert/json_io.hpp"
#include "covercert/verify.hpp"

using namespace covercert;
using Clock = std::chrono::steady_clock;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& detail) {
  std::printf("%s  criterion %d: %s\n", pass ? "PASS" : "FAIL", criterion, detail.c_str());
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

double elapsed(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

struct Corollary1Data {
  CoveringSystem cover;
  PrimeAssignment assignment;
  std::vector<Certificate> certs;
  bool ok = false;
};

Corollary1Data build_corollary1() {
  Corollary1Data data;
  data.cover = build_power2_cover(5, 4);
  AssignmentResult r = assign_primes(2, data.cover);
  if (!r.complete()) return data;
  data.assignment = r.assignment;
  for (auto [alpha, beta] : std::vector<std::pair<int, int>>{{1, 1}, {1, -1}, {-1, 1}, {-1, -1}}) {
    ConstructionParams params;
    params.b = 2;
    params.alpha = alpha;
    params.beta = Int(beta);
    params.q = 5;
    params.family = Family::theorem2;
    data.certs.push_back(theorem2_construct(params, data.cover, data.assignment));
  }
  data.ok = true;
  return data;
}

// ---- criterion 1: exact reproduction of the four published classes ----
void criterion1(const Corollary1Data& data, double build_seconds) {
  const Int M("3868562622766813359059760");
  const std::vector<Int> expected_T{
      Int("2245377406103792702454767"), Int("2215074033447763254589281"),
      Int("1951609044082776021493089"), Int("3334297893475587915471523")};
  bool pass = data.ok && data.certs.size() == 4;
  std::string detail;
  for (size_t i = 0; pass && i < 4; ++i) {
    if (data.certs[i].T != expected_T[i] || data.certs[i].M != M) {
      pass = false;
      detail = "sign case " + std::to_string(i + 1) + " mismatch";
    }
  }
  if (pass && build_seconds >= 10.0) {
    pass = false;
    detail = "took " + std::to_string(build_seconds) + "s (limit 10s)";
  }
  if (pass) {
    std::ostringstream os;
    os << "four T values and M exact, " << build_seconds << "s";
    detail = os.str();
  }
  report(1, pass, detail);
}

// ---- criterion 2: published intermediates ----
void criterion2(const Corollary1Data& data) {
  bool pass = data.ok;
  std::string detail = "pipeline incomplete";
  if (pass) {
    const Certificate& c = data.certs[0];
    const std::map<long, Int> expected_primes{
        {2, Int(3)},  {4, Int(5)},   {8, Int(17)},      {16, Int(257)},       {5, Int(31)},
        {10, Int(11)}, {20, Int(41)}, {40, Int(61681)}, {80, Int("4278255361")}};
    bool primes_ok = data.assignment.entries.size() == expected_primes.size();
    for (const auto& [m, p] : expected_primes) {
      auto it = data.assignment.entries.find(Int(m));
      primes_ok = primes_ok && it != data.assignment.entries.end() && it->second.prime == p;
    }
    bool a_ok = c.flags.q_divides_P && c.flags.a_index.has_value() &&
                *c.flags.a_index == std::pair<uint32_t, uint32_t>{2, 0} &&
                data.assignment.entries.at(Int(4)).prime == 5;
    pass = primes_ok && c.tau == 47 && c.script_T == Int("697952356997067358830863") &&
           c.P == Int("241785163922925834941235") && a_ok;
    detail = pass ? "tau, script T, P, prime set, a-index all match"
                  : "an intermediate value diverges";
  }
  report(2, pass, detail);
}

// ---- criterion 3: covering exhaustiveness with time bounds ----
void criterion3() {
  struct Case {
    const char* name;
    CoveringSystem cover;
    uint64_t period;
  };
  std::vector<Case> cases;
  cases.push_back({"power2(5,4)", build_power2_cover(5, 4), 80});
  cases.push_back({"236(5)", build_236_cover(5), 38880});
  cases.push_back({"236(7)", build_236_cover(7), 1959552});
  bool pass = true;
  std::ostringstream os;
  for (auto& c : cases) {
    auto t0 = Clock::now();
    CoverReport r = verify_cover(c.cover);
    double dt = elapsed(t0);
    if (!r.is_cover || c.cover.lcm != c.period || dt >= 5.0) {
      pass = false;
      os << c.name << " failed; ";
    } else {
      os << c.name << " " << int(dt * 1000) << "ms; ";
    }
  }
  report(3, pass, os.str());
}

// ---- criterion 4: classic certificate against the literal oracle ----
void criterion4() {
  const Int k = 78557;
  const std::vector<long> primes{3, 5, 7, 13, 19, 37, 73};
  std::map<long, std::set<long>> oracle;
  bool pass = true;
  for (long n = 1; n <= 36; ++n) {
    Int value = k * (Int(1) << n) + 1;  // literal evaluation
    for (long p : primes) {
      if (mpz_divisible_ui_p(value.get_mpz_t(), p)) oracle[n].insert(p);
    }
    if (oracle[n].empty()) pass = false;
  }
  std::vector<ResidueClass> classes;
  PrimeAssignment assignment;
  assignment.base = 2;
  for (long p : primes) {
    Int m = mult_order(2, p);
    std::set<Int> residues;
    for (const auto& [n, ds] : oracle) {
      if (ds.contains(p)) residues.insert(floor_mod(Int(n), m));
    }
    if (residues.size() != 1) {
      pass = false;
      continue;
    }
    classes.emplace_back(*residues.begin(), m);
    assignment.entries.emplace(m, AssignedPrime{Int(p), "classic"});
  }
  if (pass) {
    CoveringSystem cover = CoveringSystem::from(std::move(classes));
    VerifyReport rep = verify_multiplier_divisibility(2, k, 1, cover, assignment);
    pass = rep.overall;
    // modular checks must match the oracle n by n
    for (long n = 1; n <= 36 && pass; ++n) {
      std::set<long> modular;
      for (const auto& c : cover.congruences) {
        if (!c.contains(n)) continue;
        const Int& p = assignment.entries.at(c.modulus).prime;
        if (floor_mod(floor_mod(k, p) * mod_pow(2, Int(n), p) + 1, p) == 0) {
          modular.insert(mpz_get_si(p.get_mpz_t()));
        }
      }
      pass = modular == oracle[n];
    }
  }
  report(4, pass, pass ? "modular checks agree with literal 78557*2^n+1 for n=1..36"
                       : "oracle disagreement");
}

// ---- criterion 5: 100-fold mutation detection ----
void criterion5(const Corollary1Data& data) {
  if (!data.ok) {
    report(5, false, "no baseline certificate");
    return;
  }
  const Certificate& base = data.certs[0];
  std::mt19937_64 rng(20240515);
  int detected = 0, total = 100;
  std::string escape;
  for (int i = 0; i < total; ++i) {
    Certificate mutated = base;
    switch (i % 4) {
      case 0: {  // T
        Int delta = Int(static_cast<unsigned long>(rng() % 100000 + 1));
        mutated.T = floor_mod(mutated.T + delta, mutated.M);
        break;
      }
      case 1: {  // M
        Int delta = Int(static_cast<unsigned long>(rng() % 100000 + 1));
        if (rng() % 2 == 0 && mutated.M > delta + 1) {
          mutated.M -= delta;
        } else {
          mutated.M += delta;
        }
        mutated.T = floor_mod(mutated.T, mutated.M);
        break;
      }
      case 2: {  // one r_i
        size_t idx = rng() % mutated.covers[0].congruences.size();
        ResidueClass& cl = mutated.covers[0].congruences[idx];
        Int m = cl.modulus;
        Int shift = 1 + Int(static_cast<unsigned long>(rng() % 1000)) % (m - 1);
        cl.residue = floor_mod(cl.residue + shift, m);
        break;
      }
      default: {  // one p_i
        auto it = mutated.assignments[0].entries.begin();
        std::advance(it, rng() % mutated.assignments[0].entries.size());
        it->second.prime += 1 + (rng() % 97);
        break;
      }
    }
    bool caught = false;
    std::string witness;
    try {
      VerifyReport rep = verify_certificate(mutated);
      if (!rep.overall) {
        for (const auto& c : rep.checks) {
          if (!c.pass && !c.witness.empty()) witness = c.witness;
        }
        caught = !witness.empty();
      }
    } catch (const MalformedCertificate&) {
      caught = true;  // structurally invalid counts as detected
    }
    if (caught)
      ++detected;
    else if (escape.empty())
      escape = "mutation " + std::to_string(i) + " escaped";
  }
  report(5, detected == total,
         detected == total ? "100/100 mutations detected with concrete witnesses" : escape);
}

// ---- criterion 6: theorem 3/4 property acceptance at default budgets ----
struct Outcome {
  bool completed = false;
  bool verified = false;
  bool partial_exact = false;
  std::vector<Certificate> certs;
  std::string note;
};

Outcome run_t3(const Int& b, uint32_t q) {
  Outcome out;
  CoveringSystem cover = build_236_cover(q);
  AssignmentResult r = assign_primes(b, cover);
  if (!r.complete()) {
    // the partial report must name exactly the moduli without primes
    std::set<Int> named(r.unresolved.begin(), r.unresolved.end());
    bool exact = named.size() == r.unresolved.size() &&
                 named.size() + r.assignment.entries.size() == cover.congruences.size();
    for (const auto& c : cover.congruences) {
      bool resolved = r.assignment.entries.contains(c.modulus);
      bool listed = named.contains(c.modulus);
      exact = exact && (resolved != listed);
    }
    for (const auto& [m, e] : r.assignment.entries) {
      exact = exact && is_primitive_prime(e.prime, b, m);
    }
    out.partial_exact = exact;
    std::ostringstream os;
    os << "partial(" << r.unresolved.size() << " unresolved)";
    out.note = os.str();
    return out;
  }
  ConstructionParams params;
  params.b = b;
  params.alpha = 1;
  params.beta = Int(1);
  params.q = q;
  params.family = Family::theorem3;
  Certificate cert = theorem3_construct(params, cover, r.assignment);
  out.completed = true;
  out.verified = verify_certificate(cert).overall;
  out.certs.push_back(std::move(cert));
  out.note = out.verified ? "certificate verified" : "certificate FAILED verification";
  return out;
}

Outcome run_t4(const Int& b, const Int& alpha, uint32_t q) {
  Outcome out;
  CoveringSystem c1 = build_power2_cover(q, q);
  CoveringSystem c2 = build_236_cover(q);
  AssignmentResult r1 = assign_primes(b, c1);
  AssignmentResult r2 = assign_primes(b, c2);
  if (!r1.complete() || !r2.complete()) {
    size_t unresolved = r1.unresolved.size() + r2.unresolved.size();
    bool exact = true;
    for (const auto& [res, cov] : {std::pair{&r1, &c1}, std::pair{&r2, &c2}}) {
      std::set<Int> named(res->unresolved.begin(), res->unresolved.end());
      for (const auto& c : cov->congruences) {
        exact = exact && (res->assignment.entries.contains(c.modulus) != named.contains(c.modulus));
      }
    }
    out.partial_exact = exact;
    out.note = "partial(" + std::to_string(unresolved) + " unresolved)";
    return out;
  }
  ConstructionParams params;
  params.b = b;
  params.alpha = alpha;
  params.q = q;
  params.family = Family::theorem4;
  Certificate cert = theorem4_construct(params, c1, c2, r1.assignment, r2.assignment);
  out.completed = true;
  out.verified = verify_certificate(cert).overall;
  out.certs.push_back(std::move(cert));
  out.note = out.verified ? "certificate verified (both sides)" : "certificate FAILED verification";
  return out;
}

void criterion6(std::vector<Certificate>& produced) {
  auto t0 = Clock::now();
  bool pass = true;
  std::ostringstream os;

  for (long b : {3, 4, 5}) {
    Outcome out = run_t3(b, 5);
    bool case_ok = (out.completed && out.verified) || (!out.completed && out.partial_exact);
    if (b == 3 && !out.completed) {
      // outcome (a) is required here; report the hard truth
      case_ok = false;
      os << "t3 b=3 REQUIRED completion but stayed " << out.note
         << " [least primitive primes of the unresolved moduli exceed every default budget]; ";
    } else {
      os << "t3 b=" << b << " " << out.note << "; ";
    }
    pass = pass && case_ok;
    for (auto& c : out.certs) produced.push_back(std::move(c));
  }
  for (auto [b, alpha] : std::vector<std::pair<long, long>>{{4, 1}, {5, -1}}) {
    Outcome out = run_t4(b, alpha, 5);
    bool case_ok = (out.completed && out.verified) || (!out.completed && out.partial_exact);
    pass = pass && case_ok;
    os << "t4 b=" << b << " " << out.note << "; ";
    for (auto& c : out.certs) produced.push_back(std::move(c));
  }
  double dt = elapsed(t0);
  if (dt >= 900.0) {
    pass = false;
    os << "exceeded the 15 minute bound";
  } else {
    os << int(dt) << "s";
  }
  report(6, pass, os.str());
}

// ---- criterion 7: translation invariance over every produced certificate ----
void criterion7(const Corollary1Data& data, const std::vector<Certificate>& produced) {
  bool pass = data.ok;
  int count = 0;
  for (const Certificate* cert_set : {&data.certs[0]}) {
    (void)cert_set;
  }
  std::vector<const Certificate*> all;
  for (const auto& c : data.certs) all.push_back(&c);
  for (const auto& c : produced) all.push_back(&c);
  for (const Certificate* c : all) {
    VerifyReport rep = verify_translation_invariance(*c, 5);
    pass = pass && rep.overall;
    ++count;
  }
  std::ostringstream os;
  os << count << " certificates, T + k*M for k = 1..5";
  report(7, pass, os.str());
}

// ---- criterion 8: arithmetic identity suite ----
void criterion8() {
  uint64_t failures = 0;

  // cyclotomic product identity
  for (long b : {2, 3, 5, 6, 10}) {
    for (long m = 1; m <= 64; ++m) {
      Int prod = 1;
      for (long d = 1; d <= m; ++d) {
        if (m % d == 0) prod *= cyclotomic_value(d, b);
      }
      Int direct;
      mpz_ui_pow_ui(direct.get_mpz_t(), b, m);
      direct -= 1;
      if (prod != direct) ++failures;
    }
  }

  // CRT uniqueness by exhaustive scan (lcm <= 10^6)
  std::mt19937_64 rng(88);
  for (int round = 0; round < 20; ++round) {
    std::vector<ResidueClass> cs;
    Int value = Int(static_cast<unsigned long>(rng() % 1000000));
    Int lcm_all = 1;
    for (int i = 0; i < 3; ++i) {
      Int m = Int(static_cast<unsigned long>(rng() % 90 + 10));
      cs.emplace_back(floor_mod(value, m), m);
      mpz_lcm(lcm_all.get_mpz_t(), lcm_all.get_mpz_t(), m.get_mpz_t());
    }
    if (lcm_all > 1000000) continue;
    ResidueClass merged = crt_list(cs);
    unsigned long hits = 0;
    for (Int n = 0; n < lcm_all; ++n) {
      bool all = true;
      for (const auto& c : cs) all = all && c.contains(n);
      if (all) {
        ++hits;
        if (n != merged.residue) ++failures;
      }
    }
    if (hits != 1) ++failures;
  }

  // order-divisibility law over the module grids
  for (long p : {3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41}) {
    for (long b = 2; b <= 12; ++b) {
      if (b % p == 0) continue;
      Int d = mult_order(b, p);
      if (floor_mod(Int(p - 1), d) != 0) ++failures;
      for (long e = 1; e <= 40; ++e) {
        bool one = mod_pow(b, e, p) == 1;
        if (one != (floor_mod(Int(e), d) == 0)) ++failures;
      }
    }
  }

  report(8, failures == 0,
         failures == 0 ? "cyclotomic, CRT-uniqueness, and order-law grids all clean"
                       : std::to_string(failures) + " identity failures");
}

}  // namespace

int main() {
  std::printf("covercert acceptance suite\n");

  auto t0 = Clock::now();
  Corollary1Data data = build_corollary1();
  double build_seconds = elapsed(t0);

  criterion1(data, build_seconds);
  criterion2(data);
  criterion3();
  criterion4();
  criterion5(data);
  std::vector<Certificate> produced;
  criterion6(produced);
  criterion7(data, produced);
  criterion8();

  std::printf("%d criterion failure(s)\n", g_failures);
  return g_failures;
}
