#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "covercert/arith.hpp"
#include "covercert/covering.hpp"
#include "covercert/zsigmondy.hpp"

namespace covercert {

struct DistinctnessViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};
/// A construction was invoked outside its hypotheses; the message names the
/// violated condition. The CLI maps this to exit status 2.
struct HypothesisViolation : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

enum class Family { theorem2, theorem3, theorem4 };

const char* family_name(Family family);
Family family_from_name(const std::string& name);

struct ConstructionParams {
  Int b;
  Int alpha;
  std::optional<Int> beta;  // sign of the tail term; theorem4 certifies both signs
  uint32_t q = 5;
  Family family = Family::theorem2;
  SearchBudget budget = SearchBudget::search_defaults();
};

struct CaseFlags {
  bool q_divides_P = false;
  bool three_divides_P = false;
  // (j, jbar) with 2^j * 3^jbar the modulus whose prime is q
  std::optional<std::pair<uint32_t, uint32_t>> a_index;

  bool operator==(const CaseFlags&) const = default;
};

/// Everything an independent checker needs: parameters, the cover(s) with
/// their primitive primes, the CRT intermediates, and the final class
/// T (mod M). theorem4 certificates carry two covers: index 0 certifies the
/// +1 side, index 1 the -1 side.
struct Certificate {
  Family family = Family::theorem2;
  Int b;
  Int alpha;
  std::optional<Int> beta;  // absent for theorem4
  uint32_t q = 5;
  std::vector<CoveringSystem> covers;
  std::vector<PrimeAssignment> assignments;  // parallel to covers
  Int P;
  Int tau;
  Int script_T;
  std::optional<Int> upsilon;  // theorem4 only, absent when 3 | b
  Int T;
  Int M;
  CaseFlags flags;
  std::string primality_policy;

  Int beta_for_cover(size_t index) const;
};

/// P = product of all assigned primes, plus the q | P / 3 | P case flags with
/// the (j, jbar) position of q's modulus.
std::pair<Int, CaseFlags> compute_P_and_case_flags(std::span<const PrimeAssignment> assignments,
                                                   uint32_t q);

/// Family-specific parameter validation; throws HypothesisViolation naming
/// the violated condition. The constructors run this themselves; callers can
/// use it to fail fast before searching for primes.
void check_construction_hypotheses(const ConstructionParams& params);

/// CRT engine over the 2^(q-1) backbone; cover from build_power2_cover(q, q-1).
Certificate theorem2_construct(const ConstructionParams& params, const CoveringSystem& cover,
                               const PrimeAssignment& assignment);

/// CRT engine over the 2^q * 3^q backbone; cover from build_236_cover(q).
Certificate theorem3_construct(const ConstructionParams& params, const CoveringSystem& cover,
                               const PrimeAssignment& assignment);

/// Brier engine: cover1 from build_power2_cover(q, q) certifies k*b^n + 1,
/// cover2 from build_236_cover(q) certifies k*b^n - 1, with one joint prime
/// pool. Throws DistinctnessViolation when the assignments share a prime.
Certificate theorem4_construct(const ConstructionParams& params, const CoveringSystem& cover1,
                               const CoveringSystem& cover2, const PrimeAssignment& assignment1,
                               const PrimeAssignment& assignment2);

/// Least positive t = T (mod M) meeting the size condition
/// (t*b^t + alpha)*b + beta >= max assigned prime, decided by bit-length
/// estimates; t*b^t is never materialized for large t.
Int smallest_valid_t(const Certificate& cert);

}  // namespace covercert
