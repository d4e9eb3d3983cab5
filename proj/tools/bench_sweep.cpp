// Times the chunked OpenMP sweep kernels against the serial reference on
// production-sized inputs: the q=7 covering sweep (period 1959552) and the
// divisibility sweep of a freshly constructed 2-3-q certificate.
#include <chrono>
#include <cstdio>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "covercert/construct.hpp"
#include "covercert/sweep.hpp"
#include "covercert/verify.hpp"

using namespace covercert;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

template <typename F>
double time_best_of(int reps, F&& f) {
  double best = 1e100;
  for (int i = 0; i < reps; ++i) {
    auto t0 = Clock::now();
    f();
    best = std::min(best, seconds_since(t0));
  }
  return best;
}

}  // namespace

int main(int argc, char** argv) {
  int reps = argc > 1 ? std::atoi(argv[1]) : 3;
  int max_threads = 1;
#ifdef _OPENMP
  max_threads = omp_get_max_threads();
#endif
  std::printf("sweep kernels, best of %d, max threads %d\n\n", reps, max_threads);

  {
    CoveringSystem cover = build_236_cover(7);
    sweep::CoverSweepInput in;
    in.period = mpz_get_ui(cover.lcm.get_mpz_t());
    for (const auto& c : cover.congruences) {
      in.classes.push_back(
          {mpz_get_ui(c.residue.get_mpz_t()), mpz_get_ui(c.modulus.get_mpz_t())});
    }
    std::printf("cover sweep, period %llu, %zu classes\n",
                static_cast<unsigned long long>(in.period), in.classes.size());
    CoverReport ref;
    double t_ref = time_best_of(reps, [&] { ref = sweep::cover_sweep_reference(in); });
    std::printf("  reference       %8.1f ms (is_cover=%d)\n", t_ref * 1e3, int(ref.is_cover));
    CoverReport k1;
    double t1 = time_best_of(reps, [&] { k1 = sweep::cover_sweep(in, 1); });
    std::printf("  chunked, 1 thr  %8.1f ms (%.1fx vs reference)\n", t1 * 1e3, t_ref / t1);
    if (max_threads > 1) {
      CoverReport kn;
      double tn = time_best_of(reps, [&] { kn = sweep::cover_sweep(in, max_threads); });
      std::printf("  chunked, %d thr %8.1f ms (%.2fx vs 1 thread)\n", max_threads, tn * 1e3,
                  t1 / tn);
      if (kn.multiplicity_histogram != k1.multiplicity_histogram) {
        std::printf("  MISMATCH across thread counts\n");
        return 1;
      }
    }
    if (ref.is_cover != k1.is_cover || ref.multiplicity_histogram != k1.multiplicity_histogram) {
      std::printf("  MISMATCH between reference and kernel\n");
      return 1;
    }
  }

  {
    std::printf("\nconstructing a b=6 certificate for the divisibility bench...\n");
    CoveringSystem cover = build_236_cover(5);
    AssignmentResult ar = assign_primes(6, cover);
    if (!ar.complete()) {
      std::printf("  prime assignment incomplete (%zu unresolved moduli), skipping\n",
                  ar.unresolved.size());
      return 1;
    }
    ConstructionParams params;
    params.b = 6;
    params.alpha = 1;
    params.beta = Int(1);
    params.q = 5;
    params.family = Family::theorem3;
    Certificate cert = theorem3_construct(params, cover, ar.assignment);

    sweep::DivisibilitySweepInput in;
    in.period = mpz_get_ui(cert.covers[0].lcm.get_mpz_t());
    in.base = cert.b;
    for (const auto& c : cert.covers[0].congruences) {
      const Int& p = cert.assignments[0].entries.at(c.modulus).prime;
      sweep::DivisibilityClass d;
      d.residue = mpz_get_ui(c.residue.get_mpz_t());
      d.modulus = mpz_get_ui(c.modulus.get_mpz_t());
      d.prime = p;
      d.k_mod_p = floor_mod(floor_mod(cert.T, p) * mod_pow(cert.b, floor_mod(cert.T, p - 1), p) +
                                cert.alpha,
                            p);
      d.beta_mod_p = floor_mod(*cert.beta, p);
      in.classes.push_back(std::move(d));
    }
    std::printf("divisibility sweep, period %llu, %zu classes\n",
                static_cast<unsigned long long>(in.period), in.classes.size());
    sweep::DivisibilityReport ref;
    double t_ref = time_best_of(reps, [&] { ref = sweep::divisibility_sweep_reference(in); });
    std::printf("  reference       %8.1f ms (complete=%d)\n", t_ref * 1e3, int(ref.complete));
    sweep::DivisibilityReport k1;
    double t1 = time_best_of(reps, [&] { k1 = sweep::divisibility_sweep(in, 1); });
    std::printf("  chunked, 1 thr  %8.1f ms (%.1fx vs reference)\n", t1 * 1e3, t_ref / t1);
    if (max_threads > 1) {
      sweep::DivisibilityReport kn;
      double tn = time_best_of(reps, [&] { kn = sweep::divisibility_sweep(in, max_threads); });
      std::printf("  chunked, %d thr %8.1f ms (%.2fx vs 1 thread)\n", max_threads, tn * 1e3,
                  t1 / tn);
    }
    if (ref.complete != k1.complete) {
      std::printf("  MISMATCH between reference and kernel\n");
      return 1;
    }
  }
  return 0;
}
