#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "covercert/json_io.hpp"
#include "covercert/verify.hpp"

using namespace covercert;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitMathFail = 1;
constexpr int kExitUsage = 2;

struct BudgetFlags {
  std::optional<uint64_t> trial, rho, scan;
  std::optional<uint64_t> seed;

  // the COVERCERT_BUDGET env var ("trial=..,rho=..,scan=..") sets the profile
  // that flags then override
  SearchBudget resolve() const {
    SearchBudget budget = SearchBudget::search_defaults();
    if (const char* env = std::getenv("COVERCERT_BUDGET")) {
      std::string s(env);
      size_t pos = 0;
      while (pos < s.size()) {
        size_t end = s.find(',', pos);
        if (end == std::string::npos) end = s.size();
        std::string item = s.substr(pos, end - pos);
        size_t eq = item.find('=');
        if (eq != std::string::npos) {
          std::string key = item.substr(0, eq);
          uint64_t value = std::strtoull(item.c_str() + eq + 1, nullptr, 10);
          if (key == "trial") budget.trial_division_bound = value;
          if (key == "rho") budget.rho_iterations = value;
          if (key == "scan") budget.progression_scan_bound = value;
        }
        pos = end + 1;
      }
    }
    if (trial) budget.trial_division_bound = *trial;
    if (rho) budget.rho_iterations = *rho;
    if (scan) budget.progression_scan_bound = *scan;
    if (seed) set_rho_seed(*seed);
    return budget;
  }
};

void add_budget_flags(CLI::App* cmd, BudgetFlags& flags) {
  cmd->add_option("--trial-bound", flags.trial, "trial division bound");
  cmd->add_option("--rho-iters", flags.rho, "Pollard rho iteration budget");
  cmd->add_option("--scan-bound", flags.scan, "progression scan bound");
  cmd->add_option("--seed", flags.seed, "salt for the deterministic rho sequence");
}

void emit(const Json& j, const std::string& out_path) {
  if (out_path.empty())
    std::cout << j.dump(2) << '\n';
  else
    write_json_file(out_path, j);
}

Json partial_report(const AssignmentResult& result) {
  Json unresolved = Json::array();
  for (const auto& m : result.unresolved) unresolved.push_back(m.get_str());
  return Json{{"status", "partial"},
              {"resolved", result.assignment.entries.size()},
              {"unresolved", std::move(unresolved)}};
}

int run_verify_report(const VerifyReport& rep, bool as_json, const std::string& out_path) {
  if (as_json)
    std::cout << to_json(rep).dump(2) << '\n';
  else
    std::cout << render_report_table(rep);
  if (!out_path.empty()) write_json_file(out_path, to_json(rep));
  return rep.overall ? kExitOk : kExitMathFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"covering-system certificates for numbers t*b^t + alpha"};
  app.require_subcommand(1);
  int threads = 1;
  app.add_option("--threads", threads, "worker threads for sweeps and prime searches");

  // ---- cover build | cover verify ----
  auto* cover_cmd = app.add_subcommand("cover", "build or verify covering systems");
  cover_cmd->require_subcommand(1);

  auto* cover_build = cover_cmd->add_subcommand("build", "construct a covering system");
  std::string family = "power2";
  uint32_t cb_q = 5;
  std::optional<uint32_t> cb_m;
  std::string cb_out;
  cover_build->add_option("--family", family, "power2 or 236")
      ->check(CLI::IsMember({"power2", "236"}));
  cover_build->add_option("--q", cb_q, "odd prime parameter")->required();
  cover_build->add_option("--m", cb_m, "ladder height (power2 family; default q-1)");
  cover_build->add_option("-o,--out", cb_out, "output file (default stdout)");

  auto* cover_verify = cover_cmd->add_subcommand("verify", "exhaustively verify a covering system");
  std::string cv_file;
  uint64_t cv_bound = 100'000'000;
  cover_verify->add_option("file", cv_file, "covering system JSON")->required();
  cover_verify->add_option("--bound", cv_bound, "largest lcm to sweep");

  // ---- primes ----
  auto* primes_cmd = app.add_subcommand("primes", "assign primitive primes to a cover");
  std::string p_b = "2", p_cover, p_out;
  bool allow_partial = false;
  BudgetFlags p_budget;
  primes_cmd->add_option("--b", p_b, "base")->required();
  primes_cmd->add_option("--cover", p_cover, "covering system JSON file")->required();
  primes_cmd->add_flag("--allow-partial", allow_partial, "exit 0 even when moduli stay unresolved");
  primes_cmd->add_option("-o,--out", p_out, "output file (default stdout)");
  add_budget_flags(primes_cmd, p_budget);

  // ---- construct t2|t3|t4 ----
  auto* construct_cmd = app.add_subcommand("construct", "run a certificate construction");
  construct_cmd->require_subcommand(1);
  struct ConstructFlags {
    std::string b = "2", alpha = "1", beta = "1";
    uint32_t q = 5;
    std::string cover1, cover2, primes1, primes2, out;
    bool verify = false;
    BudgetFlags budget;
  };
  ConstructFlags t2f, t3f, t4f;
  auto add_construct_flags = [](CLI::App* cmd, ConstructFlags& f, bool wants_beta, bool two_covers) {
    cmd->add_option("--b", f.b, "base")->required();
    cmd->add_option("--alpha", f.alpha, "constant term alpha")->required();
    if (wants_beta) cmd->add_option("--beta", f.beta, "tail sign beta")->required();
    cmd->add_option("--q", f.q, "prime q >= 5")->required();
    if (two_covers) {
      cmd->add_option("--cover1", f.cover1, "power-of-two cover JSON (built when absent)");
      cmd->add_option("--cover2", f.cover2, "2-3-q cover JSON (built when absent)");
      cmd->add_option("--primes1", f.primes1, "assignment JSON for cover1");
      cmd->add_option("--primes2", f.primes2, "assignment JSON for cover2");
    } else {
      cmd->add_option("--cover", f.cover1, "cover JSON (built when absent)");
      cmd->add_option("--primes", f.primes1, "assignment JSON (searched when absent)");
    }
    cmd->add_flag("--verify", f.verify, "run the independent checker on the result");
    cmd->add_option("-o,--out", f.out, "output file (default stdout)");
    add_budget_flags(cmd, f.budget);
  };
  add_construct_flags(construct_cmd->add_subcommand("t2", "power-of-two family"), t2f, true, false);
  add_construct_flags(construct_cmd->add_subcommand("t3", "2-3-q family"), t3f, true, false);
  add_construct_flags(construct_cmd->add_subcommand("t4", "Brier pairing"), t4f, false, true);

  // ---- verify ----
  auto* verify_cmd = app.add_subcommand("verify", "independently check a certificate");
  std::string v_file, v_out;
  uint32_t translations = 0;
  bool v_json = false;
  verify_cmd->add_option("file", v_file, "certificate JSON")->required();
  verify_cmd->add_option("--translations", translations, "also check T + k*M for k = 1..N");
  verify_cmd->add_flag("--json", v_json, "print the report as JSON instead of a table");
  verify_cmd->add_option("-o,--out", v_out, "write the JSON report to a file");

  // ---- reproduce ----
  auto* reproduce_cmd = app.add_subcommand("reproduce", "re-derive published values");
  std::string target;
  reproduce_cmd->add_option("target", target, "what to reproduce (corollary1)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : kExitUsage;
  }

  try {
    if (cover_build->parsed()) {
      CoveringSystem cover = family == "power2"
                                 ? build_power2_cover(cb_q, cb_m.value_or(cb_q - 1))
                                 : build_236_cover(cb_q);
      emit(to_json(cover), cb_out);
      return kExitOk;
    }
    if (cover_verify->parsed()) {
      CoveringSystem cover = cover_from_json(load_json_file(cv_file));
      CoverReport report = verify_cover(cover, {cv_bound, threads, false});
      Json j{{"is_cover", report.is_cover}, {"lcm", cover.lcm.get_str()}};
      Json witnesses = Json::array();
      for (uint64_t w : report.uncovered_witnesses) witnesses.push_back(w);
      j["uncovered_witnesses"] = std::move(witnesses);
      std::cout << j.dump(2) << '\n';
      return report.is_cover ? kExitOk : kExitMathFail;
    }
    if (primes_cmd->parsed()) {
      SearchBudget budget = p_budget.resolve();
      CoveringSystem cover = cover_from_json(load_json_file(p_cover));
      AssignmentResult result = assign_primes(Int(p_b), cover, budget, threads);
      if (!result.complete()) {
        emit(partial_report(result), "");
        if (!p_out.empty()) write_json_file(p_out, to_json(result.assignment));
        return allow_partial ? kExitOk : kExitMathFail;
      }
      emit(to_json(result.assignment), p_out);
      return kExitOk;
    }

    auto run_single_cover_construct = [&](const ConstructFlags& f, bool theorem3) -> int {
      SearchBudget budget = f.budget.resolve();
      ConstructionParams precheck;
      precheck.b = Int(f.b);
      precheck.alpha = Int(f.alpha);
      precheck.beta = Int(f.beta);
      precheck.q = f.q;
      precheck.family = theorem3 ? Family::theorem3 : Family::theorem2;
      check_construction_hypotheses(precheck);
      CoveringSystem cover = f.cover1.empty()
                                 ? (theorem3 ? build_236_cover(f.q) : build_power2_cover(f.q, f.q - 1))
                                 : cover_from_json(load_json_file(f.cover1));
      PrimeAssignment assignment;
      if (f.primes1.empty()) {
        AssignmentResult r = assign_primes(Int(f.b), cover, budget, threads);
        if (!r.complete()) {
          emit(partial_report(r), "");
          return kExitMathFail;
        }
        assignment = std::move(r.assignment);
      } else {
        assignment = assignment_from_json(load_json_file(f.primes1));
      }
      ConstructionParams params;
      params.b = Int(f.b);
      params.alpha = Int(f.alpha);
      params.beta = Int(f.beta);
      params.q = f.q;
      params.family = theorem3 ? Family::theorem3 : Family::theorem2;
      params.budget = budget;
      Certificate cert = theorem3 ? theorem3_construct(params, cover, assignment)
                                  : theorem2_construct(params, cover, assignment);
      emit(to_json(cert), f.out);
      if (f.verify) {
        VerifyReport rep = verify_certificate(cert, {threads, 100'000'000, false});
        std::cerr << render_report_table(rep);
        return rep.overall ? kExitOk : kExitMathFail;
      }
      return kExitOk;
    };

    if (construct_cmd->parsed()) {
      CLI::App* sub = construct_cmd->get_subcommands().front();
      if (sub->get_name() == "t2") return run_single_cover_construct(t2f, false);
      if (sub->get_name() == "t3") return run_single_cover_construct(t3f, true);

      // t4
      const ConstructFlags& f = t4f;
      SearchBudget budget = f.budget.resolve();
      ConstructionParams precheck;
      precheck.b = Int(f.b);
      precheck.alpha = Int(f.alpha);
      precheck.q = f.q;
      precheck.family = Family::theorem4;
      check_construction_hypotheses(precheck);
      CoveringSystem cover1 = f.cover1.empty() ? build_power2_cover(f.q, f.q)
                                               : cover_from_json(load_json_file(f.cover1));
      CoveringSystem cover2 =
          f.cover2.empty() ? build_236_cover(f.q) : cover_from_json(load_json_file(f.cover2));
      PrimeAssignment a1, a2;
      if (f.primes1.empty()) {
        AssignmentResult r = assign_primes(Int(f.b), cover1, budget, threads);
        if (!r.complete()) {
          emit(partial_report(r), "");
          return kExitMathFail;
        }
        a1 = std::move(r.assignment);
      } else {
        a1 = assignment_from_json(load_json_file(f.primes1));
      }
      if (f.primes2.empty()) {
        AssignmentResult r = assign_primes(Int(f.b), cover2, budget, threads);
        if (!r.complete()) {
          emit(partial_report(r), "");
          return kExitMathFail;
        }
        a2 = std::move(r.assignment);
      } else {
        a2 = assignment_from_json(load_json_file(f.primes2));
      }
      ConstructionParams params;
      params.b = Int(f.b);
      params.alpha = Int(f.alpha);
      params.q = f.q;
      params.family = Family::theorem4;
      params.budget = budget;
      Certificate cert = theorem4_construct(params, cover1, cover2, a1, a2);
      emit(to_json(cert), f.out);
      if (f.verify) {
        VerifyReport rep = verify_certificate(cert, {threads, 100'000'000, false});
        std::cerr << render_report_table(rep);
        return rep.overall ? kExitOk : kExitMathFail;
      }
      return kExitOk;
    }

    if (verify_cmd->parsed()) {
      Certificate cert = certificate_from_json(load_json_file(v_file));
      VerifyOptions options{threads, 100'000'000, false};
      VerifyReport rep = verify_certificate(cert, options);
      if (translations > 0) {
        VerifyReport shift = verify_translation_invariance(cert, translations, options);
        for (auto& c : shift.checks) rep.checks.push_back(std::move(c));
        rep.finalize();
      }
      return run_verify_report(rep, v_json, v_out);
    }

    if (reproduce_cmd->parsed()) {
      if (target != "corollary1") {
        std::cerr << "unknown reproduction target: " << target << '\n';
        return kExitUsage;
      }
      Corollary1Reproduction out = reproduce_corollary1(threads);
      std::cout << render_report_table(out.report);
      const char* expected_T[] = {"2245377406103792702454767", "2215074033447763254589281",
                                  "1951609044082776021493089", "3334297893475587915471523"};
      for (size_t i = 0; i < out.certificates.size() && i < 4; ++i) {
        std::cout << "part " << i + 1 << ": T computed " << out.certificates[i].T.get_str()
                  << " expected " << expected_T[i] << '\n';
      }
      if (!out.certificates.empty()) {
        std::cout << "M = " << out.certificates.front().M.get_str() << '\n';
      }
      return out.report.overall ? kExitOk : kExitMathFail;
    }
  } catch (const HypothesisViolation& e) {
    std::cerr << "hypothesis violation: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BadParameters& e) {
    std::cerr << "bad parameters: " << e.what() << '\n';
    return kExitUsage;
  } catch (const MalformedCertificate& e) {
    std::cerr << "malformed input: " << e.what() << '\n';
    return kExitUsage;
  } catch (const BoundExceeded& e) {
    std::cerr << "bound exceeded: " << e.what() << '\n';
    return kExitMathFail;
  } catch (const ExceptionCase& e) {
    std::cerr << "Zsigmondy exception: " << e.what() << '\n';
    return kExitMathFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitMathFail;
  }
  return kExitUsage;
}
