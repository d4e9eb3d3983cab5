#include "covercert/json_io.hpp"

#include <fstream>
#include <sstream>

namespace covercert {

namespace {

// small values as plain numbers, anything wider as a decimal string
Json encode_int(const Int& v) {
  if (v >= 0 && mpz_sizeinbase(v.get_mpz_t(), 2) <= 53 && mpz_fits_ulong_p(v.get_mpz_t())) {
    return Json(mpz_get_ui(v.get_mpz_t()));
  }
  if (v < 0 && mpz_fits_slong_p(v.get_mpz_t())) {
    long s = mpz_get_si(v.get_mpz_t());
    if (s > -(1L << 53)) return Json(s);
  }
  return Json(v.get_str());
}

Json encode_int_string(const Int& v) { return Json(v.get_str()); }

Int decode_int(const Json& j, const char* what) {
  try {
    if (j.is_number_unsigned()) return Int(static_cast<unsigned long>(j.get<uint64_t>()));
    if (j.is_number_integer()) return Int(static_cast<long>(j.get<int64_t>()));
    if (j.is_string()) return Int(j.get<std::string>());
  } catch (const std::invalid_argument&) {
    throw MalformedCertificate(std::string("bad integer for ") + what);
  }
  throw MalformedCertificate(std::string("expected an integer for ") + what);
}

}  // namespace

Json to_json(const CoveringSystem& system) {
  Json congruences = Json::array();
  for (const auto& c : system.congruences) {
    congruences.push_back(Json{{"r", encode_int(c.residue)}, {"m", encode_int(c.modulus)}});
  }
  return Json{{"congruences", std::move(congruences)}, {"lcm", encode_int(system.lcm)}};
}

CoveringSystem cover_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("congruences") || !j["congruences"].is_array()) {
    throw MalformedCertificate("covering system needs a congruences array");
  }
  std::vector<ResidueClass> cs;
  for (const auto& e : j["congruences"]) {
    Int m = decode_int(e.at("m"), "modulus");
    Int r = decode_int(e.at("r"), "residue");
    if (m < 1) throw MalformedCertificate("modulus must be positive");
    if (r < 0 || r >= m) throw MalformedCertificate("residue out of range");
    cs.emplace_back(r, m);
  }
  CoveringSystem out = CoveringSystem::from(std::move(cs));
  if (j.contains("lcm") && decode_int(j["lcm"], "lcm") != out.lcm) {
    throw MalformedCertificate("stored lcm does not match the moduli");
  }
  return out;
}

Json to_json(const PrimeAssignment& assignment) {
  Json entries = Json::array();
  for (const auto& [m, e] : assignment.entries) {
    entries.push_back(Json{
        {"m", encode_int(m)}, {"p", encode_int_string(e.prime)}, {"strategy", e.strategy}});
  }
  return Json{{"b", encode_int_string(assignment.base)}, {"entries", std::move(entries)}};
}

PrimeAssignment assignment_from_json(const Json& j) {
  if (!j.is_object() || !j.contains("entries")) {
    throw MalformedCertificate("prime assignment needs an entries array");
  }
  PrimeAssignment out;
  out.base = decode_int(j.at("b"), "b");
  for (const auto& e : j["entries"]) {
    Int m = decode_int(e.at("m"), "modulus");
    AssignedPrime ap;
    ap.prime = decode_int(e.at("p"), "prime");
    ap.strategy = e.value("strategy", std::string("unspecified"));
    if (!out.entries.emplace(m, std::move(ap)).second) {
      throw MalformedCertificate("duplicate modulus in prime assignment");
    }
  }
  return out;
}

Json to_json(const Certificate& cert) {
  Json j;
  j["schema_version"] = kCertificateSchemaVersion;
  j["family"] = family_name(cert.family);
  j["b"] = encode_int_string(cert.b);
  j["alpha"] = encode_int_string(cert.alpha);
  j["beta"] = cert.beta ? encode_int_string(*cert.beta) : Json(nullptr);
  j["q"] = cert.q;
  Json covers = Json::array();
  for (const auto& c : cert.covers) covers.push_back(to_json(c));
  j["covers"] = std::move(covers);
  Json assignments = Json::array();
  for (const auto& a : cert.assignments) assignments.push_back(to_json(a));
  j["assignments"] = std::move(assignments);
  j["P"] = encode_int_string(cert.P);
  j["tau"] = encode_int_string(cert.tau);
  j["script_T"] = encode_int_string(cert.script_T);
  j["upsilon"] = cert.upsilon ? encode_int_string(*cert.upsilon) : Json(nullptr);
  j["T"] = encode_int_string(cert.T);
  j["M"] = encode_int_string(cert.M);
  Json flags;
  flags["q_divides_P"] = cert.flags.q_divides_P;
  flags["three_divides_P"] = cert.flags.three_divides_P;
  flags["a_index"] = cert.flags.a_index
                         ? Json{cert.flags.a_index->first, cert.flags.a_index->second}
                         : Json(nullptr);
  j["case_flags"] = std::move(flags);
  j["metadata"] = Json{{"primality_policy", cert.primality_policy}};
  return j;
}

Certificate certificate_from_json(const Json& j) {
  if (!j.is_object()) throw MalformedCertificate("certificate must be a JSON object");
  if (!j.contains("schema_version") || !j["schema_version"].is_number_integer() ||
      j["schema_version"].get<int>() != kCertificateSchemaVersion) {
    throw MalformedCertificate("unsupported certificate schema version");
  }
  Certificate cert;
  try {
    cert.family = family_from_name(j.at("family").get<std::string>());
    cert.b = decode_int(j.at("b"), "b");
    cert.alpha = decode_int(j.at("alpha"), "alpha");
    if (!j.at("beta").is_null()) cert.beta = decode_int(j["beta"], "beta");
    cert.q = j.at("q").get<uint32_t>();
    for (const auto& c : j.at("covers")) cert.covers.push_back(cover_from_json(c));
    for (const auto& a : j.at("assignments")) cert.assignments.push_back(assignment_from_json(a));
    cert.P = decode_int(j.at("P"), "P");
    cert.tau = decode_int(j.at("tau"), "tau");
    cert.script_T = decode_int(j.at("script_T"), "script_T");
    if (!j.at("upsilon").is_null()) cert.upsilon = decode_int(j["upsilon"], "upsilon");
    cert.T = decode_int(j.at("T"), "T");
    cert.M = decode_int(j.at("M"), "M");
    const Json& flags = j.at("case_flags");
    cert.flags.q_divides_P = flags.at("q_divides_P").get<bool>();
    cert.flags.three_divides_P = flags.at("three_divides_P").get<bool>();
    if (!flags.at("a_index").is_null()) {
      cert.flags.a_index = {flags["a_index"].at(0).get<uint32_t>(),
                            flags["a_index"].at(1).get<uint32_t>()};
    }
    if (j.contains("metadata") && j["metadata"].contains("primality_policy")) {
      cert.primality_policy = j["metadata"]["primality_policy"].get<std::string>();
    }
  } catch (const Json::exception& e) {
    throw MalformedCertificate(std::string("certificate parse error: ") + e.what());
  } catch (const BadParameters& e) {
    throw MalformedCertificate(std::string("certificate parse error: ") + e.what());
  }
  return cert;
}

Json to_json(const VerifyReport& report) {
  Json checks = Json::array();
  for (const auto& c : report.checks) {
    checks.push_back(Json{{"name", c.name}, {"pass", c.pass}, {"witness", c.witness}});
  }
  return Json{{"overall", report.overall}, {"checks", std::move(checks)}};
}

std::string render_report_table(const VerifyReport& report) {
  size_t width = 4;
  for (const auto& c : report.checks) width = std::max(width, c.name.size());
  std::ostringstream os;
  for (const auto& c : report.checks) {
    os << (c.pass ? "PASS  " : "FAIL  ") << c.name;
    if (!c.witness.empty()) {
      os << std::string(width - c.name.size() + 2, ' ') << c.witness;
    }
    os << '\n';
  }
  os << (report.overall ? "OVERALL PASS" : "OVERALL FAIL") << '\n';
  return os.str();
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw MalformedCertificate("cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const Json::exception& e) {
    throw MalformedCertificate("invalid JSON in " + path + ": " + e.what());
  }
  return j;
}

void write_json_file(const std::string& path, const Json& j) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

}  // namespace covercert
