#pragma once

#include <string>

#include <json.hpp>

#include "covercert/construct.hpp"
#include "covercert/covering.hpp"
#include "covercert/verify.hpp"
#include "covercert/zsigmondy.hpp"

// JSON wire formats. Big integers travel as decimal strings; small values
// (cover residues, moduli) are plain numbers. Field order is fixed so equal
// inputs serialize to identical bytes.
namespace covercert {

using Json = nlohmann::ordered_json;

inline constexpr int kCertificateSchemaVersion = 1;

Json to_json(const CoveringSystem& system);
CoveringSystem cover_from_json(const Json& j);

Json to_json(const PrimeAssignment& assignment);
PrimeAssignment assignment_from_json(const Json& j);

Json to_json(const Certificate& cert);
Certificate certificate_from_json(const Json& j);

Json to_json(const VerifyReport& report);

std::string render_report_table(const VerifyReport& report);

Json load_json_file(const std::string& path);
void write_json_file(const std::string& path, const Json& j);

}  // namespace covercert
