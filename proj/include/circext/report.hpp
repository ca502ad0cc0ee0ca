#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "circext/certifier.hpp"
#include "circext/grid.hpp"
#include "circext/spectrum.hpp"
#include "circext/threshold.hpp"

namespace circext::report {

using Json = nlohmann::ordered_json;

inline constexpr int kSchemaVersion = 1;

/// Shortest round-trip decimal form; "nan", "inf", "-inf" for non-finite values.
std::string format_number(double v);

/// Finite values as numbers, others as their format_number string.
Json json_number(double v);

Json to_json(const GridSpec& grid);
/// Runtime is left out unless requested so identical runs give identical bytes.
Json to_json(const certify::CertReport& r, bool include_timing = false);
Json to_json(const threshold::ThresholdCurve& c);
Json to_json(const spectrum::QFormMatrix& m, bool include_entries);
Json to_json(const spectrum::ScalingStudy& s);
Json to_json(const spectrum::ConcentrationReport& r);

/// {"schema_version", "command", "parameters", "result"}.
Json envelope(const std::string& command, Json parameters, Json result);

/// Two-space indented JSON with a trailing newline.
std::string dump(const Json& j);

std::string csv_cert_reports(const std::vector<certify::CertReport>& reports);
std::string csv_curve(const threshold::ThresholdCurve& c);
std::string csv_matrix(const spectrum::QFormMatrix& m);
std::string csv_eigenvalues(const std::vector<double>& ev);
std::string csv_scaling(const spectrum::ScalingStudy& s);
std::string csv_concentration(const spectrum::ConcentrationReport& r);

}  // namespace circext::report
