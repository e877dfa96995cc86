///
/// \file io.hpp
/// JSON conversions for measurements, parameters, reports and configs.
///
#ifndef DHPRONY_IO_HPP
#define DHPRONY_IO_HPP

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include <dhprony/conditioning.hpp>
#include <dhprony/pipeline.hpp>

namespace dhprony
{

using Json = nlohmann::json;

/// Complex numbers are [re, im] pairs.
Json complex_to_json(Complex z);
Complex complex_from_json(const Json& j);
Json complex_list_to_json(const std::vector<Complex>& v);
std::vector<Complex> complex_list_from_json(const Json& j);

/// {"measurements": [[re, im], ...]}
MeasurementSequence measurements_from_json(const Json& j);
Json measurements_to_json(const MeasurementSequence& meas);

/// {"nodes": [[re, im], ...], "coefficients": [[[re, im], ...], ...]}
PronyParameters params_from_json(const Json& j);
Json params_to_json(const PronyParameters& params);

Json diagnostics_to_json(const SolveDiagnostics& d);
Json condition_to_json(const ConditionReport& r);

Json config_to_json(const ExperimentConfig& c);
ExperimentConfig config_from_json(const Json& j);

Json report_to_json(const ExperimentReport& r);
ExperimentReport report_from_json(const Json& j);

/// Parses a file; errors carry the path.
Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

} // namespace dhprony

#endif
