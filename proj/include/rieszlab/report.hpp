#pragma once

#include <string>

#include "json.hpp"
#include "rieszlab/conditions.hpp"
#include "rieszlab/harness.hpp"
#include "rieszlab/kernel.hpp"
#include "rieszlab/spaces.hpp"
#include "rieszlab/weight.hpp"

namespace rieszlab {

// Serialization of reports. All emitters use ordered keys and contain no
// wall-clock data, so a fixed config and seed reproduce identical bytes.

nlohmann::ordered_json to_json(const ExtReal& v);
nlohmann::ordered_json to_json(const ConditionReport& rep);
nlohmann::ordered_json to_json(const NormResult& rep);
nlohmann::ordered_json to_json(const GrowthReport& rep);
nlohmann::ordered_json to_json(const DoublingReport& rep);
nlohmann::ordered_json to_json(const ApqReport& rep);
nlohmann::ordered_json to_json(const HolderReport& rep);
nlohmann::ordered_json to_json(const ReverseDoublingReport& rep);
nlohmann::ordered_json to_json(const BoundednessReport& rep);

// CSV view of the per-function rows. Header:
//   function_id,source_norm,target_norm,ratio,stable
// An undefined ratio prints as an empty field.
std::string report_csv(const BoundednessReport& rep);

// Writes contents to path; IO failures raise ConfigError naming the path.
void write_text_file(const std::string& path, const std::string& contents);

// format is "json" or "csv".
void emit_report(const BoundednessReport& rep, const std::string& format,
                 const std::string& path);

}  // namespace rieszlab
