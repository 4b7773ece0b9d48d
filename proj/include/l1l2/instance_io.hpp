#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "l1l2/model.hpp"

namespace l1l2 {

using Json = nlohmann::ordered_json;

std::string_view to_string(Cone cone);
std::string_view to_string(ModelKind model);
Cone parse_cone(std::string_view text);
ModelKind parse_model(std::string_view text);

/// Instance schema:
///   {"m":int,"n":int,"A":[row-major],"b":[...],"gamma":float|null,
///    "cone":"free"|"nonneg","model":"constrained"|"unconstrained","p":float,"q":float}
/// Unknown keys are rejected unless listed in `extra_keys`.
InstanceDescription description_from_json(const Json& doc,
                                          const std::vector<std::string>& extra_keys = {});
ProblemInstance instance_from_json(const Json& doc,
                                   const std::vector<std::string>& extra_keys = {});
Json instance_to_json(const ProblemInstance& inst);

Json vector_to_json(const Vector& v);
Vector vector_from_json(const Json& doc);

/// Dense comma-separated reals, e.g. "0.5,0.5".
Vector parse_point_csv(std::string_view text);

Json read_json_file(const std::filesystem::path& path);
std::string read_text_file(const std::filesystem::path& path);

}  // namespace l1l2
