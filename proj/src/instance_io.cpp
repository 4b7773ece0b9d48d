#include "l1l2/instance_io.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

namespace l1l2 {

namespace {

const std::vector<std::string> kInstanceKeys = {"m", "n", "A", "b", "gamma",
                                                "cone", "model", "p", "q"};

[[noreturn]] void schema_error(const std::string& detail) {
  throw Error(ErrorCode::SchemaError, detail);
}

const Json& require(const Json& doc, const char* key) {
  auto it = doc.find(key);
  if (it == doc.end()) schema_error(std::string("missing field '") + key + "'");
  return *it;
}

double as_number(const Json& v, const std::string& what) {
  if (!v.is_number()) schema_error(what + " must be a number");
  return v.get<double>();
}

std::vector<double> as_number_array(const Json& v, const std::string& what) {
  if (!v.is_array()) schema_error(what + " must be an array of numbers");
  std::vector<double> out;
  out.reserve(v.size());
  for (const auto& e : v) out.push_back(as_number(e, what + " entry"));
  return out;
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

}  // namespace

std::string_view to_string(Cone cone) { return cone == Cone::Free ? "free" : "nonneg"; }

std::string_view to_string(ModelKind model) {
  return model == ModelKind::Constrained ? "constrained" : "unconstrained";
}

Cone parse_cone(std::string_view text) {
  if (text == "free") return Cone::Free;
  if (text == "nonneg") return Cone::NonNegative;
  schema_error("cone must be \"free\" or \"nonneg\", got \"" + std::string(text) + "\"");
}

ModelKind parse_model(std::string_view text) {
  if (text == "constrained") return ModelKind::Constrained;
  if (text == "unconstrained") return ModelKind::Unconstrained;
  schema_error("model must be \"constrained\" or \"unconstrained\", got \"" +
               std::string(text) + "\"");
}

InstanceDescription description_from_json(const Json& doc,
                                          const std::vector<std::string>& extra_keys) {
  if (!doc.is_object()) schema_error("instance must be a JSON object");
  for (const auto& [key, _] : doc.items()) {
    const bool known = std::find(kInstanceKeys.begin(), kInstanceKeys.end(), key) !=
                           kInstanceKeys.end() ||
                       std::find(extra_keys.begin(), extra_keys.end(), key) != extra_keys.end();
    if (!known) schema_error("unknown field '" + key + "'");
  }

  InstanceDescription d;
  const Json& m = require(doc, "m");
  const Json& n = require(doc, "n");
  if (!m.is_number_integer() || !n.is_number_integer()) schema_error("m and n must be integers");
  d.m = m.get<long long>();
  d.n = n.get<long long>();
  d.A = as_number_array(require(doc, "A"), "A");
  d.b = as_number_array(require(doc, "b"), "b");
  if (auto it = doc.find("gamma"); it != doc.end() && !it->is_null()) {
    d.gamma = as_number(*it, "gamma");
  }
  const Json& cone = require(doc, "cone");
  const Json& model = require(doc, "model");
  if (!cone.is_string() || !model.is_string()) schema_error("cone and model must be strings");
  d.cone = parse_cone(cone.get<std::string>());
  d.model = parse_model(model.get<std::string>());
  d.p = as_number(require(doc, "p"), "p");
  d.q = as_number(require(doc, "q"), "q");
  return d;
}

ProblemInstance instance_from_json(const Json& doc, const std::vector<std::string>& extra_keys) {
  return validate_instance(description_from_json(doc, extra_keys));
}

Json instance_to_json(const ProblemInstance& inst) {
  const InstanceDescription d = inst.describe();
  Json doc;
  doc["m"] = d.m;
  doc["n"] = d.n;
  doc["A"] = d.A;
  doc["b"] = d.b;
  doc["gamma"] = d.gamma ? Json(*d.gamma) : Json(nullptr);
  doc["cone"] = to_string(d.cone);
  doc["model"] = to_string(d.model);
  doc["p"] = d.p;
  doc["q"] = d.q;
  return doc;
}

Json vector_to_json(const Vector& v) {
  Json arr = Json::array();
  for (double x : v) arr.push_back(x);
  return arr;
}

Vector vector_from_json(const Json& doc) {
  const auto values = as_number_array(doc, "vector");
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

Vector parse_point_csv(std::string_view text) {
  std::vector<double> values;
  text = trim(text);
  if (text.empty()) throw Error(ErrorCode::BadArgument, "empty point");
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto field = trim(text.substr(start, comma == std::string_view::npos
                                                   ? std::string_view::npos
                                                   : comma - start));
    double v = 0.0;
    const auto* first = field.data();
    const auto* last = field.data() + field.size();
    if (!field.empty() && *first == '+') ++first;
    const auto [ptr, ec] = std::from_chars(first, last, v);
    if (field.empty() || ec != std::errc() || ptr != last) {
      throw Error(ErrorCode::BadArgument, "cannot parse point entry '" + std::string(field) + "'");
    }
    values.push_back(v);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return Eigen::Map<const Vector>(values.data(), static_cast<Eigen::Index>(values.size()));
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::BadArgument, "cannot open '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text_file(path);
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    schema_error("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

}  // namespace l1l2
