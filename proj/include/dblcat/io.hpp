#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "dblcat/bisimp.hpp"
#include "dblcat/two_cat.hpp"

namespace dblcat {

using json = nlohmann::json;

inline constexpr const char* kFormatVersion = "dblcat/1";

// Malformed file: bad JSON, unknown kind, missing field, dangling identifier.
struct SchemaError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Kinds: category, double, marked-double, functor, double-functor,
// two-category, two-functor, cat-valued-functor.
struct Instance {
  std::string kind;
  std::string name;
  std::optional<std::uint64_t> seed;
  std::string provenance;
  json payload;
  json certificate;  // null unless attached
};

json instance_to_json(const Instance& inst);
Instance instance_from_json(const json& j);
// Canonical text: sorted keys, two-space indent, trailing newline.
std::string print_instance(const Instance& inst);
Instance parse_instance(const std::string& text);
Instance read_instance(const std::string& path);
void write_instance(const Instance& inst, const std::string& path);

json encode(const FinCategory& c);
json encode(const FinFunctor& f);
json encode(const FinDoubleCategory& d);
json encode(const MarkedDoubleCategory& m);
json encode(const DoubleFunctor& f);
json encode(const FinTwoCategory& t);
json encode(const TwoFunctor& f);
json encode(const CatValuedFunctor& F);
json encode(const TwoCatValuedFunctor& F);

FinCategory decode_category(const json& j);
FinFunctor decode_functor(const json& j);
FinDoubleCategory decode_double(const json& j);
MarkedDoubleCategory decode_marked(const json& j);
DoubleFunctor decode_double_functor(const json& j);
FinTwoCategory decode_two_category(const json& j);
TwoFunctor decode_two_functor(const json& j);
// A cat-valued-functor payload has base_kind "category" or "two-category".
bool is_two_level(const json& cat_valued_payload);
CatValuedFunctor decode_cat_valued(const json& j);
TwoCatValuedFunctor decode_two_cat_valued(const json& j);

Instance make_instance(const std::string& kind, const std::string& name, json payload,
                       const std::string& provenance = "", std::optional<std::uint64_t> seed = std::nullopt);

json report_json(const Report& r);
json certificate_json(const FibrationCertificate& c);
json certificate_json(const ReflectionCertificate& c);
json certificate_json(const TwoFibrationCertificate& c);
json comparison_json(const DegreeComparison& c);
// Provenance of reflected cells in terms of the input's cells.
json provenance_json(const Reflection& r);

// Horizontal arrows solid, vertical arrows dashed, one cluster per square.
std::string export_dot(const FinDoubleCategory& d, const std::string& name);

}  // namespace dblcat
