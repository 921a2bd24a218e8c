#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "mms/graph.hpp"
#include "mms/model_spaces.hpp"
#include "mms/modulus.hpp"
#include "mms/polar.hpp"

namespace mms::io {

using Json = nlohmann::json;

/// Shortest round-trip decimal form; "inf", "-inf" and "nan" for non-finite values.
std::string format_double(double x);

/// JSON number for finite values, the format_double string otherwise.
Json number(double x);

/// Parses text; malformed input throws InvalidInput with line and column.
Json parse_json(const std::string& text, const std::string& origin = "input");
Json load_json(const std::string& path);

/// Canonical text: sorted keys, two-space indent, trailing newline.
std::string dump(const Json& j);

/// Writes through a temporary file and a rename; "-" writes to stdout.
void write_output(const std::string& path, const std::string& content);

Json to_json(const AsymptoticClass& c);
AsymptoticClass asymptotic_from_json(const Json& j);
Json to_json(const RadialFunction& f);
RadialFunction radial_from_json(const Json& j);

/// {"nodes":[{"id","mass"[,"pos"]}], "edges":[{"u","v","len"}], "base", ["kind"], ["asymptotic_class"]}
Json to_json(const SpaceGraph& g);
SpaceGraph graph_from_json(const Json& j);

/// {"schema":"mms/1", "variant", "params", ["declared_class"], ["j_min"]}
bool is_model_json(const Json& j);
Json to_json(const ModelSpace& m);
ModelSpace model_from_json(const Json& j);

/// {"paths":[[id, id, ...], ...]} with node ids.
ExplicitPaths paths_from_json(const SpaceGraph& g, const Json& j);

/// {"weights":[...], "curves":[[[x, y], ...], ...], "h":[[...], ...], "C":c}
/// Arc length is the cumulative Euclidean spacing.
PolarSystem polar_from_json(const Json& j);

/// CSV with "# key=value" header lines, one header row and '.' decimals.
class Csv {
 public:
  explicit Csv(std::vector<std::string> columns) : columns_(std::move(columns)) {}
  void comment(const std::string& key, const std::string& value) { comments_.emplace_back(key, value); }
  Csv& row() {
    rows_.emplace_back();
    return *this;
  }
  Csv& add(const std::string& cell);
  Csv& add(const char* cell) { return add(std::string(cell)); }
  Csv& add(double x) { return add(format_double(x)); }
  Csv& add(long long x) { return add(std::to_string(x)); }
  Csv& add(int x) { return add(std::to_string(x)); }
  Csv& add(std::size_t x) { return add(std::to_string(x)); }
  Csv& add(bool b) { return add(std::string(b ? "true" : "false")); }
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::pair<std::string, std::string>> comments_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace mms::io
