#include "mms/io.hpp"

#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <sstream>
#include <unistd.h>

#include "mms/error.hpp"

namespace mms::io {

std::string format_double(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, res.ptr);
}

Json number(double x) {
  if (std::isfinite(x)) return x;
  return format_double(x);
}

Json parse_json(const std::string& text, const std::string& origin) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    // byte offset to line and column
    std::size_t line = 1, col = 1;
    const std::size_t end = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < end; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw Error(ErrorKind::InvalidInput, origin + ":" + std::to_string(line) + ":" + std::to_string(col) +
                                             ": malformed JSON");
  }
}

Json load_json(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::InvalidInput, "cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_json(ss.str(), path);
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

void write_output(const std::string& path, const std::string& content) {
  if (path == "-") {
    std::cout << content;
    std::cout.flush();
    return;
  }
  const std::filesystem::path target(path);
  std::filesystem::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorKind::InvalidInput, "cannot write " + tmp.string());
    out << content;
    out.flush();
    if (!out) throw Error(ErrorKind::InvalidInput, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, target);
}

namespace {

const Json& field(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw Error(ErrorKind::InvalidInput, std::string("missing field \"") + key + "\"");
  return j.at(key);
}

double real(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number()) throw Error(ErrorKind::InvalidInput, std::string("field \"") + key + "\" must be a number");
  return v.get<double>();
}

double real_or(const Json& j, const char* key, double def) { return j.contains(key) ? real(j, key) : def; }

std::int64_t integer(const Json& j, const char* key) {
  const Json& v = field(j, key);
  if (!v.is_number_integer()) throw Error(ErrorKind::InvalidInput, std::string("field \"") + key + "\" must be an integer");
  return v.get<std::int64_t>();
}

}  // namespace

Json to_json(const AsymptoticClass& c) {
  switch (c.kind) {
    case AsymptoticClass::Kind::Polynomial: return {{"kind", "polynomial"}, {"parameter", c.parameter}};
    case AsymptoticClass::Kind::Geometric: return {{"kind", "geometric"}, {"parameter", c.parameter}};
    case AsymptoticClass::Kind::Exponential: return {{"kind", "exponential"}};
    case AsymptoticClass::Kind::Unknown: return {{"kind", "unknown"}};
  }
  return {};
}

AsymptoticClass asymptotic_from_json(const Json& j) {
  const Json& k = field(j, "kind");
  if (!k.is_string()) throw Error(ErrorKind::InvalidInput, "asymptotic class kind must be a string");
  const std::string kind = k.get<std::string>();
  if (kind == "polynomial") return AsymptoticClass::polynomial(real(j, "parameter"));
  if (kind == "geometric") return AsymptoticClass::geometric(real(j, "parameter"));
  if (kind == "exponential") return AsymptoticClass::exponential();
  if (kind == "unknown") return AsymptoticClass::unknown();
  throw Error(ErrorKind::InvalidInput, "unknown asymptotic class \"" + kind + "\"");
}

Json to_json(const RadialFunction& f) {
  return {{"coeff", f.coeff}, {"exponent", f.exponent}, {"rate", f.rate}, {"cutoff", f.cutoff}};
}

RadialFunction radial_from_json(const Json& j) {
  return {real_or(j, "coeff", 1.0), real_or(j, "exponent", 0.0), real_or(j, "rate", 0.0), real_or(j, "cutoff", 0.0)};
}

Json to_json(const SpaceGraph& g) {
  Json nodes = Json::array();
  for (Index v = 0; v < g.size(); ++v) {
    Json node{{"id", g.ids()[v]}, {"mass", g.mass(v)}};
    if (g.has_positions()) {
      Json pos = Json::array();
      for (Index r = 0; r < g.positions().rows(); ++r) pos.push_back(g.positions()(r, v));
      node["pos"] = std::move(pos);
    }
    nodes.push_back(std::move(node));
  }
  Json edges = Json::array();
  for (const Edge& e : g.edges()) edges.push_back({{"u", g.ids()[e.u]}, {"v", g.ids()[e.v]}, {"len", e.length}});
  Json j{{"nodes", std::move(nodes)}, {"edges", std::move(edges)}, {"base", g.ids()[g.base()]}};
  if (!g.kind.empty()) j["kind"] = g.kind;
  if (g.declared_class) j["asymptotic_class"] = to_json(*g.declared_class);
  return j;
}

SpaceGraph graph_from_json(const Json& j) {
  const Json& nodes = field(j, "nodes");
  const Json& edges = field(j, "edges");
  if (!nodes.is_array() || !edges.is_array()) throw Error(ErrorKind::InvalidInput, "nodes and edges must be arrays");
  const Index n = static_cast<Index>(nodes.size());
  NodeField masses(n);
  std::vector<std::int64_t> ids;
  std::map<std::int64_t, Index> index;
  Eigen::MatrixXd pos;
  int dim = -1;
  for (Index v = 0; v < n; ++v) {
    const Json& node = nodes[static_cast<std::size_t>(v)];
    const std::int64_t id = integer(node, "id");
    if (!index.emplace(id, v).second) throw Error(ErrorKind::InvalidInput, "duplicate node id " + std::to_string(id));
    ids.push_back(id);
    masses[v] = real(node, "mass");
    if (node.contains("pos")) {
      const Json& p = node.at("pos");
      if (!p.is_array()) throw Error(ErrorKind::InvalidInput, "pos must be an array");
      if (dim < 0) {
        dim = static_cast<int>(p.size());
        pos.resize(dim, n);
      }
      if (static_cast<int>(p.size()) != dim) throw Error(ErrorKind::InvalidInput, "inconsistent position dimension");
      for (int r = 0; r < dim; ++r) pos(r, v) = p[static_cast<std::size_t>(r)].get<double>();
    } else if (dim >= 0) {
      throw Error(ErrorKind::InvalidInput, "positions must be given for all nodes or none");
    }
  }
  auto lookup = [&](std::int64_t id) {
    const auto it = index.find(id);
    if (it == index.end()) throw Error(ErrorKind::InvalidInput, "edge refers to unknown node " + std::to_string(id));
    return it->second;
  };
  std::vector<Edge> list;
  for (const Json& e : edges) list.push_back({lookup(integer(e, "u")), lookup(integer(e, "v")), real(e, "len")});
  SpaceGraph g(std::move(masses), std::move(list), lookup(integer(j, "base")), std::move(ids), std::move(pos));
  if (j.contains("kind")) g.kind = j.at("kind").get<std::string>();
  if (j.contains("asymptotic_class")) g.declared_class = asymptotic_from_json(j.at("asymptotic_class"));
  return g;
}

bool is_model_json(const Json& j) { return j.is_object() && j.contains("schema") && j.at("schema") == "mms/1"; }

Json to_json(const ModelSpace& m) {
  Json params;
  std::string variant;
  std::visit(
      [&](const auto& v) {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AhlforsModel>) {
          variant = "ahlfors";
          params = {{"Q", v.Q}, {"constant", v.constant}};
        } else if constexpr (std::is_same_v<T, WeightedHalfLine>) {
          variant = "halfline";
          params = {{"weight", to_json(v.weight)}};
        } else if constexpr (std::is_same_v<T, PowerWeightedEuclidean>) {
          variant = "power_weighted";
          params = {{"n", v.n}, {"alpha", v.alpha}};
        } else {
          variant = "tree";
          params = {{"K", v.K}, {"edge_measure", to_json(v.edge_measure)}, {"edge_length", to_json(v.edge_length)}};
        }
      },
      m.variant);
  Json j{{"schema", "mms/1"}, {"variant", variant}, {"params", params}, {"j_min", m.j_min}};
  if (m.declared_class) j["declared_class"] = to_json(*m.declared_class);
  return j;
}

ModelSpace model_from_json(const Json& j) {
  if (!is_model_json(j)) throw Error(ErrorKind::InvalidInput, "model space JSON needs \"schema\": \"mms/1\"");
  const std::string variant = field(j, "variant").get<std::string>();
  const Json params = j.contains("params") ? j.at("params") : Json::object();
  ModelSpace m;
  if (variant == "ahlfors") {
    m.variant = AhlforsModel{real(params, "Q"), real_or(params, "constant", 1.0)};
  } else if (variant == "halfline") {
    m.variant = WeightedHalfLine{params.contains("weight") ? radial_from_json(params.at("weight")) : RadialFunction::constant(1.0)};
  } else if (variant == "power_weighted") {
    m.variant = PowerWeightedEuclidean{static_cast<int>(integer(params, "n")), real_or(params, "alpha", 0.0)};
  } else if (variant == "tree") {
    KRegularTree t;
    t.K = static_cast<int>(integer(params, "K"));
    if (params.contains("edge_measure")) t.edge_measure = radial_from_json(params.at("edge_measure"));
    if (params.contains("edge_length")) t.edge_length = radial_from_json(params.at("edge_length"));
    m.variant = t;
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown model variant \"" + variant + "\"");
  }
  if (j.contains("declared_class")) m.declared_class = asymptotic_from_json(j.at("declared_class"));
  if (j.contains("j_min")) m.j_min = static_cast<int>(integer(j, "j_min"));
  return m;
}

ExplicitPaths paths_from_json(const SpaceGraph& g, const Json& j) {
  std::map<std::int64_t, Index> index;
  for (Index v = 0; v < g.size(); ++v) index.emplace(g.ids()[v], v);
  ExplicitPaths out;
  for (const Json& p : field(j, "paths")) {
    Path path;
    for (const Json& id : p) {
      const auto it = index.find(id.get<std::int64_t>());
      if (it == index.end()) throw Error(ErrorKind::InvalidInput, "path refers to unknown node");
      path.push_back(it->second);
    }
    out.paths.push_back(std::move(path));
  }
  return out;
}

PolarSystem polar_from_json(const Json& j) {
  PolarSystem sys;
  sys.name = j.value("name", std::string("custom"));
  sys.C = real(j, "C");
  sys.weights = field(j, "weights").get<std::vector<double>>();
  const Json& curves = field(j, "curves");
  const Json& hs = field(j, "h");
  if (curves.size() != hs.size()) throw Error(ErrorKind::InvalidInput, "one h list per curve");
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const auto pts = curves[i].get<std::vector<std::vector<double>>>();
    if (pts.empty()) throw Error(ErrorKind::InvalidInput, "empty curve");
    PolarCurve c;
    const Index dim = static_cast<Index>(pts.front().size());
    c.points.resize(dim, static_cast<Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) {
      if (static_cast<Index>(pts[k].size()) != dim) throw Error(ErrorKind::InvalidInput, "inconsistent point dimension");
      for (Index r = 0; r < dim; ++r) c.points(r, static_cast<Index>(k)) = pts[k][static_cast<std::size_t>(r)];
      c.s.push_back(k == 0 ? 0.0
                           : c.s.back() + (c.points.col(static_cast<Index>(k)) - c.points.col(static_cast<Index>(k - 1))).norm());
    }
    c.h = hs[i].get<std::vector<double>>();
    sys.curves.push_back(std::move(c));
  }
  if (!sys.curves.empty()) sys.origin = sys.curves.front().points.col(0);
  sys.validate();
  return sys;
}

Csv& Csv::add(const std::string& cell) {
  if (rows_.empty()) rows_.emplace_back();
  rows_.back().push_back(cell);
  return *this;
}

std::string Csv::str() const {
  std::ostringstream os;
  for (const auto& [k, v] : comments_) os << "# " << k << "=" << v << "\n";
  auto quote = [](const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) {
      if (c == '"') q += '"';
      q += c;
    }
    return q + "\"";
  };
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << quote(columns_[i]);
  os << "\n";
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << quote(r[i]);
    os << "\n";
  }
  return os.str();
}

}  // namespace mms::io
