#include "mms/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <numbers>
#include <sstream>
#include <thread>
#include <variant>

#include "mms/chain.hpp"
#include "mms/counterexample.hpp"
#include "mms/error.hpp"
#include "mms/experiments.hpp"
#include "mms/generators.hpp"
#include "mms/growth.hpp"
#include "mms/io.hpp"
#include "mms/modulus.hpp"
#include "mms/polar.hpp"

namespace mms::cli {

namespace {

using io::Json;
constexpr double kPi = std::numbers::pi;

// Resolves each setting as flag > config file > default and records the
// winning value for the output header.
class Settings {
 public:
  void load(const std::string& path) {
    if (path.empty()) return;
    config_ = io::load_json(path);
    if (!config_.is_object()) throw Error(ErrorKind::InvalidInput, path + ": config must be a JSON object");
    record("config", path);
  }

  template <typename T>
  T get(const std::string& key, const CLI::Option* flag, const T& flag_value, const T& fallback) {
    T v = fallback;
    if (flag != nullptr && flag->count() > 0) {
      v = flag_value;
    } else if (config_.contains(key)) {
      try {
        v = config_.at(key).get<T>();
      } catch (const Json::exception&) {
        throw Error(ErrorKind::InvalidInput, "config value \"" + key + "\" has the wrong type");
      }
    }
    record(key, show(v));
    return v;
  }

  const Json& config() const { return config_; }
  void record(const std::string& key, const std::string& value) { echo_.emplace_back(key, value); }

  Json json() const {
    Json j = Json::object();
    for (const auto& [k, v] : echo_) j[k] = v;
    return j;
  }
  void annotate(io::Csv& csv) const {
    for (const auto& [k, v] : echo_) csv.comment(k, v);
  }

 private:
  static std::string show(const std::string& s) { return s; }
  static std::string show(double x) { return io::format_double(x); }
  static std::string show(int x) { return std::to_string(x); }
  static std::string show(bool b) { return b ? "true" : "false"; }
  template <typename T>
  static std::string show(const std::vector<T>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + show(v[i]);
    return s;
  }

  Json config_ = Json::object();
  std::vector<std::pair<std::string, std::string>> echo_;
};

std::string threads_setting() {
  const char* env = std::getenv("MMS_THREADS");
  if (env != nullptr && *env != '\0') return env;
  return std::to_string(std::max(1u, std::thread::hardware_concurrency()));
}

// Every subcommand reports through this
struct Output {
  std::string path = "-";
  void json(Json j, const Settings& s) const {
    j["settings"] = s.json();
    io::write_output(path, io::dump(j));
  }
  void csv(io::Csv& c, const Settings& s) const {
    s.annotate(c);
    io::write_output(path, c.str());
  }
};

using Space = std::variant<SpaceGraph, ModelSpace>;

Space load_space(const std::string& path) {
  const Json j = io::load_json(path);
  if (io::is_model_json(j)) return io::model_from_json(j);
  return io::graph_from_json(j);
}

SpaceGraph load_graph(const std::string& path) {
  Space s = load_space(path);
  if (auto* g = std::get_if<SpaceGraph>(&s)) return std::move(*g);
  throw Error(ErrorKind::InvalidInput, path + " is a model space; this command needs a graph");
}

Json ids_of(const SpaceGraph& g, const Path& p) {
  Json a = Json::array();
  for (Index v : p) a.push_back(g.ids()[v]);
  return a;
}

Json report_json(const GrowthReport& r) {
  Json j{{"p", r.p}, {"kind", to_string(r.kind)}, {"basis", to_string(r.basis)}, {"first_index", r.first_index}};
  j["value"] = r.value ? io::number(*r.value) : Json(nullptr);
  Json terms = Json::array(), partial = Json::array();
  for (double t : r.terms) terms.push_back(io::number(t));
  for (double t : r.partial) partial.push_back(io::number(t));
  j["terms"] = std::move(terms);
  j["partial"] = std::move(partial);
  return j;
}

Json modulus_json(const SpaceGraph& g, const ModulusResult& m) {
  Json j{{"status", to_string(m.status)},   {"value", io::number(m.value)},
         {"lower_bound", io::number(m.lower_bound)}, {"upper_bound", io::number(m.upper_bound)},
         {"min_length", io::number(m.min_length)},   {"iterations", m.iterations},
         {"active_paths", m.active_paths.size()},    {"note", m.note},
         {"gap", io::number(m.gap())},               {"kkt_residual", io::number(m.kkt_residual)},
         {"lp_optimal", m.lp_optimal}};
  Json density = Json::object();
  for (Index v = 0; v < m.density.size(); ++v) {
    if (m.density[v] != 0.0) density[std::to_string(g.ids()[v])] = m.density[v];
  }
  j["density"] = std::move(density);
  return j;
}

// ---------------------------------------------------------------- generate

struct GenerateArgs {
  std::string kind;
  int n = 2, half_width = 16, K = 2, depth = 6, half_length = 32;
  double ratio = 1.0, first_length = 1.0, length = 64.0, step = 1.0;
  bool diagonals = false, split = false;
  Output out;
};

int run_generate(const GenerateArgs& a, const Settings& s) {
  SpaceGraph g = [&] {
    if (a.kind == "grid") return gen::grid(a.n, a.half_width, a.diagonals);
    if (a.kind == "tree") return gen::tree(a.K, a.depth, a.first_length, a.ratio, a.split ? gen::TreeMass::Split : gen::TreeMass::Voronoi);
    if (a.kind == "halfline") return gen::halfline(a.length, a.step);
    if (a.kind == "line") return gen::two_ended_line(a.half_length);
    throw Error(ErrorKind::InvalidInput, "unknown generator \"" + a.kind + "\" (grid, tree, halfline, line)");
  }();
  (void)s;
  io::write_output(a.out.path, io::dump(io::to_json(g)));
  return Success;
}

// ---------------------------------------------------------------- criteria

struct CriteriaArgs {
  std::string space;
  std::vector<double> p;
  int levels = 40;
  double R = 1e6;
  std::vector<double> h;  // coeff, exponent[, rate, cutoff]
  Output out;
  CLI::Option *levels_opt = nullptr, *R_opt = nullptr, *h_opt = nullptr;
};

int run_criteria(const CriteriaArgs& a, Settings& s) {
  const Space space = load_space(a.space);
  // one row per term; the verdict columns repeat on every row
  io::Csv csv({"functional", "p", "j", "term", "partial", "classification", "basis", "value"});
  auto emit = [&](const char* name, const GrowthReport& r) {
    const std::string value = r.value ? io::format_double(*r.value) : std::string("");
    for (std::size_t i = 0; i < r.terms.size(); ++i) {
      csv.row().add(name).add(r.p).add(r.first_index + static_cast<int>(i)).add(r.terms[i]).add(r.partial[i]);
      csv.add(to_string(r.kind)).add(to_string(r.basis)).add(value);
    }
  };
  if (const auto* g = std::get_if<SpaceGraph>(&space)) {
    const RadialProfile profile = graph_profile(*g, 0);
    s.record("profile", "graph annuli j=0.." + std::to_string(profile.j_max()) + " class " +
                            to_string(profile.asymptotic));
    for (double p : a.p) emit("script_R", script_R(profile, p));
  } else {
    const ModelSpace& m = std::get<ModelSpace>(space);
    const int levels = s.get("jmax", a.levels_opt, a.levels, 40);
    const RadialProfile profile = annulus_masses(m, levels);
    s.record("profile", m.name() + " annuli j=" + std::to_string(profile.j_min) + ".." + std::to_string(profile.j_max()));
    std::optional<RadialFunction> h;
    if (a.h_opt->count() > 0) {
      if (a.h.size() < 2 || a.h.size() > 4) throw Error(ErrorKind::InvalidInput, "--weight takes coeff,exponent[,rate[,cutoff]]");
      h = RadialFunction{a.h[0], a.h[1], a.h.size() > 2 ? a.h[2] : 0.0, a.h.size() > 3 ? a.h[3] : 0.0};
    }
    const double R = s.get("R", a.R_opt, a.R, 1e6);
    for (double p : a.p) {
      emit("script_R", script_R(profile, p));
      if (h) emit("R_weight", R_weight(m, *h, p, R));
    }
  }
  a.out.csv(csv, s);
  return Success;
}

// ---------------------------------------------------------------- modulus

struct ModulusArgs {
  std::string space, family = "condenser", paths, method = "auto";
  double p = 2.0, R = 8.0, inner = 1.0;
  std::vector<double> radii;
  Output out;
  CLI::Option *radii_opt = nullptr;
};

ModulusOptions::Method parse_method(const std::string& m) {
  if (m == "auto") return ModulusOptions::Method::Auto;
  if (m == "cg") return ModulusOptions::Method::ConstraintGeneration;
  if (m == "potential") return ModulusOptions::Method::Potential;
  throw Error(ErrorKind::InvalidInput, "unknown method \"" + m + "\" (auto, cg, potential)");
}

int run_modulus(const ModulusArgs& a, Settings& s) {
  const SpaceGraph g = load_graph(a.space);
  ModulusOptions opts;
  opts.method = parse_method(a.method);
  s.record("p", io::format_double(a.p));
  s.record("method", a.method);
  Json j;
  bool ok = true;
  if (a.radii_opt->count() > 0) {
    s.record("family", "condenser-sequence");
    Json steps = Json::array();
    for (const CondenserStep& st : condenser_sequence(g, a.p, a.radii, opts)) {
      Json row = modulus_json(g, st.result);
      row.erase("density");
      row["radius"] = st.radius;
      row["truncated_growth"] = io::number(st.truncated_growth);
      row["product"] = io::number(st.product);
      ok = ok && st.result.status != ModulusResult::Status::NonConverged;
      steps.push_back(std::move(row));
    }
    j["steps"] = std::move(steps);
  } else if (a.family == "condenser") {
    s.record("family", "condenser");
    s.record("R", io::format_double(a.R));
    s.record("inner", io::format_double(a.inner));
    const ModulusResult m = modulus(g, truncated_condenser(g, a.R, a.inner), a.p, opts);
    ok = m.status != ModulusResult::Status::NonConverged;
    j = modulus_json(g, m);
  } else {
    // --family paths --paths f.json, or --family f.json
    const std::string file = a.family == "paths" ? a.paths : a.family;
    if (file.empty()) throw Error(ErrorKind::InvalidInput, "--family paths needs --paths file.json");
    s.record("family", file);
    const ModulusResult m = modulus(g, io::paths_from_json(g, io::load_json(file)), a.p, opts);
    ok = m.status != ModulusResult::Status::NonConverged;
    j = modulus_json(g, m);
    Json active = Json::array();
    for (const Path& p : m.active_paths) active.push_back(ids_of(g, p));
    j["active"] = std::move(active);
  }
  a.out.json(std::move(j), s);
  return ok ? Success : CheckFailed;
}

// ---------------------------------------------------------------- counterexample

struct CounterexampleArgs {
  std::string space, profile;
  double p = 2.0;
  int blocks = 8, levels = 40, rays = 1;
  std::optional<int> start;
  std::vector<double> thresholds{1.0, 2.0, 3.0};
  Output out;
  CLI::Option *thresholds_opt = nullptr;
};

int run_counterexample(const CounterexampleArgs& a, Settings& s) {
  const SpaceGraph g = load_graph(a.space);
  RadialProfile profile;
  if (!a.profile.empty()) {
    profile = annulus_masses(io::model_from_json(io::load_json(a.profile)), a.levels);
    s.record("profile", a.profile);
  } else {
    profile = graph_profile(g, 0);
    s.record("profile", "graph annuli, class " + to_string(profile.asymptotic));
  }
  s.record("p", io::format_double(a.p));
  s.record("blocks", std::to_string(a.blocks));
  GreedyOptions gopts;
  gopts.start = a.start;
  if (a.start) s.record("start", std::to_string(*a.start));
  Json j;
  j["series"] = report_json(script_R(profile, a.p));
  BlockSequence blocks;
  try {
    blocks = greedy_blocks(profile, a.p, a.blocks, gopts);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::Precondition) throw;
    j["refused"] = e.what();
    a.out.json(std::move(j), s);
    return CheckFailed;
  }
  j["indices"] = blocks.indices;
  Json sums = Json::array();
  for (double x : blocks.sums) sums.push_back(io::number(x));
  j["sums"] = std::move(sums);
  j["exhausted"] = blocks.exhausted;
  j["built"] = blocks.blocks();

  const BlockDensity d = build_density(profile, blocks);
  j["budget"] = io::number(d.budget);
  j["partial_bound"] = io::number(d.partial_bound);
  j["series_bound"] = io::number(d.series_bound);
  j["within_bound"] = d.within_bound();
  j["block_contributions"] = d.block_contributions;
  j["density"] = d.values;

  const NodeField u = distance_function(g, profile, d);
  // rays to the farthest nodes, one per requested ray
  std::vector<Index> order(static_cast<std::size_t>(g.size()));
  for (Index v = 0; v < g.size(); ++v) order[v] = v;
  std::stable_sort(order.begin(), order.end(), [&](Index x, Index y) { return g.radius(x) > g.radius(y); });
  std::vector<Path> rays;
  for (int k = 0; k < a.rays && k < g.size(); ++k) rays.push_back(ray_to(g, order[k]));
  const std::vector<double> thresholds = s.get("thresholds", a.thresholds_opt, a.thresholds, a.thresholds);
  const DivergenceReport div = divergence_check(g, u, rays, thresholds);
  Json rj = Json::array();
  for (std::size_t i = 0; i < div.rays.size(); ++i) {
    Json crossings = Json::array();
    for (const auto& r : div.rays[i].radii) crossings.push_back(r ? io::number(*r) : Json(nullptr));
    rj.push_back({{"target", g.ids()[rays[i].back()]},
                  {"crossing_radii", std::move(crossings)},
                  {"monotone", div.rays[i].monotone},
                  {"final_value", io::number(div.rays[i].final_value)},
                  {"final_radius", io::number(div.rays[i].final_radius)}});
  }
  j["rays"] = std::move(rj);
  j["divergence_pass"] = div.pass;
  if (!div.note.empty()) j["note"] = div.note;
  a.out.json(std::move(j), s);
  return (!blocks.exhausted && d.within_bound() && div.pass) ? Success : CheckFailed;
}

// ---------------------------------------------------------------- polar-verify

struct PolarArgs {
  std::string system = "euclidean2", custom;
  int directions = 256, depth = 4, cells = 1000;
  double step = 0.01, length = 6.0, tol = 1e-3, identity_tol = 0.02;
  Output out;
  CLI::Option *directions_opt = nullptr, *step_opt = nullptr, *length_opt = nullptr, *depth_opt = nullptr,
              *cells_opt = nullptr;
};

PointFunction radial(std::function<double(double)> f) {
  return [f = std::move(f)](PointRef x) { return f(x.norm()); };
}

int run_polar(const PolarArgs& a, Settings& s) {
  const std::string name = s.get<std::string>("system", nullptr, a.system, a.system);
  const bool wedge = name.rfind("wedge", 0) == 0;
  const bool cantor = name == "cantor";
  polar::Sampling sm;
  sm.directions = s.get("directions", a.directions_opt, a.directions, wedge || cantor ? 128 : 256);
  sm.step = s.get("step", a.step_opt, a.step, 0.01);
  sm.length = s.get("length", a.length_opt, a.length, cantor ? 2.0 : wedge ? 8.0 : 6.0);
  const int cells = s.get("cells", a.cells_opt, a.cells, 1000);
  const int depth = s.get("depth", a.depth_opt, a.depth, 4);

  PolarSystem sys;
  std::vector<PolarTestFunction> tests;
  VolumeIntegrator volume;
  const double T = sm.length;
  if (name == "euclidean2" || name == "euclidean3") {
    const int n = name == "euclidean2" ? 2 : 3;
    sys = polar::euclidean_spherical(n, sm);
    tests = {{"disc", radial([](double r) { return r < 1.0 ? 1.0 : 0.0; })},
             {"gaussian", radial([T](double r) { return r < T ? std::exp(-r * r) : 0.0; })},
             {"annulus", radial([](double r) { return r >= 1.0 && r < 2.0 ? 1.0 : 0.0; })}};
    volume = [n, T, cells](const PointFunction& f) { return polar::euclidean_volume(f, n, T, n == 2 ? cells : cells / 8); };
  } else if (wedge) {
    sys = polar::wedge_strip(std::stoi(name.substr(5)), sm);
    tests = {{"strip-box", [](PointRef x) { return x[0] >= -3.0 && x[0] < -2.0 && std::abs(x[1]) < 0.5 ? 1.0 : 0.0; }},
             {"gaussian", [](PointRef x) { return std::exp(-(x[0] + 4.0) * (x[0] + 4.0) - x[1] * x[1]); }},
             {"sector", [](PointRef x) {
                const double r = x.norm(), th = std::atan2(x[1], x[0]);
                return r >= 1.0 && r < 3.0 && th >= 0.0 && th < kPi / 8.0 ? 1.0 : 0.0;
              }}};
    volume = [T, cells](const PointFunction& f) { return polar::wedge_volume(f, T, cells); };
  } else if (cantor) {
    sys = polar::cantor_diamond(depth, sm);
    tests = {{"diamond", [](PointRef x) { return x[0] > 1.0 / 3.0 && x[0] < 2.0 / 3.0 ? 1.0 : 0.0; }},
             {"one", [](PointRef) { return 1.0; }},
             {"decay", [](PointRef x) { return std::exp(-x[0]) * (1.0 + x[1]); }}};
    volume = [depth, T, cells](const PointFunction& f) { return polar::cantor_volume(f, depth, T, cells / 10); };
  } else if (name == "tree") {
    const RadialFunction mu = RadialFunction::exponential(1.0, -std::log(2.0));
    const RadialFunction lambda = RadialFunction::constant(1.0);
    sys = polar::tree_polar(2, depth, mu, lambda, sm.step);
    tests = {{"decay", [](PointRef x) { return std::exp(-x[1]); }},
             {"near-root", [](PointRef x) { return x[1] <= 2.0 ? 1.0 : 0.0; }},
             {"even-vertices", [](PointRef x) { return std::fmod(x[0], 2.0) == 0.0 ? 1.0 : 0.5; }}};
    volume = [depth, mu, cells](const PointFunction& f) { return polar::tree_volume(f, 2, depth, mu, cells); };
  } else if (name == "custom") {
    if (a.custom.empty()) throw Error(ErrorKind::InvalidInput, "--system custom needs --custom file.json");
    s.record("custom", a.custom);
    sys = io::polar_from_json(io::load_json(a.custom));
    double reach = 0.0;
    for (const PolarCurve& c : sys.curves) reach = std::max(reach, c.points.cwiseAbs().maxCoeff());
    const int n = static_cast<int>(sys.curves.front().points.rows());
    tests = {{"disc", radial([](double r) { return r < 1.0 ? 1.0 : 0.0; })},
             {"gaussian", radial([](double r) { return std::exp(-r * r); })}};
    volume = [n, reach, cells](const PointFunction& f) { return polar::euclidean_volume(f, n, reach, cells); };
  } else {
    throw Error(ErrorKind::InvalidInput, "unknown system \"" + name + "\" (euclidean2, euclidean3, wedge1..3, cantor, tree, custom)");
  }
  s.record("C", io::format_double(sys.C));

  PolarVerifyOptions opts;
  opts.tol = a.tol;
  opts.identity_tol = a.identity_tol;
  const PolarReport rep = verify_polar(sys, tests, volume, opts);
  Json rows = Json::array();
  for (const PolarRatio& r : rep.rows) {
    rows.push_back({{"name", r.name},
                    {"lhs", io::number(r.lhs)},
                    {"rhs", io::number(r.rhs)},
                    {"ratio", io::number(r.ratio)},
                    {"error_estimate", io::number(r.error_estimate)},
                    {"skipped", r.skipped},
                    {"violated", r.violated}});
  }
  Json j{{"system", sys.name}, {"identity", sys.identity}, {"rows", std::move(rows)},
         {"max_ratio", io::number(rep.max_ratio)}, {"pass", rep.pass}};
  if (!rep.note.empty()) j["note"] = rep.note;
  a.out.json(std::move(j), s);
  return rep.pass ? Success : CheckFailed;
}

// ---------------------------------------------------------------- chain-check

struct ChainArgs {
  std::string space;
  double lambda = 1.0;
  std::vector<double> radii;
  int pairs = 8;
  Output out;
  CLI::Option *radii_opt = nullptr, *lambda_opt = nullptr, *pairs_opt = nullptr;
};

int run_chain(const ChainArgs& a, Settings& s) {
  const SpaceGraph g = load_graph(a.space);
  std::vector<double> fallback;
  for (double r = 4.0; r <= g.max_radius() / 2.0; r *= 2.0) fallback.push_back(r);
  const double lambda = s.get("lambda", a.lambda_opt, a.lambda, 1.0);
  const std::vector<double> radii = s.get("radii", a.radii_opt, a.radii, fallback);
  const int pairs = s.get("pairs", a.pairs_opt, a.pairs, 8);
  if (pairs < 1) throw Error(ErrorKind::InvalidInput, "--pairs must be positive");
  const ChainReport rep = chain_check(g, lambda, radii, static_cast<std::size_t>(pairs));
  Json j{{"outcome", to_string(rep.outcome)}, {"lambda", rep.lambda}, {"tested_radii", rep.tested_radii},
         {"empty_radii", rep.empty_radii}, {"pairs_tested", rep.pairs_tested}, {"note", rep.note}};
  if (rep.constants) {
    const ChainConstants& k = *rep.constants;
    j["constants"] = {{"c1", k.c1}, {"c2", k.c2}, {"delta", k.delta}, {"M", k.M}};
    bool verified = true;
    for (const BallChain& c : rep.chains) verified = verified && verify_chain(g, lambda, k, c);
    j["chains"] = rep.chains.size();
    j["chains_verified"] = verified;
  }
  if (rep.witness) {
    const auto& [r, xy] = *rep.witness;
    j["witness"] = {{"r", r}, {"x", g.ids()[xy.first]}, {"y", g.ids()[xy.second]}};
  }
  a.out.json(std::move(j), s);
  return rep.outcome == ChainReport::Outcome::Pass ? Success : CheckFailed;
}

// ---------------------------------------------------------------- experiment

struct ExperimentArgs {
  std::string name;
  std::vector<double> p, radii;
  int half_width = 64;
  Output out;
  CLI::Option *p_opt = nullptr, *radii_opt = nullptr, *hw_opt = nullptr;
};

SpaceGraph graph_from_config(const Json& spec) {
  if (spec.is_string()) return load_graph(spec.get<std::string>());
  const std::string kind = spec.value("generate", std::string("grid"));
  if (kind == "grid") return gen::grid(spec.value("n", 2), spec.value("half_width", 64), spec.value("diagonals", true));
  if (kind == "halfline") return gen::halfline(spec.value("length", 1024.0), spec.value("step", 1.0));
  if (kind == "line") return gen::two_ended_line(spec.value("half_length", 32));
  if (kind == "tree") return gen::tree(spec.value("K", 2), spec.value("depth", 8));
  throw Error(ErrorKind::InvalidInput, "unknown graph generator \"" + kind + "\"");
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ";" : "") + io::format_double(v[i]);
  return s;
}

struct Thm12Spec {
  std::string name;
  SpaceGraph graph;
  ModelSpace model;
  std::vector<double> p, radii;
};

// Default cases: the 8-neighbour grid against the planar profile, and the
// half-line at p = 1.
std::vector<Thm12Spec> thm12_cases(const Json& cfg, int half_width) {
  std::vector<Thm12Spec> cases;
  auto from = [&](const Json& c, const std::string& fallback_name) {
    Thm12Spec t{c.value("name", fallback_name),
                graph_from_config(c.value("graph", Json{{"generate", "grid"}, {"half_width", half_width}})),
                c.contains("model") ? io::model_from_json(c.at("model")) : ModelSpace{AhlforsModel{2.0, kPi}, std::nullopt, 0},
                c.value("p", std::vector<double>{1.5, 2.0}),
                c.value("radii", std::vector<double>{4, 8, 16, 32, 64})};
    return t;
  };
  if (cfg.contains("cases")) {
    for (const Json& c : cfg.at("cases")) cases.push_back(from(c, "case" + std::to_string(cases.size() + 1)));
  } else if (cfg.contains("graph") || cfg.contains("model")) {
    cases.push_back(from(cfg, "custom"));
  } else {
    cases.push_back({"grid8-planar", gen::grid(2, half_width, true), ModelSpace{AhlforsModel{2.0, kPi}, std::nullopt, 0},
                     {1.5, 2.0}, {4, 8, 16, 32, 64}});
    cases.push_back({"halfline", gen::halfline(1024.0), ModelSpace{WeightedHalfLine{}, std::nullopt, 0}, {1.0},
                     {4, 16, 64, 256, 1000}});
  }
  return cases;
}

int run_thm12(const ExperimentArgs& a, Settings& s) {
  const Json& cfg = s.config();
  const int hw = s.get("half_width", a.hw_opt, a.half_width, 64);
  const int levels = cfg.value("levels", 320);
  s.record("levels", std::to_string(levels));
  if (a.p_opt->count() > 0) s.record("p", join(a.p));
  if (a.radii_opt->count() > 0) s.record("radii", join(a.radii));
  io::Csv csv({"space", "model", "p", "series", "series_value", "trend", "slope", "tail_spread", "radii",
               "condenser_values", "blocks_constructible", "consistent", "note"});
  bool all = true;
  for (const Thm12Spec& spec : thm12_cases(cfg, hw)) {
    Thm12Case c;
    c.name = spec.name;
    c.graph = &spec.graph;
    c.profile = annulus_masses(spec.model, levels);
    c.radii = a.radii_opt->count() > 0 ? a.radii : spec.radii;
    for (double p : a.p_opt->count() > 0 ? a.p : spec.p) {
      c.p = p;
      const Thm12Row row = thm12_probe(c);
      std::vector<double> values;
      for (const auto& st : row.condensers) values.push_back(st.result.value);
      csv.row().add(row.name).add(spec.model.name()).add(p).add(to_string(row.series.kind));
      csv.add(row.series.value ? io::format_double(*row.series.value) : std::string(""));
      csv.add(to_string(row.trend.trend)).add(row.trend.slope).add(row.trend.tail_spread);
      csv.add(join(c.radii)).add(join(values)).add(row.blocks_constructible).add(row.consistent);
      csv.add(row.note + row.blocks_note);
      all = all && row.consistent;
    }
  }
  a.out.csv(csv, s);
  return all ? Success : CheckFailed;
}

int run_thm13(const ExperimentArgs& a, Settings& s) {
  const Json& cfg = s.config();
  const int hw = s.get("half_width", a.hw_opt, a.half_width, 64);
  const SpaceGraph g = gen::grid(2, hw, true);
  // neighbouring rays at most one lattice unit apart at the largest radius
  int dirs = 8;
  while (dirs < 2.0 * kPi * hw) dirs *= 2;
  polar::Sampling sm;
  sm.directions = cfg.value("directions", dirs);
  sm.length = hw;
  sm.step = 0.25;
  const PolarSystem sys = polar::euclidean_spherical(2, sm);
  s.record("directions", std::to_string(sm.directions));
  std::vector<std::pair<std::string, RadialFunction>> weights;
  if (cfg.contains("h")) {
    weights.emplace_back("custom", io::radial_from_json(cfg.at("h")));
  } else {
    weights.emplace_back("h=r", RadialFunction::power(1.0, 1.0));
    weights.emplace_back("h=indicator", RadialFunction::constant(1.0).with_cutoff(1.0));
  }
  const std::vector<double> ps = s.get("p", a.p_opt, a.p, std::vector<double>{1.5, 2.0});
  std::vector<double> fallback;
  for (double r = 4.0; r <= hw; r *= 2.0) fallback.push_back(r);
  const std::vector<double> radii = s.get("radii", a.radii_opt, a.radii, fallback);
  Thm13Case c;
  c.space = ModelSpace{PowerWeightedEuclidean{2, 0.0}, std::nullopt, 0};
  c.graph = &g;
  c.system = &sys;
  c.radii = radii;
  c.profile_levels = cfg.value("levels", 320);
  io::Csv csv({"space", "weight", "p", "R_weight", "hat_trend", "hat_values", "series", "blocks_constructible",
               "violation", "note"});
  bool clean = true;
  for (double p : ps) {
    c.p = p;
    c.hat_values.clear();  // the hat family does not depend on h
    for (const auto& [label, h] : weights) {
      c.name = "euclidean-2";
      c.h = h;
      const Thm13Row row = thm13_sandwich(c);
      c.hat_values = row.hat_values;
      csv.row().add(row.name).add(label).add(p).add(to_string(row.weighted.kind)).add(to_string(row.trend.trend));
      csv.add(join(row.hat_values)).add(to_string(row.series.kind)).add(row.blocks_constructible).add(row.violation);
      csv.add(row.note);
      clean = clean && !row.violation;
    }
  }
  a.out.csv(csv, s);
  return clean ? Success : CheckFailed;
}

int run_two_ends(const ExperimentArgs& a, Settings& s) {
  const int half = s.config().value("half_length", 32);
  s.record("half_length", std::to_string(half));
  const SpaceGraph g = gen::two_ended_line(half);
  const std::vector<double> ps = s.get("p", a.p_opt, a.p, std::vector<double>{1.0, 2.0});
  io::Csv csv({"p", "tail_first", "tail_second", "energy", "upper_gradient_holds", "ends"});
  bool ok = true;
  for (double p : ps) {
    const TwoEndsDemo d = two_ends_demo(g, p);
    csv.row().add(p).add(d.tail_values.first).add(d.tail_values.second).add(d.energy).add(d.upper_gradient_holds).add(d.ends);
    ok = ok && d.upper_gradient_holds && std::isfinite(d.energy) && d.tail_values.first != d.tail_values.second;
  }
  a.out.csv(csv, s);
  return ok ? Success : CheckFailed;
}

int run_example43(const ExperimentArgs& a, Settings& s) {
  const Json& cfg = s.config();
  const int n = cfg.value("n", 2);
  const std::vector<double> alphas = cfg.value("alpha", std::vector<double>{-0.5, 0.0, 0.5});
  const std::vector<int> levels = cfg.value("levels", std::vector<int>{2, 4, 6, 8, 10});
  const double limit = cfg.value("band_limit", 4.0);
  s.record("n", std::to_string(n));
  s.record("alpha", join(alphas));
  s.record("band_limit", io::format_double(limit));
  const std::vector<double> ps = s.get("p", a.p_opt, a.p, std::vector<double>{1.0, 1.5});
  const auto rows = example43_sweep(n, alphas, ps, levels, limit);
  io::Csv csv({"alpha", "p", "skipped", "reason", "muckenhoupt", "band_min", "band_max", "spread", "asserted", "stable"});
  bool ok = true;
  for (const auto& r : rows) {
    csv.row().add(r.alpha).add(r.p).add(r.skipped).add(r.reason);
    csv.add(r.muckenhoupt ? io::format_double(*r.muckenhoupt) : std::string(""));
    csv.add(r.band.min).add(r.band.max).add(r.band.defined ? r.band.spread() : NAN).add(r.band.asserted).add(r.stable);
    ok = ok && (r.skipped || r.stable);
  }
  a.out.csv(csv, s);
  return ok ? Success : CheckFailed;
}

}  // namespace

int dispatch(int argc, const char* const* argv) {
  CLI::App app{"Discrete modulus, growth criteria and radial-limit experiments on metric measure spaces"};
  app.name("mms");
  app.require_subcommand(1);
  std::string config;
  Settings settings;

  GenerateArgs gen_args;
  auto* gen_cmd = app.add_subcommand("generate", "write a built-in space graph as JSON");
  gen_cmd->add_option("kind", gen_args.kind, "grid, tree, halfline or line")->required();
  gen_cmd->add_option("--n", gen_args.n, "grid dimension");
  gen_cmd->add_option("--half-width", gen_args.half_width, "grid half-width");
  gen_cmd->add_flag("--diagonals", gen_args.diagonals, "2-D grid with diagonal edges");
  gen_cmd->add_option("--K", gen_args.K, "tree branching");
  gen_cmd->add_option("--depth", gen_args.depth, "tree depth");
  gen_cmd->add_option("--ratio", gen_args.ratio, "tree edge length ratio per level");
  gen_cmd->add_option("--first-length", gen_args.first_length, "tree first edge length");
  gen_cmd->add_flag("--split", gen_args.split, "tree masses split per level");
  gen_cmd->add_option("--length", gen_args.length, "half-line length");
  gen_cmd->add_option("--step", gen_args.step, "half-line spacing");
  gen_cmd->add_option("--half-length", gen_args.half_length, "two-ended line half-length");
  gen_cmd->add_option("--out", gen_args.out.path, "output file or - for stdout");

  CriteriaArgs crit;
  auto* crit_cmd = app.add_subcommand("criteria", "growth functionals of a graph or model space");
  crit_cmd->add_option("--space", crit.space, "graph or model space JSON")->required();
  crit_cmd->add_option("--p", crit.p, "exponents")->required()->delimiter(',');
  crit.levels_opt = crit_cmd->add_option("--jmax,--levels", crit.levels, "last model annulus index");
  crit.R_opt = crit_cmd->add_option("--R", crit.R, "truncation radius of the weighted integral");
  crit.h_opt = crit_cmd->add_option("--weight", crit.h, "coordinate weight coeff,exponent[,rate[,cutoff]]")->delimiter(',');
  crit_cmd->add_option("--out", crit.out.path, "output CSV or -");

  ModulusArgs mod;
  auto* mod_cmd = app.add_subcommand("modulus", "p-modulus of a condenser or an explicit path family");
  mod_cmd->add_option("--space", mod.space, "graph JSON")->required();
  mod_cmd->add_option("--p", mod.p, "exponent p >= 1");
  mod_cmd->add_option("--family", mod.family, "condenser, paths, or a path-family JSON file");
  mod_cmd->add_option("--R", mod.R, "outer radius of the condenser");
  mod_cmd->add_option("--inner", mod.inner, "inner radius of the condenser");
  mod_cmd->add_option("--paths", mod.paths, "path family JSON");
  mod_cmd->add_option("--method", mod.method, "auto, cg or potential");
  mod.radii_opt = mod_cmd->add_option("--radii", mod.radii, "condenser sequence radii")->delimiter(',');
  mod_cmd->add_option("--out", mod.out.path, "output JSON or -");

  CounterexampleArgs cx;
  auto* cx_cmd = app.add_subcommand("counterexample", "block construction for a divergent series");
  cx_cmd->add_option("--space", cx.space, "graph JSON")->required();
  cx_cmd->add_option("--p", cx.p, "exponent");
  cx_cmd->add_option("--blocks", cx.blocks, "number of blocks");
  cx_cmd->add_option("--profile", cx.profile, "model space JSON for the profile");
  cx_cmd->add_option("--levels", cx.levels, "model annuli when --profile is given");
  cx_cmd->add_option("--start", cx.start, "first block index");
  cx_cmd->add_option("--rays", cx.rays, "rays to the farthest nodes");
  cx.thresholds_opt = cx_cmd->add_option("--thresholds", cx.thresholds, "increasing thresholds")->delimiter(',');
  cx_cmd->add_option("--out", cx.out.path, "output JSON or -");

  PolarArgs pol;
  auto* pol_cmd = app.add_subcommand("polar-verify", "check a weak polar coordinate system");
  pol_cmd->add_option("--system", pol.system, "euclidean2, euclidean3, wedge1, wedge2, wedge3, cantor, tree, custom");
  pol_cmd->add_option("--custom", pol.custom, "custom system JSON");
  pol.directions_opt = pol_cmd->add_option("--directions", pol.directions, "direction samples");
  pol.step_opt = pol_cmd->add_option("--step", pol.step, "curve sample spacing");
  pol.length_opt = pol_cmd->add_option("--length", pol.length, "curve truncation length");
  pol.depth_opt = pol_cmd->add_option("--depth", pol.depth, "Cantor or tree depth");
  pol.cells_opt = pol_cmd->add_option("--cells", pol.cells, "volume quadrature cells per side");
  pol_cmd->add_option("--tol", pol.tol, "one-sided tolerance");
  pol_cmd->add_option("--identity-tol", pol.identity_tol, "tolerance for identity systems");
  pol_cmd->add_option("--out", pol.out.path, "output JSON or -");

  ChainArgs ch;
  auto* ch_cmd = app.add_subcommand("chain-check", "annular chain condition on sampled radii");
  ch_cmd->add_option("--space", ch.space, "graph JSON")->required();
  ch.lambda_opt = ch_cmd->add_option("--lambda", ch.lambda, "lambda >= 1");
  ch.radii_opt = ch_cmd->add_option("--radii", ch.radii, "radii")->delimiter(',');
  ch.pairs_opt = ch_cmd->add_option("--pairs", ch.pairs, "pairs per radius");
  ch_cmd->add_option("--out", ch.out.path, "output JSON or -");

  ExperimentArgs ex;
  auto* ex_cmd = app.add_subcommand("experiment", "experiment tables: thm12, thm13, two-ends, example43");
  ex_cmd->add_option("name", ex.name, "thm12, thm13, two-ends or example43")->required();
  ex.p_opt = ex_cmd->add_option("--p", ex.p, "exponents")->delimiter(',');
  ex.radii_opt = ex_cmd->add_option("--radii", ex.radii, "truncation radii")->delimiter(',');
  ex.hw_opt = ex_cmd->add_option("--half-width", ex.half_width, "grid half-width");
  ex_cmd->add_option("--out", ex.out.path, "output CSV or -");

  for (auto* cmd : {crit_cmd, mod_cmd, cx_cmd, pol_cmd, ch_cmd, ex_cmd}) {
    cmd->add_option("--config", config, "JSON config; flags take precedence");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return UsageError;
  }

  try {
    settings.load(config);
    settings.record("threads", threads_setting());
    if (gen_cmd->parsed()) return run_generate(gen_args, settings);
    if (crit_cmd->parsed()) return run_criteria(crit, settings);
    if (mod_cmd->parsed()) return run_modulus(mod, settings);
    if (cx_cmd->parsed()) return run_counterexample(cx, settings);
    if (pol_cmd->parsed()) return run_polar(pol, settings);
    if (ch_cmd->parsed()) return run_chain(ch, settings);
    if (ex_cmd->parsed()) {
      settings.record("experiment", ex.name);
      if (ex.name == "thm12") return run_thm12(ex, settings);
      if (ex.name == "thm13") return run_thm13(ex, settings);
      if (ex.name == "two-ends") return run_two_ends(ex, settings);
      if (ex.name == "example43") return run_example43(ex, settings);
      std::cerr << "error: unknown experiment \"" << ex.name << "\" (thm12, thm13, two-ends, example43)\n";
      return UsageError;
    }
  } catch (const Error& e) {
    std::cerr << "error [" << to_string(e.kind()) << "]: " << e.what() << "\n";
    switch (e.kind()) {
      case ErrorKind::InvalidInput:
      case ErrorKind::ProfileMismatch:
        return UsageError;
      default:
        return CheckFailed;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return UsageError;
  }
  return UsageError;
}

}  // namespace mms::cli
