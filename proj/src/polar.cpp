#include "mms/polar.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>

#include "mms/error.hpp"
#include "mms/model_spaces.hpp"
#include "mms/quadrature.hpp"

namespace mms {

namespace {

constexpr double kPi = std::numbers::pi;

// Builds a polyline curve sample by sample.
class CurveBuilder {
 public:
  explicit CurveBuilder(const Eigen::VectorXd& start) { push(start, 0.0); }

  // equal pieces of length <= step from the last point to b
  void segment_to(const Eigen::VectorXd& b, double step) {
    const Eigen::VectorXd a = pts_.back();
    const double len = (b - a).norm();
    if (len == 0.0) return;
    const int pieces = std::max(1, static_cast<int>(std::ceil(len / step - 1e-9)));
    const double s0 = s_.back();
    for (int k = 1; k <= pieces; ++k) {
      const double tau = static_cast<double>(k) / pieces;
      const Eigen::VectorXd p = (k == pieces) ? b : Eigen::VectorXd(a + tau * (b - a));
      push(p, s0 + tau * len);
    }
  }

  template <typename Weight>
  PolarCurve finish(Weight&& h) {
    PolarCurve c;
    c.points.resize(pts_.front().size(), static_cast<Index>(pts_.size()));
    for (std::size_t k = 0; k < pts_.size(); ++k) c.points.col(static_cast<Index>(k)) = pts_[k];
    c.s = s_;
    c.h.reserve(pts_.size());
    for (const auto& p : pts_) c.h.push_back(h(p));
    return c;
  }

 private:
  void push(const Eigen::VectorXd& p, double s) {
    pts_.push_back(p);
    s_.push_back(s);
  }
  std::vector<Eigen::VectorXd> pts_;
  std::vector<double> s_;
};

double trapezoid(const PolarCurve& c, const PointFunction& f, bool use_h, std::size_t stride) {
  const std::size_t n = c.size();
  if (n < 2) return 0.0;
  auto value = [&](std::size_t k) {
    const double w = use_h ? c.h[k] : 1.0;
    if (w == 0.0) return 0.0;
    return f(c.points.col(static_cast<Index>(k))) * w;
  };
  double sum = 0.0;
  std::size_t prev = 0;
  double fprev = value(0);
  for (std::size_t k = stride; prev + 1 < n; k += stride) {
    if (k >= n) k = n - 1;
    const double fk = value(k);
    sum += (c.s[k] - c.s[prev]) * 0.5 * (fprev + fk);
    prev = k;
    fprev = fk;
  }
  return sum;
}

double weighted_lhs(const PolarSystem& sys, const PointFunction& f, bool use_h, std::size_t stride) {
  double total = 0.0;
  for (std::size_t i = 0; i < sys.curves.size(); ++i) {
    if (sys.weights[i] == 0.0) continue;
    total += sys.weights[i] * trapezoid(sys.curves[i], f, use_h, stride);
  }
  return total;
}

PointFunction euclidean_norm() {
  return [](PointRef p) { return p.norm(); };
}

// removed middle thirds of generations 1..depth inside [i, i+1], as (a, b)
void cantor_gaps(double a, double len, int level, int depth, std::vector<std::pair<double, double>>& out) {
  if (level > depth) return;
  const double third = len / 3.0;
  out.emplace_back(a + third, a + 2.0 * third);
  cantor_gaps(a, third, level + 1, depth, out);
  cantor_gaps(a + 2.0 * third, third, level + 1, depth, out);
}

std::vector<std::pair<double, double>> diamonds(int depth, double length) {
  std::vector<std::pair<double, double>> gaps;
  for (int i = 0; i < static_cast<int>(std::ceil(length)); ++i) cantor_gaps(i, 1.0, 1, depth, gaps);
  std::erase_if(gaps, [&](const auto& g) { return g.second > length; });
  std::sort(gaps.begin(), gaps.end());
  return gaps;
}

Index ipow(Index b, int e) {
  Index r = 1;
  for (int k = 0; k < e; ++k) r *= b;
  return r;
}

}  // namespace

void PolarSystem::validate() const {
  if (curves.empty() || weights.size() != curves.size()) {
    throw Error(ErrorKind::InvalidInput, "polar system needs one weight per curve");
  }
  double total = 0.0;
  for (double w : weights) {
    if (!(w >= 0.0) || !std::isfinite(w)) throw Error(ErrorKind::InvalidInput, "direction weights must be nonnegative");
    total += w;
  }
  if (std::abs(total - 1.0) > 1e-12) throw Error(ErrorKind::InvalidInput, "direction weights must sum to 1");
  if (!(C > 0.0)) throw Error(ErrorKind::InvalidInput, "system constant must be positive");
  for (const PolarCurve& c : curves) {
    if (c.size() < 2 || c.h.size() != c.size() || c.points.cols() != static_cast<Index>(c.size())) {
      throw Error(ErrorKind::InvalidInput, "curve samples, arc lengths and weights must have equal sizes");
    }
    if (c.s[0] != 0.0 ||
        (origin.size() > 0 && (origin.size() != c.points.rows() || (c.points.col(0) - origin).norm() > 1e-12))) {
      throw Error(ErrorKind::InvalidInput, "every curve must start at the coordinate point");
    }
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (!(c.h[k] >= 0.0)) throw Error(ErrorKind::InvalidInput, "coordinate weight must be nonnegative");
      if (k == 0) continue;
      const double ds = c.s[k] - c.s[k - 1];
      if (!(ds > 0.0)) throw Error(ErrorKind::InvalidInput, "arc length must increase along a curve");
      if (euclidean) {
        const double chord = (c.points.col(static_cast<Index>(k)) - c.points.col(static_cast<Index>(k - 1))).norm();
        if (std::abs(chord - ds) > 1e-9) {
          throw Error(ErrorKind::InvalidInput, "curve is not parameterised by arc length");
        }
      }
    }
  }
}

double polar_lhs(const PolarSystem& sys, const PointFunction& f) { return weighted_lhs(sys, f, true, 1); }

double polar_lhs_coarse(const PolarSystem& sys, const PointFunction& f) { return weighted_lhs(sys, f, true, 2); }

namespace {

PolarReport ratio_report(const std::vector<PolarTestFunction>& tests, double C, double tol,
                         const std::function<double(const PointFunction&)>& lhs,
                         const std::function<double(const PointFunction&)>& lhs_coarse,
                         const std::function<double(const PointFunction&)>& rhs, bool identity, double identity_tol) {
  PolarReport rep;
  std::size_t evaluated = 0;
  bool violated = false;
  for (const auto& t : tests) {
    PolarRatio row;
    row.name = t.name;
    row.lhs = lhs(t.f);
    row.rhs = rhs(t.f);
    if (!std::isfinite(row.rhs)) {
      row.skipped = true;
      rep.note += t.name + ": right side not finite, skipped; ";
    } else if (row.rhs == 0.0 && row.lhs == 0.0) {
      row.skipped = true;
    } else if (row.rhs == 0.0) {
      row.ratio = INFINITY;
      row.violated = true;
      rep.note += t.name + ": positive left side against a null right side; ";
    } else {
      row.ratio = row.lhs / (C * row.rhs);
      row.error_estimate = std::abs(row.lhs - lhs_coarse(t.f)) / (C * row.rhs);
      row.violated = row.ratio > 1.0 + tol || (identity && std::abs(row.ratio - 1.0) > identity_tol);
    }
    if (!row.skipped) {
      ++evaluated;
      rep.max_ratio = std::max(rep.max_ratio, row.ratio);
    }
    violated = violated || row.violated;
    rep.rows.push_back(std::move(row));
  }
  rep.pass = evaluated > 0 && !violated;
  if (evaluated == 0) rep.note += "no test function was evaluated";
  return rep;
}

}  // namespace

PolarReport verify_polar(const PolarSystem& sys, const std::vector<PolarTestFunction>& tests,
                         const VolumeIntegrator& volume, const PolarVerifyOptions& opts) {
  sys.validate();
  return ratio_report(
      tests, sys.C, opts.tol, [&](const PointFunction& f) { return polar_lhs(sys, f); },
      [&](const PointFunction& f) { return polar_lhs_coarse(sys, f); }, volume, sys.identity, opts.identity_tol);
}

PolarReport semmes_check(const PolarSystem& sys, const PointFunction& kernel, double C,
                         const std::vector<PolarTestFunction>& tests, const VolumeIntegrator& volume, double tol) {
  sys.validate();
  if (!(C > 0.0)) throw Error(ErrorKind::InvalidInput, "Semmes constant must be positive");
  return ratio_report(
      tests, C, tol, [&](const PointFunction& f) { return weighted_lhs(sys, f, false, 1); },
      [&](const PointFunction& f) { return weighted_lhs(sys, f, false, 2); },
      [&](const PointFunction& f) { return volume([&](PointRef x) { return f(x) * kernel(x); }); }, false, 0.0);
}

HatFamily hat_truncate(const PolarSystem& sys, const std::vector<std::size_t>& directions, const PointFunction& dist) {
  sys.validate();
  const bool by_arc = !dist && !sys.euclidean;
  const PointFunction d = dist ? dist : euclidean_norm();
  HatFamily out;
  out.system.name = sys.name + "/hat";
  out.system.C = sys.C;
  out.system.euclidean = sys.euclidean;
  out.system.step = sys.step;
  double kept_weight = 0.0;
  for (std::size_t id : directions) {
    if (id >= sys.curves.size()) throw Error(ErrorKind::InvalidInput, "direction index out of range");
    const PolarCurve& c = sys.curves[id];
    auto at = [&](std::size_t k) { return by_arc ? c.s[k] : d(c.points.col(static_cast<Index>(k))); };
    std::size_t exit = c.size();
    for (std::size_t k = 0; k < c.size(); ++k) {
      if (at(k) >= 1.0) {
        exit = k;
        break;
      }
    }
    if (exit == c.size()) {
      out.never_exit.push_back(id);
      continue;
    }
    std::optional<std::size_t> back;
    for (std::size_t k = exit + 1; k < c.size(); ++k) {
      if (at(k) < 1.0) {
        back = k;
        break;
      }
    }
    if (back) {
      out.reentries.emplace_back(id, *back);
      continue;
    }
    // crossing point on the segment (exit-1, exit), kept on the outer side
    PolarCurve hc;
    std::vector<Eigen::VectorXd> pts;
    std::vector<double> s, h;
    if (exit > 0) {
      const Index a = static_cast<Index>(exit - 1), b = static_cast<Index>(exit);
      auto lerp_dist = [&](double tau) {
        if (by_arc) return c.s[exit - 1] + tau * (c.s[exit] - c.s[exit - 1]);
        return d(Eigen::VectorXd((1.0 - tau) * c.points.col(a) + tau * c.points.col(b)));
      };
      double lo = 0.0, hi = 1.0;
      for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
        const double mid = 0.5 * (lo + hi);
        (lerp_dist(mid) >= 1.0 ? hi : lo) = mid;
      }
      if (hi < 1.0) {
        pts.emplace_back((1.0 - hi) * c.points.col(a) + hi * c.points.col(b));
        s.push_back(c.s[exit - 1] + hi * (c.s[exit] - c.s[exit - 1]));
        h.push_back((1.0 - hi) * c.h[exit - 1] + hi * c.h[exit]);
      }
    }
    for (std::size_t k = exit; k < c.size(); ++k) {
      pts.emplace_back(c.points.col(static_cast<Index>(k)));
      s.push_back(c.s[k]);
      h.push_back(c.h[k]);
    }
    hc.points.resize(c.points.rows(), static_cast<Index>(pts.size()));
    for (std::size_t k = 0; k < pts.size(); ++k) hc.points.col(static_cast<Index>(k)) = pts[k];
    const double s0 = s.front();
    for (double& v : s) v -= s0;
    s.front() = 0.0;
    hc.s = std::move(s);
    hc.h = std::move(h);
    out.system.curves.push_back(std::move(hc));
    out.system.weights.push_back(sys.weights[id]);
    out.kept.push_back(id);
    kept_weight += sys.weights[id];
  }
  if (kept_weight > 0.0) {
    for (double& w : out.system.weights) w /= kept_weight;
  }
  // the curves now start on the unit sphere, not at a common point
  out.system.origin.resize(0);
  return out;
}

PolarSystem truncate_at(const PolarSystem& sys, double R, const PointFunction& dist) {
  const bool by_arc = !dist && !sys.euclidean;
  const PointFunction d = dist ? dist : euclidean_norm();
  PolarSystem out = sys;
  for (PolarCurve& c : out.curves) {
    std::size_t end = c.size();
    for (std::size_t k = 0; k < c.size(); ++k) {
      const double r = by_arc ? c.s[k] : d(c.points.col(static_cast<Index>(k)));
      if (r >= R) {
        end = k + 1;
        break;
      }
    }
    end = std::max<std::size_t>(end, 2);
    c.points.conservativeResize(Eigen::NoChange, static_cast<Index>(end));
    c.s.resize(end);
    c.h.resize(end);
  }
  return out;
}

ExplicitPaths graph_paths(const SpaceGraph& g, const PolarSystem& sys) {
  if (!g.has_positions() || !sys.euclidean) {
    throw Error(ErrorKind::InvalidInput, "snapping needs a Euclidean system and a graph with positions");
  }
  const Eigen::MatrixXd& pos = g.positions();
  if (pos.rows() != sys.origin.size() && !sys.curves.empty() && pos.rows() != sys.curves.front().points.rows()) {
    throw Error(ErrorKind::InvalidInput, "graph and curve dimensions differ");
  }
  std::map<std::vector<long>, Index> lattice;
  for (Index v = 0; v < g.size(); ++v) {
    std::vector<long> key(static_cast<std::size_t>(pos.rows()));
    for (Index r = 0; r < pos.rows(); ++r) key[static_cast<std::size_t>(r)] = std::lround(pos(r, v));
    lattice.emplace(std::move(key), v);
  }
  ExplicitPaths out;
  for (const PolarCurve& c : sys.curves) {
    Path path;
    for (Index k = 0; k < c.points.cols(); ++k) {
      std::vector<long> key(static_cast<std::size_t>(c.points.rows()));
      for (Index r = 0; r < c.points.rows(); ++r) key[static_cast<std::size_t>(r)] = std::lround(c.points(r, k));
      const auto it = lattice.find(key);
      if (it == lattice.end()) throw Error(ErrorKind::InvalidInput, "curve leaves the lattice graph");
      const Index v = it->second;
      if (!path.empty() && path.back() == v) continue;
      if (!path.empty() && !g.edge_length(path.back(), v)) {
        const Index from = path.back();
        const auto tree = shortest_paths(g, std::span<const Index>(&from, 1),
                                         [](Index, Index, double len) { return len; }, 8.0);
        if (!std::isfinite(tree.dist[v])) throw Error(ErrorKind::InvalidInput, "snapped curve has a large gap");
        const Path link = tree.path_to(v);
        path.insert(path.end(), link.begin() + 1, link.end() - 1);
      }
      // drop the loop if v was visited before
      const auto seen = std::find(path.begin(), path.end(), v);
      if (seen != path.end()) {
        path.erase(seen + 1, path.end());
      } else {
        path.push_back(v);
      }
    }
    if (path.size() >= 2) out.paths.push_back(std::move(path));
  }
  return out;
}

namespace polar {

PolarSystem euclidean_spherical(int n, const Sampling& s) {
  if (n != 2 && n != 3) throw Error(ErrorKind::InvalidInput, "spherical systems are built for n = 2 or 3");
  if (s.directions < 1 || !(s.length > 0.0) || !(s.step > 0.0)) throw Error(ErrorKind::InvalidInput, "bad sampling");
  PolarSystem sys;
  sys.name = "euclidean-spherical-" + std::to_string(n);
  sys.C = 1.0;
  sys.identity = true;
  sys.origin = Eigen::VectorXd::Zero(n);
  const int count = std::max(1, static_cast<int>(std::lround(s.length / s.step)));
  sys.step = s.length / count;
  const double area = sphere_area(n);
  const double golden = kPi * (3.0 - std::sqrt(5.0));
  for (int k = 0; k < s.directions; ++k) {
    Eigen::VectorXd xi(n);
    if (n == 2) {
      const double th = 2.0 * kPi * k / s.directions;
      xi << std::cos(th), std::sin(th);
    } else {
      const double z = 1.0 - (2.0 * k + 1.0) / s.directions;
      const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      xi << rho * std::cos(golden * k), rho * std::sin(golden * k), z;
    }
    PolarCurve c;
    c.points.resize(n, count + 1);
    for (int m = 0; m <= count; ++m) {
      const double r = s.length * m / count;
      c.points.col(m) = r * xi;
      c.s.push_back(r);
      c.h.push_back(area * std::pow(r, n - 1));
    }
    sys.curves.push_back(std::move(c));
    sys.weights.push_back(1.0 / s.directions);
  }
  return sys;
}

PolarSystem tree_polar(int K, int depth, const RadialFunction& mu, const RadialFunction& lambda, double step) {
  if (K < 2 || depth < 1 || depth > 16 || !(step > 0.0)) throw Error(ErrorKind::InvalidInput, "bad tree sampling");
  const Index leaves = ipow(K, depth);
  if (leaves > 1'000'000) throw Error(ErrorKind::InvalidInput, "too many tree rays");
  const int per_edge = std::max(1, static_cast<int>(std::ceil(1.0 / step - 1e-9)));
  PolarSystem sys;
  sys.name = "tree-" + std::to_string(K);
  sys.C = 1.0;
  sys.euclidean = false;
  sys.origin = Eigen::VectorXd::Zero(2);
  sys.step = 1.0 / per_edge;
  const int samples = depth * per_edge + 1;
  // arc length and weight do not depend on the ray
  std::vector<double> t(static_cast<std::size_t>(samples)), arc(t.size()), h(t.size());
  for (int m = 0; m < samples; ++m) {
    t[m] = static_cast<double>(m) / per_edge;
    if (m > 0) arc[m] = arc[m - 1] + quad::adaptive_simpson([&](double x) { return lambda(x); }, t[m - 1], t[m], 1e-13, 1).value;
    const double lam = lambda(t[m]);
    if (!(lam > 0.0)) throw Error(ErrorKind::InvalidInput, "tree edge length density must be positive");
    h[m] = std::pow(static_cast<double>(K), t[m]) * mu(t[m]) / lam;
  }
  for (Index leaf = 0; leaf < leaves; ++leaf) {
    PolarCurve c;
    c.points.resize(2, samples);
    for (int m = 0; m < samples; ++m) {
      const int level = (m + per_edge - 1) / per_edge;  // depth of the far end of the current edge
      const Index offset = (ipow(K, level) - 1) / (K - 1);
      const Index position = leaf / ipow(K, depth - level);
      c.points(0, m) = static_cast<double>(offset + position);
      c.points(1, m) = t[m];
    }
    c.s = arc;
    c.h = h;
    sys.curves.push_back(std::move(c));
    sys.weights.push_back(1.0 / static_cast<double>(leaves));
  }
  return sys;
}

double cantor_delta(double x, int depth) {
  if (!(x >= 0.0)) return 0.0;
  const double i = std::floor(x);
  double a = i, len = 1.0;
  for (int level = 1; level <= depth; ++level) {
    const double third = len / 3.0;
    const double l = a + third, r = a + 2.0 * third;
    if (x > l && x < r) return std::min(x - l, r - x);
    if (x >= r) a = r;
    len = third;
  }
  return 0.0;
}

PolarSystem cantor_diamond(int depth, const Sampling& s) {
  if (depth < 0 || depth > 12 || s.directions < 1 || !(s.length > 0.0) || !(s.step > 0.0)) {
    throw Error(ErrorKind::InvalidInput, "bad Cantor diamond sampling");
  }
  std::vector<double> breaks{0.0, s.length};
  for (const auto& [a, b] : diamonds(depth, s.length)) {
    breaks.push_back(a);
    breaks.push_back(0.5 * (a + b));
    breaks.push_back(b);
  }
  for (int i = 1; i < s.length; ++i) breaks.push_back(i);
  std::sort(breaks.begin(), breaks.end());
  breaks.erase(std::unique(breaks.begin(), breaks.end()), breaks.end());

  PolarSystem sys;
  sys.name = "cantor-diamond";
  sys.C = 2.0;
  sys.origin = Eigen::VectorXd::Zero(2);
  sys.step = s.step;
  for (int k = 0; k < s.directions; ++k) {
    const double y = -1.0 + (k + 0.5) * 2.0 / s.directions;
    const double slope = std::tan(kPi * y / 4.0);
    const double jac = kPi / (4.0 * std::pow(std::cos(kPi * y / 4.0), 2));
    auto point = [&](double x) {
      Eigen::VectorXd p(2);
      p << x, cantor_delta(x, depth) * slope;
      return p;
    };
    auto h = [&](const Eigen::VectorXd& p) { return jac * cantor_delta(p[0], depth); };
    CurveBuilder b(point(0.0));
    for (std::size_t m = 1; m < breaks.size(); ++m) b.segment_to(point(breaks[m]), s.step);
    sys.curves.push_back(b.finish(h));
    sys.weights.push_back(1.0 / s.directions);
  }
  return sys;
}

PolarSystem wedge_strip(int variant, const Sampling& s) {
  if (variant < 1 || variant > 3) throw Error(ErrorKind::InvalidInput, "wedge-strip variant must be 1, 2 or 3");
  if (s.directions < 1 || !(s.length > 1.0) || !(s.step > 0.0)) throw Error(ErrorKind::InvalidInput, "bad sampling");
  auto h1 = [](const Eigen::VectorXd& p) { return p[0] < -1.0 ? 1.0 : 0.0; };
  // restricted to the wedge: on the strip rays it would not be dominated by the area
  auto h2 = [](const Eigen::VectorXd& p) { return (p[1] >= 0.0 && std::abs(p[1]) <= p[0]) ? p.norm() : 0.0; };
  auto h3 = [&](const Eigen::VectorXd& p) { return h1(p) + h2(p); };

  PolarSystem sys;
  sys.name = "wedge-strip-" + std::to_string(variant);
  sys.origin = Eigen::VectorXd::Zero(2);
  sys.step = s.step;
  const double m1 = 2.0, m2 = kPi / 2.0;  // Lebesgue masses of the two direction sets
  const double total = variant == 1 ? m1 : variant == 2 ? m2 : m1 + m2;
  sys.C = 1.0 / total;

  auto add = [&](const PolarCurve& c, double w) {
    sys.curves.push_back(c);
    sys.weights.push_back(w);
  };
  const Eigen::VectorXd O = Eigen::VectorXd::Zero(2);
  if (variant != 2) {
    for (int k = 0; k < s.directions; ++k) {
      const double xi = -1.0 + (k + 0.5) * 2.0 / s.directions;
      CurveBuilder b(O);
      b.segment_to(Eigen::Vector2d(-1.0, xi), s.step);
      b.segment_to(Eigen::Vector2d(-s.length, xi), s.step);
      add(variant == 1 ? b.finish(h1) : b.finish(h3), m1 / s.directions / total);
    }
  }
  if (variant != 1) {
    for (int k = 0; k < s.directions; ++k) {
      const double xi = -kPi / 4.0 + (k + 0.5) * (kPi / 2.0) / s.directions;
      CurveBuilder b(O);
      b.segment_to(Eigen::Vector2d(s.length * std::cos(xi), s.length * std::sin(xi)), s.step);
      add(variant == 2 ? b.finish(h2) : b.finish(h3), m2 / s.directions / total);
    }
  }
  // renormalise against rounding so the weights sum to 1 exactly enough
  double sum = 0.0;
  for (double w : sys.weights) sum += w;
  for (double& w : sys.weights) w /= sum;
  return sys;
}

double euclidean_volume(const PointFunction& f, int n, double T, int cells) {
  if (cells < 1) throw Error(ErrorKind::InvalidInput, "need at least one cell");
  const double hgt = 2.0 * T / cells;
  Eigen::VectorXd x(n);
  if (n == 2) {
    return quad::midpoint_2d(
        [&](double a, double b) {
          x << a, b;
          return f(x);
        },
        -T, T, -T, T, cells);
  }
  if (n != 3) throw Error(ErrorKind::InvalidInput, "volume rule is built for n = 2 or 3");
  double sum = 0.0;
  for (int i = 0; i < cells; ++i)
    for (int j = 0; j < cells; ++j)
      for (int k = 0; k < cells; ++k) {
        x << -T + (i + 0.5) * hgt, -T + (j + 0.5) * hgt, -T + (k + 0.5) * hgt;
        sum += f(x);
      }
  return sum * hgt * hgt * hgt;
}

double wedge_volume(const PointFunction& f, double T, int cells) {
  if (cells < 1) throw Error(ErrorKind::InvalidInput, "need at least one cell");
  const double hx = 2.0 * T / cells;
  Eigen::VectorXd x(2);
  double sum = 0.0;
  for (int i = 0; i < cells; ++i) {
    const double x1 = -T + (i + 0.5) * hx;
    const double w = std::min(T, x1 < 0.0 ? 1.0 : std::max(1.0, x1));
    const double hy = 2.0 * w / cells;
    double col = 0.0;
    for (int j = 0; j < cells; ++j) {
      x << x1, -w + (j + 0.5) * hy;
      col += f(x);
    }
    sum += col * hy;
  }
  return sum * hx;
}

double cantor_volume(const PointFunction& f, int depth, double length, int cells) {
  if (cells < 1) throw Error(ErrorKind::InvalidInput, "need at least one cell");
  Eigen::VectorXd x(2);
  double sum = 0.0;
  for (const auto& [a, b] : diamonds(depth, length)) {
    const double hx = (b - a) / cells;
    for (int i = 0; i < cells; ++i) {
      const double x1 = a + (i + 0.5) * hx;
      const double w = cantor_delta(x1, depth);
      const double hy = 2.0 * w / cells;
      double col = 0.0;
      for (int j = 0; j < cells; ++j) {
        x << x1, -w + (j + 0.5) * hy;
        col += f(x);
      }
      sum += col * hy * hx;
    }
  }
  return sum;
}

double tree_volume(const PointFunction& f, int K, int depth, const RadialFunction& mu, int cells_per_edge) {
  if (K < 2 || depth < 1 || cells_per_edge < 1) throw Error(ErrorKind::InvalidInput, "bad tree volume rule");
  const double ht = 1.0 / cells_per_edge;
  Eigen::VectorXd x(2);
  double sum = 0.0;
  for (int level = 1; level <= depth; ++level) {
    const Index offset = (ipow(K, level) - 1) / (K - 1);
    for (Index pos = 0; pos < ipow(K, level); ++pos) {
      for (int m = 0; m < cells_per_edge; ++m) {
        const double t = level - 1 + (m + 0.5) * ht;
        x << static_cast<double>(offset + pos), t;
        sum += f(x) * mu(t) * ht;
      }
    }
  }
  return sum;
}

}  // namespace polar

}  // namespace mms
