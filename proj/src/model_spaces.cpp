#include "mms/model_spaces.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "mms/error.hpp"
#include "mms/quadrature.hpp"

namespace mms {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "invalid-input";
    case ErrorKind::NonMonotone: return "non-monotone";
    case ErrorKind::Overflow: return "overflow";
    case ErrorKind::NonIntegrable: return "non-integrable";
    case ErrorKind::MalformedPath: return "malformed-path";
    case ErrorKind::Precondition: return "precondition";
    case ErrorKind::AllSkipped: return "all-skipped";
    case ErrorKind::ProfileMismatch: return "profile-mismatch";
    case ErrorKind::NonConvergence: return "non-convergence";
  }
  return "unknown";
}

std::string to_string(const AsymptoticClass& c) {
  std::ostringstream os;
  switch (c.kind) {
    case AsymptoticClass::Kind::Polynomial: os << "polynomial(" << c.parameter << ")"; break;
    case AsymptoticClass::Kind::Geometric: os << "geometric(" << c.parameter << ")"; break;
    case AsymptoticClass::Kind::Exponential: os << "exponential"; break;
    case AsymptoticClass::Kind::Unknown: os << "declared-unknown"; break;
  }
  return os.str();
}

void RadialProfile::validate() const {
  for (std::size_t k = 0; k < masses.size(); ++k) {
    if (!(masses[k] > 0.0) || !std::isfinite(masses[k])) {
      throw Error(ErrorKind::InvalidInput, "annulus mass at j=" + std::to_string(j_min + static_cast<int>(k)) +
                                               " is not positive and finite");
    }
  }
}

double sphere_area(int n) {
  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(std::numbers::pi, 0.5 * n) / std::tgamma(0.5 * n);
}

namespace {

// integral of f over [a, b] for a radial function, closed form when possible
double integrate_radial(const RadialFunction& f, double a, double b) {
  a = std::max(a, f.cutoff);
  if (b <= a) return 0.0;
  if (f.rate == 0.0) {
    const double e = f.exponent;
    if (e == -1.0) {
      if (a <= 0.0) throw Error(ErrorKind::NonIntegrable, "weight t^-1 is not integrable at 0");
      return f.coeff * std::log(b / a);
    }
    if (e < -1.0 && a <= 0.0) throw Error(ErrorKind::NonIntegrable, "weight t^e with e < -1 is not integrable at 0");
    return f.coeff * (std::pow(b, e + 1.0) - std::pow(a, e + 1.0)) / (e + 1.0);
  }
  if (f.exponent == 0.0) return f.coeff * (std::exp(f.rate * b) - std::exp(f.rate * a)) / f.rate;
  if (f.exponent <= -1.0 && a <= 0.0) throw Error(ErrorKind::NonIntegrable, "weight is not integrable at 0");
  const auto r = quad::adaptive_simpson([&](double t) { return f(t); }, a, b, 1e-12 * std::max(1.0, f(b) * (b - a)), 64);
  return r.value;
}

struct TreeGeometry {
  const KRegularTree& tree;

  // metric distance from the root to combinatorial depth t
  double distance(double t) const {
    const RadialFunction& l = tree.edge_length;
    if (l.rate == 0.0 && l.exponent == 0.0) return l.coeff * t;
    return integrate_radial(l, 0.0, t);
  }

  double depth_at(double r) const {
    const RadialFunction& l = tree.edge_length;
    if (l.rate == 0.0 && l.exponent == 0.0) return r / l.coeff;
    double lo = 0.0;
    double hi = 1.0;
    while (distance(hi) < r) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-14 * hi; ++it) {
      const double mid = 0.5 * (lo + hi);
      (distance(mid) < r ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  }

  double count_at(double t) const {
    return std::pow(static_cast<double>(tree.K), std::floor(t) + 1.0);
  }

  double ball_measure(double r) const {
    const double t_end = depth_at(r);
    double total = 0.0;
    for (double k = 0.0; k < t_end; k += 1.0) {
      const double hi = std::min(k + 1.0, t_end);
      total += count_at(k) * integrate_radial(tree.edge_measure, k, hi);
    }
    return total;
  }
};

}  // namespace

std::string ModelSpace::name() const {
  return std::visit(
      [](const auto& v) -> std::string {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AhlforsModel>) return "ahlfors";
        else if constexpr (std::is_same_v<T, WeightedHalfLine>) return "weighted-halfline";
        else if constexpr (std::is_same_v<T, PowerWeightedEuclidean>) return "power-weighted-euclidean";
        else return "k-regular-tree";
      },
      variant);
}

double ModelSpace::ball_measure(double r) const {
  if (r <= 0.0) return 0.0;
  return std::visit(
      [r](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AhlforsModel>) {
          return v.constant * std::pow(r, v.Q);
        } else if constexpr (std::is_same_v<T, WeightedHalfLine>) {
          return integrate_radial(v.weight, 0.0, r);
        } else if constexpr (std::is_same_v<T, PowerWeightedEuclidean>) {
          if (v.alpha <= -v.n) throw Error(ErrorKind::NonIntegrable, "|x|^alpha with alpha <= -n is not locally integrable");
          return sphere_area(v.n) * std::pow(r, v.n + v.alpha) / (v.n + v.alpha);
        } else {
          return TreeGeometry{v}.ball_measure(r);
        }
      },
      variant);
}

double ModelSpace::shell_density(double r) const {
  return std::visit(
      [r](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AhlforsModel>) {
          return v.constant * v.Q * std::pow(r, v.Q - 1.0);
        } else if constexpr (std::is_same_v<T, WeightedHalfLine>) {
          return v.weight(r);
        } else if constexpr (std::is_same_v<T, PowerWeightedEuclidean>) {
          return sphere_area(v.n) * std::pow(r, v.n - 1.0 + v.alpha);
        } else {
          const TreeGeometry geo{v};
          const double t = geo.depth_at(r);
          return geo.count_at(t) * v.edge_measure(t) / v.edge_length(t);
        }
      },
      variant);
}

AsymptoticClass ModelSpace::asymptotic_class() const {
  if (declared_class) return *declared_class;
  return std::visit(
      [](const auto& v) -> AsymptoticClass {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AhlforsModel>) {
          return AsymptoticClass::polynomial(v.Q);
        } else if constexpr (std::is_same_v<T, WeightedHalfLine>) {
          if (v.weight.rate > 0.0) return AsymptoticClass::exponential();
          if (v.weight.rate == 0.0 && v.weight.exponent > -1.0) return AsymptoticClass::polynomial(v.weight.exponent + 1.0);
          return AsymptoticClass::unknown();
        } else if constexpr (std::is_same_v<T, PowerWeightedEuclidean>) {
          return AsymptoticClass::polynomial(v.n + v.alpha);
        } else {
          const bool unit_metric = v.edge_length.rate == 0.0 && v.edge_length.exponent == 0.0;
          if (!unit_metric || v.edge_measure.exponent != 0.0) return AsymptoticClass::unknown();
          const double growth = v.K * std::exp(v.edge_measure.rate);
          if (std::abs(growth - 1.0) < 1e-12) return AsymptoticClass::polynomial(1.0);
          if (growth > 1.0) return AsymptoticClass::exponential();
          return AsymptoticClass::unknown();
        }
      },
      variant);
}

RadialProfile annulus_masses(const ModelSpace& space, int j_max) {
  if (j_max < space.j_min) throw Error(ErrorKind::Precondition, "j_max must be >= j_min");
  RadialProfile profile;
  profile.j_min = space.j_min;
  profile.asymptotic = space.asymptotic_class();
  const auto* euclid = std::get_if<PowerWeightedEuclidean>(&space.variant);
  double inner = space.ball_measure(std::ldexp(1.0, space.j_min));
  for (int j = space.j_min; j <= j_max; ++j) {
    const double a = std::ldexp(1.0, j);
    const double b = std::ldexp(1.0, j + 1);
    const double outer = space.ball_measure(b);
    double m = outer - inner;
    if (euclid) {
      // radial integral of the weighted shell by adaptive Simpson
      const double scale = std::max(std::abs(m), 1e-300);
      auto integrand = [&](double t) { return space.shell_density(t); };
      m = quad::adaptive_simpson(integrand, a, b, 1e-13 * scale, 16).value;
    }
    if (!std::isfinite(outer) || !std::isfinite(m)) {
      throw Error(ErrorKind::Overflow, "annulus mass at j=" + std::to_string(j) + " is not representable");
    }
    if (outer < inner || m <= 0.0) {
      throw Error(ErrorKind::NonMonotone, "ball measure is not increasing across annulus j=" + std::to_string(j));
    }
    profile.masses.push_back(m);
    inner = outer;
  }
  return profile;
}

namespace {

// averages of |x|^beta over a ball centred at the origin
double origin_average(int n, double beta, double r) {
  if (beta <= -n) return std::numeric_limits<double>::infinity();
  return n * std::pow(r, beta) / (beta + n);
}

// averages of |x|^beta1 and |x|^beta2 over an off-centre ball, computed on
// the half-disc (axial offset z, distance s from the axis) with weight
// |S^{n-2}| s^{n-2}; the same cells are used for the normalising volume
struct OffCentre {
  double avg1;
  double avg2;
};

OffCentre offcentre_average(int n, double dist, double r, double beta1, double beta2, int res) {
  const double hz = 2.0 * r / res;
  const double hs = r / res;
  double vol = 0.0;
  double s1 = 0.0;
  double s2 = 0.0;
  for (int i = 0; i < res; ++i) {
    const double z = -r + (i + 0.5) * hz;
    for (int k = 0; k < res; ++k) {
      const double s = (k + 0.5) * hs;
      if (z * z + s * s >= r * r) continue;
      const double w = (n == 2) ? 1.0 : std::pow(s, n - 2);
      const double ax = dist + z;
      const double rad = std::sqrt(ax * ax + s * s);
      vol += w;
      s1 += w * std::pow(rad, beta1);
      s2 += w * std::pow(rad, beta2);
    }
  }
  return {s1 / vol, s2 / vol};
}

}  // namespace

MuckenhouptEstimate muckenhoupt_constant(const PowerWeightedEuclidean& space, double p,
                                         std::span<const Ball> sample, int resolution) {
  if (sample.empty()) throw Error(ErrorKind::Precondition, "ball sample is empty");
  if (!(p >= 1.0)) throw Error(ErrorKind::Precondition, "p must be >= 1");
  const int n = space.n;
  const double a = space.alpha;
  MuckenhouptEstimate est;
  est.value = 0.0;
  est.balls = sample.size();
  const double inf = std::numeric_limits<double>::infinity();
  for (std::size_t b = 0; b < sample.size(); ++b) {
    const Ball& ball = sample[b];
    if (ball.center.size() != n) throw Error(ErrorKind::InvalidInput, "ball centre has wrong dimension");
    if (!(ball.radius > 0.0)) throw Error(ErrorKind::InvalidInput, "ball radius must be positive");
    const double dist = ball.center.norm();
    const double r = ball.radius;
    const bool holds_origin = dist <= r;
    if (holds_origin && a <= -n) {
      throw Error(ErrorKind::NonIntegrable, "|x|^alpha is not integrable on a ball containing the origin");
    }
    double value = 0.0;
    if (p == 1.0) {
      double avg_w;
      if (dist == 0.0) avg_w = origin_average(n, a, r);
      else avg_w = offcentre_average(n, dist, r, a, 0.0, resolution).avg1;
      double sup_inv;
      if (a > 0.0) sup_inv = holds_origin ? inf : std::pow(dist - r, -a);
      else if (a < 0.0) sup_inv = std::pow(dist + r, -a);
      else sup_inv = 1.0;
      value = avg_w * sup_inv;
    } else {
      const double dual = a / (1.0 - p);
      if (holds_origin && dual <= -n) {
        value = inf;
      } else {
        double avg_w;
        double avg_dual;
        if (dist == 0.0) {
          avg_w = origin_average(n, a, r);
          avg_dual = origin_average(n, dual, r);
        } else {
          const auto o = offcentre_average(n, dist, r, a, dual, resolution);
          avg_w = o.avg1;
          avg_dual = o.avg2;
        }
        value = std::pow(avg_w, 1.0 / p) * std::pow(avg_dual, (p - 1.0) / p);
      }
    }
    if (value > est.value || b == 0) {
      est.value = value;
      est.argmax = b;
    }
  }
  return est;
}

}  // namespace mms
