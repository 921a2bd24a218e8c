#include "mms/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <type_traits>

#include "mms/error.hpp"
#include "mms/quadrature.hpp"

namespace mms {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void check_p(double p) {
  if (!(p >= 1.0) || !std::isfinite(p)) throw Error(ErrorKind::InvalidInput, "p must be a finite real >= 1");
}

// density of the shell measure as c r^e exp(b r), when the space has one
struct DensityLaw {
  double coeff;
  double exponent;
  double rate;
};

std::optional<DensityLaw> density_law(const ModelSpace& space) {
  return std::visit(
      [](const auto& v) -> std::optional<DensityLaw> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, AhlforsModel>) {
          return DensityLaw{v.constant * v.Q, v.Q - 1.0, 0.0};
        } else if constexpr (std::is_same_v<T, PowerWeightedEuclidean>) {
          return DensityLaw{sphere_area(v.n), v.n - 1.0 + v.alpha, 0.0};
        } else if constexpr (std::is_same_v<T, WeightedHalfLine>) {
          if (v.weight.cutoff > 1.0) return std::nullopt;
          return DensityLaw{v.weight.coeff, v.weight.exponent, v.weight.rate};
        } else {
          return std::nullopt;
        }
      },
      space.variant);
}

GrowthReport divergent_now(double p) {
  GrowthReport r;
  r.p = p;
  r.kind = GrowthReport::Kind::Divergent;
  r.basis = GrowthReport::Basis::ClosedFormTail;
  r.first_index = 1;
  r.terms = {kInf};
  r.partial = {kInf};
  return r;
}

}  // namespace

const char* to_string(GrowthReport::Kind k) {
  switch (k) {
    case GrowthReport::Kind::Finite: return "finite";
    case GrowthReport::Kind::Divergent: return "divergent";
    case GrowthReport::Kind::Undecided: return "undecided";
  }
  return "?";
}

const char* to_string(GrowthReport::Basis b) {
  switch (b) {
    case GrowthReport::Basis::ClosedFormTail: return "closed-form tail";
    case GrowthReport::Basis::DeclaredClass: return "declared asymptotic class";
    case GrowthReport::Basis::PrefixOnly: return "prefix-only";
  }
  return "?";
}

GrowthReport script_R(const RadialProfile& profile, double p) {
  check_p(p);
  if (profile.empty()) throw Error(ErrorKind::InvalidInput, "empty radial profile");
  profile.validate();

  GrowthReport rep;
  rep.p = p;
  rep.first_index = profile.j_min;
  const double ln2 = std::log(2.0);
  double acc = 0.0;
  for (std::size_t k = 0; k < profile.masses.size(); ++k) {
    const int j = profile.j_min + static_cast<int>(k);
    const double m = profile.masses[k];
    double t;
    if (p > 1.0) {
      t = std::exp(p / (p - 1.0) * j * ln2 - std::log(m) / (p - 1.0));
      acc += t;
    } else {
      t = std::ldexp(1.0, j) / m;
      acc = std::max(acc, t);
    }
    rep.terms.push_back(t);
    rep.partial.push_back(acc);
  }

  const AsymptoticClass& cls = profile.asymptotic;
  const double last = rep.terms.back();
  auto finite_with_tail = [&](double ratio) {
    rep.kind = GrowthReport::Kind::Finite;
    rep.basis = GrowthReport::Basis::ClosedFormTail;
    rep.value = p > 1.0 ? acc + last * ratio / (1.0 - ratio) : acc;
  };

  switch (cls.kind) {
    case AsymptoticClass::Kind::Polynomial: {
      const double a = cls.parameter;
      if (p > 1.0) {
        if (p < a) {
          finite_with_tail(std::exp2((p - a) / (p - 1.0)));
        } else {
          rep.kind = GrowthReport::Kind::Divergent;
          rep.basis = GrowthReport::Basis::ClosedFormTail;
        }
      } else if (a >= 1.0) {
        finite_with_tail(0.0);
      } else {
        rep.kind = GrowthReport::Kind::Divergent;
        rep.basis = GrowthReport::Basis::ClosedFormTail;
      }
      break;
    }
    case AsymptoticClass::Kind::Geometric: {
      const double g = cls.parameter;
      if (!(g > 0.0)) throw Error(ErrorKind::InvalidInput, "geometric ratio must be positive");
      if (p > 1.0) {
        if (p * ln2 < std::log(g)) {
          finite_with_tail(std::exp(p / (p - 1.0) * ln2 - std::log(g) / (p - 1.0)));
        } else {
          rep.kind = GrowthReport::Kind::Divergent;
          rep.basis = GrowthReport::Basis::ClosedFormTail;
        }
      } else if (g >= 2.0) {
        finite_with_tail(0.0);
      } else {
        rep.kind = GrowthReport::Kind::Divergent;
        rep.basis = GrowthReport::Basis::ClosedFormTail;
      }
      break;
    }
    case AsymptoticClass::Kind::Exponential: {
      rep.kind = GrowthReport::Kind::Finite;
      rep.basis = GrowthReport::Basis::DeclaredClass;
      double tail = 0.0;
      if (p > 1.0 && rep.terms.size() >= 2) {
        const double r = last / rep.terms[rep.terms.size() - 2];
        if (r < 1.0) tail = last * r / (1.0 - r);
      }
      rep.value = acc + tail;
      break;
    }
    case AsymptoticClass::Kind::Unknown:
      rep.kind = GrowthReport::Kind::Undecided;
      rep.basis = GrowthReport::Basis::PrefixOnly;
      break;
  }
  return rep;
}

GrowthReport R_weight(const ModelSpace& space, const RadialFunction& h, double p, double R) {
  check_p(p);
  if (!(R > 1.0)) throw Error(ErrorKind::InvalidInput, "truncation radius must exceed 1");
  if (h.coeff < 0.0) throw Error(ErrorKind::InvalidInput, "coordinate weight must be nonnegative");
  if (h.coeff == 0.0 || h.cutoff > 1.0) return divergent_now(p);

  GrowthReport rep;
  rep.p = p;
  rep.first_index = 1;
  const auto law = density_law(space);

  if (p > 1.0) {
    const double x = p / (1.0 - p);
    const double cf = std::pow(h.coeff, x);
    auto integrand = [&](double r) { return std::pow(h.shape(r), x) * space.shell_density(r); };
    double acc = 0.0;
    for (int k = 1;; ++k) {
      const double a = std::ldexp(1.0, k - 1);
      if (a >= R) break;
      const double b = std::min(std::ldexp(1.0, k), R);
      const double mag = std::max(integrand(a), integrand(b)) * (b - a);
      const double tol = std::max(1e-12 * mag, 1e-300);
      const double t = cf * quad::log_simpson(integrand, a, b, tol, 8).value;
      acc += t;
      rep.terms.push_back(t);
      rep.partial.push_back(acc);
    }
    if (!law) {
      rep.kind = GrowthReport::Kind::Undecided;
      rep.basis = GrowthReport::Basis::PrefixOnly;
      return rep;
    }
    const double beta = x * h.exponent + law->exponent;
    const double gamma = x * h.rate + law->rate;
    rep.basis = GrowthReport::Basis::ClosedFormTail;
    if (gamma > 0.0 || (gamma == 0.0 && beta >= -1.0)) {
      rep.kind = GrowthReport::Kind::Divergent;
    } else if (gamma == 0.0) {
      rep.kind = GrowthReport::Kind::Finite;
      rep.value = acc + cf * law->coeff * std::pow(R, beta + 1.0) / (-beta - 1.0);
    } else {
      // exponentially decaying integrand: integrate until it has dropped by e^-60
      const double span = 60.0 / -gamma + std::abs(beta) / -gamma;
      const double end = R + span;
      const double tol = std::max(1e-12 * integrand(R) * span, 1e-300);
      const double tail = cf * quad::adaptive_simpson(integrand, R, end, tol, 64).value;
      rep.kind = GrowthReport::Kind::Finite;
      rep.value = acc + tail;
    }
    return rep;
  }

  // p = 1: grid max of 1/h on each dyadic shell
  constexpr int kGrid = 256;
  rep.grid_resolution = kGrid + 1;
  double acc = 0.0;
  for (int k = 1;; ++k) {
    const double a = std::ldexp(1.0, k - 1);
    if (a >= R) break;
    const double b = std::min(std::ldexp(1.0, k), R);
    double worst = 0.0;
    for (int i = 0; i <= kGrid; ++i) {
      const double r = a * std::pow(b / a, static_cast<double>(i) / kGrid);
      const double hv = h(r);
      worst = std::max(worst, hv > 0.0 ? 1.0 / hv : kInf);
    }
    acc = std::max(acc, worst);
    rep.terms.push_back(worst);
    rep.partial.push_back(acc);
  }
  rep.basis = GrowthReport::Basis::ClosedFormTail;
  if (!std::isfinite(acc)) {
    rep.kind = GrowthReport::Kind::Divergent;
    return rep;
  }
  if (h.rate < 0.0 || (h.rate == 0.0 && h.exponent < 0.0)) {
    rep.kind = GrowthReport::Kind::Divergent;
    return rep;
  }
  double value = acc;
  if (h.rate > 0.0 && h.exponent < 0.0) {
    // 1/h = r^{-e} e^{-b r} / c peaks at r = -e/b
    const double peak = -h.exponent / h.rate;
    if (peak > R) value = std::max(value, 1.0 / h(peak));
  }
  rep.kind = GrowthReport::Kind::Finite;
  rep.value = value;
  return rep;
}

bool in_muckenhoupt_range(int n, double alpha, double p) {
  if (p > 1.0) return alpha > -n && alpha < n * (p - 1.0);
  return alpha > -n && alpha <= 0.0;
}

RatioBand compare_R(const ModelSpace& space, const RadialFunction& h, double p, std::span<const int> levels) {
  check_p(p);
  RatioBand band;
  if (levels.empty()) throw Error(ErrorKind::InvalidInput, "no truncation levels");
  const int jmax = *std::max_element(levels.begin(), levels.end());
  if (*std::min_element(levels.begin(), levels.end()) < 0) {
    throw Error(ErrorKind::InvalidInput, "truncation levels must be nonnegative");
  }
  ModelSpace from_origin = space;
  from_origin.j_min = 0;
  const RadialProfile profile = annulus_masses(from_origin, jmax);
  const GrowthReport series = script_R(profile, p);

  if (const auto* pw = std::get_if<PowerWeightedEuclidean>(&space.variant)) {
    const double target = pw->n - 1.0 + pw->alpha;
    band.asserted = in_muckenhoupt_range(pw->n, pw->alpha, p) && h.rate == 0.0 && h.cutoff <= 1.0 &&
                    std::abs(h.exponent - target) < 1e-12;
    if (!band.asserted) band.note = "comparison not asserted for this weight";
  }

  const GrowthReport full = R_weight(space, h, p, std::ldexp(1.0, jmax + 1));
  band.min = kInf;
  band.max = 0.0;
  for (int J : levels) {
    // dyadic shell k of R_weight is [2^{k-1}, 2^k]; radius 2^{J+1} ends shell J+1
    const double rw = full.partial.at(static_cast<std::size_t>(J));
    const double sr = series.partial.at(static_cast<std::size_t>(J));
    if (!std::isfinite(rw) || !std::isfinite(sr) || sr <= 0.0) {
      band.defined = false;
      band.note = "functional divergent at the prefix; ratio undefined";
      band.levels.clear();
      band.ratios.clear();
      band.min = band.max = 0.0;
      return band;
    }
    band.levels.push_back(J);
    band.ratios.push_back(rw / sr);
    band.min = std::min(band.min, rw / sr);
    band.max = std::max(band.max, rw / sr);
  }
  band.defined = true;
  return band;
}

}  // namespace mms
