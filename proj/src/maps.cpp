#include "chainrec/maps.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace chainrec {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_circle(const Domain& d, const char* who) {
  if (d.dim() != 1 || !d.axis(0).periodic)
    throw std::invalid_argument(std::string(who) + " requires a 1-dimensional periodic domain");
}
}  // namespace

std::string map_kind_name(MapKind k) {
  switch (k) {
    case MapKind::Identity: return "identity";
    case MapKind::Rotation: return "rotation";
    case MapKind::NorthSouth: return "northsouth";
    case MapKind::Cat: return "cat";
    case MapKind::Custom: return "custom";
  }
  return "?";
}

MapInstance MapInstance::identity(Domain domain) {
  MapSpec spec;
  spec.kind = MapKind::Identity;
  spec.domain = std::move(domain);
  MapInstance m(std::move(spec));
  m.lipschitz_ = 1.0;
  m.preserves_lebesgue_ = true;
  m.has_inverse_ = true;
  return m;
}

MapInstance MapInstance::rotation(double alpha, Domain domain) {
  require_circle(domain, "rotation");
  MapSpec spec;
  spec.kind = MapKind::Rotation;
  spec.alpha = alpha;
  spec.domain = std::move(domain);
  MapInstance m(std::move(spec));
  m.lipschitz_ = 1.0;  // isometry
  m.preserves_lebesgue_ = true;
  m.has_inverse_ = true;
  return m;
}

MapInstance MapInstance::northsouth(double a, Domain domain) {
  require_circle(domain, "northsouth");
  if (!(std::fabs(kTwoPi * a) < 1.0))
    throw std::invalid_argument("northsouth requires |2*pi*a| < 1 (homeomorphism bound)");
  MapSpec spec;
  spec.kind = MapKind::NorthSouth;
  spec.amplitude = a;
  spec.domain = std::move(domain);
  MapInstance m(std::move(spec));
  m.lipschitz_ = 1.0 + kTwoPi * std::fabs(a);  // max |f'|
  m.preserves_lebesgue_ = false;
  m.has_inverse_ = true;  // monotone lift, inverted by bisection
  return m;
}

MapInstance MapInstance::cat() {
  MapSpec spec;
  spec.kind = MapKind::Cat;
  spec.domain = Domain::unit_torus(2);
  MapInstance m(std::move(spec));
  // Largest singular value of [[2,1],[1,1]]: sqrt of the top eigenvalue
  // (7 + sqrt(45)) / 2 of A^T A, which is the golden ratio squared.
  m.lipschitz_ = std::sqrt((7.0 + std::sqrt(45.0)) / 2.0);
  m.preserves_lebesgue_ = true;  // det = 1
  m.has_inverse_ = true;
  return m;
}

MapInstance MapInstance::custom(MapSpec spec) {
  if (spec.kind != MapKind::Custom)
    throw std::invalid_argument("MapInstance::custom expects a Custom spec");
  if (static_cast<int>(spec.exprs.size()) != spec.domain.dim())
    throw std::invalid_argument("custom map: expression count must equal domain dimension");
  MapInstance m(std::move(spec));
  m.preserves_lebesgue_ = false;
  m.has_inverse_ = false;
  m.estimate_lipschitz();
  return m;
}

MapInstance MapInstance::from_spec(MapSpec spec) {
  switch (spec.kind) {
    case MapKind::Identity: return identity(std::move(spec.domain));
    case MapKind::Rotation: return rotation(spec.alpha, std::move(spec.domain));
    case MapKind::NorthSouth: return northsouth(spec.amplitude, std::move(spec.domain));
    case MapKind::Cat: return cat();
    case MapKind::Custom: return custom(std::move(spec));
  }
  throw std::invalid_argument("from_spec: bad kind");
}

Point MapInstance::eval(const Point& p) const {
  const Domain& dom = spec_.domain;
  if (static_cast<int>(p.size()) != dom.dim())
    throw std::invalid_argument("MapInstance::eval: dimension mismatch");
  Point out(p.size());
  switch (spec_.kind) {
    case MapKind::Identity:
      out = p;
      break;
    case MapKind::Rotation:
      out[0] = p[0] + spec_.alpha;
      break;
    case MapKind::NorthSouth: {
      // Parameterized on the unit circle so the Lipschitz bound 1 + 2 pi |a|
      // holds for any span.
      const AxisInterval& ax = dom.axis(0);
      double u = (dom.reduce_coord(0, p[0]) - ax.lo) / ax.span();
      out[0] = ax.lo + ax.span() * (u + spec_.amplitude * std::sin(kTwoPi * u));
      break;
    }
    case MapKind::Cat:
      out[0] = 2.0 * p[0] + p[1];
      out[1] = p[0] + p[1];
      break;
    case MapKind::Custom: {
      for (size_t k = 0; k < p.size(); ++k) {
        double v = spec_.exprs[k].eval(p);
        if (!std::isfinite(v))
          throw EvalError("custom map produced a non-finite value in coordinate " +
                          std::to_string(k + 1));
        out[k] = v;
      }
      break;
    }
  }
  return dom.reduce(std::move(out));
}

Point MapInstance::eval_inverse(const Point& p) const {
  const Domain& dom = spec_.domain;
  if (!has_inverse_) throw std::logic_error("map has no inverse evaluator");
  if (static_cast<int>(p.size()) != dom.dim())
    throw std::invalid_argument("MapInstance::eval_inverse: dimension mismatch");
  Point out(p.size());
  switch (spec_.kind) {
    case MapKind::Identity:
      out = p;
      break;
    case MapKind::Rotation:
      out[0] = p[0] - spec_.alpha;
      break;
    case MapKind::NorthSouth: {
      // Solve u + a sin(2 pi u) = y on the lift; the left side is strictly
      // increasing, so bisection on [y - |a|, y + |a|] converges.
      const double span = dom.axis(0).span();
      const double a = spec_.amplitude;
      double y = (dom.reduce_coord(0, p[0]) - dom.axis(0).lo) / span;
      double lo = y - std::fabs(a), hi = y + std::fabs(a);
      for (int it = 0; it < 200; ++it) {
        double mid = 0.5 * (lo + hi);
        double v = mid + a * std::sin(kTwoPi * mid);
        (v < y ? lo : hi) = mid;
        if (hi - lo < 1e-16) break;
      }
      out[0] = dom.axis(0).lo + 0.5 * (lo + hi) * span;
      break;
    }
    case MapKind::Cat:
      // [[2,1],[1,1]]^-1 = [[1,-1],[-1,2]]
      out[0] = p[0] - p[1];
      out[1] = -p[0] + 2.0 * p[1];
      break;
    case MapKind::Custom:
      throw std::logic_error("custom maps have no inverse evaluator");
  }
  return dom.reduce(std::move(out));
}

void MapInstance::estimate_lipschitz() {
  // Sampled two-point estimate at small separations, times a safety factor.
  // Not rigorous; lipschitz_rigorous() reports that downstream.
  const Domain& dom = spec_.domain;
  const int d = dom.dim();
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::normal_distribution<double> gauss(0.0, 1.0);
  double worst = 0.0;
  const int samples = 10000;
  for (int s = 0; s < samples; ++s) {
    Point p(static_cast<size_t>(d)), q(static_cast<size_t>(d));
    for (int k = 0; k < d; ++k) {
      const AxisInterval& ax = dom.axis(k);
      p[static_cast<size_t>(k)] = ax.lo + unit(rng) * ax.span();
    }
    double scale = 1e-4;
    for (int k = 0; k < d; ++k) {
      const AxisInterval& ax = dom.axis(k);
      q[static_cast<size_t>(k)] = p[static_cast<size_t>(k)] + gauss(rng) * scale * ax.span();
      if (!ax.periodic) {
        if (q[static_cast<size_t>(k)] < ax.lo) q[static_cast<size_t>(k)] = ax.lo;
        if (q[static_cast<size_t>(k)] > ax.hi) q[static_cast<size_t>(k)] = ax.hi;
      }
    }
    double base = dom.metric(dom.reduce(p), dom.reduce(q));
    if (base <= 0.0) continue;
    double ratio = dom.metric(eval(p), eval(q)) / base;
    if (ratio > worst) worst = ratio;
  }
  lipschitz_ = (worst > 0.0 ? worst : 1.0) * 1.5;
  lipschitz_rigorous_ = false;
}

}  // namespace chainrec
