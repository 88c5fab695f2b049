// Copyright 2026 The mhbounds Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mhbounds/moment_formulas.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include <boost/math/special_functions/gamma.hpp>

#include "mhbounds/quadrature.hpp"
#include "mhbounds/tv_shift.hpp"

namespace mhb {

namespace {

// Map from lattice offsets to step mass, for both exact and double kinds.
template <typename Scalar>
using OffsetMap = std::map<std::vector<int>, Scalar>;

std::vector<int> to_key(const Eigen::VectorXi& z) {
  return std::vector<int>(z.data(), z.data() + z.size());
}

template <typename Scalar>
OffsetMap<Scalar> step_offsets(const Proposal& step, int dim, bool need_exact) {
  OffsetMap<Scalar> out;
  if (const auto* lat = std::get_if<LatticeStep>(&step)) {
    if (lat->points.cols() != dim) {
      throw DimensionMismatch("step dimension mismatch");
    }
    if (need_exact && !lat->exact) {
      throw PreconditionFailed("step pmf is not exact");
    }
    for (Eigen::Index i = 0; i < lat->points.rows(); ++i) {
      if constexpr (std::is_same_v<Scalar, Rational>) {
        out[to_key(lat->points.row(i).transpose())] =
            lat->mass_q[static_cast<std::size_t>(i)];
      } else {
        out[to_key(lat->points.row(i).transpose())] =
            lat->mass[static_cast<std::size_t>(i)];
      }
    }
    return out;
  }
  if (const auto* axis = std::get_if<AxisOddStep>(&step)) {
    if (axis->dim != dim) throw DimensionMismatch("step dimension mismatch");
    for (const auto& mv : axis->moves) {
      std::vector<int> key(static_cast<std::size_t>(dim), 0);
      key[static_cast<std::size_t>(mv.axis)] = static_cast<int>(mv.offset);
      if constexpr (std::is_same_v<Scalar, Rational>) {
        out[key] = mv.weight;
      } else {
        out[key] = to_double(mv.weight);
      }
    }
    return out;
  }
  throw SupportMismatch("proposal does not live on the lattice");
}

// |z|^r as an exact rational; odd orders need an integer Euclidean length.
Rational norm_pow_exact(const std::vector<int>& z, unsigned r) {
  long sq = 0;
  for (const int zi : z) sq += static_cast<long>(zi) * zi;
  if (r % 2 == 0) return rational_pow(Rational(sq), r / 2);
  const long root = std::lround(std::sqrt(static_cast<double>(sq)));
  if (root * root != sq) {
    throw PreconditionFailed("odd orders need integer-length offsets");
  }
  return rational_pow(Rational(root), r);
}

double norm_of(const std::vector<int>& z) {
  double sq = 0.0;
  for (const int zi : z) sq += static_cast<double>(zi) * zi;
  return std::sqrt(sq);
}

Vector to_vector(const std::vector<int>& z) {
  Vector v(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    v[static_cast<Eigen::Index>(i)] = z[i];
  }
  return v;
}

// Exact lattice overlap sum min{wa p(x), wb p(x - z)}.
Rational exact_overlap(const LatticeTarget& t, const Rational& wa,
                       const Rational& wb, const std::vector<int>& z) {
  Rational s = 0;
  Eigen::VectorXi zv(static_cast<Eigen::Index>(z.size()));
  for (std::size_t i = 0; i < z.size(); ++i) {
    zv[static_cast<Eigen::Index>(i)] = z[i];
  }
  for (Eigen::Index i = 0; i < t.points.rows(); ++i) {
    const long j = find_point(t.points, (t.points.row(i).transpose() - zv).eval());
    if (j < 0) continue;
    s += std::min(wa * t.mass_q[static_cast<std::size_t>(i)],
                  wb * t.mass_q[static_cast<std::size_t>(j)]);
  }
  return s;
}

// Integration window for a gaussian factor with scale s: wide enough that
// the omitted tail of |z|^r * density is negligible for any r.
double gaussian_hi(double s, double r) { return s * (std::sqrt(r) + 40.0); }

std::vector<double> outer_points(const Proposal& step, double r) {
  if (const auto* g = std::get_if<GaussianStep>(&step)) {
    const double s = g->sd[0];
    const double hi = gaussian_hi(s, r);
    return {-hi, -s, 0.0, s, hi};
  }
  std::vector<double> pts = step_breakpoints(step);
  for (const double b : std::vector<double>(pts)) pts.push_back(-b);
  pts.push_back(0.0);
  return pts;
}

MomentResult lattice_incr(const ChainSpec& spec, double r) {
  const auto& target = std::get<LatticeTarget>(spec.target);
  const int dim = static_cast<int>(target.points.cols());
  const auto offsets = step_offsets<double>(spec.proposal, dim, false);
  const auto mass_at = [&](const std::vector<int>& key) {
    const auto it = offsets.find(key);
    return it == offsets.end() ? 0.0 : it->second;
  };
  double value = 0.0;
  for (const auto& [z, wb] : offsets) {
    if (std::all_of(z.begin(), z.end(), [](int v) { return v == 0; })) continue;
    std::vector<int> neg(z.size());
    std::transform(z.begin(), z.end(), neg.begin(), [](int v) { return -v; });
    const double wa = mass_at(neg);
    const OverlapResult ov =
        weighted_overlap(spec.target, wa, wb, to_vector(z));
    value += std::pow(norm_of(z), r) * ov.value;
  }
  return {value, target.exact ? "exact" : "sum", 1e-13 * (1.0 + value)};
}

}  // namespace

GeneralQ random_walk_q(const Proposal& step) {
  if (dimension(step) != 1) throw DimensionMismatch("general q needs d = 1");
  GeneralQ q;
  q.density = [step](double x, double y) { return step_density(step, y - x); };
  q.breakpoints = [step](double x) {
    std::vector<double> pts = step_breakpoints(step);
    for (double& b : pts) b += x;
    return pts;
  };
  return q;
}

GeneralQ independence_q(const Target& draw_law) {
  if (dimension(draw_law) != 1) throw DimensionMismatch("general q needs d = 1");
  GeneralQ q;
  q.density = [draw_law](double, double y) { return density_at(draw_law, y); };
  q.breakpoints = [draw_law](double) { return target_breakpoints(draw_law); };
  return q;
}

MomentResult incr_moment_mh(const Target& target, const GeneralQ& q, double r,
                            double tol) {
  if (dimension(target) != 1) {
    throw DimensionMismatch("general formula needs d = 1");
  }
  if (!(r > 0.0)) throw RangeError("order must be positive");
  const std::vector<double> xpts = target_breakpoints(target);
  const auto inner = [&](double x) {
    std::vector<double> ypts = q.breakpoints(x);
    ypts.insert(ypts.end(), xpts.begin(), xpts.end());
    ypts.push_back(x);
    const double px = density_at(target, x);
    return integrate_piecewise(
               [&](double y) {
                 const double fwd = px * q.density(x, y);
                 const double bwd = density_at(target, y) * q.density(y, x);
                 return std::pow(std::abs(x - y), r) * std::min(fwd, bwd);
               },
               ypts, tol / 10.0)
        .value;
  };
  const QuadResult outer = integrate_piecewise(inner, xpts, tol);
  return {outer.value, "quadrature",
          outer.error + 1e-9 * std::abs(outer.value) + 1e-14};
}

MomentResult incr_moment_rwmh(const ChainSpec& spec, double r, double tol) {
  if (!(r > 0.0)) throw RangeError("order must be positive");
  if (!is_random_walk(spec.proposal)) {
    throw SupportMismatch("increment formula needs a random-walk proposal");
  }
  if (is_lattice(spec)) return lattice_incr(spec, r);
  if (dimension(spec.target) != 1) {
    throw PreconditionFailed(
        "d > 1 continuous chains need the symmetric-step form");
  }
  const auto integrand = [&](double z) {
    if (z == 0.0) return 0.0;
    Vector zv(1);
    zv[0] = z;
    const OverlapResult ov = weighted_overlap(
        spec.target, step_density(spec.proposal, -z),
        step_density(spec.proposal, z), zv);
    return std::pow(std::abs(z), r) * ov.value;
  };
  const QuadResult q = integrate_piecewise(integrand, outer_points(spec.proposal, r), tol);
  return {q.value, "quadrature", q.error + 1e-9 * std::abs(q.value) + 1e-14};
}

Rational incr_moment_rwmh_exact(const LatticeTarget& target,
                                const Proposal& step, unsigned r) {
  if (!target.exact) throw PreconditionFailed("target pmf is not exact");
  const int dim = static_cast<int>(target.points.cols());
  const auto offsets = step_offsets<Rational>(step, dim, true);
  const auto mass_at = [&](const std::vector<int>& key) -> Rational {
    const auto it = offsets.find(key);
    return it == offsets.end() ? Rational(0) : it->second;
  };
  Rational value = 0;
  for (const auto& [z, wb] : offsets) {
    if (std::all_of(z.begin(), z.end(), [](int v) { return v == 0; })) continue;
    std::vector<int> neg(z.size());
    std::transform(z.begin(), z.end(), neg.begin(), [](int v) { return -v; });
    value += norm_pow_exact(z, r) * exact_overlap(target, mass_at(neg), wb, z);
  }
  return value;
}

MomentResult incr_moment_rwmh_symm(const ChainSpec& spec, double r,
                                   double tol) {
  if (!(r > 0.0)) throw RangeError("order must be positive");
  if (!is_symmetric(spec.proposal)) {
    throw NotSymmetric("step law must be symmetric");
  }
  if (is_lattice(spec)) {
    const auto& target = std::get<LatticeTarget>(spec.target);
    const int dim = static_cast<int>(target.points.cols());
    const auto offsets = step_offsets<double>(spec.proposal, dim, false);
    double value = 0.0;
    for (const auto& [z, w] : offsets) {
      const double nz = norm_of(z);
      if (nz == 0.0) continue;
      value += w * std::pow(nz, r) * (1.0 - tv_shift(spec.target, to_vector(z)));
    }
    return {value, target.exact ? "exact" : "sum", 1e-13 * (1.0 + value)};
  }
  const int d = dimension(spec.target);
  if (d == 1) {
    const auto integrand = [&](double z) {
      if (z == 0.0) return 0.0;
      Vector zv(1);
      zv[0] = z;
      return step_density(spec.proposal, z) * std::pow(std::abs(z), r) *
             (1.0 - tv_shift(spec.target, zv));
    };
    const QuadResult q =
        integrate_piecewise(integrand, outer_points(spec.proposal, r), tol);
    return {q.value, "quadrature", q.error + 1e-9 * std::abs(q.value) + 1e-14};
  }
  // d > 1: reduce over the step's radial or axis structure. Both reductions
  // need the target's shift TV to be available for the relevant directions.
  if (const auto* g = std::get_if<GaussianStep>(&spec.proposal)) {
    const bool iso = (g->sd.array() == g->sd[0]).all();
    if (!iso) {
      throw PreconditionFailed("d > 1 gaussian steps must be isotropic");
    }
    const double s = g->sd[0];
    const double norm =
        std::pow(2.0, d / 2.0 - 1.0) * boost::math::tgamma(d / 2.0) *
        std::pow(s, d);
    Vector e1 = Vector::Zero(d);
    const auto integrand = [&](double rho) {
      if (rho == 0.0) return 0.0;
      Vector zv = e1;
      zv[0] = rho;  // spherical targets: TV depends only on |z|
      const double chi = std::pow(rho, d - 1) *
                         std::exp(-rho * rho / (2.0 * s * s)) / norm;
      return chi * std::pow(rho, r) * (1.0 - tv_shift(spec.target, zv));
    };
    const double hi = gaussian_hi(s, r + d);
    const QuadResult q = integrate_piecewise(
        integrand, {0.0, s, s * std::sqrt(d - 1.0 + r), hi}, tol);
    return {q.value, "quadrature", q.error + 1e-9 * std::abs(q.value) + 1e-14};
  }
  if (const auto* axis = std::get_if<AxisGaussianStep>(&spec.proposal)) {
    double value = 0.0;
    double error = 0.0;
    for (int a = 0; a < d; ++a) {
      const double s = axis->sd[a];
      const double w = axis->weight[a];
      if (w == 0.0) continue;
      const auto integrand = [&](double t) {
        if (t == 0.0) return 0.0;
        Vector zv = Vector::Zero(d);
        zv[a] = t;
        const double dens = std::exp(-t * t / (2.0 * s * s)) /
                            (s * std::sqrt(2.0 * M_PI));
        return dens * std::pow(std::abs(t), r) *
               (1.0 - tv_shift(spec.target, zv));
      };
      const double hi = gaussian_hi(s, r);
      const QuadResult q =
          integrate_piecewise(integrand, {-hi, -s, 0.0, s, hi}, tol);
      value += w * q.value;
      error += w * q.error;
    }
    return {value, "quadrature", error + 1e-9 * std::abs(value) + 1e-14};
  }
  throw PreconditionFailed("unsupported d > 1 step law");
}

MomentResult incr_moment_symm_unimodal(const ChainSpec& spec, double r,
                                       double tol) {
  if (!(r > 0.0)) throw RangeError("order must be positive");
  if (dimension(spec.target) != 1) {
    throw DimensionMismatch("tail form needs d = 1");
  }
  if (!is_symmetric(spec.target) || !is_unimodal(spec.target)) {
    throw PreconditionFailed("target must be symmetric and unimodal");
  }
  if (!is_symmetric(spec.proposal)) {
    throw NotSymmetric("step law must be symmetric");
  }
  if (is_lattice(spec)) {
    const auto& target = std::get<LatticeTarget>(spec.target);
    if (!has_odd_support(spec.proposal)) {
      throw PreconditionFailed("lattice tail form needs odd step support");
    }
    const auto offsets = step_offsets<double>(spec.proposal, 1, false);
    double value = 0.0;
    for (const auto& [z, w] : offsets) {
      if (z[0] <= 0) continue;
      const long y = (z[0] - 1) / 2;
      value += 2.0 * w * std::pow(z[0], r) *
               tail_probability(spec.target, static_cast<double>(y));
    }
    return {value, target.exact ? "exact" : "sum", 1e-13 * (1.0 + value)};
  }
  const auto integrand = [&](double z) {
    if (z <= 0.0) return 0.0;
    return 2.0 * step_density(spec.proposal, z) * std::pow(z, r) *
           tail_probability(spec.target, z / 2.0);
  };
  std::vector<double> pts = outer_points(spec.proposal, r);
  pts.erase(std::remove_if(pts.begin(), pts.end(),
                           [](double v) { return v < 0.0; }),
            pts.end());
  pts.push_back(0.0);
  const QuadResult q = integrate_piecewise(integrand, pts, tol);
  return {q.value, "quadrature", q.error + 1e-9 * std::abs(q.value) + 1e-14};
}

Rational incr_moment_symm_unimodal_exact(const LatticeTarget& target,
                                         const Proposal& step, unsigned r) {
  if (!target.exact) throw PreconditionFailed("target pmf is not exact");
  Target t = target;
  if (!is_symmetric(t) || !is_unimodal(t)) {
    throw PreconditionFailed("target must be symmetric and unimodal");
  }
  if (!is_symmetric(step)) throw NotSymmetric("step law must be symmetric");
  if (!has_odd_support(step)) {
    throw PreconditionFailed("lattice tail form needs odd step support");
  }
  const auto offsets = step_offsets<Rational>(step, 1, true);
  Rational value = 0;
  for (const auto& [z, w] : offsets) {
    if (z[0] <= 0) continue;
    const long y = (z[0] - 1) / 2;
    value += 2 * w * rational_pow(Rational(z[0]), r) *
             tail_probability_exact(target, Rational(y));
  }
  return value;
}

MomentResult incr_moment_linear(const ChainSpec& spec, const Vector& c,
                                double r, double tol) {
  const int d = dimension(spec.target);
  if (c.size() != d) throw DimensionMismatch("direction dimension mismatch");
  if (c.isZero(0.0)) throw ZeroVector("direction must be nonzero");
  if (!(r > 0.0)) throw RangeError("order must be positive");
  if (d == 1) {
    MomentResult base = incr_moment_rwmh(spec, r, tol);
    const double scale = std::pow(std::abs(c[0]), r);
    base.value *= scale;
    base.error *= scale;
    return base;
  }
  if (is_lattice(spec)) {
    const auto& target = std::get<LatticeTarget>(spec.target);
    const auto offsets = step_offsets<double>(spec.proposal, d, false);
    const auto mass_at = [&](const std::vector<int>& key) {
      const auto it = offsets.find(key);
      return it == offsets.end() ? 0.0 : it->second;
    };
    double value = 0.0;
    for (const auto& [z, wb] : offsets) {
      const double dot = c.dot(to_vector(z));
      if (dot == 0.0) continue;
      std::vector<int> neg(z.size());
      std::transform(z.begin(), z.end(), neg.begin(), [](int v) { return -v; });
      const OverlapResult ov =
          weighted_overlap(spec.target, mass_at(neg), wb, to_vector(z));
      value += std::pow(std::abs(dot), r) * ov.value;
    }
    return {value, target.exact ? "exact" : "sum", 1e-13 * (1.0 + value)};
  }
  const auto* axis = std::get_if<AxisGaussianStep>(&spec.proposal);
  const auto* gt = std::get_if<GaussianTarget>(&spec.target);
  if (axis == nullptr || gt == nullptr) {
    throw PreconditionFailed(
        "d > 1 continuous linear moments need axis gaussian steps on product "
        "gaussian targets");
  }
  // Axis moves factorize: a move along axis a is accepted with the 1-d
  // acceptance probability of the coordinate chain, and contributes
  // |c_a t|^r.
  double value = 0.0;
  double error = 0.0;
  for (int a = 0; a < d; ++a) {
    if (axis->weight[a] == 0.0 || c[a] == 0.0) continue;
    Vector mu(1), var(1), sd(1);
    mu[0] = gt->mean[a];
    var[0] = gt->var[a];
    sd[0] = axis->sd[a];
    const ChainSpec coord{make_gaussian(mu, var), make_gaussian_step(sd)};
    const MomentResult m = incr_moment_rwmh(coord, r, tol);
    const double scale = axis->weight[a] * std::pow(std::abs(c[a]), r);
    value += scale * m.value;
    error += scale * m.error;
  }
  return {value, "quadrature", error + 1e-14};
}

double trace_cov_rwmh(const ChainSpec& spec) {
  const double var = absolute_moment(spec.target, 2.0, mean_vector(spec.target));
  const double incr2 = incr_moment_rwmh(spec, 2.0).value;
  return var - incr2 / 2.0;
}

double trace_corr_rwmh(const ChainSpec& spec) {
  const double var = absolute_moment(spec.target, 2.0, mean_vector(spec.target));
  if (var == 0.0) throw DegeneratePath("target has zero variance");
  const double incr2 = incr_moment_rwmh(spec, 2.0).value;
  return 1.0 - incr2 / (2.0 * var);
}

SymmetrizationFactors symmetrization_factors(const Target& target,
                                             const Proposal& step, double r) {
  const ChainSpec base_spec{target, step};
  const double base = incr_moment_rwmh(base_spec, r).value;
  const double num_alpha =
      incr_moment_rwmh({symmetrize_target(target), step}, r).value;
  const double num_beta =
      incr_moment_rwmh({target, symmetrize_proposal(step)}, r).value;
  const auto ratio = [](double num, double den) {
    if (den > 0.0) return num / den;
    if (num > 0.0) return std::numeric_limits<double>::infinity();
    return std::numeric_limits<double>::quiet_NaN();
  };
  const double alpha = ratio(num_alpha, base);
  const double beta = ratio(num_beta, base);
  if (std::isnan(alpha) && std::isnan(beta)) {
    throw BothZero("base and symmetrized chains all have vanishing increments");
  }
  return {alpha, beta};
}

namespace {

TwoPointExample bernoulli_chain(const Rational& p, const Rational& theta) {
  IntMatrix pts(2, 1);
  pts << 0, 1;
  Target target = make_lattice_pmf(pts, {Rational(1) - p, p});
  IntMatrix zs(2, 1);
  zs << -1, 1;
  Proposal step = make_lattice_step(zs, {Rational(1) - theta, theta});
  TwoPointExample out;
  out.chain = make_chain(std::move(target), std::move(step));
  out.p = to_double(p);
  out.theta = to_double(theta);
  return out;
}

}  // namespace

TwoPointExample construct_alpha_example(double alpha) {
  if (!(alpha > 0.5) || !std::isfinite(alpha)) {
    throw OutOfRange("inflation factors live in (1/2, inf)");
  }
  const Rational a(alpha);
  const Rational p = Rational(2) / (1 + 2 * a);
  const double knee = (std::sqrt(2.0) + 1.0) / 2.0;
  const Rational theta = alpha <= knee ? p : (2 * a - 1) / (2 * a);
  return bernoulli_chain(p, theta);
}

TwoPointExample construct_beta_example(double beta) {
  if (!(beta > 0.5) || !std::isfinite(beta)) {
    throw OutOfRange("inflation factors live in (1/2, inf)");
  }
  const Rational b(beta);
  const Rational p = beta <= 1.0 ? Rational(1) / (2 * b) : Rational(1, 2);
  const Rational theta = Rational(1) / (2 * b);
  return bernoulli_chain(p, theta);
}

}  // namespace mhb
