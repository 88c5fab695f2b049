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

#include "mhbounds/distributions.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include <boost/math/special_functions/beta.hpp>
#include <boost/math/special_functions/erf.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "mhbounds/quadrature.hpp"

namespace mhb {

namespace {

constexpr double kGaussianWindowSigmas = 9.0;  // omitted tail mass ~2e-19
constexpr double kMassTol = 1e-8;
constexpr double kLatticeMassTol = 1e-12;

double upper_gaussian_tail(double u) {
  // P(N(0,1) > u) with full relative accuracy in the far tail.
  return 0.5 * boost::math::erfc(u / std::sqrt(2.0));
}

// Antiderivative of |x|^r: H'(x) = |x|^r, H odd.
double abs_power_antiderivative(double x, double r) {
  return std::copysign(std::pow(std::abs(x), r + 1.0) / (r + 1.0), x);
}

// Exact integral of |x - m|^r over [a, b].
double interval_abs_moment(double a, double b, double m, double r) {
  return abs_power_antiderivative(b - m, r) - abs_power_antiderivative(a - m, r);
}

// Surface area of the unit sphere in R^d.
double sphere_surface(int d) {
  return 2.0 * std::pow(M_PI, d / 2.0) / boost::math::tgamma(d / 2.0);
}

// P(|U_1| > u) for U uniform on the unit sphere in R^d.
double sphere_coordinate_tail(int d, double u) {
  if (u <= 0.0) return 1.0;
  if (u >= 1.0) return 0.0;
  if (d == 1) return 1.0;
  return boost::math::ibeta((d - 1) / 2.0, 0.5, 1.0 - u * u);
}

double profile_value(const std::vector<RadialKnot>& knots, double rho) {
  if (rho < 0.0) rho = -rho;
  if (knots.empty() || rho >= knots.back().radius) return 0.0;
  for (std::size_t i = 0; i + 1 < knots.size(); ++i) {
    if (rho <= knots[i + 1].radius) {
      const double r0 = knots[i].radius, r1 = knots[i + 1].radius;
      const double v0 = knots[i].value, v1 = knots[i + 1].value;
      if (r1 == r0) return v1;
      return v0 + (v1 - v0) * (rho - r0) / (r1 - r0);
    }
  }
  return 0.0;
}

double star_radial_mass(const StarUnimodalTarget& t) {
  const int d = t.dim;
  const double surface = sphere_surface(d);
  std::vector<double> pts;
  for (const auto& k : t.profile) pts.push_back(k.radius);
  const auto f = [&](double rho) {
    return surface * std::pow(rho, d - 1) * profile_value(t.profile, rho);
  };
  return integrate_piecewise(f, pts).value;
}

struct LatticeRow {
  std::vector<int> point;
  double mass;
  Rational mass_q;
};

// Canonicalizes lattice support: merge duplicates, drop zero mass, sort rows
// lexicographically.
template <typename MassVec>
void canonicalize_lattice(IntMatrix& points, MassVec make_mass,
                          std::vector<double>& mass_out,
                          std::vector<Rational>& mass_q_out, bool exact) {
  std::map<std::vector<int>, std::pair<double, Rational>> acc;
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    std::vector<int> p(points.cols());
    for (Eigen::Index j = 0; j < points.cols(); ++j) p[j] = points(i, j);
    auto [md, mq] = make_mass(static_cast<std::size_t>(i));
    auto& slot = acc[p];
    slot.first += md;
    slot.second += mq;
  }
  std::vector<LatticeRow> rows;
  for (auto& [p, m] : acc) {
    const bool zero = exact ? (m.second == 0) : (m.first == 0.0);
    if (zero) continue;
    if (m.first < 0.0 || (exact && m.second < 0)) {
      throw MassError("negative pmf mass");
    }
    rows.push_back({p, m.first, m.second});
  }
  if (rows.empty()) throw MassError("empty lattice support");
  points.resize(static_cast<Eigen::Index>(rows.size()),
                static_cast<Eigen::Index>(rows.front().point.size()));
  mass_out.clear();
  mass_q_out.clear();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].point.size(); ++j) {
      points(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i].point[j];
    }
    mass_out.push_back(rows[i].mass);
    if (exact) mass_q_out.push_back(rows[i].mass_q);
  }
}

void check_lattice_mass(const LatticeTarget& t) {
  if (t.exact) {
    Rational sum = 0;
    for (const auto& m : t.mass_q) sum += m;
    if (sum != 1) throw MassError("lattice pmf mass is " + rational_to_string(sum));
  } else {
    const double sum = std::accumulate(t.mass.begin(), t.mass.end(), 0.0);
    if (std::abs(sum - 1.0) > kLatticeMassTol) {
      throw MassError("lattice pmf mass deviates from 1");
    }
  }
}

LatticeTarget as_lattice_target(IntMatrix points, std::vector<Rational> mass) {
  LatticeTarget t;
  if (points.rows() != static_cast<Eigen::Index>(mass.size())) {
    throw SupportMismatch("point/mass count mismatch");
  }
  t.exact = true;
  IntMatrix pts = std::move(points);
  canonicalize_lattice(
      pts,
      [&mass](std::size_t i) {
        return std::pair<double, Rational>(to_double(mass[i]), mass[i]);
      },
      t.mass, t.mass_q, true);
  t.points = std::move(pts);
  check_lattice_mass(t);
  return t;
}

LatticeTarget as_lattice_target(IntMatrix points, std::vector<double> mass) {
  LatticeTarget t;
  if (points.rows() != static_cast<Eigen::Index>(mass.size())) {
    throw SupportMismatch("point/mass count mismatch");
  }
  t.exact = false;
  IntMatrix pts = std::move(points);
  canonicalize_lattice(
      pts,
      [&mass](std::size_t i) {
        return std::pair<double, Rational>(mass[i], Rational(0));
      },
      t.mass, t.mass_q, false);
  t.points = std::move(pts);
  check_lattice_mass(t);
  return t;
}

double piece_density(const WeightedInterval& p) {
  return p.weight / (p.hi - p.lo);
}

// Length of [lo, hi] intersected with {|x| > t}.
double length_outside(double lo, double hi, double t) {
  double len = 0.0;
  len += std::max(0.0, hi - std::max(lo, t));          // right part
  len += std::max(0.0, std::min(hi, -t) - lo);         // left part
  return len;
}

}  // namespace

// ---------------------------------------------------------------------------
// Constructors.
// ---------------------------------------------------------------------------

Target make_gaussian(Vector mean, Vector var) {
  if (mean.size() != var.size() || mean.size() < 1) {
    throw DimensionMismatch("gaussian mean/var size mismatch");
  }
  for (Eigen::Index i = 0; i < var.size(); ++i) {
    if (!(var[i] > 0.0)) throw PreconditionFailed("gaussian variance must be positive");
  }
  return GaussianTarget{std::move(mean), std::move(var)};
}

Target make_uniform_interval(double a, double b) {
  if (!(a < b)) throw PreconditionFailed("uniform interval needs a < b");
  return UniformIntervalTarget{a, b};
}

Target make_uniform_mixture(std::vector<WeightedInterval> pieces) {
  std::vector<WeightedInterval> kept;
  double total = 0.0;
  for (const auto& p : pieces) {
    if (p.weight == 0.0) continue;
    if (!(p.lo < p.hi) || p.weight < 0.0) {
      throw PreconditionFailed("bad mixture piece");
    }
    kept.push_back(p);
    total += p.weight;
  }
  if (kept.empty()) throw MassError("empty mixture");
  if (std::abs(total - 1.0) > 1e-10) throw MassError("mixture weights must sum to 1");
  return UniformMixtureTarget{std::move(kept)};
}

Target make_star_unimodal(int dim, std::vector<RadialKnot> profile) {
  if (dim < 1) throw DimensionMismatch("dimension must be >= 1");
  if (profile.size() < 2 || profile.front().radius != 0.0) {
    throw PreconditionFailed("radial profile must start at radius 0");
  }
  for (std::size_t i = 0; i + 1 < profile.size(); ++i) {
    if (!(profile[i].radius < profile[i + 1].radius)) {
      throw PreconditionFailed("radial knots must be strictly increasing");
    }
    if (profile[i + 1].value > profile[i].value + 1e-15) {
      throw PreconditionFailed("radial profile must be nonincreasing");
    }
  }
  for (const auto& k : profile) {
    if (k.value < 0.0) throw MassError("negative radial profile");
  }
  if (profile.back().value != 0.0) {
    throw PreconditionFailed("radial profile must reach 0 at its last knot");
  }
  StarUnimodalTarget t{dim, std::move(profile)};
  const double mass = star_radial_mass(t);
  if (!(mass > 0.0)) throw MassError("zero-mass radial profile");
  for (auto& k : t.profile) k.value /= mass;
  return t;
}

Target make_custom_density(CustomDensityTarget spec) {
  if (!spec.density) throw PreconditionFailed("missing density callable");
  if (!(spec.lo < spec.hi)) throw PreconditionFailed("bad support window");
  const double mass =
      integrate_piecewise(spec.density, {spec.lo, spec.mode, spec.hi}).value;
  if (std::abs(mass - 1.0) > kMassTol) {
    throw MassError("custom density mass deviates from 1");
  }
  return spec;
}

Target make_lattice_pmf(IntMatrix points, std::vector<Rational> mass) {
  return as_lattice_target(std::move(points), std::move(mass));
}

Target make_lattice_pmf(IntMatrix points, std::vector<double> mass) {
  return as_lattice_target(std::move(points), std::move(mass));
}

Target make_bernoulli(const Rational& p) {
  if (p < 0 || p > 1) throw MassError("bernoulli parameter outside [0, 1]");
  IntMatrix pts(2, 1);
  pts(0, 0) = 0;
  pts(1, 0) = 1;
  return as_lattice_target(pts, std::vector<Rational>{1 - p, p});
}

Target make_lattice_uniform(int k) {
  if (k < 0) throw PreconditionFailed("lattice-uniform needs k >= 0");
  const int n = 2 * k + 1;
  IntMatrix pts(n, 1);
  std::vector<Rational> mass(n, Rational(1, n));
  for (int i = 0; i < n; ++i) pts(i, 0) = i - k;
  return as_lattice_target(pts, std::move(mass));
}

Target make_lattice_radial(int dim, double cutoff,
                           const std::function<double(double)>& profile) {
  if (dim < 1 || dim > 4) throw DimensionMismatch("radial lattice supports d in [1, 4]");
  if (!(cutoff >= 0.0)) throw PreconditionFailed("negative cutoff");
  const int b = static_cast<int>(std::floor(cutoff));
  std::vector<std::vector<int>> pts;
  std::vector<double> mass;
  std::vector<int> x(dim, -b);
  while (true) {
    double norm2 = 0.0;
    for (int c : x) norm2 += static_cast<double>(c) * c;
    const double norm = std::sqrt(norm2);
    if (norm <= cutoff) {
      const double v = profile(norm);
      if (v < 0.0) throw MassError("negative radial profile");
      if (v > 0.0) {
        pts.push_back(x);
        mass.push_back(v);
      }
    }
    int j = dim - 1;
    while (j >= 0 && x[j] == b) {
      x[j] = -b;
      --j;
    }
    if (j < 0) break;
    ++x[j];
  }
  if (pts.empty()) throw MassError("empty radial lattice support");
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  for (auto& m : mass) m /= total;
  IntMatrix points(static_cast<Eigen::Index>(pts.size()), dim);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (int j = 0; j < dim; ++j) {
      points(static_cast<Eigen::Index>(i), j) = pts[i][static_cast<std::size_t>(j)];
    }
  }
  return as_lattice_target(points, mass);
}

Proposal make_gaussian_step(Vector sd) {
  if (sd.size() < 1) throw DimensionMismatch("empty sd vector");
  for (Eigen::Index i = 0; i < sd.size(); ++i) {
    if (!(sd[i] > 0.0)) throw PreconditionFailed("step sd must be positive");
  }
  return GaussianStep{std::move(sd)};
}

Proposal make_uniform_step(double a, double b) {
  if (!(a < b)) throw PreconditionFailed("uniform step needs a < b");
  return UniformStep{a, b};
}

Proposal make_two_sided_uniform_step(double center, double halfwidth) {
  if (!(center > 0.0) || !(halfwidth > 0.0)) {
    throw PreconditionFailed("two-sided step needs positive center and halfwidth");
  }
  return TwoSidedUniformStep{center, halfwidth};
}

namespace {

LatticeStep as_lattice_step(IntMatrix points, std::vector<Rational> mass) {
  const LatticeTarget t = as_lattice_target(std::move(points), std::move(mass));
  return LatticeStep{t.points, t.mass, t.mass_q, t.exact};
}

LatticeStep as_lattice_step(IntMatrix points, std::vector<double> mass) {
  const LatticeTarget t = as_lattice_target(std::move(points), std::move(mass));
  return LatticeStep{t.points, t.mass, t.mass_q, t.exact};
}

}  // namespace

Proposal make_lattice_step(IntMatrix points, std::vector<Rational> mass) {
  return as_lattice_step(std::move(points), std::move(mass));
}

Proposal make_lattice_step(IntMatrix points, std::vector<double> mass) {
  return as_lattice_step(std::move(points), std::move(mass));
}

Proposal make_axis_odd_step(int dim, std::vector<AxisMove> moves) {
  if (dim < 1) throw DimensionMismatch("dimension must be >= 1");
  Rational total = 0;
  std::map<std::pair<int, long>, Rational> merged;
  for (const auto& mv : moves) {
    if (mv.weight == 0) continue;
    if (mv.weight < 0) throw MassError("negative step weight");
    if (mv.axis < 0 || mv.axis >= dim) throw SupportMismatch("axis out of range");
    if (mv.offset % 2 == 0) throw PreconditionFailed("axis offsets must be odd");
    merged[{mv.axis, mv.offset}] += mv.weight;
    total += mv.weight;
  }
  if (merged.empty()) throw MassError("empty step support");
  if (total != 1) throw MassError("axis step weights must sum to 1");
  std::vector<AxisMove> kept;
  for (const auto& [key, w] : merged) kept.push_back({key.first, key.second, w});
  return AxisOddStep{dim, std::move(kept)};
}

Proposal make_axis_gaussian_step(Vector sd, Vector weight) {
  if (sd.size() != weight.size() || sd.size() < 1) {
    throw DimensionMismatch("sd/weight size mismatch");
  }
  double total = 0.0;
  for (Eigen::Index i = 0; i < sd.size(); ++i) {
    if (!(sd[i] > 0.0) || weight[i] < 0.0) {
      throw PreconditionFailed("bad axis gaussian step");
    }
    total += weight[i];
  }
  if (std::abs(total - 1.0) > 1e-10) throw MassError("axis weights must sum to 1");
  return AxisGaussianStep{std::move(sd), std::move(weight)};
}

Proposal make_explicit_q(IntMatrix states, std::vector<std::vector<Rational>> q) {
  const auto n = static_cast<std::size_t>(states.rows());
  if (n == 0 || q.size() != n) throw SupportMismatch("state/matrix size mismatch");
  for (const auto& row : q) {
    if (row.size() != n) throw SupportMismatch("non-square proposal matrix");
    Rational sum = 0;
    for (const auto& v : row) {
      if (v < 0) throw MassError("negative proposal entry");
      sum += v;
    }
    if (sum != 1) throw MassError("proposal row mass is " + rational_to_string(sum));
  }
  return ExplicitLatticeQ{std::move(states), std::move(q)};
}

// ---------------------------------------------------------------------------
// Structural queries.
// ---------------------------------------------------------------------------

int dimension(const Target& t) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          return static_cast<int>(v.mean.size());
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return v.dim;
        } else if constexpr (std::is_same_v<T, LatticeTarget>) {
          return static_cast<int>(v.points.cols());
        } else {
          return 1;
        }
      },
      t);
}

int dimension(const Proposal& p) {
  return std::visit(
      [](const auto& v) -> int {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep>) {
          return static_cast<int>(v.sd.size());
        } else if constexpr (std::is_same_v<T, LatticeStep>) {
          return static_cast<int>(v.points.cols());
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          return v.dim;
        } else if constexpr (std::is_same_v<T, AxisGaussianStep>) {
          return static_cast<int>(v.sd.size());
        } else if constexpr (std::is_same_v<T, ExplicitLatticeQ>) {
          return static_cast<int>(v.states.cols());
        } else {
          return 1;
        }
      },
      p);
}

bool is_lattice(const Target& t) {
  return std::holds_alternative<LatticeTarget>(t);
}

bool is_lattice(const Proposal& p) {
  return std::holds_alternative<LatticeStep>(p) ||
         std::holds_alternative<AxisOddStep>(p) ||
         std::holds_alternative<ExplicitLatticeQ>(p);
}

bool is_random_walk(const Proposal& p) {
  return !std::holds_alternative<ExplicitLatticeQ>(p);
}

bool is_symmetric(const Target& t) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          return v.mean.isZero(0.0);
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return v.a == -v.b;
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          // Compare the staircase density against its reflection on segment
          // midpoints.
          std::vector<double> cuts;
          for (const auto& p : v.pieces) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
            cuts.push_back(-p.lo);
            cuts.push_back(-p.hi);
          }
          std::sort(cuts.begin(), cuts.end());
          cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
          const auto dens = [&v](double x) {
            double d = 0.0;
            for (const auto& p : v.pieces) {
              if (x >= p.lo && x <= p.hi) d += piece_density(p);
            }
            return d;
          };
          for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double x = 0.5 * (cuts[i] + cuts[i + 1]);
            if (std::abs(dens(x) - dens(-x)) > 1e-12) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return true;
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          return v.symmetric;
        } else {
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            const Eigen::VectorXi neg = -v.points.row(i).transpose();
            const long j = find_point(v.points, neg);
            if (j < 0) return false;
            if (v.exact) {
              if (v.mass_q[static_cast<std::size_t>(i)] !=
                  v.mass_q[static_cast<std::size_t>(j)]) {
                return false;
              }
            } else if (std::abs(v.mass[static_cast<std::size_t>(i)] -
                                v.mass[static_cast<std::size_t>(j)]) > 1e-12) {
              return false;
            }
          }
          return true;
        }
      },
      t);
}

bool is_symmetric(const Proposal& p) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep> ||
                      std::is_same_v<T, TwoSidedUniformStep> ||
                      std::is_same_v<T, AxisGaussianStep>) {
          return true;
        } else if constexpr (std::is_same_v<T, UniformStep>) {
          return v.a == -v.b;
        } else if constexpr (std::is_same_v<T, LatticeStep>) {
          LatticeTarget t{v.points, v.mass, v.mass_q, v.exact};
          return is_symmetric(Target{std::move(t)});
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          for (const auto& mv : v.moves) {
            Rational w = 0;
            for (const auto& other : v.moves) {
              if (other.axis == mv.axis && other.offset == -mv.offset) {
                w += other.weight;
              }
            }
            if (w != mv.weight) return false;
          }
          return true;
        } else {
          return false;  // explicit matrices are not step laws
        }
      },
      p);
}

bool is_unimodal(const Target& t) {
  return std::visit(
      [&t](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget> ||
                      std::is_same_v<T, UniformIntervalTarget>) {
          return dimension(t) == 1;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return true;
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          return v.unimodal;
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          std::vector<double> cuts;
          for (const auto& p : v.pieces) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
          }
          std::sort(cuts.begin(), cuts.end());
          cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
          std::vector<double> vals;
          for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            vals.push_back(density_at(t, 0.5 * (cuts[i] + cuts[i + 1])));
          }
          bool rising = true;
          for (std::size_t i = 0; i + 1 < vals.size(); ++i) {
            if (vals[i + 1] > vals[i] + 1e-12) {
              if (!rising) return false;
            } else if (vals[i + 1] < vals[i] - 1e-12) {
              rising = false;
            }
          }
          return true;
        } else {
          // Discrete unimodality about 0: nondecreasing up to 0 and
          // nonincreasing after, with absent points counting as mass 0.
          if (v.points.cols() != 1) return false;
          const int lo = v.points.col(0).minCoeff();
          const int hi = v.points.col(0).maxCoeff();
          const auto mass_at = [&v](int n) {
            Eigen::VectorXi x(1);
            x[0] = n;
            const long j = find_point(v.points, x);
            return j < 0 ? 0.0 : v.mass[static_cast<std::size_t>(j)];
          };
          for (int n = lo; n < 0; ++n) {
            if (mass_at(n + 1) < mass_at(n)) return false;
          }
          for (int n = std::max(lo, 0); n < hi; ++n) {
            if (mass_at(n + 1) > mass_at(n)) return false;
          }
          return true;
        }
      },
      t);
}

double mode_1d(const Target& t) {
  if (dimension(t) != 1) throw DimensionMismatch("mode_1d needs d = 1");
  return std::visit(
      [&t](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          return v.mean[0];
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return 0.5 * (v.a + v.b);
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return 0.0;
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          return v.mode;
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          if (!is_unimodal(t)) throw PreconditionFailed("mixture is not unimodal");
          if (is_symmetric(t)) return 0.0;
          std::vector<double> cuts;
          for (const auto& p : v.pieces) {
            cuts.push_back(p.lo);
            cuts.push_back(p.hi);
          }
          std::sort(cuts.begin(), cuts.end());
          double best = cuts.front(), best_val = -1.0;
          for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
            const double x = 0.5 * (cuts[i] + cuts[i + 1]);
            const double d = density_at(t, x);
            if (d > best_val + 1e-15) {
              best_val = d;
              best = x;
            }
          }
          return best;
        } else {
          if (!is_unimodal(t)) throw PreconditionFailed("lattice pmf is not unimodal");
          return 0.0;
        }
      },
      t);
}

bool has_odd_support(const Proposal& p) {
  return std::visit(
      [](const auto& v) -> bool {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LatticeStep>) {
          if (v.points.cols() != 1) return false;
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            if (v.points(i, 0) % 2 == 0) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          return true;  // enforced at construction
        } else {
          return false;
        }
      },
      p);
}

Vector mean_vector(const Target& t) {
  return std::visit(
      [&t](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          return v.mean;
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          Vector m(1);
          m[0] = 0.5 * (v.a + v.b);
          return m;
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          Vector m(1);
          m[0] = 0.0;
          for (const auto& p : v.pieces) m[0] += p.weight * 0.5 * (p.lo + p.hi);
          return m;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return Vector::Zero(v.dim);
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          Vector m(1);
          m[0] = integrate_piecewise(
                     [&v](double x) { return x * v.density(x); },
                     {v.lo, v.mode, v.hi})
                     .value;
          return m;
        } else {
          Vector m = Vector::Zero(v.points.cols());
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            m += v.mass[static_cast<std::size_t>(i)] *
                 v.points.row(i).transpose().template cast<double>();
          }
          return m;
        }
      },
      t);
}

double total_mass(const Target& t) {
  return std::visit(
      [&t](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, LatticeTarget>) {
          return std::accumulate(v.mass.begin(), v.mass.end(), 0.0);
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return star_radial_mass(v);
        } else if constexpr (std::is_same_v<T, GaussianTarget>) {
          return 1.0;
        } else {
          return integrate_piecewise([&t](double x) { return density_at(t, x); },
                                     target_breakpoints(t))
              .value;
        }
      },
      t);
}

double density_at(const Target& t, double x) {
  return std::visit(
      [x](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          if (v.mean.size() != 1) throw DimensionMismatch("density_at needs d = 1");
          const double z = (x - v.mean[0]) / std::sqrt(v.var[0]);
          return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI * v.var[0]);
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return (x >= v.a && x <= v.b) ? 1.0 / (v.b - v.a) : 0.0;
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          double d = 0.0;
          for (const auto& p : v.pieces) {
            if (x >= p.lo && x <= p.hi) d += piece_density(p);
          }
          return d;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          if (v.dim != 1) throw DimensionMismatch("density_at needs d = 1");
          return profile_value(v.profile, std::abs(x));
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          if (x < v.lo || x > v.hi) return 0.0;
          return v.density(x);
        } else {
          throw PreconditionFailed("density_at is for continuous targets");
        }
      },
      t);
}

std::vector<double> target_breakpoints(const Target& t) {
  return std::visit(
      [](const auto& v) -> std::vector<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          if (v.mean.size() != 1) {
            throw DimensionMismatch("breakpoints need d = 1");
          }
          const double s = std::sqrt(v.var[0]);
          return {v.mean[0] - kGaussianWindowSigmas * s, v.mean[0],
                  v.mean[0] + kGaussianWindowSigmas * s};
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return {v.a, v.b};
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          std::vector<double> pts;
          for (const auto& p : v.pieces) {
            pts.push_back(p.lo);
            pts.push_back(p.hi);
          }
          return pts;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          if (v.dim != 1) throw DimensionMismatch("breakpoints need d = 1");
          std::vector<double> pts;
          for (const auto& k : v.profile) {
            pts.push_back(k.radius);
            pts.push_back(-k.radius);
          }
          return pts;
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          return {v.lo, v.mode, v.hi};
        } else {
          throw PreconditionFailed("breakpoints are for continuous targets");
        }
      },
      t);
}

double step_density(const Proposal& p, double z) {
  return std::visit(
      [z](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep>) {
          if (v.sd.size() != 1) throw DimensionMismatch("step_density needs d = 1");
          const double u = z / v.sd[0];
          return std::exp(-0.5 * u * u) / (v.sd[0] * std::sqrt(2.0 * M_PI));
        } else if constexpr (std::is_same_v<T, UniformStep>) {
          return (z >= v.a && z <= v.b) ? 1.0 / (v.b - v.a) : 0.0;
        } else if constexpr (std::is_same_v<T, TwoSidedUniformStep>) {
          double d = 0.0;
          const double h = 0.5 / (2.0 * v.halfwidth);
          if (std::abs(z - v.center) <= v.halfwidth) d += h;
          if (std::abs(z + v.center) <= v.halfwidth) d += h;
          return d;
        } else {
          throw PreconditionFailed("step_density is for continuous steps");
        }
      },
      p);
}

std::vector<double> step_breakpoints(const Proposal& p) {
  return std::visit(
      [](const auto& v) -> std::vector<double> {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep>) {
          if (v.sd.size() != 1) throw DimensionMismatch("breakpoints need d = 1");
          return {-kGaussianWindowSigmas * v.sd[0], 0.0,
                  kGaussianWindowSigmas * v.sd[0]};
        } else if constexpr (std::is_same_v<T, UniformStep>) {
          return {v.a, v.b};
        } else if constexpr (std::is_same_v<T, TwoSidedUniformStep>) {
          return {-v.center - v.halfwidth, -v.center + v.halfwidth,
                  v.center - v.halfwidth, v.center + v.halfwidth};
        } else {
          throw PreconditionFailed("breakpoints are for continuous steps");
        }
      },
      p);
}

double step_second_moment(const Proposal& p) {
  return std::visit(
      [](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep>) {
          return v.sd.squaredNorm();
        } else if constexpr (std::is_same_v<T, UniformStep>) {
          return (v.a * v.a + v.a * v.b + v.b * v.b) / 3.0;
        } else if constexpr (std::is_same_v<T, TwoSidedUniformStep>) {
          return v.center * v.center + v.halfwidth * v.halfwidth / 3.0;
        } else if constexpr (std::is_same_v<T, LatticeStep>) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            s += v.mass[static_cast<std::size_t>(i)] *
                 v.points.row(i).template cast<double>().squaredNorm();
          }
          return s;
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          double s = 0.0;
          for (const auto& mv : v.moves) {
            s += to_double(mv.weight) * static_cast<double>(mv.offset) *
                 static_cast<double>(mv.offset);
          }
          return s;
        } else if constexpr (std::is_same_v<T, AxisGaussianStep>) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < v.sd.size(); ++i) {
            s += v.weight[i] * v.sd[i] * v.sd[i];
          }
          return s;
        } else {
          throw PreconditionFailed("explicit matrices have no step law");
        }
      },
      p);
}

// ---------------------------------------------------------------------------
// Moments and tails.
// ---------------------------------------------------------------------------

double absolute_moment(const Target& t, double r, const Vector& m) {
  if (!(r >= 0.0)) throw RangeError("moment order must be nonnegative");
  if (m.size() != dimension(t)) throw DimensionMismatch("center dimension mismatch");
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          if (v.mean.size() == 1) {
            const double s = std::sqrt(v.var[0]);
            const auto f = [&](double x) {
              return density_at(t, x) * std::pow(std::abs(x - m[0]), r);
            };
            return integrate_piecewise(
                       f, {v.mean[0] - kGaussianWindowSigmas * s, m[0],
                           v.mean[0] + kGaussianWindowSigmas * s})
                .value;
          }
          if (r == 2.0) {
            return v.var.sum() + (v.mean - m).squaredNorm();
          }
          const bool iso = (v.var.array() == v.var[0]).all();
          if (iso && (v.mean - m).isZero(0.0)) {
            const int d = static_cast<int>(v.mean.size());
            // E|X - mean|^r for isotropic gaussians via the chi distribution.
            return std::pow(2.0, r / 2.0) *
                   boost::math::tgamma((d + r) / 2.0) /
                   boost::math::tgamma(d / 2.0) * std::pow(v.var[0], r / 2.0);
          }
          throw PreconditionFailed(
              "d > 1 gaussian moments: r = 2, or isotropic about the mean");
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return interval_abs_moment(v.a, v.b, m[0], r) / (v.b - v.a);
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          double s = 0.0;
          for (const auto& p : v.pieces) {
            s += piece_density(p) * interval_abs_moment(p.lo, p.hi, m[0], r);
          }
          return s;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          if (!m.isZero(0.0)) {
            throw PreconditionFailed("star-unimodal moments are about 0");
          }
          const double surface = sphere_surface(v.dim);
          std::vector<double> pts;
          for (const auto& k : v.profile) pts.push_back(k.radius);
          return integrate_piecewise(
                     [&](double rho) {
                       return surface * std::pow(rho, v.dim - 1 + r) *
                              profile_value(v.profile, rho);
                     },
                     pts)
              .value;
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          if (std::isfinite(v.tail_decay) && r >= v.tail_decay - 1.0) {
            throw NonIntegrable("declared tail decay admits no such moment");
          }
          return integrate_piecewise(
                     [&](double x) {
                       return v.density(x) * std::pow(std::abs(x - m[0]), r);
                     },
                     {v.lo, std::clamp(m[0], v.lo, v.hi), v.hi})
              .value;
        } else {
          double s = 0.0;
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            const double dist = (v.points.row(i).transpose().template cast<double>() - m).norm();
            s += v.mass[static_cast<std::size_t>(i)] * std::pow(dist, r);
          }
          return s;
        }
      },
      t);
}

double absolute_moment(const Target& t, double r) {
  return absolute_moment(t, r, Vector::Zero(dimension(t)));
}

Rational absolute_moment_exact(const LatticeTarget& t, unsigned r,
                               const std::vector<Rational>& m) {
  const auto d = static_cast<std::size_t>(t.points.cols());
  if (m.size() != d) throw DimensionMismatch("center dimension mismatch");
  if (!t.exact) throw PreconditionFailed("pmf is not exact");
  if (d > 1 && r % 2 != 0) {
    throw PreconditionFailed("d > 1 exact moments need even r");
  }
  Rational total = 0;
  for (Eigen::Index i = 0; i < t.points.rows(); ++i) {
    Rational norm2 = 0;
    for (std::size_t j = 0; j < d; ++j) {
      const Rational diff =
          Rational(t.points(i, static_cast<Eigen::Index>(j))) - m[j];
      norm2 += diff * diff;
    }
    Rational term;
    if (d == 1) {
      Rational diff = Rational(t.points(i, 0)) - m[0];
      if (diff < 0) diff = -diff;
      term = rational_pow(diff, r);
    } else {
      term = rational_pow(norm2, r / 2);
    }
    total += t.mass_q[static_cast<std::size_t>(i)] * term;
  }
  return total;
}

double linear_abs_moment(const Target& t, const Vector& c, double m, double r) {
  const int d = dimension(t);
  if (c.size() != d) throw DimensionMismatch("direction dimension mismatch");
  if (c.isZero(0.0)) throw ZeroVector("direction must be nonzero");
  if (d == 1) {
    Vector center(1);
    center[0] = m / c[0];
    return std::pow(std::abs(c[0]), r) * absolute_moment(t, r, center);
  }
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          // <c, X> is a scalar gaussian with the pushed-forward moments.
          Vector mu(1), var(1);
          mu[0] = c.dot(v.mean);
          var[0] = (c.array().square() * v.var.array()).sum();
          Vector center(1);
          center[0] = m;
          return absolute_moment(make_gaussian(mu, var), r, center);
        } else if constexpr (std::is_same_v<T, LatticeTarget>) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            const double dot = c.dot(v.points.row(i).transpose().template cast<double>());
            s += v.mass[static_cast<std::size_t>(i)] *
                 std::pow(std::abs(dot - m), r);
          }
          return s;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          if (m != 0.0) {
            throw PreconditionFailed("spherical linear moments are about 0");
          }
          // Radius and direction are independent: E|<c,X>|^r =
          // |c|^r E|X|^r E|U_1|^r with U uniform on the sphere.
          const double dir_moment =
              boost::math::beta((r + 1.0) / 2.0, (v.dim - 1) / 2.0) /
              boost::math::beta(0.5, (v.dim - 1) / 2.0);
          return std::pow(c.norm(), r) * absolute_moment(t, r) * dir_moment;
        } else {
          throw PreconditionFailed(
              "linear moments: gaussian, lattice, or spherical targets");
        }
      },
      t);
}

double tail_probability(const Target& t, double t_value) {
  if (dimension(t) != 1) throw DimensionMismatch("tail_probability needs d = 1");
  if (t_value < 0.0) throw RangeError("tail threshold must be nonnegative");
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          const double s = std::sqrt(v.var[0]);
          return upper_gaussian_tail((t_value - v.mean[0]) / s) +
                 upper_gaussian_tail((t_value + v.mean[0]) / s);
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return length_outside(v.a, v.b, t_value) / (v.b - v.a);
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          double p = 0.0;
          for (const auto& piece : v.pieces) {
            p += piece_density(piece) * length_outside(piece.lo, piece.hi, t_value);
          }
          return p;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          std::vector<double> pts{t_value};
          for (const auto& k : v.profile) pts.push_back(k.radius);
          return 2.0 * integrate_piecewise(
                           [&](double x) { return profile_value(v.profile, x); },
                           clip_breakpoints(pts, t_value, v.profile.back().radius))
                           .value;
        } else if constexpr (std::is_same_v<T, CustomDensityTarget>) {
          double p = 0.0;
          if (v.hi > t_value) {
            p += integrate_piecewise([&](double x) { return v.density(x); },
                                     {std::max(v.lo, t_value), v.hi})
                     .value;
          }
          if (v.lo < -t_value) {
            p += integrate_piecewise([&](double x) { return v.density(x); },
                                     {v.lo, std::min(v.hi, -t_value)})
                     .value;
          }
          return p;
        } else {
          double p = 0.0;
          for (Eigen::Index i = 0; i < v.points.rows(); ++i) {
            if (std::abs(static_cast<double>(v.points(i, 0))) > t_value) {
              p += v.mass[static_cast<std::size_t>(i)];
            }
          }
          return p;
        }
      },
      t);
}

Rational tail_probability_exact(const LatticeTarget& t, const Rational& t_value) {
  if (t.points.cols() != 1) throw DimensionMismatch("tail needs d = 1");
  if (!t.exact) throw PreconditionFailed("pmf is not exact");
  Rational p = 0;
  for (Eigen::Index i = 0; i < t.points.rows(); ++i) {
    Rational x = t.points(i, 0);
    if (x < 0) x = -x;
    if (x > t_value) p += t.mass_q[static_cast<std::size_t>(i)];
  }
  return p;
}

double star_density(const StarUnimodalTarget& t, double rho) {
  return profile_value(t.profile, std::abs(rho));
}

double marginal_tail(const StarUnimodalTarget& t, double t_value) {
  if (t_value <= 0.0) return 1.0;
  const double radius = t.profile.back().radius;
  if (t_value >= radius) return 0.0;
  if (t.dim == 1) {
    return tail_probability(Target{t}, t_value);
  }
  const double surface = sphere_surface(t.dim);
  std::vector<double> pts{t_value};
  for (const auto& k : t.profile) pts.push_back(k.radius);
  // Condition on |X| = rho: the first coordinate is rho times a uniform
  // sphere coordinate.
  return integrate_piecewise(
             [&](double rho) {
               return surface * std::pow(rho, t.dim - 1) *
                      profile_value(t.profile, rho) *
                      sphere_coordinate_tail(t.dim, t_value / rho);
             },
             clip_breakpoints(pts, t_value, radius))
      .value;
}

// ---------------------------------------------------------------------------
// Symmetrization.
// ---------------------------------------------------------------------------

Target symmetrize_target(const Target& t) {
  if (is_symmetric(t)) return t;
  return std::visit(
      [&t](const auto& v) -> Target {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          return UniformMixtureTarget{
              {{v.a, v.b, 0.5}, {-v.b, -v.a, 0.5}}};
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          std::vector<WeightedInterval> pieces;
          for (const auto& p : v.pieces) {
            pieces.push_back({p.lo, p.hi, 0.5 * p.weight});
            pieces.push_back({-p.hi, -p.lo, 0.5 * p.weight});
          }
          return UniformMixtureTarget{std::move(pieces)};
        } else if constexpr (std::is_same_v<T, GaussianTarget> ||
                             std::is_same_v<T, CustomDensityTarget>) {
          if (dimension(t) != 1) {
            throw PreconditionFailed(
                "d > 1 symmetrization only for already-symmetric targets");
          }
          CustomDensityTarget out;
          const Target base = t;  // owned copy for the closure
          out.density = [base](double x) {
            return 0.5 * (density_at(base, x) + density_at(base, -x));
          };
          const auto pts = target_breakpoints(t);
          double hi = 0.0;
          for (double p : pts) hi = std::max(hi, std::abs(p));
          out.lo = -hi;
          out.hi = hi;
          out.symmetric = true;
          out.unimodal = false;
          out.mode = 0.0;
          return out;
        } else if constexpr (std::is_same_v<T, LatticeTarget>) {
          IntMatrix pts(2 * v.points.rows(), v.points.cols());
          pts.topRows(v.points.rows()) = v.points;
          pts.bottomRows(v.points.rows()) = -v.points;
          if (v.exact) {
            std::vector<Rational> mass;
            for (const auto& m : v.mass_q) mass.push_back(m / 2);
            for (const auto& m : v.mass_q) mass.push_back(m / 2);
            return make_lattice_pmf(pts, mass);
          }
          std::vector<double> mass;
          for (double m : v.mass) mass.push_back(0.5 * m);
          for (double m : v.mass) mass.push_back(0.5 * m);
          return make_lattice_pmf(pts, mass);
        } else {
          return t;  // star targets are symmetric already
        }
      },
      t);
}

Proposal symmetrize_proposal(const Proposal& p) {
  if (!is_random_walk(p)) {
    throw PreconditionFailed("explicit matrices have no step law");
  }
  if (is_symmetric(p)) return p;
  return std::visit(
      [](const auto& v) -> Proposal {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, UniformStep>) {
          const double mid = 0.5 * (v.a + v.b);
          const double half = 0.5 * (v.b - v.a);
          return TwoSidedUniformStep{std::abs(mid), half};
        } else if constexpr (std::is_same_v<T, LatticeStep>) {
          IntMatrix pts(2 * v.points.rows(), v.points.cols());
          pts.topRows(v.points.rows()) = v.points;
          pts.bottomRows(v.points.rows()) = -v.points;
          if (v.exact) {
            std::vector<Rational> mass;
            for (const auto& m : v.mass_q) mass.push_back(m / 2);
            for (const auto& m : v.mass_q) mass.push_back(m / 2);
            return make_lattice_step(pts, mass);
          }
          std::vector<double> mass;
          for (double m : v.mass) mass.push_back(0.5 * m);
          for (double m : v.mass) mass.push_back(0.5 * m);
          return make_lattice_step(pts, mass);
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          std::vector<AxisMove> moves;
          for (const auto& mv : v.moves) {
            moves.push_back({mv.axis, mv.offset, mv.weight / 2});
            moves.push_back({mv.axis, -mv.offset, mv.weight / 2});
          }
          return make_axis_odd_step(v.dim, std::move(moves));
        } else {
          return v;  // gaussian kinds are symmetric already
        }
      },
      p);
}

long find_point(const IntMatrix& points, const Eigen::VectorXi& x) {
  for (Eigen::Index i = 0; i < points.rows(); ++i) {
    if ((points.row(i).transpose().array() == x.array()).all()) return i;
  }
  return -1;
}

}  // namespace mhb
