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

#include "mhbounds/mh_core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace mhb {

namespace {

// Counter layout: X_0 uses positions [0, 2d); step t uses the block
// [2d + t(2d+1), 2d + (t+1)(2d+1)) with the proposal draw first and the
// acceptance uniform in the block's last slot.
std::uint64_t step_base(int dim, std::size_t t) {
  return 2 * static_cast<std::uint64_t>(dim) +
         t * (2 * static_cast<std::uint64_t>(dim) + 1);
}

double gaussian_density(double x, double mean, double sd) {
  const double u = (x - mean) / sd;
  return std::exp(-0.5 * u * u) / (sd * std::sqrt(2.0 * M_PI));
}

double target_density(const Target& t, const Vector& x) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          double dens = 1.0;
          for (Eigen::Index j = 0; j < v.mean.size(); ++j) {
            dens *= gaussian_density(x[j], v.mean[j], std::sqrt(v.var[j]));
          }
          return dens;
        } else if constexpr (std::is_same_v<T, StarUnimodalTarget>) {
          return star_density(v, x.norm());
        } else if constexpr (std::is_same_v<T, LatticeTarget>) {
          Eigen::VectorXi xi(x.size());
          for (Eigen::Index j = 0; j < x.size(); ++j) {
            xi[j] = static_cast<int>(std::lround(x[j]));
          }
          const long i = find_point(v.points, xi);
          return i < 0 ? 0.0 : v.mass[static_cast<std::size_t>(i)];
        } else {
          return density_at(t, x[0]);
        }
      },
      t);
}

double step_density_vec(const Proposal& p, const Vector& z) {
  return std::visit(
      [&](const auto& v) -> double {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep>) {
          double dens = 1.0;
          for (Eigen::Index j = 0; j < v.sd.size(); ++j) {
            dens *= gaussian_density(z[j], 0.0, v.sd[j]);
          }
          return dens;
        } else if constexpr (std::is_same_v<T, AxisGaussianStep>) {
          // Mixture of one-dimensional moves along the axes; the density is
          // with respect to length measure on the union of axis lines, which
          // is the same dominating measure in both directions.
          int axis = -1;
          for (Eigen::Index j = 0; j < z.size(); ++j) {
            if (z[j] != 0.0) {
              if (axis >= 0) return 0.0;
              axis = static_cast<int>(j);
            }
          }
          if (axis < 0) axis = 0;
          return v.weight[axis] * gaussian_density(z[axis], 0.0, v.sd[axis]);
        } else if constexpr (std::is_same_v<T, LatticeStep>) {
          Eigen::VectorXi zi(z.size());
          for (Eigen::Index j = 0; j < z.size(); ++j) {
            zi[j] = static_cast<int>(std::lround(z[j]));
          }
          const long i = find_point(v.points, zi);
          return i < 0 ? 0.0 : v.mass[static_cast<std::size_t>(i)];
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          double mass = 0.0;
          for (const auto& mv : v.moves) {
            bool match = true;
            for (Eigen::Index j = 0; j < z.size(); ++j) {
              const double want = j == mv.axis ? static_cast<double>(mv.offset) : 0.0;
              if (z[j] != want) {
                match = false;
                break;
              }
            }
            if (match) mass += to_double(mv.weight);
          }
          return mass;
        } else if constexpr (std::is_same_v<T, ExplicitLatticeQ>) {
          throw SupportMismatch("explicit proposals are not translation laws");
        } else {
          return step_density(p, z[0]);
        }
      },
      p);
}

// CDF inversion over a discrete pmf given as doubles.
std::size_t pick_index(const std::vector<double>& mass, double u) {
  const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
  double acc = 0.0;
  for (std::size_t i = 0; i < mass.size(); ++i) {
    acc += mass[i] / total;
    if (u <= acc) return i;
  }
  return mass.size() - 1;
}

Vector draw_initial(const Target& t, const CounterRng& rng) {
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianTarget>) {
          Vector x(v.mean.size());
          for (Eigen::Index j = 0; j < x.size(); ++j) {
            x[j] = v.mean[j] +
                   std::sqrt(v.var[j]) *
                       rng.normal(2 * static_cast<std::uint64_t>(j));
          }
          return x;
        } else if constexpr (std::is_same_v<T, UniformIntervalTarget>) {
          Vector x(1);
          x[0] = v.a + rng.uniform(0) * (v.b - v.a);
          return x;
        } else if constexpr (std::is_same_v<T, UniformMixtureTarget>) {
          std::vector<double> w;
          for (const auto& p : v.pieces) w.push_back(p.weight);
          const auto& piece = v.pieces[pick_index(w, rng.uniform(0))];
          Vector x(1);
          x[0] = piece.lo + rng.uniform(1) * (piece.hi - piece.lo);
          return x;
        } else if constexpr (std::is_same_v<T, LatticeTarget>) {
          const auto i =
              static_cast<Eigen::Index>(pick_index(v.mass, rng.uniform(0)));
          return v.points.row(i).transpose().template cast<double>();
        } else {
          throw UnsupportedSampler("no direct sampler for this target kind");
        }
      },
      t);
}

// Proposal draw for step t; uses positions inside the step block only.
Vector draw_proposal(const ChainSpec& spec, const Vector& x,
                     const CounterRng& rng, std::uint64_t base) {
  const int dim = static_cast<int>(x.size());
  return std::visit(
      [&](const auto& v) -> Vector {
        using T = std::decay_t<decltype(v)>;
        if constexpr (std::is_same_v<T, GaussianStep>) {
          Vector y = x;
          for (int j = 0; j < dim; ++j) {
            y[j] += v.sd[j] * rng.normal(base + 2 * static_cast<std::uint64_t>(j));
          }
          return y;
        } else if constexpr (std::is_same_v<T, UniformStep>) {
          Vector y = x;
          y[0] += v.a + rng.uniform(base) * (v.b - v.a);
          return y;
        } else if constexpr (std::is_same_v<T, TwoSidedUniformStep>) {
          const double side = rng.uniform(base) < 0.5 ? -1.0 : 1.0;
          const double mag =
              v.center - v.halfwidth +
              rng.uniform(base + 1) * (2.0 * v.halfwidth);
          Vector y = x;
          y[0] += side * mag;
          return y;
        } else if constexpr (std::is_same_v<T, LatticeStep>) {
          const auto i =
              static_cast<Eigen::Index>(pick_index(v.mass, rng.uniform(base)));
          return x + v.points.row(i).transpose().template cast<double>();
        } else if constexpr (std::is_same_v<T, AxisOddStep>) {
          std::vector<double> w;
          for (const auto& mv : v.moves) w.push_back(to_double(mv.weight));
          const auto& mv = v.moves[pick_index(w, rng.uniform(base))];
          Vector y = x;
          y[mv.axis] += static_cast<double>(mv.offset);
          return y;
        } else if constexpr (std::is_same_v<T, AxisGaussianStep>) {
          std::vector<double> w(v.weight.data(), v.weight.data() + v.weight.size());
          const auto a = pick_index(w, rng.uniform(base));
          Vector y = x;
          y[static_cast<Eigen::Index>(a)] +=
              v.sd[static_cast<Eigen::Index>(a)] * rng.normal(base + 1);
          return y;
        } else {
          // Explicit proposal matrix: draw the row of the current state.
          Eigen::VectorXi xi(x.size());
          for (Eigen::Index j = 0; j < x.size(); ++j) {
            xi[j] = static_cast<int>(std::lround(x[j]));
          }
          const long i = find_point(v.states, xi);
          if (i < 0) throw SupportMismatch("state left the enumerated support");
          std::vector<double> row;
          for (const auto& m : v.q[static_cast<std::size_t>(i)]) {
            row.push_back(to_double(m));
          }
          const auto j = static_cast<Eigen::Index>(pick_index(row, rng.uniform(base)));
          return v.states.row(j).transpose().template cast<double>();
        }
      },
      spec.proposal);
}

double explicit_q_value(const ExplicitLatticeQ& v, const Vector& x,
                        const Vector& y) {
  Eigen::VectorXi xi(x.size()), yi(y.size());
  for (Eigen::Index j = 0; j < x.size(); ++j) {
    xi[j] = static_cast<int>(std::lround(x[j]));
    yi[j] = static_cast<int>(std::lround(y[j]));
  }
  const long i = find_point(v.states, xi);
  const long j = find_point(v.states, yi);
  if (i < 0 || j < 0) return 0.0;
  return to_double(v.q[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)]);
}

// Batch-means standard error of the mean of y using floor(sqrt(M)) batches.
double batch_se(const std::vector<double>& y) {
  const std::size_t m = y.size();
  const auto b = static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(m))));
  if (b < 2) return 0.0;
  const std::size_t len = m / b;
  std::vector<double> means;
  for (std::size_t i = 0; i < b; ++i) {
    const double s = std::accumulate(y.begin() + static_cast<long>(i * len),
                                     y.begin() + static_cast<long>((i + 1) * len), 0.0);
    means.push_back(s / static_cast<double>(len));
  }
  const double grand =
      std::accumulate(means.begin(), means.end(), 0.0) / static_cast<double>(b);
  double ss = 0.0;
  for (const double v : means) ss += (v - grand) * (v - grand);
  return std::sqrt(ss / (static_cast<double>(b) * (static_cast<double>(b) - 1.0)));
}

}  // namespace

ChainSpec make_chain(Target target, Proposal proposal) {
  if (dimension(target) != dimension(proposal)) {
    throw DimensionMismatch("target and proposal dimensions differ");
  }
  const bool lat_t = is_lattice(target);
  const bool lat_p = is_lattice(proposal) ||
                     std::holds_alternative<ExplicitLatticeQ>(proposal);
  if (lat_t != lat_p) {
    throw SupportMismatch("target and proposal live on different spaces");
  }
  if (const auto* eq = std::get_if<ExplicitLatticeQ>(&proposal)) {
    const auto& t = std::get<LatticeTarget>(target);
    if (eq->states.rows() != t.points.rows() || eq->states != t.points) {
      throw SupportMismatch(
          "explicit proposal states must match the target support");
    }
  }
  return {std::move(target), std::move(proposal)};
}

bool is_lattice(const ChainSpec& spec) { return is_lattice(spec.target); }

double acceptance_prob(const ChainSpec& spec, const Vector& x, const Vector& y) {
  const int d = dimension(spec.target);
  if (x.size() != d || y.size() != d) {
    throw DimensionMismatch("point dimension mismatch");
  }
  double qf, qb;
  if (const auto* eq = std::get_if<ExplicitLatticeQ>(&spec.proposal)) {
    qf = explicit_q_value(*eq, x, y);
    qb = explicit_q_value(*eq, y, x);
  } else {
    qf = step_density_vec(spec.proposal, y - x);
    qb = step_density_vec(spec.proposal, x - y);
  }
  const double fwd = target_density(spec.target, x) * qf;
  if (fwd <= 0.0) return 1.0;
  const double bwd = target_density(spec.target, y) * qb;
  return std::min(1.0, bwd / fwd);
}

Path simulate(const ChainSpec& spec, std::size_t n, std::uint64_t seed) {
  const int d = dimension(spec.target);
  const CounterRng rng(seed);
  Path path;
  path.seed = seed;
  path.points.resize(static_cast<Eigen::Index>(n) + 1, d);

  Vector x = draw_initial(spec.target, rng);
  path.points.row(0) = x.transpose();
  for (std::size_t t = 0; t < n; ++t) {
    const std::uint64_t base = step_base(d, t);
    const Vector y = draw_proposal(spec, x, rng, base);
    const double alpha = acceptance_prob(spec, x, y);
    const double u = rng.uniform(base + 2 * static_cast<std::uint64_t>(d));
    if (u < alpha) x = y;
    path.points.row(static_cast<Eigen::Index>(t) + 1) = x.transpose();
  }
  return path;
}

PathStats path_stats(const Path& path, const std::vector<int>& lags,
                     const std::vector<double>& orders,
                     const std::vector<Vector>& directions) {
  const auto rows = path.points.rows();
  PathStats out;
  for (const int lag : lags) {
    if (lag < 0 || lag >= rows) throw RangeError("lag outside the path");
    const auto m = static_cast<std::size_t>(rows - lag);
    if (m < 2) throw DegeneratePath("not enough pairs at this lag");

    LagEstimate est;
    est.lag = lag;
    const double dm = static_cast<double>(m);

    Eigen::RowVectorXd mean = Eigen::RowVectorXd::Zero(path.points.cols());
    double sq = 0.0;
    std::vector<double> cross(m);
    std::vector<double> incr2(m);
    for (std::size_t t = 0; t < m; ++t) {
      const auto a = path.points.row(static_cast<Eigen::Index>(t));
      const auto b = path.points.row(static_cast<Eigen::Index>(t) + lag);
      mean += (a + b) / (2.0 * dm);
      sq += (a.squaredNorm() + b.squaredNorm()) / (2.0 * dm);
      cross[t] = a.dot(b);
      incr2[t] = (b - a).squaredNorm();
    }
    const double mean_sq = mean.squaredNorm();
    est.pooled_var = sq - mean_sq;
    if (est.pooled_var <= 0.0) {
      throw DegeneratePath("pooled variance vanished");
    }
    const double mean_cross =
        std::accumulate(cross.begin(), cross.end(), 0.0) / dm;
    const double mean_incr2 =
        std::accumulate(incr2.begin(), incr2.end(), 0.0) / dm;
    est.tr_cov = mean_cross - mean_sq;
    est.se_tr_cov = batch_se(cross);
    est.tr_corr = est.tr_cov / est.pooled_var;
    est.se_tr_corr = est.se_tr_cov / est.pooled_var;
    est.sq_identity_residual =
        est.tr_cov - (est.pooled_var - mean_incr2 / 2.0);

    for (const double r : orders) {
      std::vector<double> incr_r(m);
      for (std::size_t t = 0; t < m; ++t) {
        incr_r[t] = std::pow(std::sqrt(incr2[t]), r);
      }
      est.incr_moments.push_back(
          std::accumulate(incr_r.begin(), incr_r.end(), 0.0) / dm);
      est.se_incr.push_back(batch_se(incr_r));
    }

    for (const Vector& c : directions) {
      if (c.size() != path.points.cols()) {
        throw DimensionMismatch("direction dimension mismatch");
      }
      std::vector<double> prod(m);
      double cmean = 0.0;
      for (std::size_t t = 0; t < m; ++t) {
        const double ca = path.points.row(static_cast<Eigen::Index>(t)).dot(c);
        const double cb =
            path.points.row(static_cast<Eigen::Index>(t) + lag).dot(c);
        prod[t] = ca * cb;
        cmean += (ca + cb) / (2.0 * dm);
      }
      est.cov_linear.push_back(
          std::accumulate(prod.begin(), prod.end(), 0.0) / dm -
          cmean * cmean);
      est.se_linear.push_back(batch_se(prod));
    }
    out.lags.push_back(std::move(est));
  }
  return out;
}

}  // namespace mhb
