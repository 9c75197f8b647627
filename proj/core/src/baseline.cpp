#include "graphgauge/baseline.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <vector>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "graphgauge/error.hpp"
#include "parallel.hpp"

namespace graphgauge {

namespace {

struct IndexRange {
  std::int64_t first;
  std::int64_t last;  // inclusive
};

IndexRange sample_range(double eps, double delta, const Window& w) {
  if (!(eps > 0.0)) throw Error("lattice spacing eps must be > 0");
  if (!(w.hi > w.lo)) throw Error("empty sampling window");
  const auto first = static_cast<std::int64_t>(std::ceil((w.lo - delta) / eps));
  const auto last = static_cast<std::int64_t>(std::floor((w.hi - delta) / eps));
  return {first, last};
}

}  // namespace

double action_1d_embedded(const Profile1D& f, const Density1D& L, double eps, double delta,
                          const Window& window) {
  const IndexRange r = sample_range(eps, delta, window);
  double s = 0.0;
  for (std::int64_t k = r.first; k <= r.last; ++k) {
    s += eps * L(f(static_cast<double>(k) * eps + delta));
  }
  return s;
}

GraphField1D sample_chain(const Profile1D& f, double eps, const Window& window) {
  const IndexRange r = sample_range(eps, 0.0, window);
  GraphField1D out;
  out.first_index = r.first;
  for (std::int64_t k = r.first; k <= r.last; ++k) {
    out.f.push_back(f(static_cast<double>(k) * eps));
    out.g.push_back(eps);
  }
  return out;
}

GraphField1D relabel_chain(GraphField1D field, std::int64_t m) {
  field.first_index += m;
  return field;
}

double action_1d_graph(const GraphField1D& field, const Density1D& L) {
  if (field.f.size() != field.g.size()) throw Error("graph field: f and g lengths differ");
  double s = 0.0;
  for (std::size_t i = 0; i < field.f.size(); ++i) {
    if (!(field.g[i] > 0.0)) {
      throw Error("graph field: distance g_" + std::to_string(field.first_index +
                                                              static_cast<std::int64_t>(i)) +
                  " must be > 0");
    }
    s += field.g[i] * L(field.f[i]);
  }
  return s;
}

double quadrature_1d(const Profile1D& f, const Density1D& L, const Window& window) {
  auto integrand = [&](double x) { return L(f(x)); };
  return boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, window.lo,
                                                                        window.hi, 20, 1e-14);
}

ViolationReport violation_sigma_1d(const Profile1D& f, const Density1D& L, double eps,
                                   double delta, const Window& window) {
  ViolationReport rep;
  rep.epsilon = eps;
  rep.parameter = delta;
  rep.untransformed = action_1d_embedded(f, L, eps, 0.0, window);
  rep.transformed = action_1d_embedded(f, L, eps, delta, window);
  rep.sigma = rep.transformed - rep.untransformed;
  rep.reference = quadrature_1d(f, L, window);
  const IndexRange r = sample_range(eps, delta, window);
  rep.truncation_estimate =
      eps * (std::abs(L(f(static_cast<double>(r.first) * eps + delta))) +
             std::abs(L(f(static_cast<double>(r.last) * eps + delta))));
  return rep;
}

Matrix4 plane_rotation(int a, int b, double angle) {
  Matrix4 r = Matrix4::Identity();
  r(a, a) = std::cos(angle);
  r(a, b) = -std::sin(angle);
  r(b, a) = std::sin(angle);
  r(b, b) = std::cos(angle);
  return r;
}

double embedded_action_4d(const ScalarField4& phi, const Matrix4& rotation, double eps,
                          const EmbeddedOptions& opts, double* boundary_layer) {
  if (!(eps > 0.0)) throw Error("lattice spacing eps must be > 0");
  const double orth = (rotation * rotation.transpose() - Matrix4::Identity()).cwiseAbs().maxCoeff();
  if (!(orth <= 1e-10)) throw Error("embedded lattice rotation is not orthogonal");

  std::array<int, 4> k{};
  for (int d = 0; d < 4; ++d) {
    k[d] = static_cast<int>(std::floor(opts.half_width[d] / eps + 1e-9));
  }
  // Slices over (n0, n1, n2) cover [-k, k + 1] so forward neighbours exist.
  const int e0 = 2 * k[0] + 2, e1 = 2 * k[1] + 2, e2 = 2 * k[2] + 2;
  const std::size_t slice_size = static_cast<std::size_t>(e0) * e1 * e2;
  auto at = [&](int i0, int i1, int i2) {
    return static_cast<std::size_t>(i0 + e0 * (i1 + e1 * i2));
  };

  auto fill_slice = [&](std::vector<double>& slice, int n3) {
    for (int i2 = 0; i2 < e2; ++i2) {
      for (int i1 = 0; i1 < e1; ++i1) {
        for (int i0 = 0; i0 < e0; ++i0) {
          const Vector4 n(i0 - k[0], i1 - k[1], i2 - k[2], n3);
          const Vector4 x = rotation * (eps * n);
          slice[at(i0, i1, i2)] = phi({x(0), x(1), x(2), x(3)});
        }
      }
    }
  };

  const std::size_t layers = static_cast<std::size_t>(2 * k[3] + 1);
  std::vector<double> layer_sum(layers, 0.0), layer_edge(layers, 0.0);
  const double eps4 = std::pow(eps, 4);
  const double m2 = opts.mass * opts.mass;

  detail::parallel_chunks(layers, opts.threads, [&](std::size_t begin, std::size_t end,
                                                     std::size_t) {
    if (begin == end) return;
    std::vector<double> cur(slice_size), next(slice_size);
    fill_slice(cur, static_cast<int>(begin) - k[3]);
    for (std::size_t layer = begin; layer < end; ++layer) {
      const int n3 = static_cast<int>(layer) - k[3];
      fill_slice(next, n3 + 1);
      double sum = 0.0, edge = 0.0;
      for (int i2 = 0; i2 + 1 < e2; ++i2) {
        for (int i1 = 0; i1 + 1 < e1; ++i1) {
          for (int i0 = 0; i0 + 1 < e0; ++i0) {
            const double v = cur[at(i0, i1, i2)];
            const double d0 = cur[at(i0 + 1, i1, i2)] - v;
            const double d1 = cur[at(i0, i1 + 1, i2)] - v;
            const double d2 = cur[at(i0, i1, i2 + 1)] - v;
            const double d3 = next[at(i0, i1, i2)] - v;
            const double density =
                0.5 * (d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3) / (eps * eps) + 0.5 * m2 * v * v;
            sum += density;
            const bool outer = i0 == 0 || i0 == e0 - 2 || i1 == 0 || i1 == e1 - 2 || i2 == 0 ||
                               i2 == e2 - 2 || n3 == -k[3] || n3 == k[3];
            if (outer) edge += std::abs(density);
          }
        }
      }
      layer_sum[layer] = sum * eps4;
      layer_edge[layer] = edge * eps4;
      std::swap(cur, next);
    }
  });

  double total = 0.0, edge = 0.0;
  for (std::size_t i = 0; i < layers; ++i) {
    total += layer_sum[i];
    edge += layer_edge[i];
  }
  if (boundary_layer) *boundary_layer = edge;
  return total;
}

ViolationReport violation_4d_embedded(const ScalarField4& phi, const Matrix4& rotation,
                                      double eps, const EmbeddedOptions& opts) {
  ViolationReport rep;
  rep.epsilon = eps;
  // Angle of the rotation, from its trace: tr R = 2 + 2 cos(theta) for a
  // single-plane rotation.
  rep.parameter = std::acos(std::clamp((rotation.trace() - 2.0) / 2.0, -1.0, 1.0));
  double edge_id = 0.0, edge_rot = 0.0;
  rep.untransformed = embedded_action_4d(phi, Matrix4::Identity(), eps, opts, &edge_id);
  rep.transformed = embedded_action_4d(phi, rotation, eps, opts, &edge_rot);
  rep.sigma = rep.transformed - rep.untransformed;
  rep.reference = rep.untransformed;
  rep.truncation_estimate = std::max(edge_id, edge_rot);
  return rep;
}

Matrix5 embed_rotation(const Matrix4& lambda) {
  Matrix5 o = Matrix5::Identity();
  o.topLeftCorner<4, 4>() = lambda;
  return o;
}

GraphCovarianceReport graph_covariance_check(const LinkField& lf, const LatticeGraph& g,
                                             const PotentialField& field, const Matrix5& o,
                                             const Matrix4& lambda, double beta,
                                             const GeneratorSet& gens,
                                             const ActionOptions& opts) {
  GraphCovarianceReport rep;

  const ActionValue before = wilson_action(lf, g, beta, opts);
  const ActionValue after = wilson_action(global_so5_conjugate(lf, o), g, beta, opts);
  rep.action_before = before.raw_trace_sum;
  rep.action_after = after.raw_trace_sum;
  rep.relative_action_change =
      std::abs(after.raw_trace_sum - before.raw_trace_sum) / std::abs(before.raw_trace_sum);

  const double flat_before = flatness_residual(field, g, gens, opts.threads).max_residual;

  // Metric potentials rotated on both indices. A Euclidean field is a fixed
  // point, so the rotated field reproduces every graph observable.
  PotentialField rotated = field;
  for (std::size_t i = 0; i < rotated.size(); ++i) {
    rotated[i].G = lorentz_transform_metric(field[i].G, lambda);
  }
  const double flat_rotated = flatness_residual(rotated, g, gens, opts.threads).max_residual;
  rep.relative_metric_flatness_change =
      flat_before > 0.0 ? std::abs(flat_rotated - flat_before) / flat_before
                        : std::abs(flat_rotated - flat_before);

  const double flat_after =
      flatness_residual(gauge_transform_global(field, o, gens), g, gens, opts.threads).max_residual;
  rep.relative_flatness_change =
      flat_before > 0.0 ? std::abs(flat_after - flat_before) / flat_before
                        : std::abs(flat_after - flat_before);

  const Matrix4 euclid = lorentz_transform_metric(Matrix4::Identity(), lambda);
  rep.metric_deviation_from_euclid = (euclid - Matrix4::Identity()).cwiseAbs().maxCoeff();
  return rep;
}

}  // namespace graphgauge
