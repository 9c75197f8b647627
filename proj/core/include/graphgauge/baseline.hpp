#pragma once

// Embedded-lattice foil.
//
// A lattice placed inside a manifold samples fields at positions, so moving
// the lattice (translating it in 1D, rotating its axes in 4D) changes the
// discretized action by some sigma. A graph functional weights samples by a
// distance function attached to the graph itself and has nothing to move.

#include <cstdint>
#include <functional>
#include <vector>

#include "graphgauge/graphlat.hpp"
#include "graphgauge/liealg.hpp"
#include "graphgauge/potential.hpp"
#include "graphgauge/wilson.hpp"

namespace graphgauge {

// Lagrangian density L[u] of a sample value.
using Density1D = std::function<double(double)>;
using Profile1D = std::function<double(double)>;

struct Window {
  double lo = 0.0;
  double hi = 0.0;
};

// sum_k eps L[f(k eps + delta)] over k with k eps + delta in [lo, hi].
// The window must hold essentially all of L[f]; the caller owns that.
// Throws Error for eps <= 0 or an empty window.
double action_1d_embedded(const Profile1D& f, const Density1D& L, double eps, double delta,
                          const Window& window);

// Samples f_k on a chain graph; g_k is the distance attached to vertex k.
struct GraphField1D {
  std::int64_t first_index = 0;
  std::vector<double> f;
  std::vector<double> g;
};

// g_k = eps, f_k = f(k eps) for every k eps in the window.
GraphField1D sample_chain(const Profile1D& f, double eps, const Window& window);

// The same field with every index moved by m.
GraphField1D relabel_chain(GraphField1D field, std::int64_t m);

// sum_k g_k L[f_k] in index order. Throws Error when some g_k <= 0.
double action_1d_graph(const GraphField1D& field, const Density1D& L);

struct ViolationReport {
  double sigma = 0.0;       // transformed - untransformed, same rule
  double epsilon = 0.0;
  double parameter = 0.0;   // delta (1D) or rotation angle in radians (4D)
  double reference = 0.0;   // 1D: adaptive quadrature; 4D: untransformed action
  double truncation_estimate = 0.0;  // contribution of the outermost sample layer
  double transformed = 0.0;
  double untransformed = 0.0;
};

// sigma = S_{eps,delta} - S_{eps,0}.
ViolationReport violation_sigma_1d(const Profile1D& f, const Density1D& L, double eps,
                                   double delta, const Window& window);

// Adaptive Gauss-Kronrod integral of L[f] over the window.
double quadrature_1d(const Profile1D& f, const Density1D& L, const Window& window);

using ScalarField4 = std::function<double(const Point4&)>;

struct EmbeddedOptions {
  // Half-widths of the sampled box along the lattice axes.
  std::array<double, 4> half_width{4.0, 4.0, 4.0, 4.0};
  double mass = 1.0;
  int threads = 1;
};

// Lattice sites at R (eps n) for |eps n_i| <= half_width_i;
// S = sum eps^4 [ 1/2 sum_mu ((phi(x + eps R e_mu) - phi(x)) / eps)^2 + m^2/2 phi^2 ].
// Throws Error if R is not orthogonal to 1e-10.
double embedded_action_4d(const ScalarField4& phi, const Matrix4& rotation, double eps,
                          const EmbeddedOptions& opts, double* boundary_layer = nullptr);

// sigma = S(R) - S(identity).
ViolationReport violation_4d_embedded(const ScalarField4& phi, const Matrix4& rotation,
                                      double eps, const EmbeddedOptions& opts);

// Rotation by angle (radians) in the a-b plane.
Matrix4 plane_rotation(int a, int b, double angle);

// Graph-formulation counterpart of a global rotation: the SO(5) block of
// every link is conjugated by O, the potential field is gauge transformed by
// the same constant O, and every metric potential is sent through
// lorentz_transform_metric with Lambda.
struct GraphCovarianceReport {
  double action_before = 0.0;
  double action_after = 0.0;
  double relative_action_change = 0.0;           // raw trace sum, SO(5) conjugation
  double relative_flatness_change = 0.0;         // constant gauge transform of the field
  double relative_metric_flatness_change = 0.0;  // G -> L^T G L on every entry
  double metric_deviation_from_euclid = 0.0;     // max |L^T L - 1|
};

// Lambda (+) 1.
Matrix5 embed_rotation(const Matrix4& lambda);

GraphCovarianceReport graph_covariance_check(const LinkField& lf, const LatticeGraph& g,
                                             const PotentialField& field, const Matrix5& o,
                                             const Matrix4& lambda, double beta,
                                             const GeneratorSet& gens,
                                             const ActionOptions& opts = {});

}  // namespace graphgauge
