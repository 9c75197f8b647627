#pragma once

// Plaquette action over block SU(N) (+) SO(5) links.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <vector>

#include "graphgauge/graphlat.hpp"
#include "graphgauge/liealg.hpp"

namespace graphgauge {

// SU(N) matrix per (Event vertex, direction 0..3) and one SO(5) block shared
// by every link. Link storage index is 4 * event ordinal + direction.
class LinkField {
 public:
  // Identity links (cold start). Throws Error for N outside {2, 3}.
  LinkField(const LatticeGraph& g, int n);

  static LinkField haar_random(const LatticeGraph& g, int n, Rng& rng);

  int rank() const { return n_; }
  std::size_t link_count() const { return su_.size(); }

  const SUNMatrix& su(VertexId event, int direction) const {
    return su_[4 * to_index(event) + static_cast<std::size_t>(direction)];
  }
  SUNMatrix& su(VertexId event, int direction) {
    return su_[4 * to_index(event) + static_cast<std::size_t>(direction)];
  }
  const SUNMatrix& operator[](std::size_t link) const { return su_[link]; }
  SUNMatrix& operator[](std::size_t link) { return su_[link]; }

  const Matrix5& so5() const { return so5_; }
  // Throws GroupError unless o is orthogonal with det +1 to 1e-10.
  void set_so5(const Matrix5& o);

  LinkMatrix link(VertexId event, int direction) const {
    return {su(event, direction), so5_};
  }

 private:
  int n_;
  std::vector<SUNMatrix> su_;
  Matrix5 so5_ = Matrix5::Identity();
};

struct ActionValue {
  double raw_trace_sum = 0.0;  // sum_p Re tr(U_p) over the full block matrix
  double normalized = 0.0;     // beta * sum_p (1 - Re tr(su part of U_p) / N)
  double beta = 0.0;
  double su_trace_sum = 0.0;   // sum_p Re tr(su part)
  double so5_trace_sum = 0.0;  // sum_p tr(so5 part)
  std::size_t plaquettes = 0;
};

struct ActionOptions {
  int threads = 1;
  // Sort per-plaquette contributions and sum pairwise: the result is then
  // independent of thread count and of any permutation of the plaquettes.
  bool deterministic = false;
};

// U(x,mu) U(x+mu,nu) U(x+nu,mu)^dag U(x,nu)^dag, blocks multiplied separately.
LinkMatrix plaquette_product(const LinkField& lf, const PlaquetteRef& p);

// Throws Error if the link field does not cover the graph.
ActionValue wilson_action(const LinkField& lf, const LatticeGraph& g, double beta,
                          const ActionOptions& opts = {});

// U'(x,d) = W(x) U(x,d) W(x+d)^dag, one W per Event vertex.
// Throws GroupError if some W is not special unitary to 1e-10.
LinkField local_gauge_links(const LinkField& lf, const LatticeGraph& g,
                            std::span<const SUNMatrix> omega);

// so5 <- O so5 O^T. Throws GroupError if O is not orthogonal to 1e-10.
LinkField global_so5_conjugate(const LinkField& lf, const Matrix5& o);

// ---- continuum limit -------------------------------------------------------

using Point4 = std::array<double, 4>;

// Hermitian su(N)-valued gauge potential A_mu(x) on R^4.
struct SmoothPotential {
  int n = 2;
  std::function<ColorMatrix(int mu, const Point4& x)> value;
  // d_nu A_mu at x. When empty, a fourth-order central difference is used.
  std::function<ColorMatrix(int mu, int nu, const Point4& x)> derivative;
};

struct ContinuumOptions {
  // Edge length of the sampled box, in the same units as epsilon.
  double extent = 0.2;
  Point4 origin{0.0, 0.0, 0.0, 0.0};
  // Restrict the averages to one plane (index into kPlanePairs); -1 keeps all.
  int plane = -1;
};

struct ConvergencePoint {
  double epsilon = 0.0;
  std::size_t plaquettes = 0;
  double mean_deficit = 0.0;        // mean of N - Re tr U_p
  double mean_predicted = 0.0;      // mean of eps^4 / 2 tr(F_munu^2)
  double mean_abs_remainder = 0.0;  // mean |deficit - predicted|
  double max_abs_remainder = 0.0;
  double deficit_over_eps4() const { return mean_deficit / std::pow(epsilon, 4); }
};

struct ConvergenceReport {
  std::vector<ConvergencePoint> points;
  double deficit_slope = 0.0;    // log-log slope of mean_deficit
  double remainder_slope = 0.0;  // log-log slope of mean_abs_remainder
};

// F_munu = d_mu A_nu - d_nu A_mu + i [A_mu, A_nu], matching the link
// convention U = exp(i eps A).
ColorMatrix field_strength(const SmoothPotential& a, int mu, int nu, const Point4& x);

// Links U(x,mu) = exp(i eps A_mu(x + eps/2 e_mu)) on an open graph covering
// the box; compares each plaquette deficit with eps^4/2 tr(F^2) at the
// plaquette centre. Throws Error for fewer than 3 spacings.
ConvergenceReport continuum_convergence(const SmoothPotential& a,
                                        std::span<const double> eps_list,
                                        const ContinuumOptions& opts = {});

}  // namespace graphgauge
