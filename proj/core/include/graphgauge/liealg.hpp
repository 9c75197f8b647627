#pragma once

// Small dense-matrix algebra shared by every other module: the ten so(5)
// generators, the 5x5 exponential, trace projections onto the generators,
// SU(N) sampling and the block-diagonal link matrices of the action.

#include <array>
#include <complex>
#include <random>
#include <utility>

#include <Eigen/Dense>

namespace graphgauge {

using Complex = std::complex<double>;
using Matrix4 = Eigen::Matrix4d;
using Vector4 = Eigen::Vector4d;
using Matrix5 = Eigen::Matrix<double, 5, 5>;
using Vector5 = Eigen::Matrix<double, 5, 1>;

// N x N complex matrix with N <= 3 stored inline (no heap allocation).
using ColorMatrix =
    Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::ColMajor, 3, 3>;
using SUNMatrix = ColorMatrix;

using Rng = std::mt19937_64;

// The six planes y_b-y_c with b < c, in the order used for the M generators
// and for every "independent torsion entry" table.
inline constexpr std::array<std::pair<int, int>, 6> kPlanePairs = {
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

// Index into kPlanePairs for b < c; -1 otherwise.
constexpr int plane_index(int b, int c) {
  for (int i = 0; i < 6; ++i) {
    if (kPlanePairs[i].first == b && kPlanePairs[i].second == c) return i;
  }
  return -1;
}

// H_abc with a, b, c in 0..3, antisymmetric in the last two indices.
// Only the 24 independent entries (b < c) are stored; the rest follow.
class Torsion {
 public:
  Torsion() { values_.fill(0.0); }

  double operator()(int a, int b, int c) const {
    if (b == c) return 0.0;
    return b < c ? values_[a * 6 + plane_index(b, c)]
                 : -values_[a * 6 + plane_index(c, b)];
  }

  // Sets H_abc and, implicitly, H_acb = -value. b == c is ignored.
  void set(int a, int b, int c, double value) {
    if (b == c) return;
    if (b < c) {
      values_[a * 6 + plane_index(b, c)] = value;
    } else {
      values_[a * 6 + plane_index(c, b)] = -value;
    }
  }

  // Independent entry for direction a and plane index p (see kPlanePairs).
  double independent(int a, int p) const { return values_[a * 6 + p]; }
  void set_independent(int a, int p, double value) { values_[a * 6 + p] = value; }

  double max_abs() const;
  bool operator==(const Torsion&) const = default;

 private:
  std::array<double, 24> values_;
};

// V_b rotate the y_b-y_4 plane; M[p] rotates the plane kPlanePairs[p].
// Entries are +scale / -scale, so that tr(X Y^T) is the identity matrix on
// the ten generators. Since every generator is antisymmetric,
// tr(X Y^T) = -tr(X Y); orthonormality is stated for the former.
struct GeneratorSet {
  std::array<Matrix5, 4> V;
  std::array<Matrix5, 6> M;
  double scale = 0.0;

  // M_bc for any b, c in 0..3, with M_cb = -M_bc and M_bb = 0.
  Matrix5 rotation(int b, int c) const;
};

GeneratorSet make_generators();

// Shared immutable instance of make_generators().
const GeneratorSet& standard_generators();

// tr(X Y^T), the inner product the generators are orthonormal under.
double trace_inner(const Matrix5& x, const Matrix5& y);

// exp(A) by scaling and squaring of a fixed-order Taylor series.
// Throws Error if A has non-finite entries.
Matrix5 expm5(const Matrix5& a);

// Max-norm of A A^T - I.
double orthogonality_residual(const Matrix5& a);

// One matrix per lattice direction a = 0..3 (the matrix potential A_a).
using MatrixPotential = std::array<Matrix5, 4>;

struct PotentialComponents {
  Matrix4 G = Matrix4::Zero();
  Torsion H;
};

// A_a = sum_b G_ab V_b + 1/2 sum_{b,c} H_abc M_bc.
MatrixPotential assemble_components(const Matrix4& G, const Torsion& H,
                                    const GeneratorSet& gens);

// Inverse of assemble_components by trace projection. Throws SpanError when
// some A_a is not reproduced to 1e-9 by its projection.
PotentialComponents project_components(const MatrixPotential& a,
                                       const GeneratorSet& gens);

inline constexpr double kSpanTolerance = 1e-9;

// Haar-distributed element of SO(n), any n >= 1.
Eigen::MatrixXd haar_random_so(int n, Rng& rng);

// ---- SU(N) -----------------------------------------------------------------

// Haar-distributed element of SU(N), N in {2, 3}.
SUNMatrix haar_random_sun(int n, Rng& rng);

// max(|U U^dag - I|_max, |det U - 1|).
double special_unitary_residual(const ColorMatrix& u);

// Gram-Schmidt back onto SU(N); fixes the determinant phase on the last row.
SUNMatrix reunitarize(const ColorMatrix& u);

// exp(i h) for Hermitian h.
SUNMatrix exp_i_hermitian(const ColorMatrix& h);

// Block-diagonal link: su in the upper-left N x N corner, so5 in the
// lower-right 5 x 5 corner.
struct LinkMatrix {
  SUNMatrix su;
  Matrix5 so5;

  static LinkMatrix identity(int n);
  LinkMatrix adjoint() const;
  int rank() const { return static_cast<int>(su.rows()); }
};

LinkMatrix operator*(const LinkMatrix& x, const LinkMatrix& y);

// Re tr(su) + tr(so5): the trace of the full (N+5) x (N+5) matrix.
double link_trace(const LinkMatrix& link);

}  // namespace graphgauge
