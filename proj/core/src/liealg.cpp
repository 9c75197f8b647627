#include "graphgauge/liealg.hpp"

#include <cmath>
#include <sstream>

#include "graphgauge/error.hpp"

namespace graphgauge {

double Torsion::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

Matrix5 GeneratorSet::rotation(int b, int c) const {
  if (b == c) return Matrix5::Zero();
  return b < c ? M[plane_index(b, c)] : Matrix5(-M[plane_index(c, b)]);
}

GeneratorSet make_generators() {
  GeneratorSet gens;
  gens.scale = 1.0 / std::sqrt(2.0);
  const double s = gens.scale;
  for (int b = 0; b < 4; ++b) {
    Matrix5 v = Matrix5::Zero();
    v(b, 4) = s;
    v(4, b) = -s;
    gens.V[b] = v;
  }
  for (int p = 0; p < 6; ++p) {
    const auto [b, c] = kPlanePairs[p];
    Matrix5 m = Matrix5::Zero();
    m(b, c) = s;
    m(c, b) = -s;
    gens.M[p] = m;
  }
  return gens;
}

const GeneratorSet& standard_generators() {
  static const GeneratorSet gens = make_generators();
  return gens;
}

double trace_inner(const Matrix5& x, const Matrix5& y) {
  return (x.array() * y.array()).sum();
}

Matrix5 expm5(const Matrix5& a) {
  if (!a.allFinite()) {
    throw Error("expm5: input has non-finite entries");
  }
  // Reduce to ||A / 2^s||_inf <= 1/4, where 18 Taylor terms sit far below
  // double rounding.
  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();
  int squarings = 0;
  if (norm > 0.25) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.25)));
  }
  const Matrix5 x = a / std::ldexp(1.0, squarings);

  constexpr int kOrder = 18;
  // Horner: I + X(I + X/2 (I + X/3 (...)))
  Matrix5 result = Matrix5::Identity();
  for (int k = kOrder; k >= 1; --k) {
    result = Matrix5::Identity() + (x * result) / static_cast<double>(k);
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

double orthogonality_residual(const Matrix5& a) {
  return (a * a.transpose() - Matrix5::Identity()).cwiseAbs().maxCoeff();
}

MatrixPotential assemble_components(const Matrix4& G, const Torsion& H,
                                    const GeneratorSet& gens) {
  MatrixPotential out;
  for (int a = 0; a < 4; ++a) {
    Matrix5 m = Matrix5::Zero();
    for (int b = 0; b < 4; ++b) m += G(a, b) * gens.V[b];
    // 1/2 sum over all ordered (b, c) equals the sum over b < c, since both
    // H_abc and M_bc flip sign under b <-> c.
    for (int p = 0; p < 6; ++p) m += H.independent(a, p) * gens.M[p];
    out[a] = m;
  }
  return out;
}

PotentialComponents project_components(const MatrixPotential& a,
                                       const GeneratorSet& gens) {
  PotentialComponents out;
  for (int d = 0; d < 4; ++d) {
    for (int b = 0; b < 4; ++b) {
      out.G(d, b) = trace_inner(a[d], gens.V[b]) / trace_inner(gens.V[b], gens.V[b]);
    }
    for (int p = 0; p < 6; ++p) {
      out.H.set_independent(
          d, p, trace_inner(a[d], gens.M[p]) / trace_inner(gens.M[p], gens.M[p]));
    }
  }

  const MatrixPotential back = assemble_components(out.G, out.H, gens);
  double residual = 0.0;
  for (int d = 0; d < 4; ++d) {
    residual = std::max(residual, (back[d] - a[d]).cwiseAbs().maxCoeff());
  }
  if (!(residual <= kSpanTolerance)) {
    std::ostringstream msg;
    msg << "input outside generator span (residual " << residual << ")";
    throw SpanError(msg.str(), residual);
  }
  return out;
}

// ---- SU(N) -----------------------------------------------------------------

Eigen::MatrixXd haar_random_so(int n, Rng& rng) {
  if (n < 1) throw Error("haar_random_so: dimension must be >= 1");
  std::normal_distribution<double> normal(0.0, 1.0);
  Eigen::MatrixXd z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = normal(rng);
  }
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(z);
  Eigen::MatrixXd q = qr.householderQ() * Eigen::MatrixXd::Identity(n, n);
  for (int j = 0; j < n; ++j) {
    if (qr.matrixQR()(j, j) < 0.0) q.col(j) *= -1.0;
  }
  // Haar on O(n) so far; flipping one column maps the det -1 half onto SO(n).
  if (q.determinant() < 0.0) q.col(0) *= -1.0;
  return q;
}

SUNMatrix haar_random_sun(int n, Rng& rng) {
  if (n != 2 && n != 3) {
    throw Error("haar_random_sun: unsupported group rank " + std::to_string(n));
  }
  // Ginibre matrix -> QR with phases of R's diagonal pushed into Q gives Haar
  // on U(N); dividing by an N-th root of det lands on SU(N), and the root's
  // branch ambiguity is a central element independent of the SU(N) factor.
  std::normal_distribution<double> normal(0.0, 1.0);
  ColorMatrix z(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) z(i, j) = Complex(normal(rng), normal(rng));
  }
  Eigen::HouseholderQR<ColorMatrix> qr(z);
  ColorMatrix q = qr.householderQ() * ColorMatrix::Identity(n, n);
  const ColorMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int j = 0; j < n; ++j) {
    const Complex d = r(j, j);
    q.col(j) *= d / std::abs(d);
  }
  const Complex det = q.determinant();
  const Complex root = std::polar(1.0, std::arg(det) / n);
  return reunitarize(q / root);
}

double special_unitary_residual(const ColorMatrix& u) {
  const auto n = u.rows();
  const double unit =
      (u * u.adjoint() - ColorMatrix::Identity(n, n)).cwiseAbs().maxCoeff();
  return std::max(unit, std::abs(u.determinant() - Complex(1.0, 0.0)));
}

SUNMatrix reunitarize(const ColorMatrix& u) {
  const auto n = u.rows();
  ColorMatrix out = u;
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = 0; j < i; ++j) {
      const Complex proj = out.row(j).conjugate().cwiseProduct(out.row(i)).sum();
      out.row(i) -= proj * out.row(j);
    }
    out.row(i) /= out.row(i).norm();
  }
  const Complex det = out.determinant();
  out.row(n - 1) *= std::conj(det) / std::abs(det);
  return out;
}

SUNMatrix exp_i_hermitian(const ColorMatrix& h) {
  Eigen::SelfAdjointEigenSolver<ColorMatrix> eig(h);
  const auto& vecs = eig.eigenvectors();
  const auto& vals = eig.eigenvalues();
  ColorMatrix phases = ColorMatrix::Zero(h.rows(), h.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i) phases(i, i) = std::polar(1.0, vals(i));
  return vecs * phases * vecs.adjoint();
}

LinkMatrix LinkMatrix::identity(int n) {
  return {ColorMatrix::Identity(n, n), Matrix5::Identity()};
}

LinkMatrix LinkMatrix::adjoint() const {
  return {su.adjoint(), so5.transpose()};
}

LinkMatrix operator*(const LinkMatrix& x, const LinkMatrix& y) {
  return {x.su * y.su, x.so5 * y.so5};
}

double link_trace(const LinkMatrix& link) {
  return link.su.trace().real() + link.so5.trace();
}

}  // namespace graphgauge
