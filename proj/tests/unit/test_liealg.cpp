#include <doctest.h>

#include <cmath>
#include <numbers>

#include "gen.hpp"
#include "graphgauge/error.hpp"
#include "graphgauge/liealg.hpp"

using namespace graphgauge;

namespace {

// Plain Taylor sum in long double, no scaling: stands apart from expm5.
Matrix5 taylor_exp(const Matrix5& a, int terms) {
  using M = Eigen::Matrix<long double, 5, 5>;
  const M x = a.cast<long double>();
  M term = M::Identity();
  M sum = M::Identity();
  for (int k = 1; k < terms; ++k) {
    term = term * x / static_cast<long double>(k);
    sum += term;
  }
  return sum.cast<double>();
}

std::vector<Matrix5> all_generators(const GeneratorSet& g) {
  std::vector<Matrix5> out(g.V.begin(), g.V.end());
  out.insert(out.end(), g.M.begin(), g.M.end());
  return out;
}

Eigen::MatrixXcd dense(const LinkMatrix& l) {
  const int n = l.rank();
  Eigen::MatrixXcd d = Eigen::MatrixXcd::Zero(n + 5, n + 5);
  d.topLeftCorner(n, n) = l.su;
  d.bottomRightCorner(5, 5) = l.so5.cast<Complex>();
  return d;
}

}  // namespace

TEST_SUITE("liealg") {

TEST_CASE("generators are antisymmetric with the documented entries") {
  const GeneratorSet g = make_generators();
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(g.scale == doctest::Approx(s));
  for (int b = 0; b < 4; ++b) {
    CHECK((g.V[b] + g.V[b].transpose()).cwiseAbs().maxCoeff() == 0.0);
    CHECK(g.V[b](b, 4) == s);
    CHECK(g.V[b](4, b) == -s);
    CHECK(g.V[b].cwiseAbs().sum() == doctest::Approx(2 * s));
  }
  for (int p = 0; p < 6; ++p) {
    const auto [b, c] = kPlanePairs[p];
    CHECK(g.M[p](b, c) == s);
    CHECK(g.M[p](c, b) == -s);
    CHECK(g.rotation(c, b) == -g.M[p]);
  }
  CHECK(g.rotation(2, 2) == Matrix5::Zero());
}

TEST_CASE("orthonormality under tr(X Y^T), within 1e-14") {
  const auto gens = all_generators(standard_generators());
  for (std::size_t i = 0; i < gens.size(); ++i) {
    for (std::size_t j = 0; j < gens.size(); ++j) {
      const double expect = i == j ? 1.0 : 0.0;
      CHECK(std::abs(trace_inner(gens[i], gens[j]) - expect) <= 1e-14);
      // Antisymmetry turns the plain trace of the product into minus the same.
      CHECK(std::abs((gens[i] * gens[j]).trace() + expect) <= 1e-14);
    }
  }
}

TEST_CASE("expm5 basic values") {
  CHECK(expm5(Matrix5::Zero()) == Matrix5::Identity());

  // Unnormalized 0-1 plane generator.
  Matrix5 g01 = Matrix5::Zero();
  g01(0, 1) = 1.0;
  g01(1, 0) = -1.0;
  const Matrix5 r = expm5(0.3 * g01);
  Matrix5 expect = Matrix5::Identity();
  expect(0, 0) = std::cos(0.3);
  expect(0, 1) = std::sin(0.3);
  expect(1, 0) = -std::sin(0.3);
  expect(1, 1) = std::cos(0.3);
  CHECK((r - expect).cwiseAbs().maxCoeff() <= 1e-15);
  CHECK((r - taylor_exp(0.3 * g01, 20)).cwiseAbs().maxCoeff() <= 1e-15);

  Matrix5 bad = Matrix5::Zero();
  bad(1, 2) = std::nan("");
  CHECK_THROWS_AS(expm5(bad), Error);
  bad(1, 2) = INFINITY;
  CHECK_THROWS_AS(expm5(bad), Error);
}

TEST_CASE("expm5 matches a long Taylor sum, norms up to 10") {
  Rng rng(11);
  for (int t = 0; t < 200; ++t) {
    // General (not antisymmetric) matrices with ||A||_inf <= 10.
    Matrix5 a;
    for (int i = 0; i < 5; ++i) {
      for (int j = 0; j < 5; ++j) a(i, j) = gen::uniform(rng);
    }
    const double target = gen::uniform(rng, 0.01, 10.0);
    a *= target / a.cwiseAbs().rowwise().sum().maxCoeff();
    const Matrix5 oracle = taylor_exp(a, 120);
    const double scale = std::max(1.0, oracle.cwiseAbs().maxCoeff());
    CHECK((expm5(a) - oracle).cwiseAbs().maxCoeff() <= 1e-13 * scale);
  }
}

TEST_CASE("expm5 of antisymmetric matrices is orthogonal within 1e-12") {
  Rng rng(12);
  for (int t = 0; t < 500; ++t) {
    const Matrix5 x = gen::antisymmetric5(rng, gen::uniform(rng, 0.0, 5.0));
    const Matrix5 o = expm5(x);
    CHECK(orthogonality_residual(o) <= 1e-12);
    CHECK(o.determinant() == doctest::Approx(1.0).epsilon(1e-12));
    CHECK((o - taylor_exp(x, 120)).cwiseAbs().maxCoeff() <= 1e-13);
  }
}

TEST_CASE("projection of A_a = V_a gives G = 1, H = 0") {
  const GeneratorSet& g = standard_generators();
  MatrixPotential a;
  for (int d = 0; d < 4; ++d) a[d] = g.V[d];
  const PotentialComponents c = project_components(a, g);
  CHECK(c.G == Matrix4::Identity());
  CHECK(c.H.max_abs() == 0.0);
}

TEST_CASE("assemble / project round trip over 1000 random fields") {
  Rng rng(13);
  const GeneratorSet& g = standard_generators();
  double worst = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const Matrix4 G = gen::metric(rng);
    const Torsion H = gen::torsion(rng);
    const PotentialComponents c = project_components(assemble_components(G, H, g), g);
    worst = std::max(worst, (c.G - G).cwiseAbs().maxCoeff());
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) {
        for (int cc = 0; cc < 4; ++cc) {
          worst = std::max(worst, std::abs(c.H(a, b, cc) - H(a, b, cc)));
          // Antisymmetry in the last pair is exact.
          CHECK(c.H(a, b, cc) == -c.H(a, cc, b));
        }
      }
    }
  }
  CHECK(worst <= 1e-12);
}

TEST_CASE("assemble matches the explicit half-sum over ordered pairs") {
  Rng rng(14);
  const GeneratorSet& g = standard_generators();
  const Matrix4 G = gen::metric(rng);
  const Torsion H = gen::torsion(rng);
  const MatrixPotential a = assemble_components(G, H, g);
  for (int d = 0; d < 4; ++d) {
    Matrix5 m = Matrix5::Zero();
    for (int b = 0; b < 4; ++b) {
      m += G(d, b) * g.V[b];
      for (int c = 0; c < 4; ++c) m += 0.5 * H(d, b, c) * g.rotation(b, c);
    }
    CHECK((m - a[d]).cwiseAbs().maxCoeff() <= 1e-15);
  }
}

TEST_CASE("projection rejects a symmetric perturbation with its residual") {
  Rng rng(15);
  const GeneratorSet& g = standard_generators();
  MatrixPotential a = assemble_components(gen::metric(rng), gen::torsion(rng), g);
  Matrix5 p = Matrix5::Zero();
  p(0, 1) = p(1, 0) = 1e-3;
  p(2, 2) = 0.5e-3;
  a[2] += p;
  try {
    project_components(a, g);
    FAIL("expected SpanError");
  } catch (const SpanError& e) {
    CHECK(e.residual() == doctest::Approx(1e-3).epsilon(1e-9));
  }
  // Below the tolerance passes.
  a[2] -= p;
  a[2](3, 3) += 1e-10;
  CHECK_NOTHROW(project_components(a, g));
}

TEST_CASE("haar SU(N) draws are special unitary") {
  Rng rng(16);
  for (int n : {2, 3}) {
    for (int t = 0; t < 1000; ++t) {
      const SUNMatrix u = haar_random_sun(n, rng);
      CHECK(u.rows() == n);
      CHECK(special_unitary_residual(u) <= 1e-12);
    }
  }
  CHECK_THROWS_AS(haar_random_sun(4, rng), Error);
  CHECK_THROWS_AS(haar_random_sun(1, rng), Error);
}

TEST_CASE("haar SU(2) moments match quadrature over the 3-sphere") {
  // Haar on SU(2) in the class angle psi has density (2/pi) sin^2 psi and
  // 1/2 tr U = cos psi. Oracle by midpoint rule on [0, pi].
  auto moment = [](int k) {
    const int m = 20000;
    double num = 0, den = 0;
    for (int i = 0; i < m; ++i) {
      const double psi = (i + 0.5) * std::numbers::pi / m;
      const double w = std::sin(psi) * std::sin(psi);
      num += std::pow(std::cos(psi), k) * w;
      den += w;
    }
    return num / den;
  };
  Rng rng(17);
  const int draws = 100000;
  std::array<double, 5> sums{};
  for (int t = 0; t < draws; ++t) {
    const double c = 0.5 * haar_random_sun(2, rng).trace().real();
    for (int k = 1; k <= 4; ++k) sums[k] += std::pow(c, k);
  }
  for (int k = 1; k <= 4; ++k) {
    const double mean = sums[k] / draws;
    // |cos|^k <= 1, so 5 / sqrt(draws) bounds five standard errors.
    CHECK(std::abs(mean - moment(k)) <= 5.0 / std::sqrt(draws));
  }
  CHECK(moment(2) == doctest::Approx(0.25).epsilon(1e-8));
  CHECK(moment(4) == doctest::Approx(0.125).epsilon(1e-8));
}

TEST_CASE("haar SU(3) moments") {
  // Integrals over SU(3): E tr U = 0, E |tr U|^2 = 1, E (tr U)^3 = 1 (the
  // determinant invariant, absent on U(3)), E |U_00|^2 = 1/3.
  Rng rng(18);
  const int draws = 100000;
  Complex m1 = 0, m3 = 0;
  double m2 = 0, e00 = 0;
  for (int t = 0; t < draws; ++t) {
    const SUNMatrix u = haar_random_sun(3, rng);
    const Complex tr = u.trace();
    m1 += tr;
    m2 += std::norm(tr);
    m3 += tr * tr * tr;
    e00 += std::norm(u(0, 0));
  }
  const double n = draws;
  CHECK(std::abs(m1 / n) <= 5.0 * 1.0 / std::sqrt(n));
  CHECK(std::abs(m2 / n - 1.0) <= 5.0 * 1.5 / std::sqrt(n));
  CHECK(std::abs(m3 / n - 1.0) <= 5.0 * 2.5 / std::sqrt(n));
  CHECK(std::abs(e00 / n - 1.0 / 3.0) <= 5.0 * 0.3 / std::sqrt(n));
}

TEST_CASE("haar SO(n) draws") {
  Rng rng(19);
  for (int n : {2, 4, 5}) {
    double mean00 = 0.0;
    for (int t = 0; t < 4000; ++t) {
      const Eigen::MatrixXd q = haar_random_so(n, rng);
      CHECK((q * q.transpose() - Eigen::MatrixXd::Identity(n, n)).cwiseAbs().maxCoeff() <= 1e-12);
      CHECK(q.determinant() == doctest::Approx(1.0));
      mean00 += q(0, 0);
    }
    CHECK(std::abs(mean00 / 4000) <= 0.05);
  }
  CHECK_THROWS_AS(haar_random_so(0, rng), Error);
}

TEST_CASE("reunitarize projects noisy matrices back onto SU(N)") {
  Rng rng(20);
  for (int n : {2, 3}) {
    for (int t = 0; t < 200; ++t) {
      SUNMatrix u = haar_random_sun(n, rng);
      const SUNMatrix clean = u;
      for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) u(i, j) += Complex(1e-6 * gen::uniform(rng), 1e-6 * gen::uniform(rng));
      }
      const SUNMatrix r = reunitarize(u);
      CHECK(special_unitary_residual(r) <= 1e-13);
      CHECK((r - clean).cwiseAbs().maxCoeff() <= 1e-5);
    }
  }
}

TEST_CASE("exp_i_hermitian against a Taylor sum") {
  Rng rng(21);
  for (int n : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      ColorMatrix h(n, n);
      for (int i = 0; i < n; ++i) {
        h(i, i) = gen::uniform(rng);
        for (int j = 0; j < i; ++j) {
          h(i, j) = Complex(gen::uniform(rng), gen::uniform(rng));
          h(j, i) = std::conj(h(i, j));
        }
      }
      const ColorMatrix x = Complex(0, 1) * h;
      ColorMatrix term = ColorMatrix::Identity(n, n), sum = term;
      for (int k = 1; k < 60; ++k) {
        term = (term * x / static_cast<double>(k)).eval();
        sum += term;
      }
      CHECK((exp_i_hermitian(h) - sum).cwiseAbs().maxCoeff() <= 1e-13);
    }
  }
}

TEST_CASE("link_trace and products agree with the dense block matrix") {
  Rng rng(22);
  for (int n : {2, 3}) {
    for (int t = 0; t < 100; ++t) {
      const LinkMatrix a{haar_random_sun(n, rng), gen::so5(rng)};
      const LinkMatrix b{haar_random_sun(n, rng), gen::so5(rng)};
      CHECK(link_trace(a) == doctest::Approx(dense(a).trace().real()).epsilon(1e-14));
      const Eigen::MatrixXcd ab = dense(a) * dense(b);
      CHECK((dense(a * b) - ab).cwiseAbs().maxCoeff() <= 1e-14);
      CHECK((dense(a.adjoint()) - dense(a).adjoint()).cwiseAbs().maxCoeff() == 0.0);
    }
    const LinkMatrix id = LinkMatrix::identity(n);
    CHECK(link_trace(id) == n + 5);
  }
}

}  // TEST_SUITE
