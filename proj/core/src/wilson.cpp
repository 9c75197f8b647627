#include "graphgauge/wilson.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "graphgauge/error.hpp"
#include "graphgauge/fit.hpp"
#include "parallel.hpp"

namespace graphgauge {

namespace {

constexpr double kGroupTolerance = 1e-10;

void require_special_unitary(const ColorMatrix& w) {
  const double r = special_unitary_residual(w);
  if (!(r <= kGroupTolerance)) {
    std::ostringstream msg;
    msg << "gauge matrix is not special unitary (residual " << r << ")";
    throw GroupError(msg.str(), r);
  }
}

void require_rotation(const Matrix5& o) {
  const double r = std::max(orthogonality_residual(o), std::abs(o.determinant() - 1.0));
  if (!(r <= kGroupTolerance)) {
    std::ostringstream msg;
    msg << "so(5) block is not a rotation (residual " << r << ")";
    throw GroupError(msg.str(), r);
  }
}

double summed(std::vector<double>& values, const ActionOptions& opts,
              std::span<const double> chunk_sums) {
  if (opts.deterministic) {
    std::sort(values.begin(), values.end());
    return detail::pairwise_sum(values.data(), values.size());
  }
  double s = 0.0;
  for (double c : chunk_sums) s += c;
  return s;
}

}  // namespace

namespace {

int checked_rank(int n) {
  if (n != 2 && n != 3) throw Error("link field: unsupported group rank " + std::to_string(n));
  return n;
}

}  // namespace

LinkField::LinkField(const LatticeGraph& g, int n)
    : n_(checked_rank(n)), su_(4 * g.event_count(), ColorMatrix::Identity(n_, n_)) {}

LinkField LinkField::haar_random(const LatticeGraph& g, int n, Rng& rng) {
  LinkField lf(g, n);
  for (auto& u : lf.su_) u = haar_random_sun(n, rng);
  return lf;
}

void LinkField::set_so5(const Matrix5& o) {
  require_rotation(o);
  so5_ = o;
}

LinkMatrix plaquette_product(const LinkField& lf, const PlaquetteRef& p) {
  LinkMatrix loop = lf.link(p.links[0].event, p.links[0].direction);
  for (int i = 1; i < 4; ++i) {
    const LinkRef& l = p.links[i];
    const LinkMatrix u = lf.link(l.event, l.direction);
    loop = loop * (l.forward ? u : u.adjoint());
  }
  return loop;
}

ActionValue wilson_action(const LinkField& lf, const LatticeGraph& g, double beta,
                          const ActionOptions& opts) {
  if (lf.link_count() != 4 * g.event_count()) {
    throw Error("wilson_action: link field does not cover the graph");
  }
  const auto plaquettes = g.plaquettes();
  const std::size_t np = plaquettes.size();
  const double n = lf.rank();

  std::vector<double> full(np), su(np), deficit(np), so5(np);
  const int workers = std::max(1, opts.threads);
  std::vector<double> chunk_full(static_cast<std::size_t>(workers), 0.0);
  std::vector<double> chunk_su(chunk_full), chunk_deficit(chunk_full), chunk_so5(chunk_full);

  detail::parallel_chunks(np, workers, [&](std::size_t begin, std::size_t end, std::size_t w) {
    double f = 0, s = 0, d = 0, o = 0;
    for (std::size_t i = begin; i < end; ++i) {
      const LinkMatrix up = plaquette_product(lf, plaquettes[i]);
      full[i] = link_trace(up);
      su[i] = up.su.trace().real();
      so5[i] = up.so5.trace();
      deficit[i] = 1.0 - su[i] / n;
      f += full[i];
      s += su[i];
      d += deficit[i];
      o += so5[i];
    }
    chunk_full[w] = f;
    chunk_su[w] = s;
    chunk_deficit[w] = d;
    chunk_so5[w] = o;
  });

  ActionValue out;
  out.beta = beta;
  out.plaquettes = np;
  out.raw_trace_sum = summed(full, opts, chunk_full);
  out.su_trace_sum = summed(su, opts, chunk_su);
  out.so5_trace_sum = summed(so5, opts, chunk_so5);
  out.normalized = beta * summed(deficit, opts, chunk_deficit);
  return out;
}

LinkField local_gauge_links(const LinkField& lf, const LatticeGraph& g,
                            std::span<const SUNMatrix> omega) {
  if (omega.size() != g.event_count()) {
    throw Error("local_gauge_links: need one gauge matrix per event vertex");
  }
  for (const auto& w : omega) require_special_unitary(w);

  LinkField out = lf;
  for (std::size_t e = 0; e < g.event_count(); ++e) {
    const VertexId x = g.event(e);
    for (int d = 0; d < 4; ++d) {
      const VertexId y = g.step(x, d, +1);
      if (y == kNoVertex) continue;
      out.su(x, d) = omega[e] * lf.su(x, d) * omega[g.event_ordinal(y)].adjoint();
    }
  }
  return out;
}

LinkField global_so5_conjugate(const LinkField& lf, const Matrix5& o) {
  const double r = orthogonality_residual(o);
  if (!(r <= kGroupTolerance)) {
    std::ostringstream msg;
    msg << "conjugating matrix is not orthogonal (residual " << r << ")";
    throw GroupError(msg.str(), r);
  }
  LinkField out = lf;
  out.set_so5(o * lf.so5() * o.transpose());
  return out;
}

// ---- continuum limit -------------------------------------------------------

namespace {

Point4 offset(Point4 x, int mu, double h) {
  x[mu] += h;
  return x;
}

ColorMatrix derivative_fd(const SmoothPotential& a, int mu, int nu, const Point4& x) {
  constexpr double h = 1e-3;
  return (-a.value(mu, offset(x, nu, 2 * h)) + 8.0 * a.value(mu, offset(x, nu, h)) -
          8.0 * a.value(mu, offset(x, nu, -h)) + a.value(mu, offset(x, nu, -2 * h))) /
         (12.0 * h);
}

}  // namespace

ColorMatrix field_strength(const SmoothPotential& a, int mu, int nu, const Point4& x) {
  auto deriv = [&](int m, int n) {
    return a.derivative ? a.derivative(m, n, x) : derivative_fd(a, m, n, x);
  };
  const ColorMatrix am = a.value(mu, x);
  const ColorMatrix an = a.value(nu, x);
  const Complex i(0.0, 1.0);
  return deriv(nu, mu) - deriv(mu, nu) + i * (am * an - an * am);
}

ConvergenceReport continuum_convergence(const SmoothPotential& a,
                                        std::span<const double> eps_list,
                                        const ContinuumOptions& opts) {
  if (eps_list.size() < 3) throw Error("continuum_convergence: need at least 3 spacings");
  if (!a.value) throw Error("continuum_convergence: potential has no value function");

  ConvergenceReport report;
  std::vector<double> eps_v, deficit_v, remainder_v;
  if (opts.plane < -1 || opts.plane > 5) throw Error("continuum_convergence: plane out of range");

  for (double eps : eps_list) {
    if (!(eps > 0.0)) throw Error("continuum_convergence: spacings must be > 0");
    const int sites = std::max(1, static_cast<int>(std::lround(opts.extent / eps)));
    const LatticeGraph g = LatticeGraph::hypercubic({sites + 1, sites + 1, sites + 1, sites + 1},
                                                    /*periodic=*/false);

    // Flat Euclidean gauge: an Event vertex at address n sits at origin + eps n.
    auto point = [&](VertexId v) {
      const Address n = g.address(v);
      Point4 x;
      for (int d = 0; d < 4; ++d) x[d] = opts.origin[d] + eps * n[d];
      return x;
    };

    LinkField lf(g, a.n);
    for (std::size_t e = 0; e < g.event_count(); ++e) {
      const VertexId v = g.event(e);
      for (int mu = 0; mu < 4; ++mu) {
        if (g.transition(v, mu) == kNoVertex) continue;
        lf.su(v, mu) = exp_i_hermitian(eps * a.value(mu, offset(point(v), mu, 0.5 * eps)));
      }
    }

    ConvergencePoint pt;
    pt.epsilon = eps;
    double sum_def = 0, sum_pred = 0, sum_rem = 0;
    for (const PlaquetteRef& p : g.plaquettes()) {
      if (opts.plane >= 0 && plane_index(p.plane.first, p.plane.second) != opts.plane) continue;
      const auto [mu, nu] = p.plane;
      const double deficit = a.n - plaquette_product(lf, p).su.trace().real();
      const Point4 centre = offset(offset(point(p.corners[0]), mu, 0.5 * eps), nu, 0.5 * eps);
      const ColorMatrix f = field_strength(a, mu, nu, centre);
      const double predicted = 0.5 * std::pow(eps, 4) * (f * f).trace().real();
      const double rem = std::abs(deficit - predicted);
      sum_def += deficit;
      sum_pred += predicted;
      sum_rem += rem;
      pt.max_abs_remainder = std::max(pt.max_abs_remainder, rem);
      ++pt.plaquettes;
    }
    const double np = static_cast<double>(pt.plaquettes);
    pt.mean_deficit = sum_def / np;
    pt.mean_predicted = sum_pred / np;
    pt.mean_abs_remainder = sum_rem / np;
    report.points.push_back(pt);
    eps_v.push_back(eps);
    deficit_v.push_back(std::abs(pt.mean_deficit));
    remainder_v.push_back(pt.mean_abs_remainder);
  }

  auto safe_slope = [&](const std::vector<double>& y) {
    for (double v : y) {
      if (!(v > 0.0)) return 0.0;
    }
    return loglog_slope(eps_v, y);
  };
  report.deficit_slope = safe_slope(deficit_v);
  report.remainder_slope = safe_slope(remainder_v);
  return report;
}

}  // namespace graphgauge
