#include "graphgauge/sampler.hpp"

#include <cmath>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "graphgauge/error.hpp"
#include "parallel.hpp"

namespace graphgauge {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Hermitian traceless T_a = lambda_a / 2 (Pauli for N = 2, Gell-Mann for N = 3).
const std::vector<ColorMatrix>& su_generators(int n) {
  static const std::vector<ColorMatrix> su2 = [] {
    const Complex i(0, 1);
    std::vector<ColorMatrix> t(3, ColorMatrix::Zero(2, 2));
    t[0] << 0, 1, 1, 0;
    t[1] << 0, -i, i, 0;
    t[2] << 1, 0, 0, -1;
    for (auto& m : t) m *= 0.5;
    return t;
  }();
  static const std::vector<ColorMatrix> su3 = [] {
    const Complex i(0, 1);
    std::vector<ColorMatrix> t(8, ColorMatrix::Zero(3, 3));
    t[0] << 0, 1, 0, 1, 0, 0, 0, 0, 0;
    t[1] << 0, -i, 0, i, 0, 0, 0, 0, 0;
    t[2] << 1, 0, 0, 0, -1, 0, 0, 0, 0;
    t[3] << 0, 0, 1, 0, 0, 0, 1, 0, 0;
    t[4] << 0, 0, -i, 0, 0, 0, i, 0, 0;
    t[5] << 0, 0, 0, 0, 0, 1, 0, 1, 0;
    t[6] << 0, 0, 0, 0, 0, -i, 0, i, 0;
    t[7] << 1, 0, 0, 0, 1, 0, 0, 0, -2;
    t[7] /= std::sqrt(3.0);
    for (auto& m : t) m *= 0.5;
    return t;
  }();
  return n == 2 ? su2 : su3;
}

}  // namespace

void validate(const ChainConfig& cfg) {
  if (!(cfg.beta >= 0.0) || !std::isfinite(cfg.beta)) {
    throw ConfigError("beta", "beta must be a finite value >= 0");
  }
  for (int d = 0; d < 4; ++d) {
    if (cfg.dims[d] < 2) throw ConfigError("dims", "every extent must be >= 2");
  }
  if (cfg.n != 2 && cfg.n != 3) throw ConfigError("N", "group rank must be 2 or 3");
  if (cfg.sweeps <= 0) throw ConfigError("sweeps", "sweeps must be > 0");
  if (cfg.burn_in < 0 || cfg.burn_in >= cfg.sweeps) {
    throw ConfigError("burn_in", "burn_in must satisfy 0 <= burn_in < sweeps");
  }
  if (!(cfg.step_scale > 0.0 && cfg.step_scale <= 1.0)) {
    throw ConfigError("step_scale", "step_scale must lie in (0, 1]");
  }
  if (cfg.measure_every < 1) throw ConfigError("measure_every", "measure_every must be >= 1");
  if (cfg.threads < 1) throw ConfigError("threads", "threads must be >= 1");
}

SUNMatrix random_near_identity(int n, double step_scale, Rng& rng) {
  std::uniform_real_distribution<double> uni(-1.0, 1.0);
  const auto& gens = su_generators(n);
  ColorMatrix h = ColorMatrix::Zero(n, n);
  for (const auto& t : gens) h += uni(rng) * t;
  return exp_i_hermitian(step_scale * h);
}

SUNMatrix staple(const LinkField& lf, const LatticeGraph& g, VertexId x, int mu) {
  const int n = lf.rank();
  ColorMatrix a = ColorMatrix::Zero(n, n);
  const VertexId x_mu = g.step(x, mu, +1);
  for (int nu = 0; nu < 4; ++nu) {
    if (nu == mu) continue;
    const VertexId x_nu = g.step(x, nu, +1);
    const VertexId x_mnu = g.step(x, nu, -1);
    const VertexId x_mu_mnu = g.step(x_mu, nu, -1);
    a += lf.su(x_mu, nu) * lf.su(x_nu, mu).adjoint() * lf.su(x, nu).adjoint();
    a += lf.su(x_mu_mnu, nu).adjoint() * lf.su(x_mnu, mu).adjoint() * lf.su(x_mnu, nu);
  }
  return a;
}

double local_delta_action(const LinkField& lf, const LatticeGraph& g, VertexId x, int mu,
                          const SUNMatrix& proposed, double beta) {
  const ColorMatrix a = staple(lf, g, x, mu);
  return -beta / lf.rank() * ((proposed - lf.su(x, mu)) * a).trace().real();
}

bool metropolis_update(SUNMatrix& u, const SUNMatrix& staple_sum, double beta,
                       double step_scale, Rng& rng) {
  const int n = static_cast<int>(u.rows());
  const SUNMatrix proposed = random_near_identity(n, step_scale, rng) * u;
  const double delta = -beta / n * ((proposed - u) * staple_sum).trace().real();
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  if (delta <= 0.0 || uni(rng) < std::exp(-delta)) {
    u = reunitarize(proposed);
    return true;
  }
  return false;
}

double metropolis_sweep(LinkField& lf, const LatticeGraph& g, double beta, double step_scale,
                        Rng& rng, const SweepOptions& opts) {
  if (!g.periodic()) throw Error("metropolis_sweep: graph must be periodic");
  const std::size_t events = g.event_count();
  const std::size_t total = 4 * events;

  const bool checkerboard = opts.threads > 1 || opts.per_link_seeding;
  if (!checkerboard) {
    std::size_t accepted = 0;
    for (std::size_t e = 0; e < events; ++e) {
      const VertexId x = g.event(e);
      for (int mu = 0; mu < 4; ++mu) {
        const ColorMatrix a = staple(lf, g, x, mu);
        accepted += metropolis_update(lf.su(x, mu), a, beta, step_scale, rng) ? 1 : 0;
      }
    }
    return static_cast<double>(accepted) / static_cast<double>(total);
  }

  for (int d : g.dims()) {
    if (d % 2 != 0) throw Error("checkerboard sweep needs even extents");
  }
  // Links (x, mu) with equal site parity share no plaquette, so one colour
  // class can be updated concurrently.
  std::array<std::vector<VertexId>, 2> parity;
  for (std::size_t e = 0; e < events; ++e) {
    const Address a = g.address(g.event(e));
    parity[(a[0] + a[1] + a[2] + a[3]) % 2].push_back(g.event(e));
  }

  std::size_t accepted_total = 0;
  for (int mu = 0; mu < 4; ++mu) {
    for (const auto& sites : parity) {
      const int workers = std::max(1, opts.threads);
      std::vector<Rng> streams;
      if (!opts.per_link_seeding) {
        for (int w = 0; w < workers; ++w) streams.emplace_back(rng());
      }
      std::vector<std::size_t> accepted(static_cast<std::size_t>(workers), 0);
      detail::parallel_chunks(sites.size(), workers,
                              [&](std::size_t begin, std::size_t end, std::size_t w) {
                                for (std::size_t i = begin; i < end; ++i) {
                                  const VertexId x = sites[i];
                                  const ColorMatrix a = staple(lf, g, x, mu);
                                  bool ok;
                                  if (opts.per_link_seeding) {
                                    const std::uint64_t link = 4 * to_index(x) + mu;
                                    Rng local(splitmix64(splitmix64(opts.sweep_index) ^ link));
                                    ok = metropolis_update(lf.su(x, mu), a, beta, step_scale, local);
                                  } else {
                                    ok = metropolis_update(lf.su(x, mu), a, beta, step_scale,
                                                           streams[w]);
                                  }
                                  accepted[w] += ok ? 1 : 0;
                                }
                              });
      for (std::size_t c : accepted) accepted_total += c;
    }
  }
  return static_cast<double>(accepted_total) / static_cast<double>(total);
}

double average_plaquette(const LinkField& lf, const LatticeGraph& g) {
  const auto plaquettes = g.plaquettes();
  double s = 0.0;
  for (const PlaquetteRef& p : plaquettes) s += plaquette_product(lf, p).su.trace().real();
  return s / (static_cast<double>(plaquettes.size()) * lf.rank());
}

ObservableSeries run_chain(const ChainConfig& cfg) {
  validate(cfg);
  const LatticeGraph g = LatticeGraph::hypercubic(cfg.dims, true);
  Rng rng(cfg.seed);
  LinkField lf = cfg.hot_start ? LinkField::haar_random(g, cfg.n, rng) : LinkField(g, cfg.n);

  ObservableSeries out;
  out.seed = cfg.seed;
  double accepted = 0.0;
  for (int s = 1; s <= cfg.sweeps; ++s) {
    SweepOptions opts;
    opts.threads = cfg.threads;
    opts.per_link_seeding = cfg.per_link_seeding;
    opts.sweep_index = splitmix64(cfg.seed) ^ static_cast<std::uint64_t>(s);
    accepted += metropolis_sweep(lf, g, cfg.beta, cfg.step_scale, rng, opts);
    if (s > cfg.burn_in && (s - cfg.burn_in) % cfg.measure_every == 0) {
      out.sweep.push_back(s);
      out.values.push_back(average_plaquette(lf, g));
      out.acceptance.push_back(accepted / s);
    }
  }
  out.acceptance_fraction = accepted / cfg.sweeps;
  return out;
}

double single_plaquette_exact(double beta, int n) {
  if (n != 2) throw Error("single_plaquette_exact: only SU(2) is supported");
  if (!(beta >= 0.0)) throw Error("single_plaquette_exact: beta must be >= 0");
  // U = cos(psi) + i sin(psi) n.sigma; Haar measure ~ sin^2(psi) dpsi after the
  // two angles of n integrate out, and 1/2 tr U = cos(psi).
  using boost::math::quadrature::gauss_kronrod;
  constexpr double pi = std::numbers::pi;
  // Shift the exponent by beta to keep the weights bounded for large beta.
  auto weight = [beta](double psi) {
    const double s = std::sin(psi);
    return std::exp(beta * (std::cos(psi) - 1.0)) * s * s;
  };
  const double z = gauss_kronrod<double, 61>::integrate(weight, 0.0, pi, 15, 1e-14);
  const double m = gauss_kronrod<double, 61>::integrate(
      [&](double psi) { return std::cos(psi) * weight(psi); }, 0.0, pi, 15, 1e-14);
  return m / z;
}

ObservableSeries single_plaquette_chain(double beta, int sweeps, int burn_in, double step_scale,
                                        std::uint64_t seed, int n) {
  if (sweeps <= 0 || burn_in < 0 || burn_in >= sweeps) {
    throw ConfigError("sweeps", "need 0 <= burn_in < sweeps");
  }
  Rng rng(seed);
  // Links 2..4 fixed to the identity: U_p = U_1 and its staple is 1.
  SUNMatrix u = ColorMatrix::Identity(n, n);
  const SUNMatrix unit = ColorMatrix::Identity(n, n);
  ObservableSeries out;
  out.seed = seed;
  std::size_t accepted = 0;
  for (int s = 1; s <= sweeps; ++s) {
    accepted += metropolis_update(u, unit, beta, step_scale, rng) ? 1 : 0;
    if (s > burn_in) {
      out.sweep.push_back(s);
      out.values.push_back(u.trace().real() / n);
      out.acceptance.push_back(static_cast<double>(accepted) / s);
    }
  }
  out.acceptance_fraction = static_cast<double>(accepted) / sweeps;
  return out;
}

MeanEstimate binned_mean(std::span<const double> values, int bins) {
  MeanEstimate est;
  if (values.empty()) return est;
  double s = 0.0;
  for (double v : values) s += v;
  est.mean = s / static_cast<double>(values.size());

  const std::size_t nb = std::min<std::size_t>(static_cast<std::size_t>(std::max(bins, 2)),
                                               values.size());
  if (nb < 2) return est;
  const std::size_t per = values.size() / nb;
  std::vector<double> means(nb, 0.0);
  for (std::size_t b = 0; b < nb; ++b) {
    for (std::size_t i = 0; i < per; ++i) means[b] += values[b * per + i];
    means[b] /= static_cast<double>(per);
  }
  double bm = 0.0;
  for (double m : means) bm += m;
  bm /= static_cast<double>(nb);
  double var = 0.0;
  for (double m : means) var += (m - bm) * (m - bm);
  var /= static_cast<double>(nb - 1);
  est.error = std::sqrt(var / static_cast<double>(nb));
  return est;
}

}  // namespace graphgauge
