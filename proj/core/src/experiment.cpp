#include "graphgauge/experiment.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

#include <json.hpp>

#include "graphgauge/baseline.hpp"
#include "graphgauge/error.hpp"
#include "graphgauge/fit.hpp"
#include "graphgauge/graphlat.hpp"
#include "graphgauge/liealg.hpp"
#include "graphgauge/potential.hpp"
#include "graphgauge/report.hpp"
#include "graphgauge/sampler.hpp"
#include "graphgauge/wilson.hpp"

namespace graphgauge {

namespace {

using json = nlohmann::json;

constexpr std::array kKinds{ExperimentKind::CovarianceSweep, ExperimentKind::OnedDemo,
                            ExperimentKind::EmbeddedViolation, ExperimentKind::ContinuumCheck,
                            ExperimentKind::McRun, ExperimentKind::FlatnessCheck};

constexpr std::array<ParameterInfo, 5> kCovariance{{
    {"L", 2, "lattice extent in every direction (periodic)"},
    {"N", 2, "gauge group rank, 2 or 3"},
    {"trials", 100, "number of random SO(5) / Lorentz pairs"},
    {"beta", 1.0, "coupling used for the normalized action"},
    {"tolerance", 1e-12, "bound on every relative change"},
}};

constexpr std::array<ParameterInfo, 7> kOned{{
    {"eps", 0.1, "coarsest spacing"},
    {"delta", 0.05, "lattice shift at the coarsest spacing; delta/eps is kept fixed"},
    {"lo", -8.0, "window start"},
    {"hi", 8.0, "window end"},
    {"levels", 4, "number of spacings eps, eps/2, ..."},
    {"shift", 7, "index relabeling offset for the graph field"},
    {"min_slope", 2.0, "required refinement slope of the bump sigma"},
}};

constexpr std::array<ParameterInfo, 13> kEmbedded{{
    {"eps", 0.2, "coarsest spacing"},
    {"levels", 3, "number of spacings eps, eps/2, ..."},
    {"angle_deg", 30.0, "rotation angle in the 0-1 plane"},
    {"w0", 1.0, "Gaussian width along axis 0"},
    {"w1", 0.5, "Gaussian width along axis 1"},
    {"w2", 0.35, "Gaussian width along axis 2"},
    {"w3", 0.35, "Gaussian width along axis 3"},
    {"h0", 4.5, "box half-width along lattice axis 0"},
    {"h1", 4.5, "box half-width along lattice axis 1"},
    {"h2", 1.6, "box half-width along lattice axis 2"},
    {"h3", 1.6, "box half-width along lattice axis 3"},
    {"mass", 1.0, "scalar mass"},
    {"min_slope", 2.0, "required log-log slope of |sigma|"},
}};

constexpr std::array<ParameterInfo, 11> kContinuum{{
    {"potential", 1, "0: abelian A_1 = x_0 sigma_3 / 2, 1: constant A_0 = sigma_1/2, A_1 = sigma_2/2"},
    {"eps", 0.2, "coarsest spacing"},
    {"levels", 3, "number of spacings eps, eps/2, ..."},
    {"extent", 0.2, "edge of the sampled box"},
    {"plane", 0, "plane index 0..5 to average over, -1 for all"},
    {"target", 0.25, "expected deficit / eps^4"},
    {"rel_tol", 0.05, "relative tolerance on deficit / eps^4 at the finest spacing"},
    {"remainder_slope", 6.0, "expected log-log slope of the remainder"},
    {"remainder_slope_tol", 0.5, "tolerance on the remainder slope"},
    {"deficit_slope", 4.0, "expected log-log slope of the deficit"},
    {"deficit_slope_tol", 0.2, "tolerance on the deficit slope"},
}};

constexpr std::array<ParameterInfo, 12> kMc{{
    {"beta", std::nullopt, "coupling"},
    {"L", 4, "lattice extent in every direction (periodic, even for threads > 1)"},
    {"N", 2, "gauge group rank, 2 or 3"},
    {"sweeps", 200, "total sweeps including burn-in"},
    {"burn_in", 50, "discarded sweeps"},
    {"step_scale", 0.5, "proposal width"},
    {"measure_every", 1, "sweeps between measurements"},
    {"hot_start", 0, "1: Haar random start"},
    {"per_link_seeding", 0, "1: seed every update from (seed, sweep, link)"},
    {"single_plaquette", 0, "1: one-plaquette model compared with the exact value"},
    {"bins", 20, "bins for the error estimate"},
    {"max_sigma", 3.0, "allowed deviation from the reference in error bars"},
}};

constexpr std::array<ParameterInfo, 6> kFlatness{{
    {"L", 8, "lattice extent in every direction (periodic)"},
    {"eps", 0.2, "coarsest spacing"},
    {"levels", 2, "number of spacings eps, eps/2, ..."},
    {"amplitude", 0.3, "amplitude of the local rotation angle"},
    {"global_tolerance", 1e-10, "bound on the relative change under a constant transform"},
    {"local_ratio", 2.0, "bound on residual(local) / residual(flat)"},
}};

double param(const ExperimentSpec& spec, const std::string& name) {
  const auto it = spec.parameters.find(name);
  if (it == spec.parameters.end()) throw ConfigError(name, "parameter '" + name + "' not set");
  return it->second;
}

int int_param(const ExperimentSpec& spec, const std::string& name, int min) {
  const double v = param(spec, name);
  if (!(v == std::floor(v)) || v < min || v > std::numeric_limits<int>::max()) {
    throw ConfigError(name, "parameter '" + name + "' must be an integer >= " +
                                std::to_string(min));
  }
  return static_cast<int>(v);
}

double positive_param(const ExperimentSpec& spec, const std::string& name) {
  const double v = param(spec, name);
  if (!(v > 0.0)) throw ConfigError(name, "parameter '" + name + "' must be > 0");
  return v;
}

bool flag_param(const ExperimentSpec& spec, const std::string& name) {
  const double v = param(spec, name);
  if (v != 0.0 && v != 1.0) throw ConfigError(name, "parameter '" + name + "' must be 0 or 1");
  return v == 1.0;
}

std::vector<double> spacings(const ExperimentSpec& spec, int min_levels) {
  const double eps = positive_param(spec, "eps");
  const int levels = int_param(spec, "levels", min_levels);
  std::vector<double> out;
  for (int i = 0; i < levels; ++i) out.push_back(eps / std::pow(2.0, i));
  return out;
}

Extents cube(int l) { return {l, l, l, l}; }

// Column access for summaries.
class Table {
 public:
  Table(std::span<const std::string> columns, std::span<const std::vector<double>> records,
        const std::vector<std::string>& expected)
      : columns_(columns), records_(records) {
    if (!std::equal(columns.begin(), columns.end(), expected.begin(), expected.end())) {
      throw Error("report columns do not match the experiment kind");
    }
    for (const auto& r : records) {
      if (r.size() != columns.size()) throw Error("report record has the wrong width");
    }
  }

  std::vector<double> column(std::string_view name,
                             const std::function<bool(const std::vector<double>&)>& keep =
                                 nullptr) const {
    const auto idx = static_cast<std::size_t>(
        std::find(columns_.begin(), columns_.end(), name) - columns_.begin());
    std::vector<double> out;
    for (const auto& r : records_) {
      if (!keep || keep(r)) out.push_back(r[idx]);
    }
    return out;
  }

  std::size_t index(std::string_view name) const {
    return static_cast<std::size_t>(std::find(columns_.begin(), columns_.end(), name) -
                                    columns_.begin());
  }

  std::size_t size() const { return records_.size(); }

 private:
  std::span<const std::string> columns_;
  std::span<const std::vector<double>> records_;
};

double max_abs(const std::vector<double>& v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Slope of |y| against x; 0 when some |y| is zero or there are too few points.
double abs_slope(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() < 2) return 0.0;
  std::vector<double> ay;
  for (double v : y) {
    if (!(std::abs(v) > 0.0)) return 0.0;
    ay.push_back(std::abs(v));
  }
  return loglog_slope(x, ay);
}

struct Checker {
  Summary& s;
  void value(const std::string& name, double v) { s.values.emplace_back(name, v); }
  void at_most(const std::string& check, double observed, double threshold) {
    if (!(observed <= threshold)) s.failures.push_back({check, observed, threshold, "<="});
  }
  void below(const std::string& check, double observed, double threshold) {
    if (!(observed < threshold)) s.failures.push_back({check, observed, threshold, "<"});
  }
  void at_least(const std::string& check, double observed, double threshold) {
    if (!(observed >= threshold)) s.failures.push_back({check, observed, threshold, ">="});
  }
  void above(const std::string& check, double observed, double threshold) {
    if (!(observed > threshold)) s.failures.push_back({check, observed, threshold, ">"});
  }
  void within(const std::string& check, double observed, double target, double tol) {
    if (!(std::abs(observed - target) <= tol)) {
      s.failures.push_back({check, observed, tol, "|x - " + json(target).dump() + "| <="});
    }
  }
};

// ---- covariance-sweep ------------------------------------------------------

std::vector<std::vector<double>> run_covariance(const ExperimentSpec& spec) {
  const int l = int_param(spec, "L", 2);
  const int n = int_param(spec, "N", 2);
  const int trials = int_param(spec, "trials", 1);
  const double beta = param(spec, "beta");
  const LatticeGraph g = LatticeGraph::hypercubic(cube(l), true);
  Rng rng(*spec.seed);
  LinkField lf = LinkField::haar_random(g, n, rng);
  lf.set_so5(haar_random_so(5, rng));
  const PotentialField field = PotentialField::flat(g, 0.1);
  const GeneratorSet& gens = standard_generators();
  const ActionOptions opts{spec.threads, spec.deterministic};
  std::bernoulli_distribution coin(0.5);

  std::vector<std::vector<double>> rows;
  for (int t = 0; t < trials; ++t) {
    const Matrix5 o = haar_random_so(5, rng);
    Matrix4 lambda = haar_random_so(4, rng);
    if (coin(rng)) lambda.col(0) *= -1.0;  // sample all of O(4)
    const GraphCovarianceReport rep = graph_covariance_check(lf, g, field, o, lambda, beta, gens,
                                                             opts);
    rows.push_back({static_cast<double>(t + 1), rep.relative_action_change,
                    rep.relative_flatness_change, rep.relative_metric_flatness_change,
                    rep.metric_deviation_from_euclid, rep.action_before});
  }
  return rows;
}

void summarize_covariance(const ExperimentSpec& spec, const Table& t, Checker& c) {
  const double tol = param(spec, "tolerance");
  const double da = max_abs(t.column("rel_action_change"));
  const double df = max_abs(t.column("rel_flatness_change"));
  const double dm = max_abs(t.column("rel_metric_flatness_change"));
  const double de = max_abs(t.column("metric_deviation"));
  c.value("trials", static_cast<double>(t.size()));
  c.value("max_rel_action_change", da);
  c.value("max_rel_flatness_change", df);
  c.value("max_rel_metric_flatness_change", dm);
  c.value("max_metric_deviation", de);
  c.below("max_rel_action_change", da, tol);
  c.below("max_rel_flatness_change", df, tol);
  c.below("max_rel_metric_flatness_change", dm, tol);
  c.below("max_metric_deviation", de, tol);
}

// ---- oned-demo -------------------------------------------------------------

std::vector<std::vector<double>> run_oned(const ExperimentSpec& spec) {
  const std::vector<double> eps = spacings(spec, 2);
  const double delta = param(spec, "delta");
  const Window w{param(spec, "lo"), param(spec, "hi")};
  const auto shift = static_cast<std::int64_t>(int_param(spec, "shift", 0));
  const Density1D L = [](double u) { return u * u; };
  const std::array<Profile1D, 2> profiles{
      [](double x) { return std::exp(-x * x); },
      [](double x) {
        const double u = 1.0 - x * x;
        return u > 0.0 ? u * u : 0.0;
      }};

  std::vector<std::vector<double>> rows;
  for (int p = 0; p < 2; ++p) {
    for (double e : eps) {
      const double d = delta * e / eps.front();
      const ViolationReport v = violation_sigma_1d(profiles[p], L, e, d, w);
      const ViolationReport v0 = violation_sigma_1d(profiles[p], L, e, 0.0, w);
      const GraphField1D field = sample_chain(profiles[p], e, w);
      const double sg = action_1d_graph(field, L);
      const double sgr = action_1d_graph(relabel_chain(field, shift), L);
      rows.push_back({static_cast<double>(p), e, d, v.untransformed, v.transformed, v.sigma,
                      v0.sigma, sg, sgr, sg == v.untransformed ? 1.0 : 0.0,
                      sgr == sg ? 1.0 : 0.0, v.reference});
    }
  }
  return rows;
}

void summarize_oned(const ExperimentSpec& spec, const Table& t, Checker& c) {
  const std::size_t ip = t.index("profile");
  auto gauss = [&](const std::vector<double>& r) { return r[ip] == 0.0; };
  auto bump = [&](const std::vector<double>& r) { return r[ip] == 1.0; };

  double graph_mismatch = 0, relabel_mismatch = 0;
  for (double v : t.column("graph_matches")) graph_mismatch += v == 1.0 ? 0.0 : 1.0;
  for (double v : t.column("relabel_matches")) relabel_mismatch += v == 1.0 ? 0.0 : 1.0;
  const double s0 = max_abs(t.column("sigma_delta0"));

  const auto gs = t.column("sigma", gauss);
  const auto gS = t.column("S_eps", gauss);
  double g_rel = 0.0;
  for (std::size_t i = 0; i < gs.size(); ++i) g_rel = std::max(g_rel, std::abs(gs[i] / gS[i]));
  const auto bs = t.column("sigma", bump);
  const double slope = abs_slope(t.column("eps", bump), bs);
  const double bump_first = bs.empty() ? 0.0 : std::abs(bs.front());

  c.value("graph_mismatches", graph_mismatch);
  c.value("relabel_mismatches", relabel_mismatch);
  c.value("max_abs_sigma_delta0", s0);
  c.value("gaussian_max_abs_sigma", max_abs(gs));
  c.value("gaussian_max_rel_sigma", g_rel);
  c.value("bump_abs_sigma_coarsest", bump_first);
  c.value("bump_sigma_slope", slope);
  c.at_most("graph_mismatches", graph_mismatch, 0.0);
  c.at_most("relabel_mismatches", relabel_mismatch, 0.0);
  c.at_most("max_abs_sigma_delta0", s0, 0.0);
  c.above("bump_abs_sigma_coarsest", bump_first, 0.0);
  c.at_least("bump_sigma_slope", slope, param(spec, "min_slope"));
}

// ---- embedded-violation ----------------------------------------------------

std::vector<std::vector<double>> run_embedded(const ExperimentSpec& spec) {
  const std::vector<double> eps = spacings(spec, 2);
  std::array<double, 4> w{};
  EmbeddedOptions opts;
  for (int d = 0; d < 4; ++d) {
    w[d] = positive_param(spec, "w" + std::to_string(d));
    opts.half_width[d] = positive_param(spec, "h" + std::to_string(d));
  }
  opts.mass = param(spec, "mass");
  opts.threads = spec.threads;
  const double angle = param(spec, "angle_deg") * std::numbers::pi / 180.0;
  const ScalarField4 phi = [w](const Point4& x) {
    double q = 0.0;
    for (int d = 0; d < 4; ++d) q += x[d] * x[d] / (w[d] * w[d]);
    return std::exp(-0.5 * q);
  };
  const Matrix4 r = plane_rotation(0, 1, angle);

  std::vector<std::vector<double>> rows;
  for (double e : eps) {
    const ViolationReport v = violation_4d_embedded(phi, r, e, opts);
    rows.push_back({e, v.sigma, v.untransformed, v.transformed, v.truncation_estimate});
  }
  return rows;
}

void summarize_embedded(const ExperimentSpec& spec, const Table& t, Checker& c) {
  const auto eps = t.column("eps");
  const auto sigma = t.column("sigma");
  const auto edge = t.column("boundary_layer");
  const double first = sigma.empty() ? 0.0 : std::abs(sigma.front());
  const double slope = abs_slope(eps, sigma);
  double edge_ratio = 0.0;
  for (std::size_t i = 0; i < sigma.size(); ++i) {
    edge_ratio = std::max(edge_ratio, edge[i] / std::abs(sigma[i]));
  }
  c.value("abs_sigma_coarsest", first);
  c.value("sigma_slope", slope);
  c.value("max_boundary_over_sigma", edge_ratio);
  c.above("abs_sigma_coarsest", first, 0.0);
  c.at_least("sigma_slope", slope, param(spec, "min_slope"));
}

// ---- continuum-check -------------------------------------------------------

SmoothPotential continuum_potential(int which) {
  using M2 = Eigen::Matrix2cd;
  const Complex i(0.0, 1.0);
  M2 s1, s2, s3;
  s1 << 0, 1, 1, 0;
  s2 << 0, -i, i, 0;
  s3 << 1, 0, 0, -1;
  SmoothPotential a;
  a.n = 2;
  const ColorMatrix zero = ColorMatrix::Zero(2, 2);
  if (which == 0) {
    a.value = [=](int mu, const Point4& x) -> ColorMatrix {
      return mu == 1 ? ColorMatrix(0.5 * x[0] * s3) : zero;
    };
    a.derivative = [=](int mu, int nu, const Point4&) -> ColorMatrix {
      return mu == 1 && nu == 0 ? ColorMatrix(0.5 * s3) : zero;
    };
  } else {
    a.value = [=](int mu, const Point4&) -> ColorMatrix {
      if (mu == 0) return 0.5 * s1;
      if (mu == 1) return 0.5 * s2;
      return zero;
    };
    a.derivative = [=](int, int, const Point4&) -> ColorMatrix { return zero; };
  }
  return a;
}

std::vector<std::vector<double>> run_continuum(const ExperimentSpec& spec) {
  const int which = int_param(spec, "potential", 0);
  if (which > 1) throw ConfigError("potential", "parameter 'potential' must be 0 or 1");
  const std::vector<double> eps = spacings(spec, 3);
  ContinuumOptions opts;
  opts.extent = positive_param(spec, "extent");
  opts.plane = int_param(spec, "plane", -1);
  if (opts.plane > 5) throw ConfigError("plane", "parameter 'plane' must be in -1..5");
  const ConvergenceReport rep = continuum_convergence(continuum_potential(which), eps, opts);

  std::vector<std::vector<double>> rows;
  for (const ConvergencePoint& p : rep.points) {
    rows.push_back({p.epsilon, static_cast<double>(p.plaquettes), p.mean_deficit,
                    p.deficit_over_eps4(), p.mean_predicted, p.mean_abs_remainder,
                    p.max_abs_remainder});
  }
  return rows;
}

void summarize_continuum(const ExperimentSpec& spec, const Table& t, Checker& c) {
  const auto eps = t.column("eps");
  const auto ratio = t.column("deficit_over_eps4");
  const double finest = ratio.empty() ? 0.0 : ratio.back();
  const double target = param(spec, "target");
  const double rel = std::abs(finest - target) / std::abs(target);
  const double rs = abs_slope(eps, t.column("mean_abs_remainder"));
  const double ds = abs_slope(eps, t.column("mean_deficit"));
  c.value("finest_eps", eps.empty() ? 0.0 : eps.back());
  c.value("finest_deficit_over_eps4", finest);
  c.value("finest_relative_error", rel);
  c.value("remainder_slope", rs);
  c.value("deficit_slope", ds);
  c.at_most("finest_relative_error", rel, param(spec, "rel_tol"));
  c.within("remainder_slope", rs, param(spec, "remainder_slope"),
           param(spec, "remainder_slope_tol"));
  c.within("deficit_slope", ds, param(spec, "deficit_slope"), param(spec, "deficit_slope_tol"));
}

// ---- mc-run ----------------------------------------------------------------

std::vector<std::vector<double>> run_mc(const ExperimentSpec& spec) {
  ObservableSeries series;
  const bool single = flag_param(spec, "single_plaquette");
  if (single) {
    series = single_plaquette_chain(param(spec, "beta"), int_param(spec, "sweeps", 1),
                                    int_param(spec, "burn_in", 0), param(spec, "step_scale"),
                                    *spec.seed, int_param(spec, "N", 2));
  } else {
    ChainConfig cfg;
    cfg.beta = param(spec, "beta");
    cfg.dims = cube(int_param(spec, "L", 2));
    cfg.n = int_param(spec, "N", 2);
    cfg.sweeps = int_param(spec, "sweeps", 1);
    cfg.burn_in = int_param(spec, "burn_in", 0);
    cfg.step_scale = param(spec, "step_scale");
    cfg.seed = *spec.seed;
    cfg.measure_every = int_param(spec, "measure_every", 1);
    cfg.hot_start = flag_param(spec, "hot_start");
    cfg.per_link_seeding = flag_param(spec, "per_link_seeding");
    cfg.threads = spec.threads;
    series = run_chain(cfg);
  }
  std::vector<std::vector<double>> rows;
  for (std::size_t i = 0; i < series.values.size(); ++i) {
    rows.push_back({static_cast<double>(series.sweep[i]), series.values[i],
                    series.acceptance[i]});
  }
  return rows;
}

void summarize_mc(const ExperimentSpec& spec, const Table& t, Checker& c) {
  const auto plaq = t.column("plaquette");
  const auto acc = t.column("acceptance");
  const int bins = int_param(spec, "bins", 1);
  const MeanEstimate m = plaq.empty() ? MeanEstimate{} : binned_mean(plaq, bins);
  c.value("measurements", static_cast<double>(plaq.size()));
  c.value("mean_plaquette", m.mean);
  c.value("error", m.error);
  c.value("acceptance_fraction", acc.empty() ? 0.0 : acc.back());

  const double beta = param(spec, "beta");
  std::optional<double> reference;
  if (flag_param(spec, "single_plaquette")) {
    reference = single_plaquette_exact(beta, int_param(spec, "N", 2));
  } else if (beta == 0.0) {
    reference = 0.0;  // Haar average of tr U
  }
  if (reference) {
    const double dev = m.error > 0.0 ? std::abs(m.mean - *reference) / m.error
                       : m.mean == *reference ? 0.0
                                              : std::numeric_limits<double>::max();
    c.value("reference", *reference);
    c.value("deviation_in_errors", dev);
    c.at_most("deviation_in_errors", dev, param(spec, "max_sigma"));
  }
}

// ---- flatness-check --------------------------------------------------------

std::vector<std::vector<double>> run_flatness(const ExperimentSpec& spec) {
  const int l = int_param(spec, "L", 2);
  const std::vector<double> eps = spacings(spec, 1);
  const double amp = param(spec, "amplitude");
  const LatticeGraph g = LatticeGraph::hypercubic(cube(l), true);
  const GeneratorSet& gens = standard_generators();
  Rng rng(*spec.seed);

  std::vector<Matrix5> local(g.transition_count());
  for (std::size_t i = 0; i < local.size(); ++i) {
    const Address a = g.address(g.transition_link(g.transition_at(i)).event);
    const double th = amp * std::sin(2.0 * std::numbers::pi * a[0] / l) +
                      0.5 * amp * std::cos(2.0 * std::numbers::pi * (a[1] + a[2]) / l);
    local[i] = expm5(th * gens.rotation(0, 1));
  }

  std::vector<std::vector<double>> rows;
  for (double e : eps) {
    const PotentialField flat = PotentialField::flat(g, e);
    const FlatnessReport f0 = flatness_residual(flat, g, gens, spec.threads);
    const Matrix5 o = haar_random_so(5, rng);
    const FlatnessReport f1 =
        flatness_residual(gauge_transform_global(flat, o, gens), g, gens, spec.threads);
    const FlatnessReport f2 =
        flatness_residual(gauge_transform_local(flat, g, local, gens), g, gens, spec.threads);
    const double r0 = f0.max_residual;
    for (const auto& [mode, rep] : {std::pair{0, &f0}, {1, &f1}, {2, &f2}}) {
      rows.push_back({static_cast<double>(mode), e, rep->max_residual, rep->max_residual / r0,
                      std::abs(rep->max_residual - r0) / r0});
    }
  }
  return rows;
}

void summarize_flatness(const ExperimentSpec& spec, const Table& t, Checker& c) {
  const std::size_t im = t.index("mode");
  auto mode = [im](double m) {
    return [im, m](const std::vector<double>& r) { return r[im] == m; };
  };
  const auto flat = t.column("max_residual", mode(0));
  const auto eps = t.column("eps", mode(0));
  const double g = max_abs(t.column("rel_change", mode(1)));
  const double lr = max_abs(t.column("ratio_to_flat", mode(2)));
  c.value("flat_residual_coarsest", flat.empty() ? 0.0 : flat.front());
  c.value("flat_residual_slope", abs_slope(eps, flat));
  c.value("max_global_rel_change", g);
  c.value("max_local_ratio", lr);
  c.at_most("max_global_rel_change", g, param(spec, "global_tolerance"));
  c.at_most("max_local_ratio", lr, param(spec, "local_ratio"));
}

}  // namespace

std::string_view kind_name(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CovarianceSweep: return "covariance-sweep";
    case ExperimentKind::OnedDemo: return "oned-demo";
    case ExperimentKind::EmbeddedViolation: return "embedded-violation";
    case ExperimentKind::ContinuumCheck: return "continuum-check";
    case ExperimentKind::McRun: return "mc-run";
    case ExperimentKind::FlatnessCheck: return "flatness-check";
  }
  throw Error("unknown experiment kind");
}

ExperimentKind parse_kind(std::string_view name) {
  for (ExperimentKind k : kKinds) {
    if (kind_name(k) == name) return k;
  }
  throw ConfigError("kind", "unknown experiment kind '" + std::string(name) + "'");
}

std::span<const ExperimentKind> all_kinds() { return kKinds; }

std::string_view format_name(OutputFormat f) { return f == OutputFormat::Csv ? "csv" : "json"; }

OutputFormat parse_format(std::string_view name) {
  if (name == "csv") return OutputFormat::Csv;
  if (name == "json") return OutputFormat::Json;
  throw ConfigError("format", "unknown output format '" + std::string(name) + "' (csv|json)");
}

std::span<const ParameterInfo> parameter_table(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CovarianceSweep: return kCovariance;
    case ExperimentKind::OnedDemo: return kOned;
    case ExperimentKind::EmbeddedViolation: return kEmbedded;
    case ExperimentKind::ContinuumCheck: return kContinuum;
    case ExperimentKind::McRun: return kMc;
    case ExperimentKind::FlatnessCheck: return kFlatness;
  }
  return {};
}

bool kind_needs_seed(ExperimentKind kind) {
  return kind == ExperimentKind::CovarianceSweep || kind == ExperimentKind::McRun ||
         kind == ExperimentKind::FlatnessCheck;
}

std::vector<std::string> record_columns(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::CovarianceSweep:
      return {"trial", "rel_action_change", "rel_flatness_change", "rel_metric_flatness_change",
              "metric_deviation", "action_before"};
    case ExperimentKind::OnedDemo:
      return {"profile", "eps", "delta", "S_eps", "S_eps_delta", "sigma", "sigma_delta0",
              "S_graph", "S_graph_relabeled", "graph_matches", "relabel_matches", "quadrature"};
    case ExperimentKind::EmbeddedViolation:
      return {"eps", "sigma", "S_identity", "S_rotated", "boundary_layer"};
    case ExperimentKind::ContinuumCheck:
      return {"eps", "plaquettes", "mean_deficit", "deficit_over_eps4", "mean_predicted",
              "mean_abs_remainder", "max_abs_remainder"};
    case ExperimentKind::McRun:
      return {"sweep", "plaquette", "acceptance"};
    case ExperimentKind::FlatnessCheck:
      return {"mode", "eps", "max_residual", "ratio_to_flat", "rel_change"};
  }
  return {};
}

ExperimentSpec resolve(const ExperimentSpec& spec) {
  ExperimentSpec out = spec;
  const auto table = parameter_table(spec.kind);
  const std::string kind(kind_name(spec.kind));
  for (const auto& [name, value] : spec.parameters) {
    const bool known = std::any_of(table.begin(), table.end(),
                                   [&](const ParameterInfo& p) { return p.name == name; });
    if (!known) throw ConfigError(name, "unknown parameter '" + name + "' for " + kind);
    if (!std::isfinite(value)) throw ConfigError(name, "parameter '" + name + "' is not finite");
  }
  for (const ParameterInfo& p : table) {
    const std::string name(p.name);
    if (out.parameters.count(name)) continue;
    if (!p.default_value) {
      throw ConfigError(name, "missing required parameter '" + name + "' for " + kind);
    }
    out.parameters[name] = *p.default_value;
  }
  if (kind_needs_seed(spec.kind) && !spec.seed) {
    throw ConfigError("seed", kind + " is randomized and needs an explicit seed");
  }
  if (spec.threads < 1) throw ConfigError("threads", "threads must be >= 1");
  return out;
}

ExperimentSpec spec_from_json(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config", std::string("config is not valid JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("config", "config must be a JSON object");
  ExperimentSpec spec;
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "kind") {
        spec.kind = parse_kind(value.get<std::string>());
      } else if (key == "seed") {
        if (!value.is_number_unsigned()) {
          throw ConfigError("seed", "seed must be a non-negative integer");
        }
        spec.seed = value.get<std::uint64_t>();
      } else if (key == "parameters") {
        if (!value.is_object()) throw ConfigError("parameters", "parameters must be an object");
        for (const auto& [name, v] : value.items()) {
          if (v.is_boolean()) {
            spec.parameters[name] = v.get<bool>() ? 1.0 : 0.0;
          } else if (v.is_number()) {
            spec.parameters[name] = v.get<double>();
          } else {
            throw ConfigError(name, "parameter '" + name + "' must be a number");
          }
        }
      } else if (key == "threads") {
        spec.threads = value.get<int>();
      } else if (key == "deterministic") {
        spec.deterministic = value.get<bool>();
      } else if (key == "format") {
        spec.format = parse_format(value.get<std::string>());
      } else if (key == "out") {
        spec.output_path = value.get<std::string>();
      } else {
        throw ConfigError(key, "unknown config key '" + key + "'");
      }
    }
  } catch (const json::type_error& e) {
    throw ConfigError("config", std::string("config value has the wrong type: ") + e.what());
  }
  if (!j.contains("kind")) throw ConfigError("kind", "config has no 'kind'");
  return spec;
}

std::string spec_to_json(const ExperimentSpec& spec) {
  json j;
  j["kind"] = kind_name(spec.kind);
  if (spec.seed) j["seed"] = *spec.seed;
  j["parameters"] = spec.parameters;
  j["threads"] = spec.threads;
  j["deterministic"] = spec.deterministic;
  j["format"] = format_name(spec.format);
  j["out"] = spec.output_path;
  return j.dump();
}

Summary summarize(const ExperimentSpec& spec, std::span<const std::string> columns,
                  std::span<const std::vector<double>> records) {
  const Table t(columns, records, record_columns(spec.kind));
  Summary s;
  Checker c{s};
  switch (spec.kind) {
    case ExperimentKind::CovarianceSweep: summarize_covariance(spec, t, c); break;
    case ExperimentKind::OnedDemo: summarize_oned(spec, t, c); break;
    case ExperimentKind::EmbeddedViolation: summarize_embedded(spec, t, c); break;
    case ExperimentKind::ContinuumCheck: summarize_continuum(spec, t, c); break;
    case ExperimentKind::McRun: summarize_mc(spec, t, c); break;
    case ExperimentKind::FlatnessCheck: summarize_flatness(spec, t, c); break;
  }
  return s;
}

ExperimentReport run_experiment(const ExperimentSpec& input) {
  const auto start = std::chrono::steady_clock::now();
  ExperimentReport rep;
  rep.spec = resolve(input);
  rep.columns = record_columns(rep.spec.kind);
  switch (rep.spec.kind) {
    case ExperimentKind::CovarianceSweep: rep.records = run_covariance(rep.spec); break;
    case ExperimentKind::OnedDemo: rep.records = run_oned(rep.spec); break;
    case ExperimentKind::EmbeddedViolation: rep.records = run_embedded(rep.spec); break;
    case ExperimentKind::ContinuumCheck: rep.records = run_continuum(rep.spec); break;
    case ExperimentKind::McRun: rep.records = run_mc(rep.spec); break;
    case ExperimentKind::FlatnessCheck: rep.records = run_flatness(rep.spec); break;
  }
  rep.summary = summarize(rep.spec, rep.columns, rep.records);
  rep.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return rep;
}

}  // namespace graphgauge
