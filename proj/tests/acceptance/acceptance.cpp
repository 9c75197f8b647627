// Acceptance checks A1..A9. With an id argument only that check runs;
// without, all of them. One "A<n> PASS|FAIL ..." line per check; the exit
// status is non-zero if any check failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <sstream>
#include <string>
#include <type_traits>
#include <vector>

#include "gen.hpp"
#include "graphgauge/baseline.hpp"
#include "graphgauge/experiment.hpp"
#include "graphgauge/fit.hpp"
#include "graphgauge/report.hpp"
#include "graphgauge/sampler.hpp"

using namespace graphgauge;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << " [failed: " << what << "]";
    }
  }
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

double summary_value(const ExperimentReport& r, const std::string& name) {
  for (const auto& [k, v] : r.summary.values) {
    if (k == name) return v;
  }
  throw std::runtime_error("summary has no '" + name + "'");
}

void a1(Outcome& o) {
  Rng rng(20261001);
  const GeneratorSet& gens = standard_generators();
  const LatticeGraph g = LatticeGraph::hypercubic({2, 2, 2, 2}, true);
  LinkField lf = LinkField::haar_random(g, 2, rng);
  lf.set_so5(gen::so5(rng));
  // The constant SO(5) transform is checked on a generic field; the metric
  // map on the Euclidean one, the only G it is a symmetry of (for general G
  // it mixes lattice directions).
  const PotentialField generic = gen::potential_field(g, 0.1, rng);
  const PotentialField flat = PotentialField::flat(g, 0.1);
  double act = 0.0, flat_change = 0.0, metric_change = 0.0, metric = 0.0;
  for (int t = 0; t < 100; ++t) {
    const Matrix5 rot = expm5(gen::antisymmetric5(rng, 2.0));
    const Matrix4 lambda = gen::o4(rng);
    const GraphCovarianceReport r = graph_covariance_check(lf, g, generic, rot, lambda, 1.0, gens);
    const GraphCovarianceReport e = graph_covariance_check(lf, g, flat, rot, lambda, 1.0, gens);
    act = std::max({act, r.relative_action_change, e.relative_action_change});
    flat_change = std::max({flat_change, r.relative_flatness_change, e.relative_flatness_change});
    metric_change = std::max(metric_change, e.relative_metric_flatness_change);
    metric = std::max(metric, e.metric_deviation_from_euclid);
  }
  o.detail << "max rel |dS| " << num(act) << ", max rel flatness change under O "
           << num(flat_change) << ", under Lambda " << num(metric_change) << ", max |L^T L - 1| "
           << num(metric);
  o.require(act < 1e-12, "action change < 1e-12");
  o.require(flat_change < 1e-12, "flatness change under O < 1e-12");
  o.require(metric_change < 1e-12, "flatness change under Lambda < 1e-12");
  o.require(metric < 1e-12, "metric image < 1e-12");
}

void a2(Outcome& o) {
  ExperimentSpec s;
  s.kind = ExperimentKind::EmbeddedViolation;
  const ExperimentReport r = run_experiment(s);
  const double first = summary_value(r, "abs_sigma_coarsest");
  const double slope = summary_value(r, "sigma_slope");
  o.detail << "sigma(eps)";
  for (const auto& row : r.records) o.detail << " " << num(row[0]) << ":" << num(row[1]);
  o.detail << ", |sigma(0.2)| " << num(first) << ", slope " << num(slope);
  o.require(first > 0.0, "|sigma| > 0 at eps = 0.2");
  o.require(slope >= 2.0, "slope >= 2");
}

void a3(Outcome& o) {
  ExperimentSpec s;
  s.kind = ExperimentKind::OnedDemo;
  const ExperimentReport r = run_experiment(s);
  const double gm = summary_value(r, "graph_mismatches");
  const double rm = summary_value(r, "relabel_mismatches");
  const double z = summary_value(r, "max_abs_sigma_delta0");
  const double grel = summary_value(r, "gaussian_max_rel_sigma");
  const double slope = summary_value(r, "bump_sigma_slope");
  // |sigma| of the bump, in refinement order.
  std::vector<double> bump;
  for (const auto& row : r.records) {
    if (row[0] == 1.0) bump.push_back(std::abs(row[5]));
  }
  bool decreasing = bump.size() >= 2;
  for (std::size_t i = 1; i < bump.size(); ++i) decreasing = decreasing && bump[i] < bump[i - 1];
  o.detail << "S_g vs S_eps mismatches " << gm << ", relabel mismatches " << rm
           << ", max |sigma(delta=0)| " << num(z) << ", Gaussian max |sigma|/S " << num(grel)
           << ", bump |sigma| " << num(bump.front()) << " -> " << num(bump.back()) << " (slope "
           << num(slope) << ")";
  o.require(gm == 0.0, "S_g == S_eps bit for bit");
  o.require(rm == 0.0, "relabeling leaves S_g bit-identical");
  o.require(z == 0.0, "sigma(delta = 0) == 0");
  o.require(decreasing && slope > 0.0, "sigma -> 0 under refinement");
  o.require(r.passed(), "oned-demo report has no failures");
}

void a4(Outcome& o) {
  Rng rng(20261004);
  const GeneratorSet& gens = standard_generators();
  double round = 0.0;
  for (int t = 0; t < 1000; ++t) {
    const PotentialEntry e = gen::entry(rng);
    const PotentialComponents c = project_components(assemble_components(e.G, e.H, gens), gens);
    round = std::max(round, (c.G - e.G).cwiseAbs().maxCoeff());
    for (int a = 0; a < 4; ++a) {
      for (int p = 0; p < 6; ++p) {
        round = std::max(round, std::abs(c.H.independent(a, p) - e.H.independent(a, p)));
      }
    }
  }
  std::vector<Matrix5> all(gens.V.begin(), gens.V.end());
  all.insert(all.end(), gens.M.begin(), gens.M.end());
  double ortho = 0.0;
  for (std::size_t i = 0; i < all.size(); ++i) {
    for (std::size_t j = 0; j < all.size(); ++j) {
      ortho = std::max(ortho, std::abs(trace_inner(all[i], all[j]) - (i == j ? 1.0 : 0.0)));
    }
  }
  o.detail << "max round-trip error " << num(round) << ", max |tr(X Y^T) - delta| " << num(ortho);
  o.require(round <= 1e-12, "round trip within 1e-12");
  o.require(ortho <= 1e-14, "orthonormality within 1e-14");
}

void a5(Outcome& o) {
  const std::vector<double> eps{0.1, 0.05, 0.025};
  std::vector<double> dev;
  bool bounded = true;
  for (double e : eps) {
    Rng rng(20261005);
    double worst = 0.0;
    for (int t = 0; t < 200; ++t) {
      const PotentialEntry en = gen::entry(rng);
      const VertexLabel y = gen::label(rng);
      const int d = t % 4;
      const Vector5 full = expm5(e * coordinate_generator(en, d)) * y.y;
      const VertexLabel w = step_coordinates(y, d, en, e);
      worst = std::max(worst, (full.head<4>() - w.y.head<4>()).cwiseAbs().maxCoeff());
    }
    bounded = bounded && worst <= 10 * e * e;
    dev.push_back(worst);
  }
  const double slope = loglog_slope(eps, dev);
  o.detail << "deviation";
  for (std::size_t i = 0; i < eps.size(); ++i) {
    o.detail << " " << num(eps[i]) << ":" << num(dev[i]) << " (/eps^2 " << num(dev[i] / (eps[i] * eps[i])) << ")";
  }
  o.detail << ", slope " << num(slope);
  o.require(bounded, "deviation <= 10 eps^2");
  o.require(std::abs(slope - 2.0) <= 0.2, "slope 2 +- 0.2");
}

void a6(Outcome& o) {
  Rng rng(20261006);
  double worst = 0.0, pure = 0.0;
  for (int t = 0; t < 100; ++t) {
    const int n = 2 + t % 2;
    const LatticeGraph g = LatticeGraph::hypercubic(gen::extents(rng, 2, 3), true);
    const LinkField lf = LinkField::haar_random(g, n, rng);
    const double a = wilson_action(lf, g, 1.0).normalized;
    const double b = wilson_action(local_gauge_links(lf, g, gen::gauge_field(g, n, rng)), g, 1.0).normalized;
    worst = std::max(worst, std::abs(a - b) / std::abs(a));
    const LinkField pg = local_gauge_links(LinkField(g, n), g, gen::gauge_field(g, n, rng));
    pure = std::max(pure, std::abs(wilson_action(pg, g, 1.0).normalized));
  }
  o.detail << "max rel change " << num(worst) << ", max pure-gauge normalized action " << num(pure);
  o.require(worst < 1e-10, "relative change < 1e-10");
  o.require(pure < 1e-10, "pure gauge action < 1e-10");
}

void a7(Outcome& o) {
  ExperimentSpec s;
  s.kind = ExperimentKind::ContinuumCheck;
  const ExperimentReport r = run_experiment(s);
  const auto& last = r.records.back();
  const double ratio = last[3];
  const double slope = summary_value(r, "remainder_slope");
  o.detail << "deficit/eps^4 at eps " << num(last[0]) << " = " << num(ratio) << ", remainder slope "
           << num(slope);
  o.require(last[0] == 0.05, "finest spacing is 0.05");
  o.require(std::abs(ratio - 0.25) <= 0.05 * 0.25, "deficit/eps^4 within 5% of 1/4");
  o.require(std::abs(slope - 6.0) <= 0.5, "remainder slope 6 +- 0.5");
}

// Global Metropolis written against the full action: the reference for the
// sweep's local update.
double naive_sweep(LinkField& lf, const LatticeGraph& g, double beta, double step, Rng& rng) {
  std::size_t accepted = 0;
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (std::size_t e = 0; e < g.event_count(); ++e) {
    for (int mu = 0; mu < 4; ++mu) {
      SUNMatrix& u = lf.su(g.event(e), mu);
      const SUNMatrix old = u;
      const SUNMatrix prop = random_near_identity(lf.rank(), step, rng) * old;
      const double before = wilson_action(lf, g, beta).normalized;
      u = prop;
      const double ds = wilson_action(lf, g, beta).normalized - before;
      if (ds <= 0.0 || uni(rng) < std::exp(-ds)) {
        u = reunitarize(prop);
        ++accepted;
      } else {
        u = old;
      }
    }
  }
  return static_cast<double>(accepted) / static_cast<double>(4 * g.event_count());
}

void a8(Outcome& o) {
  for (double beta : {0.5, 1.0, 2.0, 4.0}) {
    const ObservableSeries s = single_plaquette_chain(beta, 40000, 1000, 0.8, 20261008);
    const MeanEstimate m = binned_mean(s.values, 20);
    const double exact = single_plaquette_exact(beta);
    const double z = std::abs(m.mean - exact) / m.error;
    o.detail << "beta " << beta << ": " << num(m.mean) << " +- " << num(m.error) << " vs "
             << num(exact) << " (" << num(z) << " sigma); ";
    o.require(z <= 3.0, "single plaquette within 3 sigma at beta " + num(beta));
  }

  ChainConfig c;
  c.beta = 0.0;
  c.dims = {4, 4, 4, 4};
  c.sweeps = 220;
  c.burn_in = 20;
  c.step_scale = 1.0;
  c.hot_start = true;
  c.seed = 20261018;
  const ObservableSeries zero = run_chain(c);
  const MeanEstimate mz = binned_mean(zero.values, 20);
  o.detail << "beta 0 on 4^4: " << num(mz.mean) << " +- " << num(mz.error) << "; ";
  o.require(std::abs(mz.mean) <= 3.0 * mz.error, "beta = 0 plaquette consistent with 0");

  ChainConfig d = c;
  d.beta = 2.3;
  d.sweeps = 30;
  d.burn_in = 5;
  d.step_scale = 0.5;
  const ObservableSeries r1 = run_chain(d), r2 = run_chain(d);
  d.per_link_seeding = true;
  const ObservableSeries p1 = run_chain(d);
  d.threads = 2;
  const ObservableSeries p2 = run_chain(d);
  const bool same = r1.values == r2.values && r1.acceptance == r2.acceptance;
  const bool same_threads = p1.values == p2.values;
  o.detail << "fixed-seed rerun identical " << same << ", 1 vs 2 threads identical " << same_threads
           << "; ";
  o.require(same, "fixed-seed determinism");
  o.require(same_threads, "per-link seeding thread independence");

  const auto start = std::chrono::steady_clock::now();
  const LatticeGraph g = LatticeGraph::hypercubic({4, 4, 4, 4}, true);
  Rng init(20261028);
  LinkField a = LinkField::haar_random(g, 2, init);
  LinkField b = a;
  Rng ra(7), rb(7);
  bool acc_same = true;
  for (int sweep = 0; sweep < 3; ++sweep) {
    acc_same = acc_same && metropolis_sweep(a, g, 2.0, 0.5, ra) == naive_sweep(b, g, 2.0, 0.5, rb);
  }
  double diff = 0.0;
  for (std::size_t i = 0; i < a.link_count(); ++i) {
    diff = std::max(diff, (a[i] - b[i]).cwiseAbs().maxCoeff());
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  o.detail << "4^4 cross-implementation: max link difference " << num(diff) << " after 3 sweeps ("
           << num(secs) << " s)";
  o.require(acc_same && diff <= 1e-12, "local sweep matches global Metropolis");
  o.require(secs <= 900.0, "cross-implementation within 15 minutes");
}

void a9(Outcome& o) {
  // The action's only inputs are links, graph and coupling.
  static_assert(std::is_invocable_r_v<ActionValue, decltype(&wilson_action), const LinkField&,
                                      const LatticeGraph&, double, const ActionOptions&>);
  Rng rng(20261009);
  const LatticeGraph g = LatticeGraph::hypercubic({4, 4, 2, 2}, true);
  LinkField lf = LinkField::haar_random(g, 3, rng);
  lf.set_so5(gen::so5(rng));
  const ActionOptions det{1, true};
  const ActionValue ref = wilson_action(lf, g, 5.0, det);

  // Coordinate labels of every event, then random relabelings of them.
  std::vector<VertexLabel> labels;
  for (std::size_t e = 0; e < g.event_count(); ++e) {
    const Address x = g.address(g.event(e));
    labels.push_back(VertexLabel::poincare(0.1 * x[0], 0.1 * x[1], 0.1 * x[2], 0.1 * x[3]));
  }
  bool relabel_same = true;
  for (int t = 0; t < 20; ++t) {
    RelabelMap m;
    m.chi = gen::metric(rng) + 3.0 * Matrix4::Identity();
    m.omega = Vector4(gen::uniform(rng), gen::uniform(rng), gen::uniform(rng), gen::uniform(rng));
    const std::vector<VertexLabel> moved = relabel_coordinates(labels, m);
    relabel_same = relabel_same && moved[1].y != labels[1].y;
    const ActionValue v = wilson_action(lf, g, 5.0, det);
    relabel_same = relabel_same && v.normalized == ref.normalized && v.raw_trace_sum == ref.raw_trace_sum;
  }

  bool shift_same = true;
  for (int t = 0; t < 20; ++t) {
    const Address off{gen::integer(rng, -4, 4), gen::integer(rng, -4, 4), gen::integer(rng, -2, 2),
                      gen::integer(rng, -2, 2)};
    const std::vector<VertexId> s = automorphism_shift(g, off);
    LinkField moved(g, 3);
    moved.set_so5(lf.so5());
    for (std::size_t e = 0; e < g.event_count(); ++e) {
      for (int d = 0; d < 4; ++d) moved.su(s[e], d) = lf.su(g.event(e), d);
    }
    const ActionValue v = wilson_action(moved, g, 5.0, ActionOptions{1 + t % 3, true});
    shift_same = shift_same && v.normalized == ref.normalized && v.raw_trace_sum == ref.raw_trace_sum;
  }
  o.detail << "bit-identical under 20 relabelings " << relabel_same << ", under 20 shifts "
           << shift_same;
  o.require(relabel_same, "relabel invariance");
  o.require(shift_same, "automorphism invariance");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> checks{
      {"A1", a1}, {"A2", a2}, {"A3", a3}, {"A4", a4}, {"A5", a5},
      {"A6", a6}, {"A7", a7}, {"A8", a8}, {"A9", a9}};
  const std::string only = argc > 1 ? argv[1] : "";
  bool ran = false, all_pass = true;
  for (const auto& [id, fn] : checks) {
    if (!only.empty() && only != id) continue;
    ran = true;
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << " [exception: " << e.what() << "]";
    }
    std::cout << id << (o.pass ? " PASS " : " FAIL ") << o.detail.str() << std::endl;
    all_pass = all_pass && o.pass;
  }
  if (!ran) {
    std::cerr << "unknown check '" << only << "'\n";
    return 2;
  }
  return all_pass ? 0 : 1;
}
