#pragma once

// Metropolis Monte Carlo over the SU(N) blocks of a LinkField.
//
// The SO(5) block is the same on every link, so its plaquette traces add a
// configuration-independent constant to the raw action; updates only look at
// the normalized SU(N) action beta * sum_p (1 - Re tr U_p / N).

#include <cstdint>
#include <span>
#include <vector>

#include "graphgauge/graphlat.hpp"
#include "graphgauge/liealg.hpp"
#include "graphgauge/wilson.hpp"

namespace graphgauge {

struct ChainConfig {
  double beta = 0.0;
  Extents dims{4, 4, 4, 4};
  int n = 2;
  int sweeps = 0;
  int burn_in = 0;
  double step_scale = 0.5;
  std::uint64_t seed = 0;
  int measure_every = 1;
  bool hot_start = false;
  int threads = 1;
  // Seed every link update from (seed, sweep, link): the stream is then the
  // same for any thread count.
  bool per_link_seeding = false;
};

// Throws ConfigError naming the first invalid field.
void validate(const ChainConfig& cfg);

struct ObservableSeries {
  std::vector<int> sweep;           // sweep index of each measurement (1-based)
  std::vector<double> values;       // average plaquette
  std::vector<double> acceptance;   // running acceptance fraction at that sweep
  double acceptance_fraction = 0.0; // over the whole run
  std::uint64_t seed = 0;
};

struct SweepOptions {
  int threads = 1;
  bool per_link_seeding = false;
  std::uint64_t sweep_index = 0;  // mixes into per-link seeds
};

// Random X = exp(i s H) with H = sum_a r_a T_a, r_a uniform in [-1, 1] and
// T_a the normalized su(N) generators. X and X^dag are equally likely.
SUNMatrix random_near_identity(int n, double step_scale, Rng& rng);

// Sum over the six plaquettes through link (x, mu) of the product of the
// three other links, ordered so that sum_p Re tr U_p = Re tr(U(x,mu) A).
SUNMatrix staple(const LinkField& lf, const LatticeGraph& g, VertexId x, int mu);

// Change of the normalized action if U(x, mu) is replaced by `proposed`.
double local_delta_action(const LinkField& lf, const LatticeGraph& g, VertexId x, int mu,
                          const SUNMatrix& proposed, double beta);

// One Metropolis hit on u with fixed staple; returns true when accepted.
bool metropolis_update(SUNMatrix& u, const SUNMatrix& staple_sum, double beta,
                       double step_scale, Rng& rng);

// One sweep over every link; returns the acceptance fraction. The graph must
// be periodic. Multi-threaded or per-link-seeded sweeps visit links in
// checkerboard order (direction, then site parity), which needs even extents.
double metropolis_sweep(LinkField& lf, const LatticeGraph& g, double beta, double step_scale,
                        Rng& rng, const SweepOptions& opts = {});

// Mean over plaquettes of Re tr(su part of U_p) / N.
double average_plaquette(const LinkField& lf, const LatticeGraph& g);

// Cold (or hot) start, burn-in discarded, average plaquette every
// measure_every sweeps. Bit-reproducible for a given seed and build.
ObservableSeries run_chain(const ChainConfig& cfg);

// <1/2 Re tr U> for the one-plaquette SU(2) model with weight exp(beta/2 tr U),
// by quadrature over the 3-sphere. Throws Error unless n == 2 and beta >= 0.
double single_plaquette_exact(double beta, int n = 2);

// Metropolis chain for a single plaquette with three of its links gauge
// fixed to the identity, so U_p is the one free link.
ObservableSeries single_plaquette_chain(double beta, int sweeps, int burn_in, double step_scale,
                                        std::uint64_t seed, int n = 2);

struct MeanEstimate {
  double mean = 0.0;
  double error = 0.0;  // standard error from equal-size bins
};

// Binned estimate of the mean; bins default to 20 (fewer for short series).
MeanEstimate binned_mean(std::span<const double> values, int bins = 20);

}  // namespace graphgauge
