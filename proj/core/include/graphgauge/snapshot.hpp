#pragma once

// Plain-text snapshots of potential and link fields.
//
// Potential table: comment lines start with '#'; "# epsilon <value>" is
// required. One row per Transition vertex:
//   vertex  G00 G01 .. G33 (row-major, 16)  H[a][p] (24)
// where H[a][p] = H_{a b c} for (b, c) = kPlanePairs[p], a-major.
//
// Link snapshot:
//   line 1: N L0 L1 L2 L3 periodic(0|1)
//   line 2: the shared SO(5) block, 25 reals row-major
//   then one row per link: event-vertex direction(1..4) then 2 N^2 reals,
//   the SU(N) block row-major with real/imaginary parts interleaved.
// Values are written with 17 significant digits and read back exactly.

#include <iosfwd>

#include "graphgauge/graphlat.hpp"
#include "graphgauge/potential.hpp"
#include "graphgauge/wilson.hpp"

namespace graphgauge {

void write_potential_table(std::ostream& out, const PotentialField& field, const LatticeGraph& g);

// Throws Error on malformed input or a row count that does not match g.
PotentialField read_potential_table(std::istream& in, const LatticeGraph& g);

void write_link_snapshot(std::ostream& out, const LinkField& lf, const LatticeGraph& g);

struct LinkSnapshot {
  LatticeGraph graph;
  LinkField links;
};

// Rebuilds the graph from the header. Throws Error on malformed input.
LinkSnapshot read_link_snapshot(std::istream& in);

}  // namespace graphgauge
