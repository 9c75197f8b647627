#pragma once

// Metric potential G_ab and torsion potential H_abc on Transition vertices,
// the coordinate step they induce, their gauge / Lorentz transformations and
// a holonomy-based flatness diagnostic.

#include <cstddef>
#include <span>
#include <vector>

#include "graphgauge/graphlat.hpp"
#include "graphgauge/liealg.hpp"

namespace graphgauge {

// Five coordinates y_0..y_4 attached to a vertex. In Poincare mode y_4 == 1.
struct VertexLabel {
  Vector5 y = Vector5::Zero();

  static VertexLabel poincare(double y0, double y1, double y2, double y3) {
    VertexLabel l;
    l.y << y0, y1, y2, y3, 1.0;
    return l;
  }
};

enum class CoordinateMode { Poincare, DeSitter };

struct StepOptions {
  CoordinateMode mode = CoordinateMode::Poincare;
  // Scale of the y_4 axis; only read in de Sitter mode.
  double de_sitter_radius = 1.0;
};

struct PotentialEntry {
  Matrix4 G = Matrix4::Zero();
  Torsion H;

  static PotentialEntry euclidean() { return {Matrix4::Identity(), Torsion{}}; }
};

class PotentialField {
 public:
  // One zero entry per transition; throws Error if epsilon <= 0.
  PotentialField(std::size_t transitions, double epsilon);

  // G = identity, H = 0 on every Transition vertex of g.
  static PotentialField flat(const LatticeGraph& g, double epsilon);

  double epsilon() const { return epsilon_; }
  std::size_t size() const { return entries_.size(); }

  // Indexed by transition ordinal.
  const PotentialEntry& operator[](std::size_t ordinal) const { return entries_[ordinal]; }
  PotentialEntry& operator[](std::size_t ordinal) { return entries_[ordinal]; }

  // Role-checked lookup by vertex id.
  const PotentialEntry& at(const LatticeGraph& g, VertexId v) const;
  PotentialEntry& at(const LatticeGraph& g, VertexId v);

  std::span<const PotentialEntry> entries() const { return entries_; }

 private:
  double epsilon_;
  std::vector<PotentialEntry> entries_;
};

// A_a at a Transition vertex. Throws GraphError on a role mismatch.
MatrixPotential assemble_potential(const PotentialField& field, const LatticeGraph& g,
                                   VertexId v, const GeneratorSet& gens);

// Throws SpanError when A is outside the generator span.
PotentialEntry decompose_potential(const MatrixPotential& a, const GeneratorSet& gens);

// Generator of the coordinate transport along direction d, acting on the
// five-vector y:  K(b,4) = G_db / R,  K(4,b) = -G_db / R,  K(b,c) = H_dbc / 2.
// Its linear action is step_coordinates; expm5(eps K) is the finite transport.
Matrix5 coordinate_generator(const PotentialEntry& entry, int d, double radius = 1.0);

// w_b = y_b + eps G_db + eps/2 sum_c H_dbc y_c for b = 0..3.
// y_4 is only advanced in de Sitter mode. Throws Error in Poincare mode when
// y_4 != 1.
VertexLabel step_coordinates(const VertexLabel& y, int d, const PotentialEntry& entry,
                             double epsilon, const StepOptions& opts = {});

enum class GaugeMode { Global, Local };

// A'_a = O A_a O^T in every entry.
PotentialField gauge_transform_global(const PotentialField& field, const Matrix5& o,
                                      const GeneratorSet& gens);

// A'_a = O A_a O^T - (d_a O) O^T with d_a O the central difference between
// the neighbouring same-direction Transition vertices along a (one-sided at
// an open boundary). The finite-difference term is projected onto so(5).
// `o` holds one orthogonal matrix per transition ordinal.
PotentialField gauge_transform_local(const PotentialField& field, const LatticeGraph& g,
                                     std::span<const Matrix5> o, const GeneratorSet& gens);

// Dispatching form; in Global mode every entry of `o` must be the same
// matrix (or `o` has a single entry).
PotentialField gauge_transform(const PotentialField& field, const LatticeGraph& g,
                               std::span<const Matrix5> o, GaugeMode mode,
                               const GeneratorSet& gens);

inline constexpr double kOrthogonalityTolerance = 1e-10;

// G'_ab = sum_cd L_ca L_db G_cd. Throws Error for singular L.
Matrix4 lorentz_transform_metric(const Matrix4& G, const Matrix4& lambda);

struct FlatnessReport {
  double max_residual = 0.0;
  std::vector<double> residuals;  // per plaquette, in g.plaquettes() order
};

// Composes exp(eps A_d) around every plaquette and reports the Frobenius
// norm of (loop - I).
FlatnessReport flatness_residual(const PotentialField& field, const LatticeGraph& g,
                                 const GeneratorSet& gens, int threads = 1);

// y -> chi y + omega on the 4-vector part; y_4 untouched.
struct RelabelMap {
  Matrix4 chi = Matrix4::Identity();
  Vector4 omega = Vector4::Zero();
};

// Throws Error for singular (or numerically singular) chi.
std::vector<VertexLabel> relabel_coordinates(std::span<const VertexLabel> labels,
                                             const RelabelMap& map);

// The (G, H) that reproduce step_coordinates in relabelled coordinates:
// G'_d = chi G_d - 1/2 chi H_d chi^-1 omega,  H'_d = chi H_d chi^-1.
// Throws Error if torsion is present and chi is not orthogonal.
PotentialEntry relabel_entry(const PotentialEntry& entry, const RelabelMap& map);

}  // namespace graphgauge
