#pragma once

// Manifold-free hypercubic lattice graph.
//
// Three kinds of vertices: Event vertices (sites), Transition vertices (one
// per link, sitting between its two Event ends) and Action vertices (one per
// plaquette, adjacent to its four Transition vertices). Edges carry a signed
// direction label in {+-1, .., +-4}. Nothing here stores a position; the
// integer "address" of an Event vertex is a combinatorial index only.
//
// Label conventions, with mu the direction of a link and nu != mu:
//   Event x:            +d -> Transition of link (x, d);  -d -> link (x - d, d)
//   Transition (x, mu): +mu -> Event x + mu;  -mu -> Event x
//                       +nu -> Action of plaquette (x, mu, nu)
//                       -nu -> Action of plaquette (x - nu, mu, nu)
//   Action (x, mu, nu): -nu -> Transition (x, mu);  +nu -> Transition (x + nu, mu)
//                       -mu -> Transition (x, nu);  +mu -> Transition (x + mu, nu)

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

namespace graphgauge {

enum class VertexId : std::int32_t {};
inline constexpr VertexId kNoVertex{-1};

constexpr std::size_t to_index(VertexId v) { return static_cast<std::size_t>(v); }
constexpr VertexId vertex_id(std::size_t i) { return static_cast<VertexId>(i); }

enum class VertexRole : std::uint8_t { Event, Transition, Action };

using Extents = std::array<int, 4>;
using Address = std::array<int, 4>;

// Signed label -> direction 0..3 and sign.
constexpr int label_direction(int label) { return (label > 0 ? label : -label) - 1; }
constexpr bool valid_label(int label) { return label != 0 && label >= -4 && label <= 4; }

// One traversal of a link: the base Event vertex, its direction 0..3, and
// whether the loop walks it forward (x -> x + mu) or backward.
struct LinkRef {
  VertexId event;
  int direction;
  bool forward;
};

struct PlaquetteRef {
  VertexId action;
  std::array<VertexId, 4> corners;  // x, x+mu, x+mu+nu, x+nu
  std::array<LinkRef, 4> links;     // +mu, +nu, -mu, -nu
  std::pair<int, int> plane;        // (mu, nu), mu < nu
};

class LatticeGraph {
 public:
  // Throws GraphError for a non-positive extent, or an extent < 2 when
  // periodic.
  static LatticeGraph hypercubic(const Extents& dims, bool periodic);

  const Extents& dims() const { return dims_; }
  bool periodic() const { return periodic_; }

  std::size_t vertex_count() const { return roles_.size(); }
  std::size_t event_count() const { return events_; }
  std::size_t transition_count() const { return transition_base_.size(); }
  std::size_t action_count() const { return action_base_.size(); }

  VertexRole role(VertexId v) const;

  // Vertex across the edge with this label. Throws GraphError when the label
  // is invalid for the vertex's role or the edge is absent (open boundary).
  VertexId neighbor(VertexId v, int label) const;

  // All labels with an edge at v, in the order +1, -1, +2, -2, ...
  std::vector<int> labels(VertexId v) const;
  int degree(VertexId v) const;

  VertexId event(std::size_t ordinal) const { return vertex_id(ordinal); }
  std::size_t event_ordinal(VertexId v) const;
  Address address(VertexId event) const;
  VertexId event_at(const Address& address) const;

  // Event reached by a full link step, or kNoVertex across an open boundary.
  VertexId step(VertexId event, int direction, int sign = +1) const;

  // Transition vertex of the forward link (event, direction), or kNoVertex.
  VertexId transition(VertexId event, int direction) const;
  std::size_t transition_ordinal(VertexId v) const;
  VertexId transition_at(std::size_t ordinal) const;
  LinkRef transition_link(VertexId v) const;

  // Every plaquette exactly once, ordered by Action vertex id.
  std::span<const PlaquetteRef> plaquettes() const { return plaquettes_; }
  const PlaquetteRef& plaquette_of(VertexId action) const;

 private:
  LatticeGraph() = default;

  static constexpr int slot(int label) { return label > 0 ? label - 1 : 3 - label; }
  std::size_t site_index(const Address& a) const;
  Address site_address(std::size_t site) const;
  // Address shifted by one along direction; false across an open boundary.
  bool shifted(Address& a, int direction, int sign) const;

  Extents dims_{};
  bool periodic_ = true;
  std::size_t events_ = 0;
  std::vector<VertexRole> roles_;
  std::vector<std::array<VertexId, 8>> adjacency_;
  std::vector<VertexId> transition_by_link_;  // 4 * site + mu
  std::vector<std::pair<std::size_t, int>> transition_base_;
  std::vector<std::pair<std::size_t, int>> action_base_;  // site, plane index
  std::vector<PlaquetteRef> plaquettes_;
};

inline LatticeGraph build_hypercubic(const Extents& dims, bool periodic) {
  return LatticeGraph::hypercubic(dims, periodic);
}

// Bijection implementing the lattice translation by offset; entry i is the
// image of vertex i. Throws GraphError for a non-periodic graph.
std::vector<VertexId> automorphism_shift(const LatticeGraph& g, const Address& offset);

}  // namespace graphgauge
