#include "graphgauge/graphlat.hpp"

#include <string>

#include "graphgauge/error.hpp"
#include "graphgauge/liealg.hpp"

namespace graphgauge {

namespace {

std::string describe(VertexId v) { return "vertex " + std::to_string(static_cast<int>(v)); }

}  // namespace

std::size_t LatticeGraph::site_index(const Address& a) const {
  return static_cast<std::size_t>(
      a[0] + dims_[0] * (a[1] + dims_[1] * (a[2] + dims_[2] * a[3])));
}

Address LatticeGraph::site_address(std::size_t site) const {
  Address a{};
  for (int d = 0; d < 4; ++d) {
    a[d] = static_cast<int>(site % static_cast<std::size_t>(dims_[d]));
    site /= static_cast<std::size_t>(dims_[d]);
  }
  return a;
}

bool LatticeGraph::shifted(Address& a, int direction, int sign) const {
  int& x = a[direction];
  x += sign;
  if (x >= 0 && x < dims_[direction]) return true;
  if (!periodic_) return false;
  x = (x + dims_[direction]) % dims_[direction];
  return true;
}

LatticeGraph LatticeGraph::hypercubic(const Extents& dims, bool periodic) {
  for (int d = 0; d < 4; ++d) {
    if (dims[d] < 1 || (periodic && dims[d] < 2)) {
      throw GraphError("extent " + std::to_string(dims[d]) + " along direction " +
                       std::to_string(d + 1) +
                       (periodic ? " must be >= 2 for a periodic graph" : " must be >= 1"));
    }
  }

  LatticeGraph g;
  g.dims_ = dims;
  g.periodic_ = periodic;
  g.events_ = static_cast<std::size_t>(dims[0]) * dims[1] * dims[2] * dims[3];
  const std::size_t sites = g.events_;

  std::array<VertexId, 8> empty;
  empty.fill(kNoVertex);
  g.roles_.assign(sites, VertexRole::Event);
  g.adjacency_.assign(sites, empty);

  auto add_vertex = [&g, &empty](VertexRole role) {
    g.roles_.push_back(role);
    g.adjacency_.push_back(empty);
    return vertex_id(g.roles_.size() - 1);
  };
  auto connect = [&g](VertexId a, int label, VertexId b) {
    g.adjacency_[to_index(a)][slot(label)] = b;
    g.adjacency_[to_index(b)][slot(-label)] = a;
  };

  // Links.
  g.transition_by_link_.assign(4 * sites, kNoVertex);
  for (std::size_t s = 0; s < sites; ++s) {
    for (int mu = 0; mu < 4; ++mu) {
      Address a = g.site_address(s);
      if (!g.shifted(a, mu, +1)) continue;
      const VertexId t = add_vertex(VertexRole::Transition);
      g.transition_by_link_[4 * s + mu] = t;
      g.transition_base_.emplace_back(s, mu);
      connect(vertex_id(s), mu + 1, t);                 // Event x --(+mu)--> t
      connect(t, mu + 1, vertex_id(g.site_index(a)));   // t --(+mu)--> Event x+mu
    }
  }

  // Plaquettes.
  for (std::size_t s = 0; s < sites; ++s) {
    for (int p = 0; p < 6; ++p) {
      const auto [mu, nu] = kPlanePairs[p];
      const Address x = g.site_address(s);
      Address x_mu = x, x_nu = x;
      if (!g.shifted(x_mu, mu, +1) || !g.shifted(x_nu, nu, +1)) continue;
      Address x_mu_nu = x_mu;
      g.shifted(x_mu_nu, nu, +1);

      const VertexId act = add_vertex(VertexRole::Action);
      g.action_base_.emplace_back(s, p);

      const VertexId t_mu = g.transition_by_link_[4 * s + mu];
      const VertexId t_nu = g.transition_by_link_[4 * s + nu];
      const VertexId t_mu_up = g.transition_by_link_[4 * g.site_index(x_nu) + mu];
      const VertexId t_nu_right = g.transition_by_link_[4 * g.site_index(x_mu) + nu];
      connect(t_mu, nu + 1, act);
      connect(act, nu + 1, t_mu_up);
      connect(t_nu, mu + 1, act);
      connect(act, mu + 1, t_nu_right);

      PlaquetteRef ref;
      ref.action = act;
      ref.corners = {vertex_id(s), vertex_id(g.site_index(x_mu)),
                     vertex_id(g.site_index(x_mu_nu)), vertex_id(g.site_index(x_nu))};
      ref.links = {LinkRef{vertex_id(s), mu, true},
                   LinkRef{vertex_id(g.site_index(x_mu)), nu, true},
                   LinkRef{vertex_id(g.site_index(x_nu)), mu, false},
                   LinkRef{vertex_id(s), nu, false}};
      ref.plane = {mu, nu};
      g.plaquettes_.push_back(ref);
    }
  }
  return g;
}

VertexRole LatticeGraph::role(VertexId v) const {
  if (to_index(v) >= roles_.size()) throw GraphError(describe(v) + " out of range");
  return roles_[to_index(v)];
}

VertexId LatticeGraph::neighbor(VertexId v, int label) const {
  const VertexRole r = role(v);
  if (!valid_label(label)) {
    throw GraphError("invalid edge label " + std::to_string(label));
  }
  const VertexId n = adjacency_[to_index(v)][slot(label)];
  if (n == kNoVertex) {
    const char* kind = r == VertexRole::Event        ? "event"
                       : r == VertexRole::Transition ? "transition"
                                                     : "action";
    throw GraphError("no edge labelled " + std::to_string(label) + " at " + kind + " " +
                     describe(v));
  }
  return n;
}

std::vector<int> LatticeGraph::labels(VertexId v) const {
  role(v);
  std::vector<int> out;
  for (int d = 1; d <= 4; ++d) {
    for (int label : {d, -d}) {
      if (adjacency_[to_index(v)][slot(label)] != kNoVertex) out.push_back(label);
    }
  }
  return out;
}

int LatticeGraph::degree(VertexId v) const { return static_cast<int>(labels(v).size()); }

std::size_t LatticeGraph::event_ordinal(VertexId v) const {
  if (role(v) != VertexRole::Event) throw GraphError(describe(v) + " is not an event vertex");
  return to_index(v);
}

Address LatticeGraph::address(VertexId event) const {
  return site_address(event_ordinal(event));
}

VertexId LatticeGraph::event_at(const Address& a) const {
  for (int d = 0; d < 4; ++d) {
    if (a[d] < 0 || a[d] >= dims_[d]) throw GraphError("address outside the graph");
  }
  return vertex_id(site_index(a));
}

VertexId LatticeGraph::step(VertexId event, int direction, int sign) const {
  Address a = address(event);
  if (!shifted(a, direction, sign)) return kNoVertex;
  return vertex_id(site_index(a));
}

VertexId LatticeGraph::transition(VertexId event, int direction) const {
  return transition_by_link_[4 * event_ordinal(event) + static_cast<std::size_t>(direction)];
}

std::size_t LatticeGraph::transition_ordinal(VertexId v) const {
  if (role(v) != VertexRole::Transition) {
    throw GraphError(describe(v) + " is not a transition vertex");
  }
  return to_index(v) - events_;
}

VertexId LatticeGraph::transition_at(std::size_t ordinal) const {
  if (ordinal >= transition_base_.size()) throw GraphError("transition ordinal out of range");
  return vertex_id(events_ + ordinal);
}

LinkRef LatticeGraph::transition_link(VertexId v) const {
  const auto& [site, mu] = transition_base_[transition_ordinal(v)];
  return {vertex_id(site), mu, true};
}

const PlaquetteRef& LatticeGraph::plaquette_of(VertexId action) const {
  if (role(action) != VertexRole::Action) {
    throw GraphError(describe(action) + " is not an action vertex");
  }
  return plaquettes_[to_index(action) - events_ - transition_base_.size()];
}

std::vector<VertexId> automorphism_shift(const LatticeGraph& g, const Address& offset) {
  if (!g.periodic()) throw GraphError("automorphism_shift requires a periodic graph");
  const Extents& dims = g.dims();
  auto shift_event = [&](VertexId e) {
    Address a = g.address(e);
    for (int d = 0; d < 4; ++d) a[d] = ((a[d] + offset[d]) % dims[d] + dims[d]) % dims[d];
    return g.event_at(a);
  };

  std::vector<VertexId> map(g.vertex_count(), kNoVertex);
  for (std::size_t i = 0; i < g.event_count(); ++i) {
    map[i] = shift_event(g.event(i));
  }
  for (std::size_t t = 0; t < g.transition_count(); ++t) {
    const VertexId v = g.transition_at(t);
    const LinkRef link = g.transition_link(v);
    map[to_index(v)] = g.transition(map[to_index(link.event)], link.direction);
  }
  for (const PlaquetteRef& p : g.plaquettes()) {
    // Action ids follow (site, plane) order, so the image is found by offset.
    const VertexId base = map[to_index(p.corners[0])];
    const std::size_t plane = static_cast<std::size_t>(plane_index(p.plane.first, p.plane.second));
    map[to_index(p.action)] =
        vertex_id(g.event_count() + g.transition_count() + 6 * to_index(base) + plane);
  }
  return map;
}

}  // namespace graphgauge
