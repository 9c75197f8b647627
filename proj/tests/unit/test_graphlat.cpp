#include <doctest.h>

#include <algorithm>
#include <set>

#include "gen.hpp"
#include "graphgauge/error.hpp"
#include "graphgauge/graphlat.hpp"

using namespace graphgauge;

namespace {

std::size_t product(const Extents& d) {
  return static_cast<std::size_t>(d[0]) * d[1] * d[2] * d[3];
}

// Independent count of links and plaquettes on an open box.
std::pair<std::size_t, std::size_t> open_counts(const Extents& d) {
  std::size_t links = 0, plaq = 0;
  for (int mu = 0; mu < 4; ++mu) {
    std::size_t c = 1;
    for (int k = 0; k < 4; ++k) c *= k == mu ? d[k] - 1 : d[k];
    links += c;
    for (int nu = mu + 1; nu < 4; ++nu) {
      std::size_t p = 1;
      for (int k = 0; k < 4; ++k) p *= (k == mu || k == nu) ? d[k] - 1 : d[k];
      plaq += p;
    }
  }
  return {links, plaq};
}

}  // namespace

TEST_SUITE("graphlat") {

TEST_CASE("2^4 periodic graph counts and degrees") {
  const LatticeGraph g = LatticeGraph::hypercubic({2, 2, 2, 2}, true);
  CHECK(g.event_count() == 16);
  CHECK(g.transition_count() == 64);
  CHECK(g.action_count() == 96);
  CHECK(g.vertex_count() == 176);
  CHECK(g.plaquettes().size() == 96);
  for (std::size_t i = 0; i < g.vertex_count(); ++i) {
    const VertexId v = vertex_id(i);
    switch (g.role(v)) {
      case VertexRole::Event: CHECK(g.degree(v) == 8); break;
      case VertexRole::Transition: CHECK(g.degree(v) == 8); break;
      case VertexRole::Action: CHECK(g.degree(v) == 4); break;
    }
  }
}

TEST_CASE("counts on random periodic and open extents") {
  Rng rng(31);
  for (int t = 0; t < 30; ++t) {
    const Extents d = gen::extents(rng, 2, 5);
    const LatticeGraph p = LatticeGraph::hypercubic(d, true);
    CHECK(p.event_count() == product(d));
    CHECK(p.transition_count() == 4 * product(d));
    CHECK(p.action_count() == 6 * product(d));

    const Extents od = gen::extents(rng, 1, 4);
    const LatticeGraph o = LatticeGraph::hypercubic(od, false);
    const auto [links, plaq] = open_counts(od);
    CHECK(o.event_count() == product(od));
    CHECK(o.transition_count() == links);
    CHECK(o.action_count() == plaq);
    // Handshake: every edge is Event-Transition or Transition-Action.
    std::size_t et = 0, ta = 0;
    for (std::size_t i = 0; i < o.vertex_count(); ++i) {
      const VertexId v = vertex_id(i);
      if (o.role(v) == VertexRole::Event) et += static_cast<std::size_t>(o.degree(v));
      if (o.role(v) == VertexRole::Action) ta += static_cast<std::size_t>(o.degree(v));
    }
    CHECK(et == 2 * links);
    CHECK(ta == 4 * plaq);
  }
}

TEST_CASE("labels invert and neighbour roles alternate") {
  Rng rng(32);
  for (bool periodic : {true, false}) {
    for (int t = 0; t < 5; ++t) {
      const LatticeGraph g = LatticeGraph::hypercubic(gen::extents(rng, 2, 4), periodic);
      for (std::size_t i = 0; i < g.vertex_count(); ++i) {
        const VertexId v = vertex_id(i);
        for (int l : g.labels(v)) {
          REQUIRE(valid_label(l));
          const VertexId w = g.neighbor(v, l);
          CHECK(g.neighbor(w, -l) == v);
          const VertexRole a = g.role(v), b = g.role(w);
          CHECK(a != b);
          CHECK((a == VertexRole::Transition || b == VertexRole::Transition));
        }
      }
    }
  }
}

TEST_CASE("event and transition label conventions") {
  const LatticeGraph g = LatticeGraph::hypercubic({3, 4, 3, 2}, true);
  for (std::size_t e = 0; e < g.event_count(); ++e) {
    const VertexId x = g.event(e);
    CHECK(g.event_ordinal(x) == e);
    CHECK(g.event_at(g.address(x)) == x);
    for (int d = 0; d < 4; ++d) {
      const VertexId t = g.neighbor(x, d + 1);
      CHECK(t == g.transition(x, d));
      CHECK(g.neighbor(t, d + 1) == g.step(x, d));
      CHECK(g.neighbor(t, -(d + 1)) == x);
      const LinkRef link = g.transition_link(t);
      CHECK(link.event == x);
      CHECK(link.direction == d);
      CHECK(g.neighbor(x, -(d + 1)) == g.transition(g.step(x, d, -1), d));
      CHECK(g.transition_at(g.transition_ordinal(t)) == t);
      // A full step around the period returns.
      VertexId y = x;
      for (int k = 0; k < g.dims()[d]; ++k) y = g.step(y, d);
      CHECK(y == x);
    }
  }
}

TEST_CASE("plaquettes close and are enumerated once") {
  for (bool periodic : {true, false}) {
    const LatticeGraph g = LatticeGraph::hypercubic({3, 3, 4, 3}, periodic);
    std::set<std::pair<std::size_t, std::pair<int, int>>> seen;
    for (const PlaquetteRef& p : g.plaquettes()) {
      const auto [mu, nu] = p.plane;
      CHECK(mu < nu);
      CHECK(g.role(p.action) == VertexRole::Action);
      CHECK(&g.plaquette_of(p.action) == &p);
      CHECK(p.corners[1] == g.step(p.corners[0], mu));
      CHECK(p.corners[2] == g.step(p.corners[1], nu));
      CHECK(p.corners[3] == g.step(p.corners[0], nu));
      CHECK(p.corners[2] == g.step(p.corners[3], mu));
      // Walking the four links returns to the start.
      VertexId at = p.corners[0];
      for (const LinkRef& l : p.links) {
        if (l.forward) {
          CHECK(l.event == at);
          at = g.step(at, l.direction);
        } else {
          at = g.step(at, l.direction, -1);
          CHECK(l.event == at);
        }
      }
      CHECK(at == p.corners[0]);
      // The action vertex touches exactly the four transitions of the loop.
      std::set<VertexId> around, loop;
      for (int l : g.labels(p.action)) around.insert(g.neighbor(p.action, l));
      for (const LinkRef& l : p.links) loop.insert(g.transition(l.event, l.direction));
      CHECK(around == loop);
      CHECK(seen.insert({g.event_ordinal(p.corners[0]), p.plane}).second);
    }
  }
}

TEST_CASE("open boundaries have no edge across") {
  const LatticeGraph g = LatticeGraph::hypercubic({3, 2, 2, 2}, false);
  const VertexId corner = g.event_at({2, 1, 1, 1});
  CHECK(g.step(corner, 0) == kNoVertex);
  CHECK(g.transition(corner, 0) == kNoVertex);
  CHECK_THROWS_AS(g.neighbor(corner, 1), GraphError);
  CHECK(g.degree(corner) == 4);
  CHECK(g.degree(g.event_at({0, 0, 0, 0})) == 4);
  CHECK(g.degree(g.event_at({1, 0, 0, 0})) == 5);
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(LatticeGraph::hypercubic({2, 2, 0, 2}, false), GraphError);
  CHECK_THROWS_AS(LatticeGraph::hypercubic({2, 1, 2, 2}, true), GraphError);
  const LatticeGraph g = LatticeGraph::hypercubic({2, 2, 2, 2}, true);
  CHECK_THROWS_AS(g.neighbor(g.event(0), 0), GraphError);
  CHECK_THROWS_AS(g.neighbor(g.event(0), 5), GraphError);
  CHECK_THROWS_AS(g.role(vertex_id(g.vertex_count())), GraphError);
  CHECK_THROWS_AS(g.transition_link(g.event(0)), GraphError);
  CHECK_THROWS_AS(g.address(g.transition(g.event(0), 0)), GraphError);
  CHECK_THROWS_AS(automorphism_shift(LatticeGraph::hypercubic({2, 2, 2, 2}, false), {1, 0, 0, 0}),
                  GraphError);
}

TEST_CASE("automorphism shifts preserve roles and labelled adjacency") {
  Rng rng(33);
  for (int t = 0; t < 10; ++t) {
    const LatticeGraph g = LatticeGraph::hypercubic(gen::extents(rng, 2, 4), true);
    const Address off{gen::integer(rng, -3, 3), gen::integer(rng, -3, 3),
                      gen::integer(rng, -3, 3), gen::integer(rng, -3, 3)};
    const std::vector<VertexId> s = automorphism_shift(g, off);
    REQUIRE(s.size() == g.vertex_count());
    std::vector<VertexId> sorted = s;
    std::sort(sorted.begin(), sorted.end());
    for (std::size_t i = 0; i < sorted.size(); ++i) CHECK(sorted[i] == vertex_id(i));
    for (std::size_t i = 0; i < g.vertex_count(); ++i) {
      const VertexId v = vertex_id(i);
      const VertexId sv = s[i];
      CHECK(g.role(sv) == g.role(v));
      for (int l : g.labels(v)) CHECK(g.neighbor(sv, l) == s[to_index(g.neighbor(v, l))]);
    }
    // Event images are translations of the address.
    const VertexId x = g.event(0);
    Address a = g.address(s[to_index(x)]);
    for (int d = 0; d < 4; ++d) {
      const int l = g.dims()[d];
      CHECK(a[d] == ((off[d] % l) + l) % l);
    }
  }
}

}  // TEST_SUITE
