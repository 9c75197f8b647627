#include "graphgauge/snapshot.hpp"

#include <charconv>
#include <iomanip>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "graphgauge/error.hpp"

namespace graphgauge {

namespace {

std::vector<double> parse_numbers(const std::string& line, std::size_t expected,
                                  const char* what) {
  std::istringstream in(line);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) {
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc{} || res.ptr != tok.data() + tok.size()) {
      throw Error(std::string(what) + ": bad number '" + tok + "'");
    }
    out.push_back(v);
  }
  if (out.size() != expected) {
    throw Error(std::string(what) + ": expected " + std::to_string(expected) + " values, got " +
                std::to_string(out.size()));
  }
  return out;
}

bool next_data_line(std::istream& in, std::string& line) {
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') return true;
  }
  return false;
}

}  // namespace

void write_potential_table(std::ostream& out, const PotentialField& field, const LatticeGraph& g) {
  if (field.size() != g.transition_count()) throw Error("potential table: field/graph mismatch");
  out << "# graphgauge potential field\n";
  out << "# epsilon " << std::setprecision(17) << field.epsilon() << "\n";
  out << "# vertex G(16, row-major) H(24: a-major, planes 01 02 03 12 13 23)\n";
  for (std::size_t i = 0; i < field.size(); ++i) {
    const PotentialEntry& e = field[i];
    out << static_cast<int>(g.transition_at(i));
    for (int a = 0; a < 4; ++a) {
      for (int b = 0; b < 4; ++b) out << ' ' << e.G(a, b);
    }
    for (int a = 0; a < 4; ++a) {
      for (int p = 0; p < 6; ++p) out << ' ' << e.H.independent(a, p);
    }
    out << '\n';
  }
}

PotentialField read_potential_table(std::istream& in, const LatticeGraph& g) {
  double eps = 0.0;
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream h(line.substr(1));
      std::string key;
      if (h >> key && key == "epsilon") h >> eps;
      continue;
    }
    rows.push_back(parse_numbers(line, 41, "potential table row"));
  }
  if (!(eps > 0.0)) throw Error("potential table: missing '# epsilon' header");
  if (rows.size() != g.transition_count()) {
    throw Error("potential table: " + std::to_string(rows.size()) + " rows for " +
                std::to_string(g.transition_count()) + " transition vertices");
  }
  PotentialField field(g.transition_count(), eps);
  for (const auto& r : rows) {
    const VertexId v = vertex_id(static_cast<std::size_t>(r[0]));
    PotentialEntry& e = field.at(g, v);
    for (int k = 0; k < 16; ++k) e.G(k / 4, k % 4) = r[1 + k];
    for (int k = 0; k < 24; ++k) e.H.set_independent(k / 6, k % 6, r[17 + k]);
  }
  return field;
}

void write_link_snapshot(std::ostream& out, const LinkField& lf, const LatticeGraph& g) {
  if (lf.link_count() != 4 * g.event_count()) throw Error("link snapshot: field/graph mismatch");
  const int n = lf.rank();
  out << n;
  for (int d : g.dims()) out << ' ' << d;
  out << ' ' << (g.periodic() ? 1 : 0) << '\n';
  out << std::setprecision(17);
  for (int r = 0; r < 5; ++r) {
    for (int c = 0; c < 5; ++c) out << (r || c ? " " : "") << lf.so5()(r, c);
  }
  out << '\n';
  for (std::size_t e = 0; e < g.event_count(); ++e) {
    const VertexId x = g.event(e);
    for (int mu = 0; mu < 4; ++mu) {
      if (g.transition(x, mu) == kNoVertex) continue;
      out << static_cast<int>(x) << ' ' << (mu + 1);
      const SUNMatrix& u = lf.su(x, mu);
      for (int r = 0; r < n; ++r) {
        for (int c = 0; c < n; ++c) out << ' ' << u(r, c).real() << ' ' << u(r, c).imag();
      }
      out << '\n';
    }
  }
}

LinkSnapshot read_link_snapshot(std::istream& in) {
  std::string line;
  if (!next_data_line(in, line)) throw Error("link snapshot: missing header");
  const auto header = parse_numbers(line, 6, "link snapshot header");
  const int n = static_cast<int>(header[0]);
  const Extents dims{static_cast<int>(header[1]), static_cast<int>(header[2]),
                     static_cast<int>(header[3]), static_cast<int>(header[4])};
  LatticeGraph g = LatticeGraph::hypercubic(dims, header[5] != 0.0);
  LinkField lf(g, n);

  if (!next_data_line(in, line)) throw Error("link snapshot: missing so5 block");
  const auto so5 = parse_numbers(line, 25, "link snapshot so5 block");
  Matrix5 o;
  for (int k = 0; k < 25; ++k) o(k / 5, k % 5) = so5[k];
  lf.set_so5(o);

  const std::size_t width = 2 + 2 * static_cast<std::size_t>(n * n);
  std::size_t links = 0;
  std::vector<bool> seen(lf.link_count(), false);
  while (next_data_line(in, line)) {
    const auto r = parse_numbers(line, width, "link snapshot row");
    const auto e = static_cast<std::size_t>(r[0]);
    const int mu = static_cast<int>(r[1]) - 1;
    if (e >= g.event_count() || mu < 0 || mu > 3 ||
        g.transition(g.event(e), mu) == kNoVertex) {
      throw Error("link snapshot: bad link address");
    }
    if (seen[4 * e + static_cast<std::size_t>(mu)]) throw Error("link snapshot: duplicate link");
    seen[4 * e + static_cast<std::size_t>(mu)] = true;
    SUNMatrix& u = lf.su(g.event(e), mu);
    for (int k = 0; k < n * n; ++k) u(k / n, k % n) = Complex(r[2 + 2 * k], r[3 + 2 * k]);
    ++links;
  }
  if (links != g.transition_count()) {
    throw Error("link snapshot: " + std::to_string(links) + " links for " +
                std::to_string(g.transition_count()) + " in the graph");
  }
  return {std::move(g), std::move(lf)};
}

}  // namespace graphgauge
