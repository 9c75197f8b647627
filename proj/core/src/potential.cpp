#include "graphgauge/potential.hpp"

#include <cmath>
#include <sstream>

#include "graphgauge/error.hpp"
#include "parallel.hpp"

namespace graphgauge {

PotentialField::PotentialField(std::size_t transitions, double epsilon)
    : epsilon_(epsilon), entries_(transitions) {
  if (!(epsilon > 0.0)) throw Error("potential field epsilon must be > 0");
}

PotentialField PotentialField::flat(const LatticeGraph& g, double epsilon) {
  PotentialField field(g.transition_count(), epsilon);
  for (auto& e : field.entries_) e = PotentialEntry::euclidean();
  return field;
}

const PotentialEntry& PotentialField::at(const LatticeGraph& g, VertexId v) const {
  const std::size_t i = g.transition_ordinal(v);
  if (i >= entries_.size()) throw Error("potential field has no entry for this vertex");
  return entries_[i];
}

PotentialEntry& PotentialField::at(const LatticeGraph& g, VertexId v) {
  const std::size_t i = g.transition_ordinal(v);
  if (i >= entries_.size()) throw Error("potential field has no entry for this vertex");
  return entries_[i];
}

MatrixPotential assemble_potential(const PotentialField& field, const LatticeGraph& g,
                                   VertexId v, const GeneratorSet& gens) {
  const PotentialEntry& e = field.at(g, v);
  return assemble_components(e.G, e.H, gens);
}

PotentialEntry decompose_potential(const MatrixPotential& a, const GeneratorSet& gens) {
  PotentialComponents c = project_components(a, gens);
  return {c.G, c.H};
}

Matrix5 coordinate_generator(const PotentialEntry& entry, int d, double radius) {
  Matrix5 k = Matrix5::Zero();
  for (int b = 0; b < 4; ++b) {
    k(b, 4) = entry.G(d, b) / radius;
    k(4, b) = -entry.G(d, b) / radius;
    for (int c = 0; c < 4; ++c) k(b, c) = 0.5 * entry.H(d, b, c);
  }
  return k;
}

VertexLabel step_coordinates(const VertexLabel& y, int d, const PotentialEntry& entry,
                             double epsilon, const StepOptions& opts) {
  if (d < 0 || d > 3) throw Error("step_coordinates: direction must be 0..3");
  VertexLabel w = y;
  if (opts.mode == CoordinateMode::Poincare) {
    if (y.y(4) != 1.0) throw Error("step_coordinates: y_4 must be 1 in Poincare mode");
    for (int b = 0; b < 4; ++b) {
      double twist = 0.0;
      for (int c = 0; c < 4; ++c) twist += entry.H(d, b, c) * y.y(c);
      w.y(b) = y.y(b) + epsilon * entry.G(d, b) + 0.5 * epsilon * twist;
    }
    return w;
  }
  w.y = y.y + epsilon * coordinate_generator(entry, d, opts.de_sitter_radius) * y.y;
  return w;
}

namespace {

void require_orthogonal(const Matrix5& o) {
  const double r = orthogonality_residual(o);
  if (!(r <= kOrthogonalityTolerance)) {
    std::ostringstream msg;
    msg << "gauge matrix is not orthogonal (residual " << r << ")";
    throw GroupError(msg.str(), r);
  }
}

}  // namespace

PotentialField gauge_transform_global(const PotentialField& field, const Matrix5& o,
                                      const GeneratorSet& gens) {
  require_orthogonal(o);
  PotentialField out(field.size(), field.epsilon());
  for (std::size_t i = 0; i < field.size(); ++i) {
    const PotentialEntry& e = field[i];
    MatrixPotential a = assemble_components(e.G, e.H, gens);
    for (auto& m : a) m = o * m * o.transpose();
    out[i] = decompose_potential(a, gens);
  }
  return out;
}

PotentialField gauge_transform_local(const PotentialField& field, const LatticeGraph& g,
                                     std::span<const Matrix5> o, const GeneratorSet& gens) {
  if (field.size() != g.transition_count() || o.size() != g.transition_count()) {
    throw Error("gauge_transform_local: field / gauge size does not match the graph");
  }
  for (const Matrix5& m : o) require_orthogonal(m);

  const double eps = field.epsilon();
  PotentialField out(field.size(), eps);
  for (std::size_t i = 0; i < field.size(); ++i) {
    const VertexId t = g.transition_at(i);
    const LinkRef link = g.transition_link(t);
    const Matrix5& here = o[i];
    const PotentialEntry& e = field[i];
    MatrixPotential a = assemble_components(e.G, e.H, gens);

    for (int dir = 0; dir < 4; ++dir) {
      auto neighbour = [&](int sign) -> const Matrix5* {
        const VertexId x = g.step(link.event, dir, sign);
        if (x == kNoVertex) return nullptr;
        const VertexId tn = g.transition(x, link.direction);
        return tn == kNoVertex ? nullptr : &o[g.transition_ordinal(tn)];
      };
      const Matrix5* next = neighbour(+1);
      const Matrix5* prev = neighbour(-1);
      Matrix5 deriv = Matrix5::Zero();
      if (next && prev) {
        deriv = (*next - *prev) / (2.0 * eps);
      } else if (next) {
        deriv = (*next - here) / eps;
      } else if (prev) {
        deriv = (here - *prev) / eps;
      }
      const Matrix5 connection = deriv * here.transpose();
      const Matrix5 algebra_part = 0.5 * (connection - connection.transpose());
      a[dir] = here * a[dir] * here.transpose() - algebra_part;
    }
    out[i] = decompose_potential(a, gens);
  }
  return out;
}

PotentialField gauge_transform(const PotentialField& field, const LatticeGraph& g,
                               std::span<const Matrix5> o, GaugeMode mode,
                               const GeneratorSet& gens) {
  if (mode == GaugeMode::Local) return gauge_transform_local(field, g, o, gens);
  if (o.empty()) throw Error("gauge_transform: no gauge matrix given");
  for (const Matrix5& m : o) {
    if (m != o.front()) throw Error("gauge_transform: global mode needs a constant O");
  }
  return gauge_transform_global(field, o.front(), gens);
}

Matrix4 lorentz_transform_metric(const Matrix4& G, const Matrix4& lambda) {
  if (lambda.fullPivLu().rank() < 4) throw Error("lorentz_transform_metric: singular transform");
  return lambda.transpose() * G * lambda;
}

FlatnessReport flatness_residual(const PotentialField& field, const LatticeGraph& g,
                                 const GeneratorSet& gens, int threads) {
  if (field.size() != g.transition_count()) {
    throw Error("flatness_residual: field is missing transition entries");
  }
  const double eps = field.epsilon();
  const auto plaquettes = g.plaquettes();

  auto transport = [&](const LinkRef& link) {
    const VertexId t = g.transition(link.event, link.direction);
    const PotentialEntry& e = field[g.transition_ordinal(t)];
    const MatrixPotential a = assemble_components(e.G, e.H, gens);
    const double sign = link.forward ? 1.0 : -1.0;
    return expm5(sign * eps * a[link.direction]);
  };

  FlatnessReport report;
  report.residuals.assign(plaquettes.size(), 0.0);
  detail::parallel_chunks(plaquettes.size(), threads,
                          [&](std::size_t begin, std::size_t end, std::size_t) {
                            for (std::size_t p = begin; p < end; ++p) {
                              Matrix5 loop = Matrix5::Identity();
                              for (const LinkRef& l : plaquettes[p].links) loop = loop * transport(l);
                              report.residuals[p] = (loop - Matrix5::Identity()).norm();
                            }
                          });
  for (double r : report.residuals) report.max_residual = std::max(report.max_residual, r);
  return report;
}

namespace {

void require_regular(const Matrix4& chi) {
  Eigen::JacobiSVD<Matrix4> svd(chi);
  const auto& s = svd.singularValues();
  if (!(s(3) > 0.0) || s(0) / s(3) > 1e12) throw Error("relabel map: chi is singular");
}

}  // namespace

std::vector<VertexLabel> relabel_coordinates(std::span<const VertexLabel> labels,
                                             const RelabelMap& map) {
  require_regular(map.chi);
  std::vector<VertexLabel> out(labels.begin(), labels.end());
  for (auto& l : out) {
    const Vector4 y = l.y.head<4>();
    l.y.head<4>() = map.chi * y + map.omega;
  }
  return out;
}

PotentialEntry relabel_entry(const PotentialEntry& entry, const RelabelMap& map) {
  require_regular(map.chi);
  const Matrix4 chi_inv = map.chi.inverse();
  PotentialEntry out;
  for (int d = 0; d < 4; ++d) {
    Matrix4 h = Matrix4::Zero();
    for (int b = 0; b < 4; ++b) {
      for (int c = 0; c < 4; ++c) h(b, c) = entry.H(d, b, c);
    }
    const Matrix4 h_new = map.chi * h * chi_inv;
    if (entry.H.max_abs() > 0.0 &&
        (h_new + h_new.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
      throw Error("relabel map: torsion only transforms under orthogonal chi");
    }
    const Vector4 g_row = entry.G.row(d).transpose();
    const Vector4 g_new = map.chi * g_row - 0.5 * h_new * map.omega;
    out.G.row(d) = g_new.transpose();
    for (int p = 0; p < 6; ++p) {
      const auto [b, c] = kPlanePairs[p];
      out.H.set_independent(d, p, h_new(b, c));
    }
  }
  return out;
}

}  // namespace graphgauge
