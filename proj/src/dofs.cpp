#include "fracfilt/dofs.hpp"

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>

namespace fracfilt {

namespace {

bool near(double a, double b, double tol) { return std::abs(a - b) <= tol; }

} // namespace

DofLayout build_dof_layout(const Mesh& m, const BoundaryConditions& bc) {
  const Geometry& g = m.geo;
  if (bc.fracture_ends.size() != g.fractures.size())
    throw std::invalid_argument("dofs: fracture_ends must have one entry per fracture");
  const double tol =
      1e-9 * std::max({1.0, g.domain.width(), g.domain.height()});

  for (const PressureBc& p : bc.pressure) {
    const double b0 = p.line == Orientation::vertical ? g.domain.x0 : g.domain.y0;
    const double b1 = p.line == Orientation::vertical ? g.domain.x1 : g.domain.y1;
    if (!near(p.coord, b0, tol) && !near(p.coord, b1, tol))
      throw std::invalid_argument("dofs: pressure piece is not on the outer boundary");
    if (!(p.lo < p.hi))
      throw std::invalid_argument("dofs: pressure piece has empty extent");
  }

  DofLayout L;
  const int n_cells = static_cast<int>(m.sub.size());
  L.edge_dof.resize(n_cells);
  L.edge_kind.resize(n_cells);
  L.edge_value.resize(n_cells);

  // Trace edges, known from the mesh pairing.
  std::set<std::pair<int, int>> trace;
  for (std::size_t s = 0; s < m.frac.size(); ++s)
    for (int side = 0; side < 2; ++side)
      for (int e : m.frac[s].trace_edges[side])
        trace.insert({g.segments[s].neighbor[side], e});

  for (int c = 0; c < n_cells; ++c) {
    const SubMesh& sm = m.sub[c];
    L.edge_dof[c].assign(sm.n_edges(), -1);
    L.edge_kind[c].assign(sm.n_edges(), EdgeKind::interior);
    L.edge_value[c].assign(sm.n_edges(), 0.0);
    for (int e = 0; e < sm.n_edges(); ++e) {
      if (sm.edge_tris[e][1] >= 0) {
        L.edge_dof[c][e] = L.n_flux++;
        continue;
      }
      if (trace.count({c, e})) {
        L.edge_kind[c][e] = EdgeKind::trace;
        L.edge_dof[c][e] = L.n_flux++;
        continue;
      }
      // Outer boundary edge: match Dirichlet pieces by midpoint.
      const Point mid = edge_midpoint(sm, e);
      bool found = false;
      double value = 0.0;
      for (const PressureBc& p : bc.pressure) {
        const bool vert = p.line == Orientation::vertical;
        const double fixed = vert ? mid.x : mid.y;
        const double along = vert ? mid.y : mid.x;
        if (!near(fixed, p.coord, tol)) continue;
        if (along < p.lo - tol || along > p.hi + tol) continue;
        if (found && value != p.value)
          throw std::invalid_argument(
              "dofs: overlapping pressure pieces with different values");
        found = true;
        value = p.value;
      }
      if (found) {
        L.edge_kind[c][e] = EdgeKind::pressure;
        L.edge_value[c][e] = value;
        L.edge_dof[c][e] = L.n_flux++;
      } else {
        L.edge_kind[c][e] = EdgeKind::noflow;
      }
    }
  }

  const int n_segs = static_cast<int>(m.frac.size());
  L.node_dof.resize(n_segs);
  L.seg_end.resize(n_segs);
  for (int s = 0; s < n_segs; ++s) {
    const Segment& seg = g.segments[s];
    const int n_nodes = m.frac[s].n_el + 1;
    L.node_dof[s].assign(n_nodes, -1);
    for (int end = 0; end < 2; ++end) {
      SegmentEndDof& d = L.seg_end[s][end];
      if (seg.ends[end].kind == SegmentEnd::Kind::junction) {
        d.kind = SegmentEndDof::Kind::junction;
      } else {
        // A boundary end of a segment is the parent fracture's own end on the
        // same side, because interior splits are always junctions.
        const FractureEndBc& fe = bc.fracture_ends[seg.fracture][end];
        d.kind = fe.dirichlet ? SegmentEndDof::Kind::pressure
                              : SegmentEndDof::Kind::noflow;
        d.value = fe.value;
      }
    }
    for (int k = 0; k < n_nodes; ++k) {
      const bool lo_end = k == 0, hi_end = k == n_nodes - 1;
      if (lo_end && L.seg_end[s][0].kind == SegmentEndDof::Kind::noflow) continue;
      if (hi_end && L.seg_end[s][1].kind == SegmentEndDof::Kind::noflow) continue;
      L.node_dof[s][k] = L.n_flux++;
    }
  }

  // Pressure block: 2D elements, 1D elements, junction multipliers.
  L.cell_p_offset.resize(n_cells);
  for (int c = 0; c < n_cells; ++c) {
    L.cell_p_offset[c] = L.n_pressure;
    L.n_pressure += m.sub[c].n_tris();
  }
  L.seg_p_offset.resize(n_segs);
  for (int s = 0; s < n_segs; ++s) {
    L.seg_p_offset[s] = L.n_pressure;
    L.n_pressure += m.frac[s].n_el;
  }
  L.junction_p.resize(g.junctions.size());
  for (std::size_t j = 0; j < g.junctions.size(); ++j)
    L.junction_p[j] = L.n_pressure++;

  return L;
}

} // namespace fracfilt
