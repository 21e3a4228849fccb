#include "fracfilt/mesh.hpp"

#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <unordered_map>

namespace fracfilt {

namespace {

// Subdivision count for one extent; h must divide it (to round-off).
int divisions(double extent, double h, const char* what) {
  const int n = static_cast<int>(std::lround(extent / h));
  if (n < 1 || std::abs(extent / n - h) > 1e-9 * h)
    throw std::invalid_argument(std::string("mesh: h does not divide ") + what);
  return n;
}

// Grid coordinate with the last line pinned to the exact bound so that
// meshes of adjacent cells agree bitwise along shared cut lines.
double grid_coord(double lo, double hi, int n, int i) {
  return i == n ? hi : lo + i * ((hi - lo) / n);
}

SubMesh build_submesh(const Rect& r, double h) {
  SubMesh sm;
  sm.rect = r;
  sm.nx = divisions(r.width(), h, "a cell width");
  sm.ny = divisions(r.height(), h, "a cell height");

  sm.vertices.reserve((sm.nx + 1) * (sm.ny + 1));
  for (int j = 0; j <= sm.ny; ++j)
    for (int i = 0; i <= sm.nx; ++i)
      sm.vertices.push_back({grid_coord(r.x0, r.x1, sm.nx, i),
                             grid_coord(r.y0, r.y1, sm.ny, j)});

  // Two CCW triangles per square, diagonal from lower-left to upper-right.
  sm.tris.reserve(2 * sm.nx * sm.ny);
  for (int j = 0; j < sm.ny; ++j)
    for (int i = 0; i < sm.nx; ++i) {
      const int v00 = sm.vertex_id(i, j), v10 = sm.vertex_id(i + 1, j);
      const int v11 = sm.vertex_id(i + 1, j + 1), v01 = sm.vertex_id(i, j + 1);
      sm.tris.push_back({v00, v10, v11});
      sm.tris.push_back({v00, v11, v01});
    }

  std::unordered_map<std::int64_t, int> edge_of;
  const std::int64_t nv = sm.n_vertices();
  auto edge_id = [&](int a, int b) {
    if (a > b) std::swap(a, b);
    const std::int64_t key = a * nv + b;
    auto [it, inserted] = edge_of.try_emplace(key, sm.n_edges());
    if (inserted) {
      sm.edges.push_back({a, b});
      sm.edge_tris.push_back({-1, -1});
    }
    return it->second;
  };
  sm.tri_edges.resize(sm.n_tris());
  for (int t = 0; t < sm.n_tris(); ++t)
    for (int k = 0; k < 3; ++k) {
      const int e = edge_id(sm.tris[t][(k + 1) % 3], sm.tris[t][(k + 2) % 3]);
      sm.tri_edges[t][k] = e;
      sm.edge_tris[e][sm.edge_tris[e][0] < 0 ? 0 : 1] = t;
    }
  return sm;
}

} // namespace

Mesh generate_mesh(const Geometry& g, double h) {
  if (!(h > 0.0)) throw std::invalid_argument("mesh: h must be positive");
  Mesh m;
  m.geo = g;
  m.h = h;
  m.sub.reserve(g.cells.size());
  for (const Rect& r : g.cells) m.sub.push_back(build_submesh(r, h));

  m.frac.reserve(g.segments.size());
  for (const Segment& seg : g.segments) {
    const Fracture& f = g.fractures[seg.fracture];
    const bool vert = f.orient == Orientation::vertical;
    SegmentMesh fm;
    fm.n_el = divisions(seg.hi - seg.lo, h, "a fracture segment");
    fm.nodes.resize(fm.n_el + 1);
    for (int k = 0; k <= fm.n_el; ++k)
      fm.nodes[k] = grid_coord(seg.lo, seg.hi, fm.n_el, k);

    for (int side = 0; side < 2; ++side) {
      const SubMesh& sm = m.sub[seg.neighbor[side]];
      if ((vert ? sm.ny : sm.nx) != fm.n_el)
        throw std::logic_error("mesh: trace element count mismatch");
      auto& list = fm.trace_edges[side];
      list.reserve(fm.n_el);
      // The trace is the full shared face of the neighbor cell: the right
      // boundary of the left cell for side 0 of a vertical segment, etc.
      for (int k = 0; k < fm.n_el; ++k) {
        int a, b;
        if (vert) {
          const int i = side == 0 ? sm.nx : 0;
          a = sm.vertex_id(i, k);
          b = sm.vertex_id(i, k + 1);
        } else {
          const int j = side == 0 ? sm.ny : 0;
          a = sm.vertex_id(k, j);
          b = sm.vertex_id(k + 1, j);
        }
        int found = -1;
        for (int e = 0; e < sm.n_edges(); ++e)
          if (sm.edges[e][0] == std::min(a, b) && sm.edges[e][1] == std::max(a, b)) {
            found = e;
            break;
          }
        if (found < 0) throw std::logic_error("mesh: missing trace edge");
        const Point pa = sm.vertices[sm.edges[found][0]];
        const Point pb = sm.vertices[sm.edges[found][1]];
        const double clo = vert ? pa.y : pa.x;
        const double chi = vert ? pb.y : pb.x;
        if (clo != fm.nodes[k] || chi != fm.nodes[k + 1])
          throw std::logic_error("mesh: trace pairing is not exact");
        list.push_back(found);
      }
    }
    m.frac.push_back(std::move(fm));
  }
  return m;
}

double tri_area(const SubMesh& sm, int t) {
  const Point& a = sm.vertices[sm.tris[t][0]];
  const Point& b = sm.vertices[sm.tris[t][1]];
  const Point& c = sm.vertices[sm.tris[t][2]];
  return 0.5 * ((b.x - a.x) * (c.y - a.y) - (c.x - a.x) * (b.y - a.y));
}

Point tri_centroid(const SubMesh& sm, int t) {
  const Point& a = sm.vertices[sm.tris[t][0]];
  const Point& b = sm.vertices[sm.tris[t][1]];
  const Point& c = sm.vertices[sm.tris[t][2]];
  return {(a.x + b.x + c.x) / 3.0, (a.y + b.y + c.y) / 3.0};
}

double edge_length(const SubMesh& sm, int e) {
  const Point& a = sm.vertices[sm.edges[e][0]];
  const Point& b = sm.vertices[sm.edges[e][1]];
  return std::hypot(b.x - a.x, b.y - a.y);
}

Point edge_midpoint(const SubMesh& sm, int e) {
  const Point& a = sm.vertices[sm.edges[e][0]];
  const Point& b = sm.vertices[sm.edges[e][1]];
  return {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
}

int edge_sign(const SubMesh& sm, int t, int e) {
  // Fixed global normal: tangent from lower to higher vertex id, rotated
  // clockwise.  The sign says whether that normal is outward for t.
  const Point& a = sm.vertices[sm.edges[e][0]];
  const Point& b = sm.vertices[sm.edges[e][1]];
  const double nx = b.y - a.y, ny = -(b.x - a.x);
  const Point mid = edge_midpoint(sm, e);
  const Point cen = tri_centroid(sm, t);
  return (nx * (mid.x - cen.x) + ny * (mid.y - cen.y)) > 0.0 ? 1 : -1;
}

void dump_mesh(const Mesh& m, std::ostream& os) {
  os << "mesh h=" << m.h << " cells=" << m.sub.size()
     << " segments=" << m.frac.size() << "\n";
  for (std::size_t c = 0; c < m.sub.size(); ++c) {
    const SubMesh& sm = m.sub[c];
    int nbnd = 0;
    for (const auto& et : sm.edge_tris) nbnd += et[1] < 0 ? 1 : 0;
    os << "cell " << c << ": rect [" << sm.rect.x0 << "," << sm.rect.x1
       << "]x[" << sm.rect.y0 << "," << sm.rect.y1 << "] nx=" << sm.nx
       << " ny=" << sm.ny << " vertices=" << sm.n_vertices()
       << " triangles=" << sm.n_tris() << " edges=" << sm.n_edges()
       << " boundary_edges=" << nbnd << "\n";
  }
  for (std::size_t s = 0; s < m.frac.size(); ++s) {
    const Segment& seg = m.geo.segments[s];
    os << "segment " << s << ": fracture " << seg.fracture << " range ["
       << seg.lo << "," << seg.hi << "] elements=" << m.frac[s].n_el
       << " neighbors=" << seg.neighbor[0] << "," << seg.neighbor[1] << "\n";
    for (int k = 0; k < m.frac[s].n_el; ++k)
      os << "  el " << k << " <-> side0 edge " << m.frac[s].trace_edges[0][k]
         << ", side1 edge " << m.frac[s].trace_edges[1][k] << "\n";
  }
}

} // namespace fracfilt
