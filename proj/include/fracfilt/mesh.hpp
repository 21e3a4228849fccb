#pragma once

#include "fracfilt/geometry.hpp"

#include <array>
#include <iosfwd>
#include <vector>

namespace fracfilt {

// Structured triangulation of one rectangular subdomain.  The nx*ny squares
// are each split along the lower-left to upper-right diagonal; triangles are
// counter-clockwise.  Edges are undirected vertex pairs stored lower index
// first; that fixed ordering also fixes each edge's global normal, so the two
// triangles sharing an edge see opposite signs.
struct SubMesh {
  Rect rect;
  int nx = 0, ny = 0;
  std::vector<Point> vertices;
  std::vector<std::array<int, 3>> tris;
  std::vector<std::array<int, 2>> edges;     // vertex ids, first < second
  std::vector<std::array<int, 3>> tri_edges; // edge ids opposite local vertices
  std::vector<std::array<int, 2>> edge_tris; // adjacent triangles, -1 if none

  int vertex_id(int i, int j) const { return j * (nx + 1) + i; }
  int n_vertices() const { return static_cast<int>(vertices.size()); }
  int n_tris() const { return static_cast<int>(tris.size()); }
  int n_edges() const { return static_cast<int>(edges.size()); }
};

// 1D mesh of one fracture segment plus the pairing between its elements and
// the boundary edges of the two neighboring subdomain meshes.  Node k sits at
// nodes[k] along the segment axis; element k spans nodes k..k+1 and matches
// trace_edges[side][k] on either side.  The pairing is exact: corresponding
// endpoint coordinates are bitwise equal by construction.
struct SegmentMesh {
  int n_el = 0;
  std::vector<double> nodes;
  std::array<std::vector<int>, 2> trace_edges;
};

struct Mesh {
  Geometry geo;
  double h = 0.0;
  std::vector<SubMesh> sub;        // one per geometry cell
  std::vector<SegmentMesh> frac;   // one per geometry segment
};

// Generates conforming structured meshes for all cells and segments.  Throws
// std::invalid_argument when h does not evenly divide every cell extent.
Mesh generate_mesh(const Geometry& g, double h);

// Triangle area and centroid helpers used across assembly and tests.
double tri_area(const SubMesh& sm, int t);
Point tri_centroid(const SubMesh& sm, int t);
double edge_length(const SubMesh& sm, int e);
Point edge_midpoint(const SubMesh& sm, int e);

// Sign of edge e as seen from triangle t: +1 when the edge's fixed global
// normal points out of t.  Pre: e belongs to t.
int edge_sign(const SubMesh& sm, int t, int e);

// Plain-text dump of entity counts, boundary edges, and trace pairing.
void dump_mesh(const Mesh& m, std::ostream& os);

} // namespace fracfilt
