#pragma once

#include "fracfilt/mesh.hpp"

#include <array>
#include <vector>

namespace fracfilt {

// One Dirichlet pressure piece on the outer boundary: the part of the line
// (x = coord for vertical, y = coord for horizontal) with the free coordinate
// in [lo, hi].  Boundary not covered by any piece is no-flow.
struct PressureBc {
  Orientation line = Orientation::vertical;
  double coord = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double value = 0.0;
};

// Condition at one outer end of a fracture: either a prescribed pressure at
// the tip or a sealed tip (zero tangential flux).
struct FractureEndBc {
  bool dirichlet = false;
  double value = 0.0;
};

struct BoundaryConditions {
  std::vector<PressureBc> pressure;
  // ends[f][0] applies at fracture f's low-coordinate boundary end, ends[f][1]
  // at the high end; entries at junction ends are ignored.
  std::vector<std::array<FractureEndBc, 2>> fracture_ends;
};

enum class EdgeKind : unsigned char { interior, trace, pressure, noflow };

struct SegmentEndDof {
  enum class Kind : unsigned char { interior, junction, pressure, noflow };
  Kind kind = Kind::interior;
  double value = 0.0; // pressure value when kind == pressure
};

// Global unknown numbering.  Flux unknowns come first (2D edge fluxes cell by
// cell, then 1D node fluxes segment by segment); pressure unknowns follow (2D
// element pressures, 1D element pressures, then one multiplier per junction).
// No-flow fluxes are eliminated and get index -1.
struct DofLayout {
  // flux part
  std::vector<std::vector<int>> edge_dof;   // [cell][edge] -> dof or -1
  std::vector<std::vector<int>> node_dof;   // [segment][node] -> dof or -1
  int n_flux = 0;

  // pressure part (indices are offsets within the pressure block)
  std::vector<int> cell_p_offset;           // [cell] -> first element pressure
  std::vector<int> seg_p_offset;            // [segment] -> first element pressure
  std::vector<int> junction_p;              // [junction] -> multiplier index
  int n_pressure = 0;

  // boundary classification used by assembly
  std::vector<std::vector<EdgeKind>> edge_kind;    // [cell][edge]
  std::vector<std::vector<double>> edge_value;     // Dirichlet value per edge
  std::vector<std::array<SegmentEndDof, 2>> seg_end; // [segment][lo/hi]

  int size() const { return n_flux + n_pressure; }
  int pressure_dof(int local) const { return n_flux + local; }
};

// Classifies every boundary entity against the conditions and numbers the
// unknowns.  Throws std::invalid_argument when a pressure piece does not lie
// on the outer boundary, two pieces overlap with different values, or
// fracture_ends is not sized to the fracture count.
DofLayout build_dof_layout(const Mesh& m, const BoundaryConditions& bc);

} // namespace fracfilt
