#pragma once

#include <array>
#include <vector>

namespace fracfilt {

struct Point {
  double x = 0.0;
  double y = 0.0;
};

struct Rect {
  double x0 = 0.0, y0 = 0.0, x1 = 1.0, y1 = 1.0;
  double width() const { return x1 - x0; }
  double height() const { return y1 - y0; }
};

// Orientation of a fracture center line: vertical means x = const.
enum class Orientation { vertical, horizontal };

// A fracture is an axis-aligned line of small aperture `width` that spans the
// domain from boundary to boundary.  `coord` is the fixed coordinate (x for
// vertical, y for horizontal).
struct Fracture {
  Orientation orient = Orientation::vertical;
  double coord = 0.0;
  double width = 0.0;
};

// End of a fracture segment: either on the domain boundary or at a junction
// where perpendicular fractures cross.
struct SegmentEnd {
  enum class Kind { boundary, junction };
  Kind kind = Kind::boundary;
  int junction = -1;
};

// Piece of a fracture between consecutive junctions (or domain boundary).
// The segment runs from `lo` to `hi` along its fracture's free coordinate;
// ends[0] sits at lo, ends[1] at hi.  Neighbor cell ids follow the convention
// that side 0 has the smaller fixed coordinate (left of a vertical segment,
// below a horizontal one); the stored unit normal points from side 0 to side 1.
struct Segment {
  int fracture = -1;
  double lo = 0.0;
  double hi = 0.0;
  std::array<SegmentEnd, 2> ends;
  std::array<int, 2> neighbor;
};

struct Junction {
  Point pos;
  std::vector<int> segments; // ids of segments meeting here
};

// Arrangement of the domain rectangle cut by spanning fractures.  Cells are
// the open rectangular subdomains, indexed row-major (x fastest).
struct Geometry {
  Rect domain;
  std::vector<Fracture> fractures;
  std::vector<Rect> cells;
  std::vector<Segment> segments;
  std::vector<Junction> junctions;

  // Sorted cut coordinates including the domain bounds.
  std::vector<double> xcuts;
  std::vector<double> ycuts;

  int cell_id(int ix, int iy) const {
    return iy * (static_cast<int>(xcuts.size()) - 1) + ix;
  }
};

// Builds the arrangement.  Throws std::invalid_argument when a fracture has a
// non-positive width, lies on or outside the domain boundary, or duplicates
// another fracture's line.
Geometry build_geometry(const Rect& domain, const std::vector<Fracture>& fractures);

} // namespace fracfilt
