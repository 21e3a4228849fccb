#include "fracfilt/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace fracfilt {

namespace {

// Cut coordinates along one axis: domain bounds plus fracture lines.
std::vector<double> make_cuts(double lo, double hi, const std::vector<double>& lines) {
  std::vector<double> cuts;
  cuts.push_back(lo);
  cuts.insert(cuts.end(), lines.begin(), lines.end());
  cuts.push_back(hi);
  std::sort(cuts.begin(), cuts.end());
  return cuts;
}

} // namespace

Geometry build_geometry(const Rect& domain, const std::vector<Fracture>& fractures) {
  if (!(domain.x0 < domain.x1) || !(domain.y0 < domain.y1))
    throw std::invalid_argument("geometry: domain rectangle is degenerate");

  std::vector<double> vlines, hlines;
  for (std::size_t i = 0; i < fractures.size(); ++i) {
    const Fracture& f = fractures[i];
    if (!(f.width > 0.0))
      throw std::invalid_argument("geometry: fracture " + std::to_string(i) +
                                  " has non-positive width");
    const bool vert = f.orient == Orientation::vertical;
    const double lo = vert ? domain.x0 : domain.y0;
    const double hi = vert ? domain.x1 : domain.y1;
    if (!(f.coord > lo && f.coord < hi))
      throw std::invalid_argument("geometry: fracture " + std::to_string(i) +
                                  " line lies outside the domain interior");
    (vert ? vlines : hlines).push_back(f.coord);
  }
  auto has_dup = [](std::vector<double> v) {
    std::sort(v.begin(), v.end());
    return std::adjacent_find(v.begin(), v.end()) != v.end();
  };
  if (has_dup(vlines) || has_dup(hlines))
    throw std::invalid_argument("geometry: coincident fracture lines");

  Geometry g;
  g.domain = domain;
  g.fractures = fractures;
  g.xcuts = make_cuts(domain.x0, domain.x1, vlines);
  g.ycuts = make_cuts(domain.y0, domain.y1, hlines);

  const int nx = static_cast<int>(g.xcuts.size()) - 1;
  const int ny = static_cast<int>(g.ycuts.size()) - 1;
  for (int iy = 0; iy < ny; ++iy)
    for (int ix = 0; ix < nx; ++ix)
      g.cells.push_back({g.xcuts[ix], g.ycuts[iy], g.xcuts[ix + 1], g.ycuts[iy + 1]});

  // Junctions exist wherever a vertical and a horizontal line cross.
  auto cut_index = [](const std::vector<double>& cuts, double c) {
    auto it = std::find(cuts.begin(), cuts.end(), c);
    return static_cast<int>(it - cuts.begin());
  };
  std::sort(vlines.begin(), vlines.end());
  std::sort(hlines.begin(), hlines.end());
  for (double xc : vlines)
    for (double yc : hlines)
      g.junctions.push_back({Point{xc, yc}, {}});
  auto junction_at = [&](double x, double y) {
    for (std::size_t j = 0; j < g.junctions.size(); ++j)
      if (g.junctions[j].pos.x == x && g.junctions[j].pos.y == y)
        return static_cast<int>(j);
    return -1;
  };

  // Split each fracture into segments at the perpendicular cut lines.
  for (std::size_t fi = 0; fi < fractures.size(); ++fi) {
    const Fracture& f = fractures[fi];
    const bool vert = f.orient == Orientation::vertical;
    const std::vector<double>& along = vert ? g.ycuts : g.xcuts;
    const int fixed = vert ? cut_index(g.xcuts, f.coord) : cut_index(g.ycuts, f.coord);
    for (std::size_t s = 0; s + 1 < along.size(); ++s) {
      Segment seg;
      seg.fracture = static_cast<int>(fi);
      seg.lo = along[s];
      seg.hi = along[s + 1];
      for (int e = 0; e < 2; ++e) {
        const double at = e == 0 ? seg.lo : seg.hi;
        const int j = vert ? junction_at(f.coord, at) : junction_at(at, f.coord);
        if (j >= 0)
          seg.ends[e] = {SegmentEnd::Kind::junction, j};
        else
          seg.ends[e] = {SegmentEnd::Kind::boundary, -1};
      }
      const int row = static_cast<int>(s);
      if (vert)
        seg.neighbor = {g.cell_id(fixed - 1, row), g.cell_id(fixed, row)};
      else
        seg.neighbor = {g.cell_id(row, fixed - 1), g.cell_id(row, fixed)};
      const int sid = static_cast<int>(g.segments.size());
      for (int e = 0; e < 2; ++e)
        if (seg.ends[e].kind == SegmentEnd::Kind::junction)
          g.junctions[seg.ends[e].junction].segments.push_back(sid);
      g.segments.push_back(seg);
    }
  }
  return g;
}

} // namespace fracfilt
