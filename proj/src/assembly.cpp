#include "fracfilt/assembly.hpp"

#include <array>
#include <stdexcept>
#include <vector>

namespace fracfilt {

namespace {

using Triplet = Eigen::Triplet<double>;

std::array<Point, 3> edge_midpoints(const SubMesh& sm, int t) {
  std::array<Point, 3> m;
  for (int k = 0; k < 3; ++k) {
    const Point& a = sm.vertices[sm.tris[t][(k + 1) % 3]];
    const Point& b = sm.vertices[sm.tris[t][(k + 2) % 3]];
    m[k] = {0.5 * (a.x + b.x), 0.5 * (a.y + b.y)};
  }
  return m;
}

} // namespace

Point rt0_basis(const SubMesh& sm, int t, int le, const Point& q) {
  const int e = sm.tri_edges[t][le];
  const Point& opp = sm.vertices[sm.tris[t][le]];
  const double scale =
      edge_sign(sm, t, e) * edge_length(sm, e) / (2.0 * tri_area(sm, t));
  return {scale * (q.x - opp.x), scale * (q.y - opp.y)};
}

SystemBlocks assemble_blocks(const Mesh& m, const DofLayout& L,
                             const ModelCoefficients& coeffs) {
  SystemBlocks out;
  out.n_flux = L.n_flux;
  out.n_pressure = L.n_pressure;
  out.g = Eigen::VectorXd::Zero(L.n_flux);
  out.c_diag = Eigen::VectorXd::Zero(L.n_pressure);

  std::vector<Triplet> ta, tb;
  std::vector<std::vector<Triplet>> tf(m.geo.fractures.size());

  for (std::size_t c = 0; c < m.sub.size(); ++c) {
    const SubMesh& sm = m.sub[c];
    const double kinv = 1.0 / coeffs.cell_k(static_cast<int>(c));
    for (int t = 0; t < sm.n_tris(); ++t) {
      const double area = tri_area(sm, t);
      const auto mids = edge_midpoints(sm, t);
      const int p_row = L.cell_p_offset[c] + t;
      out.c_diag[p_row] = coeffs.phi * area;
      for (int a = 0; a < 3; ++a) {
        const int ea = sm.tri_edges[t][a];
        const int da = L.edge_dof[c][ea];
        const double div_a = edge_sign(sm, t, ea) * edge_length(sm, ea);
        if (da >= 0) tb.emplace_back(p_row, da, div_a);
        if (da < 0) continue;
        // velocity mass by the midpoint rule, exact for quadratics
        for (int bq = 0; bq < 3; ++bq) {
          const int db = L.edge_dof[c][sm.tri_edges[t][bq]];
          if (db < 0) continue;
          double v = 0.0;
          for (const Point& q : mids) {
            const Point pa = rt0_basis(sm, t, a, q);
            const Point pb = rt0_basis(sm, t, bq, q);
            v += pa.x * pb.x + pa.y * pb.y;
          }
          ta.emplace_back(da, db, kinv * area / 3.0 * v);
        }
      }
    }
    // Dirichlet pressure data on outer boundary edges
    for (int e = 0; e < sm.n_edges(); ++e) {
      if (L.edge_kind[c][e] != EdgeKind::pressure) continue;
      const int dof = L.edge_dof[c][e];
      const int t0 = sm.edge_tris[e][0];
      out.g[dof] -= L.edge_value[c][e] * edge_length(sm, e) * edge_sign(sm, t0, e);
    }
  }

  for (std::size_t s = 0; s < m.frac.size(); ++s) {
    const Segment& seg = m.geo.segments[s];
    const SegmentMesh& fm = m.frac[s];
    const double width = m.geo.fractures[seg.fracture].width;

    for (int el = 0; el < fm.n_el; ++el) {
      const double len = fm.nodes[el + 1] - fm.nodes[el];
      const int p_row = L.seg_p_offset[s] + el;
      out.c_diag[p_row] = width * coeffs.phi_f * len;
      const int dlo = L.node_dof[s][el], dhi = L.node_dof[s][el + 1];
      // tangential velocity mass, unscaled; the 1/(k_gamma*width) factor is
      // applied via theta when the system matrix is formed
      auto& tfk = tf[seg.fracture];
      if (dlo >= 0) tfk.emplace_back(dlo, dlo, len / 3.0);
      if (dhi >= 0) tfk.emplace_back(dhi, dhi, len / 3.0);
      if (dlo >= 0 && dhi >= 0) {
        tfk.emplace_back(dlo, dhi, len / 6.0);
        tfk.emplace_back(dhi, dlo, len / 6.0);
      }
      // 1D divergence: outflow at the high node minus inflow at the low node
      if (dlo >= 0) tb.emplace_back(p_row, dlo, -1.0);
      if (dhi >= 0) tb.emplace_back(p_row, dhi, 1.0);
      // flux picked up from the neighboring subdomains along the trace
      for (int side = 0; side < 2; ++side) {
        const int cell = seg.neighbor[side];
        const SubMesh& sm = m.sub[cell];
        const int e = fm.trace_edges[side][el];
        const int dof = L.edge_dof[cell][e];
        const int sign = edge_sign(sm, sm.edge_tris[e][0], e);
        tb.emplace_back(p_row, dof, -sign * edge_length(sm, e));
      }
    }

    for (int end = 0; end < 2; ++end) {
      const SegmentEndDof& ed = L.seg_end[s][end];
      const int dof = L.node_dof[s][end == 0 ? 0 : fm.n_el];
      if (ed.kind == SegmentEndDof::Kind::pressure) {
        out.g[dof] += end == 0 ? ed.value : -ed.value;
      } else if (ed.kind == SegmentEndDof::Kind::junction) {
        // One multiplier per junction: its column carries the end pressure
        // into the Darcy rows, its row enforces the signed flux sum.
        const int jrow = L.junction_p[m.geo.segments[s].ends[end].junction];
        tb.emplace_back(jrow, dof, end == 0 ? 1.0 : -1.0);
      }
    }
  }

  out.a_base.resize(L.n_flux, L.n_flux);
  out.a_base.setFromTriplets(ta.begin(), ta.end());
  out.b.resize(L.n_pressure, L.n_flux);
  out.b.setFromTriplets(tb.begin(), tb.end());
  out.a_frac.resize(m.geo.fractures.size());
  for (std::size_t f = 0; f < tf.size(); ++f) {
    out.a_frac[f].resize(L.n_flux, L.n_flux);
    out.a_frac[f].setFromTriplets(tf[f].begin(), tf[f].end());
  }
  return out;
}

Eigen::VectorXd assemble_load(const Mesh& m, const DofLayout& L,
                              const ModelCoefficients& coeffs, double t) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(L.n_pressure);
  if (coeffs.q2d)
    for (std::size_t c = 0; c < m.sub.size(); ++c) {
      const SubMesh& sm = m.sub[c];
      for (int tri = 0; tri < sm.n_tris(); ++tri) {
        const auto mids = edge_midpoints(sm, tri);
        double v = 0.0;
        for (const Point& q : mids) v += coeffs.q2d(q.x, q.y, t);
        load[L.cell_p_offset[c] + tri] = tri_area(sm, tri) / 3.0 * v;
      }
    }
  if (coeffs.q1d)
    for (std::size_t s = 0; s < m.frac.size(); ++s) {
      const Segment& seg = m.geo.segments[s];
      const Fracture& f = m.geo.fractures[seg.fracture];
      const bool vert = f.orient == Orientation::vertical;
      const SegmentMesh& fm = m.frac[s];
      for (int el = 0; el < fm.n_el; ++el) {
        const double z0 = fm.nodes[el], z1 = fm.nodes[el + 1];
        const double len = z1 - z0, mid = 0.5 * (z0 + z1);
        const double off = 0.5 * len / 1.7320508075688772935; // 2-point Gauss
        double v = 0.0;
        for (double z : {mid - off, mid + off})
          v += vert ? coeffs.q1d(f.coord, z, t) : coeffs.q1d(z, f.coord, t);
        load[L.seg_p_offset[s] + el] = 0.5 * len * v;
      }
    }
  return load;
}

SpMat a_matrix(const SystemBlocks& blocks, const Eigen::VectorXd& theta,
               double k_gamma) {
  if (theta.size() != static_cast<Eigen::Index>(blocks.a_frac.size()))
    throw std::invalid_argument("assembly: theta size must match fracture count");
  SpMat a = blocks.a_base;
  for (Eigen::Index k = 0; k < theta.size(); ++k) {
    if (!(theta[k] > 0.0))
      throw std::invalid_argument("assembly: theta must be positive");
    a += (theta[k] / k_gamma) * blocks.a_frac[k];
  }
  return a;
}

SpMat lambda_matrix(const SystemBlocks& blocks, double dt,
                    const Eigen::VectorXd& theta, double k_gamma) {
  const SpMat a = a_matrix(blocks, theta, k_gamma);
  const int nf = blocks.n_flux, np = blocks.n_pressure;
  std::vector<Triplet> tl;
  tl.reserve(a.nonZeros() + 2 * blocks.b.nonZeros() + np);
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      tl.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                      it.value());
  for (int k = 0; k < blocks.b.outerSize(); ++k)
    for (SpMat::InnerIterator it(blocks.b, k); it; ++it) {
      const int r = static_cast<int>(it.row()), c = static_cast<int>(it.col());
      tl.emplace_back(nf + r, c, dt * it.value());
      tl.emplace_back(c, nf + r, -it.value());
    }
  for (int i = 0; i < np; ++i)
    if (blocks.c_diag[i] != 0.0) tl.emplace_back(nf + i, nf + i, blocks.c_diag[i]);
  SpMat lam(nf + np, nf + np);
  lam.setFromTriplets(tl.begin(), tl.end());
  return lam;
}

} // namespace fracfilt
