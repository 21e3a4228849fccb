#pragma once

#include "fracfilt/dofs.hpp"
#include "fracfilt/linsolve.hpp"

#include <Eigen/Dense>

#include <functional>
#include <vector>

namespace fracfilt {

// Physical coefficients.  Sources are optional; absent means zero.  The 1D
// source is already integrated across the aperture (per unit length of the
// fracture line).
struct ModelCoefficients {
  double k = 1.0;               // isotropic matrix conductivity
  std::vector<double> k_cell;   // optional per-cell override
  double phi = 1.0;             // matrix storage coefficient
  double phi_f = 1.0;           // fracture storage; the 1D coefficient is width*phi_f
  double k_gamma = 100.0;       // tangential fracture conductivity
  std::function<double(double, double, double)> q2d; // (x, y, t)
  std::function<double(double, double, double)> q1d; // (x, y, t) on the center line

  double cell_k(int c) const { return k_cell.empty() ? k : k_cell.at(c); }
};

// Width-independent pieces of the backward Euler saddle system
//
//   [ A(theta)   -B^T ] [u]   [ g                        ]
//   [ dt B        C   ] [p] = [ C p_prev + dt load(t_n)  ]
//
// with A(theta) = a_base + sum_k theta_k / k_gamma * a_frac[k], theta_k the
// reciprocal width of fracture k.  Flux rows are the discrete Darcy laws (2D
// Raviart-Thomas and 1D nodal), pressure rows the element mass balances, 1D
// rows including the flux picked up from both sides of the trace, and
// junction rows the flux-sum constraints tied to one shared multiplier.
struct SystemBlocks {
  SpMat a_base;
  std::vector<SpMat> a_frac;    // one unscaled tangential mass matrix per fracture
  SpMat b;                      // n_pressure x n_flux
  Eigen::VectorXd c_diag;       // n_pressure; zero on junction rows
  Eigen::VectorXd g;            // n_flux; Dirichlet pressure data
  int n_flux = 0;
  int n_pressure = 0;
};

// Lowest-order Raviart-Thomas basis of the edge opposite local vertex `le` of
// triangle t, at point q, normalized to unit normal flux along the edge's
// fixed global normal.
Point rt0_basis(const SubMesh& sm, int t, int le, const Point& q);

SystemBlocks assemble_blocks(const Mesh& m, const DofLayout& L,
                             const ModelCoefficients& coeffs);

// Element integrals of the sources at time t (pressure block layout; zero on
// junction rows).
Eigen::VectorXd assemble_load(const Mesh& m, const DofLayout& L,
                              const ModelCoefficients& coeffs, double t);

// A(theta); theta has one entry per fracture.
SpMat a_matrix(const SystemBlocks& blocks, const Eigen::VectorXd& theta,
               double k_gamma);

// Full saddle matrix at the given widths and time step.
SpMat lambda_matrix(const SystemBlocks& blocks, double dt,
                    const Eigen::VectorXd& theta, double k_gamma);

} // namespace fracfilt
