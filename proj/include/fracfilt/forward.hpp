#pragma once

#include "fracfilt/assembly.hpp"

#include <functional>
#include <vector>

namespace fracfilt {

// State vector layout: [flux (n_flux); pressure (n_pressure)].
// Pressure sub-blocks follow the DofLayout order: 2D elements, 1D elements,
// junction multipliers.

// Initial state with element pressures sampled at 2D centroids and 1D element
// midpoints; fluxes and multipliers start at zero (the first step never reads
// them).
Eigen::VectorXd initial_state(const Mesh& m, const DofLayout& L,
                              const std::function<double(double, double)>& p0);

// Backward Euler system at fixed widths, factorized once.
class BlockSystem {
 public:
  BlockSystem(const SystemBlocks& blocks, double dt, const Eigen::VectorXd& theta,
              double k_gamma);

  Eigen::VectorXd rhs(const Eigen::VectorXd& prev, const Eigen::VectorXd& load) const;
  // Solves Lambda x = rhs(prev, load) with a residual check (1e-10 relative).
  Eigen::VectorXd step(const Eigen::VectorXd& prev, const Eigen::VectorXd& load) const;
  const SpMat& matrix() const { return lambda_; }

 private:
  const SystemBlocks* blocks_;
  double dt_;
  SpMat lambda_;
  SparseLuSolver lu_;
};

// Runs n_steps of backward Euler; load_at(n) supplies the source integrals at
// t_n for step n (1-based).  on_step(n, x) observes each new state.
Eigen::VectorXd
simulate(const BlockSystem& sys, const Eigen::VectorXd& x0, int n_steps,
         const std::function<Eigen::VectorXd(int)>& load_at,
         const std::function<void(int, const Eigen::VectorXd&)>& on_step);

// Per-step conservation diagnostics evaluated from two consecutive states.
struct StepResiduals {
  double mass_rel = 0.0;      // mass-balance rows, relative to their term sizes
  double junction_rel = 0.0;  // worst junction flux-sum relative to total turnover
};
StepResiduals step_residuals(const SystemBlocks& blocks, const DofLayout& L,
                             double dt, const Eigen::VectorXd& prev,
                             const Eigen::VectorXd& next,
                             const Eigen::VectorXd& load);

// Forward map for many widths against one reference factorization.  The width
// parameter only enters the small tangential-velocity block, so Lambda(theta)
// differs from Lambda(theta0) by P * Delta(theta) * P^T with P selecting the
// fracture velocity nodes (rank r = their count).  Each solve is then the
// reference solve corrected through an r x r capacitance system; the result
// is exact up to round-off and is verified against the assembled operator
// whenever a full state is formed.
class LowRankStepper {
 public:
  LowRankStepper(const SystemBlocks& blocks, double dt,
                 const Eigen::VectorXd& theta0, double k_gamma,
                 std::vector<int> obs_dofs);

  // Shared per-step work: one solve of the reference system.
  void set_rhs(const Eigen::VectorXd& prev, const Eigen::VectorXd& load);

  // Observation coordinates of the next state at the given widths, using the
  // rhs fixed by set_rhs.  Cost is O(r^2) plus one r x r solve per call.
  Eigen::VectorXd predict_obs(const Eigen::VectorXd& theta) const;

  // Full next state at the given widths, with a residual check against the
  // exact operator (one refinement pass, then abort).
  Eigen::VectorXd advance(const Eigen::VectorXd& theta) const;

  int rank() const { return static_cast<int>(pdofs_.size()); }

 private:
  Eigen::MatrixXd delta(const Eigen::VectorXd& theta) const;
  Eigen::VectorXd correction(const Eigen::VectorXd& theta) const; // z with x = y - W z

  const SystemBlocks* blocks_;
  double dt_;
  Eigen::VectorXd theta0_;
  double k_gamma_;
  std::vector<int> pdofs_;                 // global dof per low-rank column
  std::vector<std::pair<int, int>> frange_; // column range per fracture
  std::vector<Eigen::MatrixXd> fmass_;     // dense per-fracture tangential mass
  std::vector<int> obs_dofs_;
  SpMat lambda0_;
  SparseLuSolver lu_;
  Eigen::MatrixXd w_;   // Lambda0^{-1} P
  Eigen::MatrixXd s_;   // P^T W
  Eigen::MatrixXd hw_;  // observation rows of W
  // per-rhs caches
  Eigen::VectorXd b_, y_, py_, hy_;
};

} // namespace fracfilt
