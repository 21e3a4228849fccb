#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <functional>
#include <stdexcept>

namespace fracfilt {

// All weights vanished or turned non-finite; the observation noise or the
// exploration noise is too small for the data.
class FilterDivergence : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FilterConfig {
  int m = 80;                   // particle count
  Eigen::VectorXd eps_var;      // exploration noise variance per component
  Eigen::VectorXd r_var;        // observation noise variance per coordinate
  Eigen::VectorXd prior_lo;     // uniform initial range per component
  Eigen::VectorXd prior_hi;
  double theta_floor = 1.0;     // particles reflect off this lower bound
  int burn_in = 10;             // first step entering the running average
  std::uint64_t seed = 1;
  int threads = 1;
};

// Per-step estimates, one row per assimilation step.  theta_mean/theta_std
// are the post-resample ensemble moments, theta_avg the running average of
// theta_mean from the burn-in step on, and the width columns are elementwise
// reciprocals of the corresponding theta columns.
struct EstimateTrace {
  Eigen::MatrixXd theta_mean, theta_std, theta_avg;
  Eigen::MatrixXd width_step, width_avg;
};

// Ensembles are p x M matrices, one particle per column.
Eigen::MatrixXd init_ensemble(const FilterConfig& cfg);

// Adds exploration noise and reflects at the floor.  step keys the draws, so
// a rerun with the same seed reproduces them under any thread count.
void predict_inplace(Eigen::MatrixXd& ens, const FilterConfig& cfg, int step);

// exp(-0.5 * (pred - y)^T R^{-1} (pred - y)); in (0, 1], 1 iff pred == y.
double likelihood(const Eigen::VectorXd& predicted, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& r_var);
double log_likelihood(const Eigen::VectorXd& predicted, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& r_var);

// Normalizes to sum 1; throws FilterDivergence when the weights sum to zero
// or contain non-finite values.
Eigen::VectorXd normalize_weights(const Eigen::VectorXd& w);

// Multinomial resampling with replacement; returns the resampled ensemble.
Eigen::MatrixXd resample(const Eigen::MatrixXd& ens, const Eigen::VectorXd& w,
                         std::uint64_t seed, int step);

// Model plumbing for one assimilation pass.  begin_step(n) fixes the shared
// forward context for step n (1-based), predict_obs maps one particle to its
// predicted observation, end_step commits the post-resample mean parameter.
struct FilterHooks {
  std::function<void(int)> begin_step;
  std::function<Eigen::VectorXd(const Eigen::VectorXd&)> predict_obs;
  std::function<void(int, const Eigen::VectorXd&)> end_step;
};

// Runs the filter over observations y (row n-1 is the step-n observation).
// Weights are formed in log space and shifted by their maximum before
// exponentiation, so divergence is reported only for genuinely non-finite
// likelihoods, not for uniformly small ones.
EstimateTrace run_filter(const FilterHooks& hooks, const Eigen::MatrixXd& y,
                         const FilterConfig& cfg);

} // namespace fracfilt
