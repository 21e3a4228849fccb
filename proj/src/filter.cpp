#include "fracfilt/filter.hpp"

#include "fracfilt/rng.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

namespace fracfilt {

namespace {

// Stream ids for the independent draw families.
constexpr std::uint64_t kInitStream = 0x696e6974;
constexpr std::uint64_t kPredictStream = 0x70726564;
constexpr std::uint64_t kResampleStream = 0x72657361;

void check_config(const FilterConfig& cfg) {
  const auto p = cfg.prior_lo.size();
  if (cfg.m < 1) throw std::invalid_argument("filter: need at least one particle");
  if (p < 1 || cfg.prior_hi.size() != p || cfg.eps_var.size() != p)
    throw std::invalid_argument("filter: prior and noise sizes disagree");
  for (Eigen::Index k = 0; k < p; ++k) {
    if (!(cfg.prior_lo[k] < cfg.prior_hi[k]))
      throw std::invalid_argument("filter: empty prior range");
    if (!(cfg.eps_var[k] >= 0.0))
      throw std::invalid_argument("filter: negative exploration variance");
  }
  if ((cfg.r_var.array() <= 0.0).any())
    throw std::invalid_argument("filter: observation variance must be positive");
}

void parallel_particles(int m, int threads, const std::function<void(int)>& body) {
  if (threads <= 1) {
    for (int i = 0; i < m; ++i) body(i);
    return;
  }
  std::vector<std::thread> pool;
  const int nt = std::min(threads, m);
  for (int t = 0; t < nt; ++t)
    pool.emplace_back([&, t] {
      for (int i = t; i < m; i += nt) body(i);
    });
  for (auto& th : pool) th.join();
}

} // namespace

Eigen::MatrixXd init_ensemble(const FilterConfig& cfg) {
  check_config(cfg);
  const auto p = cfg.prior_lo.size();
  Eigen::MatrixXd ens(p, cfg.m);
  for (int m = 0; m < cfg.m; ++m)
    for (Eigen::Index k = 0; k < p; ++k) {
      const double u = uniform01(cfg.seed, kInitStream, m * p + k);
      ens(k, m) = cfg.prior_lo[k] + u * (cfg.prior_hi[k] - cfg.prior_lo[k]);
    }
  return ens;
}

void predict_inplace(Eigen::MatrixXd& ens, const FilterConfig& cfg, int step) {
  const auto p = ens.rows();
  const std::uint64_t stream = splitmix64(kPredictStream ^ step);
  for (int m = 0; m < ens.cols(); ++m)
    for (Eigen::Index k = 0; k < p; ++k) {
      double x = ens(k, m) +
                 std::sqrt(cfg.eps_var[k]) * normal01(cfg.seed, stream, m * p + k);
      if (x < cfg.theta_floor) x = 2.0 * cfg.theta_floor - x;
      ens(k, m) = x;
    }
}

double log_likelihood(const Eigen::VectorXd& predicted, const Eigen::VectorXd& y,
                      const Eigen::VectorXd& r_var) {
  if (predicted.size() != y.size() || r_var.size() != y.size())
    throw std::invalid_argument("filter: observation size mismatch");
  const Eigen::VectorXd diff = predicted - y;
  return -0.5 * (diff.array().square() / r_var.array()).sum();
}

double likelihood(const Eigen::VectorXd& predicted, const Eigen::VectorXd& y,
                  const Eigen::VectorXd& r_var) {
  return std::exp(log_likelihood(predicted, y, r_var));
}

Eigen::VectorXd normalize_weights(const Eigen::VectorXd& w) {
  if (!w.allFinite())
    throw FilterDivergence("filter: non-finite particle weights");
  if ((w.array() < 0.0).any())
    throw std::invalid_argument("filter: negative weight");
  const double sum = w.sum();
  if (sum <= 0.0)
    throw FilterDivergence(
        "filter: all particle weights vanished; increase the observation "
        "variance or the exploration noise");
  return w / sum;
}

Eigen::MatrixXd resample(const Eigen::MatrixXd& ens, const Eigen::VectorXd& w,
                         std::uint64_t seed, int step) {
  if (w.size() != ens.cols())
    throw std::invalid_argument("filter: weight count mismatch");
  Eigen::VectorXd cum(w.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < w.size(); ++i) cum[i] = acc += w[i];
  cum[w.size() - 1] = 1.0; // guard against round-off at the top
  const std::uint64_t stream = splitmix64(kResampleStream ^ step);
  Eigen::MatrixXd out(ens.rows(), ens.cols());
  for (int m = 0; m < ens.cols(); ++m) {
    const double u = uniform01(seed, stream, m);
    const double* begin = cum.data();
    const Eigen::Index pick =
        std::upper_bound(begin, begin + cum.size(), u) - begin;
    out.col(m) = ens.col(std::min(pick, cum.size() - 1));
  }
  return out;
}

EstimateTrace run_filter(const FilterHooks& hooks, const Eigen::MatrixXd& y,
                         const FilterConfig& cfg) {
  check_config(cfg);
  const auto p = cfg.prior_lo.size();
  const int n_steps = static_cast<int>(y.rows());
  if (cfg.r_var.size() != y.cols())
    throw std::invalid_argument("filter: r_var must match observation width");

  Eigen::MatrixXd ens = init_ensemble(cfg);
  EstimateTrace tr;
  tr.theta_mean.resize(n_steps, p);
  tr.theta_std.resize(n_steps, p);
  tr.theta_avg.resize(n_steps, p);

  for (int n = 1; n <= n_steps; ++n) {
    if (hooks.begin_step) hooks.begin_step(n);
    predict_inplace(ens, cfg, n);

    Eigen::VectorXd logw(cfg.m);
    const Eigen::VectorXd obs = y.row(n - 1);
    parallel_particles(cfg.m, cfg.threads, [&](int m) {
      logw[m] = log_likelihood(hooks.predict_obs(ens.col(m)), obs, cfg.r_var);
    });
    const double shift = logw.maxCoeff();
    Eigen::VectorXd w = (logw.array() - shift).exp();
    w = normalize_weights(w);

    ens = resample(ens, w, cfg.seed, n);

    const Eigen::VectorXd mean = ens.rowwise().mean();
    tr.theta_mean.row(n - 1) = mean;
    for (Eigen::Index k = 0; k < p; ++k)
      tr.theta_std(n - 1, k) =
          std::sqrt((ens.row(k).array() - mean[k]).square().mean());
    const int start = std::min(cfg.burn_in, n); // 1-based step index
    tr.theta_avg.row(n - 1) =
        tr.theta_mean.block(start - 1, 0, n - start + 1, p).colwise().mean();

    if (hooks.end_step) hooks.end_step(n, mean);
  }
  tr.width_step = tr.theta_mean.cwiseInverse();
  tr.width_avg = tr.theta_avg.cwiseInverse();
  return tr;
}

} // namespace fracfilt
