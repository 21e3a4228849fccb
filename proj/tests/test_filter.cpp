#include "fracfilt/filter.hpp"

#include "fracfilt/rng.hpp"
#include "oracles.hpp"
#include "toy_model.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace fracfilt;
using toy::GridPosterior;
using toy::ToyModel;
using toy::toy_config;

namespace {

Eigen::VectorXd vec1(double v) {
  Eigen::VectorXd x(1);
  x << v;
  return x;
}

} // namespace

TEST_SUITE("filter") {

TEST_CASE("initial ensemble fills the prior box") {
  FilterConfig cfg = toy_config(20000);
  cfg.prior_lo = vec1(400.0);
  cfg.prior_hi = vec1(1600.0);
  const Eigen::MatrixXd ens = init_ensemble(cfg);
  CHECK(ens.rows() == 1);
  CHECK(ens.cols() == 20000);
  CHECK(ens.minCoeff() >= 400.0);
  CHECK(ens.maxCoeff() <= 1600.0);
  const double width = 1200.0;
  const double sd_mean = width / std::sqrt(12.0 * 20000.0);
  CHECK(std::abs(ens.mean() - 1000.0) <= 3.0 * sd_mean);
  // same seed reproduces the draw exactly
  CHECK((init_ensemble(cfg) - ens).norm() == 0.0);
}

TEST_CASE("config validation") {
  FilterConfig cfg = toy_config(10);
  cfg.m = 0;
  CHECK_THROWS_AS(init_ensemble(cfg), std::invalid_argument);
  cfg = toy_config(10);
  cfg.prior_hi = vec1(0.5);
  CHECK_THROWS_AS(init_ensemble(cfg), std::invalid_argument);
  cfg = toy_config(10);
  cfg.eps_var = vec1(-1.0);
  CHECK_THROWS_AS(init_ensemble(cfg), std::invalid_argument);
  cfg = toy_config(10);
  cfg.r_var = vec1(0.0);
  CHECK_THROWS_AS(init_ensemble(cfg), std::invalid_argument);
}

TEST_CASE("prediction adds the configured noise and reflects at the floor") {
  FilterConfig cfg = toy_config(50000);
  cfg.eps_var = vec1(4.0);
  cfg.theta_floor = -1e9; // keep the pure random walk for the moment check
  Eigen::MatrixXd ens = Eigen::MatrixXd::Constant(1, cfg.m, 7.0);
  Eigen::MatrixXd again = ens;
  predict_inplace(ens, cfg, 3);
  predict_inplace(again, cfg, 3);
  CHECK((ens - again).norm() == 0.0); // keyed draws are reproducible
  const double mean = ens.mean();
  const double var = (ens.array() - mean).square().mean();
  CHECK(std::abs(mean - 7.0) <= 3.0 * 2.0 / std::sqrt(50000.0));
  CHECK(std::abs(var - 4.0) <= 0.1);

  // with a floor just below the start, every excursion below it must fold back
  cfg.theta_floor = 6.5;
  Eigen::MatrixXd low = Eigen::MatrixXd::Constant(1, cfg.m, 7.0);
  predict_inplace(low, cfg, 3);
  CHECK(low.minCoeff() >= 6.5);
  // reflection is a fold of the unconstrained draw
  int folded = 0;
  for (int m = 0; m < cfg.m; ++m) {
    if (ens(0, m) < 6.5) {
      CHECK(low(0, m) == 2.0 * 6.5 - ens(0, m));
      ++folded;
    } else {
      CHECK(low(0, m) == ens(0, m));
    }
  }
  CHECK(folded > 1000); // the fold actually triggered en masse
}

TEST_CASE("likelihood matches the quadratic form") {
  Eigen::VectorXd pred(2), y(2), r(2);
  pred << 1.0, 2.0;
  y << 1.5, 1.0;
  r << 0.25, 4.0;
  CHECK(log_likelihood(pred, y, r) == doctest::Approx(-0.625).epsilon(1e-14));
  CHECK(likelihood(pred, y, r) ==
        doctest::Approx(std::exp(-0.625)).epsilon(1e-14));
  CHECK(likelihood(y, y, r) == 1.0);
  Eigen::VectorXd short_r(1);
  short_r << 1.0;
  CHECK_THROWS_AS(likelihood(pred, y, short_r), std::invalid_argument);
}

TEST_CASE("weight normalization and its failure modes") {
  Eigen::VectorXd w(3);
  w << 1.0, 3.0, 0.0;
  const Eigen::VectorXd nw = normalize_weights(w);
  CHECK(nw[0] == doctest::Approx(0.25).epsilon(1e-14));
  CHECK(nw[1] == doctest::Approx(0.75).epsilon(1e-14));
  CHECK(std::abs(nw.sum() - 1.0) <= 1e-12);

  Eigen::VectorXd zero = Eigen::VectorXd::Zero(4);
  CHECK_THROWS_AS(normalize_weights(zero), FilterDivergence);
  Eigen::VectorXd bad(2);
  bad << 1.0, std::nan("");
  CHECK_THROWS_AS(normalize_weights(bad), FilterDivergence);
  Eigen::VectorXd neg(2);
  neg << 1.0, -0.5;
  CHECK_THROWS_AS(normalize_weights(neg), std::invalid_argument);
}

TEST_CASE("resampling draws particles in proportion to their weights") {
  const int m = 6000;
  Eigen::MatrixXd ens(1, m);
  Eigen::VectorXd w(m);
  for (int k = 0; k < m; ++k) {
    const int v = k < 3000 ? 0 : k < 4800 ? 1 : 2;
    ens(0, k) = v;
    w[k] = v == 0 ? 0.5 / 3000 : v == 1 ? 0.3 / 1800 : 0.2 / 1200;
  }
  const Eigen::MatrixXd out = resample(ens, w, 31, 4);
  int count[3] = {0, 0, 0};
  for (int k = 0; k < m; ++k) ++count[static_cast<int>(out(0, k))];
  const double probs[3] = {0.5, 0.3, 0.2};
  for (int v = 0; v < 3; ++v) {
    const double sd = std::sqrt(m * probs[v] * (1.0 - probs[v]));
    CHECK(std::abs(count[v] - m * probs[v]) <= 3.0 * sd);
  }
  // keyed by seed and step
  CHECK((resample(ens, w, 31, 4) - out).norm() == 0.0);
  CHECK((resample(ens, w, 31, 5) - out).norm() != 0.0);
  Eigen::VectorXd wrong(3);
  wrong << 0.5, 0.3, 0.2;
  CHECK_THROWS_AS(resample(ens, wrong, 31, 4), std::invalid_argument);
}

TEST_CASE("filter posterior matches the dense-grid reference") {
  const ToyModel toy;
  const FilterConfig cfg = toy_config(10000);
  const GridPosterior exact(toy, cfg, 3501);

  // manual pass with the published primitives, mirroring run_filter
  Eigen::MatrixXd ens = init_ensemble(cfg);
  Eigen::MatrixXd mean_trace(toy.n_steps, 1);
  for (int n = 1; n <= toy.n_steps; ++n) {
    predict_inplace(ens, cfg, n);
    Eigen::VectorXd logw(cfg.m);
    for (int m = 0; m < cfg.m; ++m)
      logw[m] = log_likelihood(vec1(ens(0, m) + 0.5 * toy.obs[n - 1]),
                               vec1(toy.obs[n]), cfg.r_var);
    Eigen::VectorXd w = (logw.array() - logw.maxCoeff()).exp();
    w = normalize_weights(w);
    ens = resample(ens, w, cfg.seed, n);
    mean_trace.row(n - 1) = ens.rowwise().mean();
  }

  const double mu_exact = exact.mean();
  const double mu_filter = ens.mean();
  CHECK(std::abs(mu_filter - mu_exact) <= 0.02 * std::abs(mu_exact));

  std::vector<double> sample(ens.data(), ens.data() + cfg.m);
  const double ks =
      oracle::ks_distance(sample, [&](double x) { return exact.cdf(x); });
  CHECK(ks <= 0.05);

  // the packaged loop reproduces the manual pass bitwise
  int prev_step = 0;
  double lifted = toy.obs[0];
  FilterHooks hooks;
  hooks.begin_step = [&](int n) {
    CHECK(n == prev_step + 1);
    prev_step = n;
    lifted = toy.obs[n - 1];
  };
  hooks.predict_obs = [&](const Eigen::VectorXd& th) {
    return vec1(th[0] + 0.5 * lifted);
  };
  const EstimateTrace tr = run_filter(hooks, toy.y_matrix(), cfg);
  CHECK((tr.theta_mean - mean_trace).norm() == 0.0);
}

TEST_CASE("estimate trace bookkeeping") {
  const ToyModel toy;
  FilterConfig cfg = toy_config(200);
  cfg.burn_in = 5;
  double heard = 0.0;
  FilterHooks hooks;
  double lifted = toy.obs[0];
  hooks.begin_step = [&](int n) { lifted = toy.obs[n - 1]; };
  hooks.predict_obs = [&](const Eigen::VectorXd& th) {
    return vec1(th[0] + 0.5 * lifted);
  };
  hooks.end_step = [&](int n, const Eigen::VectorXd& mean) {
    if (n == toy.n_steps) heard = mean[0];
  };
  const EstimateTrace tr = run_filter(hooks, toy.y_matrix(), cfg);
  CHECK(tr.theta_mean.rows() == toy.n_steps);
  CHECK(heard == tr.theta_mean(toy.n_steps - 1, 0));
  CHECK((tr.width_step - tr.theta_mean.cwiseInverse()).norm() == 0.0);
  CHECK((tr.width_avg - tr.theta_avg.cwiseInverse()).norm() == 0.0);
  CHECK((tr.theta_std.array() >= 0.0).all());
  // instantaneous until burn-in, then the average anchors at the burn-in step
  CHECK(tr.theta_avg(0, 0) == tr.theta_mean(0, 0));
  CHECK(tr.theta_avg(2, 0) == tr.theta_mean(2, 0));
  CHECK(tr.theta_avg(9, 0) ==
        doctest::Approx(tr.theta_mean.block(4, 0, 6, 1).mean()).epsilon(1e-14));
  CHECK(tr.theta_avg(19, 0) ==
        doctest::Approx(tr.theta_mean.block(4, 0, 16, 1).mean()).epsilon(1e-14));
}

TEST_CASE("log-space weights survive extreme mismatch") {
  const ToyModel toy;
  FilterConfig cfg = toy_config(50);
  cfg.r_var = vec1(1e-6); // exp(-0.5 diff^2 / r) underflows without the shift
  FilterHooks hooks;
  hooks.predict_obs = [&](const Eigen::VectorXd& th) {
    return vec1(th[0] + 1e6);
  };
  const EstimateTrace tr = run_filter(hooks, toy.y_matrix(), cfg);
  CHECK(tr.theta_mean.allFinite());
}

TEST_CASE("non-finite predictions raise the divergence error") {
  const ToyModel toy;
  const FilterConfig cfg = toy_config(50);
  FilterHooks hooks;
  hooks.predict_obs = [](const Eigen::VectorXd&) {
    return vec1(std::nan(""));
  };
  CHECK_THROWS_AS(run_filter(hooks, toy.y_matrix(), cfg), FilterDivergence);
}

TEST_CASE("thread count does not change the result") {
  const ToyModel toy;
  FilterConfig cfg = toy_config(64);
  double lifted = toy.obs[0];
  FilterHooks hooks;
  hooks.begin_step = [&](int n) { lifted = toy.obs[n - 1]; };
  hooks.predict_obs = [&](const Eigen::VectorXd& th) {
    return vec1(th[0] + 0.5 * lifted);
  };
  const EstimateTrace one = run_filter(hooks, toy.y_matrix(), cfg);
  cfg.threads = 3;
  const EstimateTrace three = run_filter(hooks, toy.y_matrix(), cfg);
  CHECK((one.theta_mean - three.theta_mean).norm() == 0.0);
  CHECK((one.theta_std - three.theta_std).norm() == 0.0);
}

} // TEST_SUITE

