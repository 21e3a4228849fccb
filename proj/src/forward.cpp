#include "fracfilt/forward.hpp"

#include <Eigen/LU>

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace fracfilt {

namespace {

Eigen::VectorXd saddle_rhs(const SystemBlocks& blocks, double dt,
                           const Eigen::VectorXd& prev,
                           const Eigen::VectorXd& load) {
  const int nf = blocks.n_flux, np = blocks.n_pressure;
  if (prev.size() != nf + np || load.size() != np)
    throw std::invalid_argument("forward: state or load size mismatch");
  Eigen::VectorXd b(nf + np);
  b.head(nf) = blocks.g;
  b.tail(np) = blocks.c_diag.cwiseProduct(prev.tail(np)) + dt * load;
  return b;
}

} // namespace

Eigen::VectorXd initial_state(const Mesh& m, const DofLayout& L,
                              const std::function<double(double, double)>& p0) {
  Eigen::VectorXd x = Eigen::VectorXd::Zero(L.size());
  if (!p0) return x;
  for (std::size_t c = 0; c < m.sub.size(); ++c)
    for (int t = 0; t < m.sub[c].n_tris(); ++t) {
      const Point cen = tri_centroid(m.sub[c], t);
      x[L.pressure_dof(L.cell_p_offset[c] + t)] = p0(cen.x, cen.y);
    }
  for (std::size_t s = 0; s < m.frac.size(); ++s) {
    const Fracture& f = m.geo.fractures[m.geo.segments[s].fracture];
    const bool vert = f.orient == Orientation::vertical;
    for (int el = 0; el < m.frac[s].n_el; ++el) {
      const double mid = 0.5 * (m.frac[s].nodes[el] + m.frac[s].nodes[el + 1]);
      x[L.pressure_dof(L.seg_p_offset[s] + el)] =
          vert ? p0(f.coord, mid) : p0(mid, f.coord);
    }
  }
  return x;
}

BlockSystem::BlockSystem(const SystemBlocks& blocks, double dt,
                         const Eigen::VectorXd& theta, double k_gamma)
    : blocks_(&blocks), dt_(dt),
      lambda_(lambda_matrix(blocks, dt, theta, k_gamma)) {
  lu_.compute(lambda_);
}

Eigen::VectorXd BlockSystem::rhs(const Eigen::VectorXd& prev,
                                 const Eigen::VectorXd& load) const {
  return saddle_rhs(*blocks_, dt_, prev, load);
}

Eigen::VectorXd BlockSystem::step(const Eigen::VectorXd& prev,
                                  const Eigen::VectorXd& load) const {
  return solve_checked(lu_, lambda_, rhs(prev, load));
}

Eigen::VectorXd
simulate(const BlockSystem& sys, const Eigen::VectorXd& x0, int n_steps,
         const std::function<Eigen::VectorXd(int)>& load_at,
         const std::function<void(int, const Eigen::VectorXd&)>& on_step) {
  Eigen::VectorXd x = x0;
  for (int n = 1; n <= n_steps; ++n) {
    x = sys.step(x, load_at(n));
    if (on_step) on_step(n, x);
  }
  return x;
}

StepResiduals step_residuals(const SystemBlocks& blocks, const DofLayout& L,
                             double dt, const Eigen::VectorXd& prev,
                             const Eigen::VectorXd& next,
                             const Eigen::VectorXd& load) {
  const int nf = blocks.n_flux, np = blocks.n_pressure;
  const Eigen::VectorXd u = next.head(nf);
  const Eigen::VectorXd bu = blocks.b * u;
  Eigen::VectorXd abs_bu = Eigen::VectorXd::Zero(np);
  for (int k = 0; k < blocks.b.outerSize(); ++k)
    for (SpMat::InnerIterator it(blocks.b, k); it; ++it)
      abs_bu[it.row()] += std::abs(it.value() * u[it.col()]);

  const Eigen::VectorXd num = dt * bu +
                              blocks.c_diag.cwiseProduct(next.tail(np)) -
                              blocks.c_diag.cwiseProduct(prev.tail(np)) -
                              dt * load;
  const Eigen::VectorXd den =
      dt * abs_bu + blocks.c_diag.cwiseProduct(next.tail(np)).cwiseAbs() +
      blocks.c_diag.cwiseProduct(prev.tail(np)).cwiseAbs() +
      (dt * load).cwiseAbs();

  StepResiduals r;
  const double tiny = 1e-300;
  std::vector<bool> is_junction(np, false);
  for (int j : L.junction_p) is_junction[j] = true;
  const double scale = std::max(den.maxCoeff(), tiny);
  for (int i = 0; i < np; ++i) {
    if (is_junction[i]) {
      const double d = std::max(dt * abs_bu[i], tiny * scale);
      r.junction_rel = std::max(r.junction_rel,
                                abs_bu[i] == 0.0 ? 0.0 : std::abs(num[i]) / d);
    } else {
      r.mass_rel = std::max(r.mass_rel, std::abs(num[i]) / scale);
    }
  }
  return r;
}

LowRankStepper::LowRankStepper(const SystemBlocks& blocks, double dt,
                               const Eigen::VectorXd& theta0, double k_gamma,
                               std::vector<int> obs_dofs)
    : blocks_(&blocks), dt_(dt), theta0_(theta0), k_gamma_(k_gamma),
      obs_dofs_(std::move(obs_dofs)),
      lambda0_(lambda_matrix(blocks, dt, theta0, k_gamma)) {
  for (std::size_t f = 0; f < blocks.a_frac.size(); ++f) {
    const int begin = static_cast<int>(pdofs_.size());
    for (int k = 0; k < blocks.a_frac[f].outerSize(); ++k)
      if (blocks.a_frac[f].outerIndexPtr()[k + 1] >
          blocks.a_frac[f].outerIndexPtr()[k])
        pdofs_.push_back(k);
    frange_.emplace_back(begin, static_cast<int>(pdofs_.size()));
    const int rk = frange_.back().second - begin;
    Eigen::MatrixXd fm = Eigen::MatrixXd::Zero(rk, rk);
    for (int i = 0; i < rk; ++i)
      for (int j = 0; j < rk; ++j)
        fm(i, j) = blocks.a_frac[f].coeff(pdofs_[begin + i], pdofs_[begin + j]);
    fmass_.push_back(std::move(fm));
  }
  lu_.compute(lambda0_);
  const int n = blocks.n_flux + blocks.n_pressure;
  const int r = rank();
  Eigen::MatrixXd p = Eigen::MatrixXd::Zero(n, r);
  for (int c = 0; c < r; ++c) p(pdofs_[c], c) = 1.0;
  w_ = lu_.solve(p);
  s_.resize(r, r);
  for (int i = 0; i < r; ++i) s_.row(i) = w_.row(pdofs_[i]);
  hw_.resize(static_cast<int>(obs_dofs_.size()), r);
  for (std::size_t i = 0; i < obs_dofs_.size(); ++i)
    hw_.row(static_cast<int>(i)) = w_.row(obs_dofs_[i]);
}

void LowRankStepper::set_rhs(const Eigen::VectorXd& prev,
                             const Eigen::VectorXd& load) {
  b_ = saddle_rhs(*blocks_, dt_, prev, load);
  y_ = solve_checked(lu_, lambda0_, b_);
  const int r = rank();
  py_.resize(r);
  for (int i = 0; i < r; ++i) py_[i] = y_[pdofs_[i]];
  hy_.resize(static_cast<int>(obs_dofs_.size()));
  for (std::size_t i = 0; i < obs_dofs_.size(); ++i)
    hy_[static_cast<int>(i)] = y_[obs_dofs_[i]];
}

Eigen::MatrixXd LowRankStepper::delta(const Eigen::VectorXd& theta) const {
  if (theta.size() != theta0_.size())
    throw std::invalid_argument("forward: theta size mismatch");
  const int r = rank();
  Eigen::MatrixXd d = Eigen::MatrixXd::Zero(r, r);
  for (Eigen::Index f = 0; f < theta.size(); ++f) {
    if (!(theta[f] > 0.0))
      throw std::invalid_argument("forward: theta must be positive");
    const auto [b, e] = frange_[f];
    d.block(b, b, e - b, e - b) =
        ((theta[f] - theta0_[f]) / k_gamma_) * fmass_[f];
  }
  return d;
}

Eigen::VectorXd LowRankStepper::correction(const Eigen::VectorXd& theta) const {
  const int r = rank();
  const Eigen::MatrixXd d = delta(theta);
  const Eigen::MatrixXd cap = Eigen::MatrixXd::Identity(r, r) + d * s_;
  return cap.partialPivLu().solve(d * py_);
}

Eigen::VectorXd LowRankStepper::predict_obs(const Eigen::VectorXd& theta) const {
  return hy_ - hw_ * correction(theta);
}

Eigen::VectorXd LowRankStepper::advance(const Eigen::VectorXd& theta) const {
  Eigen::VectorXd x = y_ - w_ * correction(theta);
  // Residual against the exactly assembled operator (the low-rank update is
  // algebraic, so this also guards the capacitance solve).
  const Eigen::MatrixXd d = delta(theta);
  auto residual = [&](const Eigen::VectorXd& xx) {
    Eigen::VectorXd res = b_ - lambda0_ * xx;
    Eigen::VectorXd px(rank());
    for (int i = 0; i < rank(); ++i) px[i] = xx[pdofs_[i]];
    const Eigen::VectorXd corr = d * px;
    for (int i = 0; i < rank(); ++i) res[pdofs_[i]] -= corr[i];
    return res;
  };
  Eigen::VectorXd res = residual(x);
  const double bn = std::max(b_.norm(), 1e-300);
  if (res.norm() / bn > 1e-10) {
    x += lu_.solve(res);
    res = residual(x);
  }
  if (res.norm() / bn > 1e-10) {
    std::ostringstream msg;
    msg << "forward: low-rank step residual " << res.norm() / bn
        << " exceeds 1e-10";
    throw std::runtime_error(msg.str());
  }
  return x;
}

} // namespace fracfilt
