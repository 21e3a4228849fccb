#include "fracfilt/linsolve.hpp"

#include <ostream>
#include <sstream>
#include <stdexcept>

namespace fracfilt {

void SparseLuSolver::analyze(const SpMat& a) {
  lu_.analyzePattern(a);
  analyzed_ = true;
}

void SparseLuSolver::factorize(const SpMat& a) {
  if (!analyzed_) analyze(a);
  lu_.factorize(a);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("linsolve: factorization failed (singular matrix?)");
}

void SparseLuSolver::compute(const SpMat& a) {
  analyze(a);
  factorize(a);
}

Eigen::VectorXd SparseLuSolver::solve(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = lu_.solve(b);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("linsolve: triangular solve failed");
  return x;
}

Eigen::MatrixXd SparseLuSolver::solve(const Eigen::MatrixXd& b) const {
  Eigen::MatrixXd x = lu_.solve(b);
  if (lu_.info() != Eigen::Success)
    throw std::runtime_error("linsolve: triangular solve failed");
  return x;
}

double relative_residual(const SpMat& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b) {
  const double bn = b.norm();
  const double rn = (a * x - b).norm();
  return bn > 0.0 ? rn / bn : rn;
}

Eigen::VectorXd solve_checked(const SparseLuSolver& lu, const SpMat& a,
                              const Eigen::VectorXd& b, double rtol) {
  Eigen::VectorXd x = lu.solve(b);
  double res = relative_residual(a, x, b);
  if (res > rtol) {
    const Eigen::VectorXd r = b - a * x;
    x += lu.solve(r); // one step of iterative refinement
    res = relative_residual(a, x, b);
  }
  if (res > rtol) {
    std::ostringstream msg;
    msg << "linsolve: residual " << res << " exceeds tolerance " << rtol
        << " (n=" << a.rows() << ", ||b||=" << b.norm() << ")";
    throw std::runtime_error(msg.str());
  }
  return x;
}

void dump_coo(const SpMat& a, std::ostream& os) {
  for (int k = 0; k < a.outerSize(); ++k)
    for (SpMat::InnerIterator it(a, k); it; ++it)
      os << it.row() << " " << it.col() << " " << it.value() << "\n";
}

} // namespace fracfilt
