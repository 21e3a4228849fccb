#pragma once

#include <Eigen/Sparse>
#include <Eigen/SparseLU>

#include <iosfwd>

namespace fracfilt {

using SpMat = Eigen::SparseMatrix<double>;

// Direct sparse LU with separate symbolic and numeric phases so that a fixed
// sparsity pattern is analyzed once and refactorized cheaply.
class SparseLuSolver {
 public:
  void analyze(const SpMat& a);
  void factorize(const SpMat& a); // throws std::runtime_error when singular
  void compute(const SpMat& a);
  Eigen::VectorXd solve(const Eigen::VectorXd& b) const;
  Eigen::MatrixXd solve(const Eigen::MatrixXd& b) const;

 private:
  Eigen::SparseLU<SpMat, Eigen::COLAMDOrdering<int>> lu_;
  bool analyzed_ = false;
};

// ||a x - b||_2 / ||b||_2, or the absolute residual norm when b is zero.
double relative_residual(const SpMat& a, const Eigen::VectorXd& x,
                         const Eigen::VectorXd& b);

// Solve followed by a residual check; one refinement pass is attempted, and a
// residual still above rtol aborts with diagnostics in the exception message.
Eigen::VectorXd solve_checked(const SparseLuSolver& lu, const SpMat& a,
                              const Eigen::VectorXd& b, double rtol = 1e-10);

// Text dump, one "row col value" line per stored entry.
void dump_coo(const SpMat& a, std::ostream& os);

} // namespace fracfilt
