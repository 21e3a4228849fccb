#include "fracfilt/linsolve.hpp"

#include "oracles.hpp"

#include <doctest.h>

#include <random>
#include <sstream>

using namespace fracfilt;

namespace {

// Random sparse diagonally-dominant matrix with a fixed seed.
SpMat random_system(int n, std::mt19937_64& eng) {
  std::uniform_real_distribution<double> val(-1.0, 1.0);
  std::uniform_int_distribution<int> col(0, n - 1);
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < n; ++i) {
    t.emplace_back(i, i, 4.0 + val(eng));
    for (int k = 0; k < 3; ++k) t.emplace_back(i, col(eng), 0.5 * val(eng));
  }
  SpMat a(n, n);
  a.setFromTriplets(t.begin(), t.end());
  return a;
}

} // namespace

TEST_SUITE("linsolve") {

TEST_CASE("sparse LU agrees with independent dense elimination") {
  std::mt19937_64 eng(7);
  for (int trial = 0; trial < 5; ++trial) {
    const int n = 40 + 10 * trial;
    const SpMat a = random_system(n, eng);
    Eigen::VectorXd b(n);
    for (int i = 0; i < n; ++i) b[i] = std::sin(0.7 * i + trial);

    SparseLuSolver lu;
    lu.compute(a);
    const Eigen::VectorXd x = lu.solve(b);
    const Eigen::VectorXd ref = oracle::gauss_solve(Eigen::MatrixXd(a), b);
    CHECK((x - ref).norm() <= 1e-10 * ref.norm());
    CHECK(relative_residual(a, x, b) <= 1e-12);
  }
}

TEST_CASE("pattern reuse across numeric refactorizations") {
  std::mt19937_64 eng(11);
  SpMat a = random_system(60, eng);
  SparseLuSolver lu;
  lu.analyze(a);
  for (int pass = 0; pass < 3; ++pass) {
    // same pattern, shifted values
    SpMat as = a;
    as.coeffRef(0, 0) += pass;
    lu.factorize(as);
    Eigen::VectorXd b = Eigen::VectorXd::LinSpaced(60, 0.0, 1.0);
    CHECK(relative_residual(as, lu.solve(b), b) <= 1e-12);
  }
}

TEST_CASE("singular matrix is reported") {
  SpMat a(3, 3);
  std::vector<Eigen::Triplet<double>> t = {{0, 0, 1.0}, {1, 1, 1.0}};
  a.setFromTriplets(t.begin(), t.end()); // row/col 2 empty
  SparseLuSolver lu;
  CHECK_THROWS_AS(lu.compute(a), std::runtime_error);
}

TEST_CASE("checked solve enforces the residual policy") {
  std::mt19937_64 eng(13);
  const SpMat a = random_system(50, eng);
  Eigen::VectorXd b = Eigen::VectorXd::Ones(50);
  SparseLuSolver lu;
  lu.compute(a);
  const Eigen::VectorXd x = solve_checked(lu, a, b);
  CHECK(relative_residual(a, x, b) <= 1e-10);

  // A factorization of a different matrix must trip the check.
  SpMat other = a;
  other.coeffRef(0, 0) += 100.0;
  CHECK_THROWS_AS(solve_checked(lu, other, b), std::runtime_error);
}

TEST_CASE("coo dump round-trips entries") {
  SpMat a(2, 2);
  std::vector<Eigen::Triplet<double>> t = {{0, 0, 1.5}, {1, 0, -2.0}, {1, 1, 3.0}};
  a.setFromTriplets(t.begin(), t.end());
  std::ostringstream os;
  dump_coo(a, os);
  std::istringstream is(os.str());
  int r, c, count = 0;
  double v;
  double sum = 0.0;
  while (is >> r >> c >> v) {
    ++count;
    sum += v;
    CHECK(a.coeff(r, c) == v);
  }
  CHECK(count == 3);
  CHECK(sum == doctest::Approx(2.5));
}

} // TEST_SUITE

