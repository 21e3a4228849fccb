#include "fracfilt/forward.hpp"
#include "fracfilt/observation.hpp"

#include "manufactured.hpp"

#include <doctest.h>

#include <cmath>
#include <vector>

using namespace fracfilt;
using manufactured::ManufacturedCase;
using manufactured::Problem;
using manufactured::make_manufactured;
using manufactured::run_manufactured;

TEST_SUITE("forward") {

TEST_CASE("initial state samples pressures at element centers") {
  const ManufacturedCase mf;
  const Problem pr = make_manufactured(0.5, mf);
  const Eigen::VectorXd x0 = initial_state(
      pr.mesh, pr.layout, [](double x, double y) { return x + 10.0 * y; });
  CHECK(x0.head(pr.layout.n_flux).norm() == 0.0);
  const Point cen = tri_centroid(pr.mesh.sub[1], 3);
  CHECK(x0[pr.layout.pressure_dof(pr.layout.cell_p_offset[1] + 3)] ==
        doctest::Approx(cen.x + 10.0 * cen.y));
  const double mid = 0.5 * (pr.mesh.frac[0].nodes[0] + pr.mesh.frac[0].nodes[1]);
  CHECK(x0[pr.layout.pressure_dof(pr.layout.seg_p_offset[0])] ==
        doctest::Approx(1.0 + 10.0 * mid));
}

TEST_CASE("backward step conserves mass to solver precision") {
  const ManufacturedCase mf;
  const Problem pr = make_manufactured(0.25, mf);
  Eigen::VectorXd th(1);
  th << 1.0 / mf.width;
  const BlockSystem sys(pr.blocks, 0.1, th, pr.mc.k_gamma);
  Eigen::VectorXd x = initial_state(
      pr.mesh, pr.layout, [&](double x_, double y_) { return mf.p(x_, y_, 0.0); });
  for (int n = 1; n <= 5; ++n) {
    const Eigen::VectorXd load = assemble_load(pr.mesh, pr.layout, pr.mc, n * 0.1);
    const Eigen::VectorXd next = sys.step(x, load);
    const StepResiduals r = step_residuals(pr.blocks, pr.layout, 0.1, x, next, load);
    CHECK(r.mass_rel <= 1e-12);
    x = next;
  }
}

TEST_CASE("pressure converges at first order under mesh-and-step refinement") {
  const ManufacturedCase mf;
  const double e1 = run_manufactured(0.2, 0.08, 0.4, mf);
  const double e2 = run_manufactured(0.1, 0.04, 0.4, mf);
  const double order = std::log2(e1 / e2);
  CHECK(order >= doctest::Approx(0.85));
}

TEST_CASE("simulate reports every step in order") {
  const ManufacturedCase mf;
  const Problem pr = make_manufactured(0.5, mf);
  Eigen::VectorXd th(1);
  th << 1000.0;
  const BlockSystem sys(pr.blocks, 0.1, th, pr.mc.k_gamma);
  const Eigen::VectorXd x0 = Eigen::VectorXd::Zero(pr.layout.size());
  std::vector<int> seen;
  const Eigen::VectorXd last = simulate(
      sys, x0, 4,
      [&](int) { return Eigen::VectorXd::Zero(pr.layout.n_pressure); },
      [&](int n, const Eigen::VectorXd&) { seen.push_back(n); });
  CHECK(seen == std::vector<int>{1, 2, 3, 4});
  CHECK(last.size() == pr.layout.size());
}

TEST_CASE("low-rank width updates match full refactorization") {
  // case-style setup with driving boundary conditions so states are nonzero
  const double kg = 1e4, width = 1e-3;
  const Fracture f{Orientation::vertical, 1.0, width};
  const Geometry g = build_geometry({0, 0, 2, 1}, {f});
  const Mesh m = generate_mesh(g, 0.1);
  BoundaryConditions bc;
  bc.pressure = {{Orientation::vertical, 0.0, 0.0, 0.2, 0.0},
                 {Orientation::vertical, 2.0, 0.0, 0.2, 1.0}};
  bc.fracture_ends = {{FractureEndBc{true, 1.0}, FractureEndBc{true, 0.0}}};
  const DofLayout L = build_dof_layout(m, bc);
  ModelCoefficients mc;
  mc.k_gamma = kg;
  const SystemBlocks blocks = assemble_blocks(m, L, mc);
  const ObservationOperator H = fracture_observation(m, L);
  const Eigen::VectorXd load = Eigen::VectorXd::Zero(L.n_pressure);

  // nontrivial previous state from a few true-width steps
  Eigen::VectorXd th_true(1);
  th_true << 1.0 / width;
  const BlockSystem truth(blocks, 0.1, th_true, kg);
  Eigen::VectorXd prev = Eigen::VectorXd::Zero(L.size());
  for (int n = 0; n < 3; ++n) prev = truth.step(prev, load);

  Eigen::VectorXd th0(1);
  th0 << 1.0 / width;
  LowRankStepper fast(blocks, 0.1, th0, kg, H.dofs);
  CHECK(fast.rank() == 11); // kept velocity nodes on the fracture at h = 1/10
  fast.set_rhs(prev, load);

  for (double thv : {1.0, 250.0, 500.0, 1000.0, 2000.0, 5000.0}) {
    Eigen::VectorXd th(1);
    th << thv;
    const BlockSystem slow(blocks, 0.1, th, kg);
    const Eigen::VectorXd ref = slow.step(prev, load);
    const Eigen::VectorXd got = fast.advance(th);
    CHECK((got - ref).norm() <= 1e-10 * ref.norm());
    const Eigen::VectorXd obs = fast.predict_obs(th);
    CHECK((obs - H.apply(ref)).norm() <= 1e-10 * H.apply(ref).norm());
  }

  // the reference parameter reproduces the plain solve exactly
  const Eigen::VectorXd base = fast.advance(th0);
  CHECK((base - truth.step(prev, load)).norm() <= 1e-12 * base.norm());

  Eigen::VectorXd bad(1);
  bad << -5.0;
  CHECK_THROWS_AS(fast.predict_obs(bad), std::invalid_argument);
  Eigen::VectorXd wrong(2);
  wrong << 1.0, 1.0;
  CHECK_THROWS_AS(fast.predict_obs(wrong), std::invalid_argument);
}

} // TEST_SUITE

