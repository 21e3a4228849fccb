#pragma once

#include "fracfilt/dofs.hpp"

#include <Eigen/Dense>

#include <vector>

namespace fracfilt {

// Selection of the state coordinates that live on the fractures: for every
// segment the kept velocity node values, then for every segment the element
// pressures.  Junction multipliers are not part of the observed trace.
struct ObservationOperator {
  std::vector<int> dofs; // global state indices, one per observed coordinate

  int size() const { return static_cast<int>(dofs.size()); }

  Eigen::VectorXd apply(const Eigen::VectorXd& x) const {
    Eigen::VectorXd y(size());
    for (int i = 0; i < size(); ++i) y[i] = x[dofs[i]];
    return y;
  }

  // Overwrites the observed coordinates of x with y, leaving the rest as is.
  // apply(lift(y, x)) == y exactly.
  void lift_into(const Eigen::VectorXd& y, Eigen::VectorXd& x) const {
    for (int i = 0; i < size(); ++i) x[dofs[i]] = y[i];
  }
};

ObservationOperator fracture_observation(const Mesh& m, const DofLayout& L);

} // namespace fracfilt
