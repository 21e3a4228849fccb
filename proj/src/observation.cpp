#include "fracfilt/observation.hpp"

namespace fracfilt {

ObservationOperator fracture_observation(const Mesh& m, const DofLayout& L) {
  ObservationOperator h;
  for (std::size_t s = 0; s < m.frac.size(); ++s)
    for (int dof : L.node_dof[s])
      if (dof >= 0) h.dofs.push_back(dof);
  for (std::size_t s = 0; s < m.frac.size(); ++s)
    for (int el = 0; el < m.frac[s].n_el; ++el)
      h.dofs.push_back(L.pressure_dof(L.seg_p_offset[s] + el));
  return h;
}

} // namespace fracfilt
