#include "fracfilt/presets.hpp"

#include <sstream>
#include <stdexcept>

namespace fracfilt {

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << v;
  return os.str();
}

// Values shared by every case: unit matrix coefficients, the calibrated
// tangential conductivity, the 1/50 grid, fifty steps of size 0.1, and the
// filter defaults.  The parameter prior spans [0.5, 2.0] times the reciprocal
// of the width guess.
void common(Config& c) {
  c.set("coeffs.k", "1");
  c.set("coeffs.k_gamma", "1e4");
  c.set("coeffs.phi", "1");
  c.set("coeffs.phi_f", "1");
  c.set("init.p0", "0");
  c.set("mesh.h", "0.02");
  c.set("time.dt", "0.1");
  c.set("time.t_end", "5");
  c.set("obs.noise_var", "500");
  c.set("obs.seed", "9001");
  c.set("filter.burn_in", "5");
  c.set("filter.theta_floor", "1");
  c.set("filter.seed", "4");
  c.set("filter.threads", "1");
  c.set("filter.prior_scale", "0.5 2.0");
}

Config case1() {
  Config c;
  c.set("case", "case1");
  c.set("domain", "0 0 2 1");
  c.set("frac.0", "v 1 1e-3");
  // pressure 1 at the bottom of the fracture, 0 at the top; lower fifth of
  // the lateral sides held at 1 (right) and 0 (left); no flow elsewhere
  c.set("bc.frac.0.lo", "pressure 1");
  c.set("bc.frac.0.hi", "pressure 0");
  c.set("bc.p.0", "v 0 0 0.2 0");
  c.set("bc.p.1", "v 2 0 0.2 1");
  common(c);
  c.set("filter.m", "80");
  c.set("filter.eps_var", "800");
  c.set("filter.guess", "2.5e-3");
  c.set("accept.band", "0.10");
  return c;
}

Config case2() {
  Config c;
  c.set("case", "case2");
  c.set("domain", "0 0 2 1");
  c.set("frac.0", "v 0.5 2.5e-3");
  c.set("frac.1", "v 1.5 5e-3");
  c.set("bc.frac.0.lo", "pressure 1");
  c.set("bc.frac.0.hi", "pressure 0");
  c.set("bc.frac.1.lo", "pressure 1");
  c.set("bc.frac.1.hi", "pressure 0");
  c.set("bc.p.0", "v 0 0 0.2 0");
  c.set("bc.p.1", "v 2 0 0.2 1");
  common(c);
  c.set("filter.m", "80");
  c.set("filter.eps_var", "4000 8000");
  c.set("filter.guess", "6.25e-3 1.25e-2");
  c.set("accept.band", "0.15");
  return c;
}

// Crossing pair on the unit square, no flow on the outer boundary; the flow
// is driven by the fracture end pressures.  The horizontal fracture ends at
// a (left) and b (right), the vertical one at 1 (bottom) and 0 (top).
Config case3(double a, double b) {
  Config c;
  c.set("domain", "0 0 1 1");
  c.set("frac.0", "h 0.5 1e-3");
  c.set("frac.1", "v 0.5 6e-4");
  c.set("bc.frac.0.lo", "pressure " + fmt(a));
  c.set("bc.frac.0.hi", "pressure " + fmt(b));
  c.set("bc.frac.1.lo", "pressure 1");
  c.set("bc.frac.1.hi", "pressure 0");
  common(c);
  c.set("filter.m", "120");
  c.set("filter.guess", "2.5e-3 1.5e-3");
  c.set("accept.band", "0.20");
  return c;
}

} // namespace

Config preset_config(const std::string& name) {
  if (name == "case1") return case1();
  if (name == "case2") return case2();
  if (name == "case3a") {
    Config c = case3(1.0, 0.0);
    c.set("case", "case3a");
    c.set("filter.eps_var", "8000 10000");
    return c;
  }
  if (name == "case3b") {
    Config c = case3(5.0, 0.0);
    c.set("case", "case3b");
    c.set("filter.eps_var", "18000 18000");
    return c;
  }
  throw std::invalid_argument("unknown preset '" + name +
                              "' (case1, case2, case3a, case3b)");
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names = {"case1", "case2", "case3a",
                                                 "case3b"};
  return names;
}

} // namespace fracfilt
