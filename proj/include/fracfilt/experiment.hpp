#pragma once

#include "fracfilt/config.hpp"
#include "fracfilt/filter.hpp"
#include "fracfilt/forward.hpp"
#include "fracfilt/observation.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace fracfilt {

// Complete description of one twin experiment, decoded from a Config.
struct ExperimentSpec {
  std::string label;
  Rect domain{};
  std::vector<Fracture> fractures; // true widths
  BoundaryConditions bc;
  ModelCoefficients coeffs;        // sources stay empty: flow is bc-driven
  double p0 = 0.0;                 // uniform initial pressure
  double h = 0.0;
  double dt = 0.0;
  double t_end = 0.0;
  double obs_noise_var = 0.0;
  std::uint64_t obs_seed = 0;
  double r_var = 0.0;              // likelihood variance per coordinate
  FilterConfig filter;             // prior bounds derived from the width guess
  std::vector<double> width_guess;
  double band = -1.0;              // relative accept band; < 0 disables the check

  int n_steps() const;             // t_end / dt, validated integral
};

// Decodes and validates; every key must be consumed or this throws.
ExperimentSpec build_spec(const Config& cfg);

struct TwinResult {
  Eigen::MatrixXd truth_obs;   // (n_steps + 1) x q, noiseless fracture trace
  Eigen::MatrixXd y;           // same shape, with observation noise added
  EstimateTrace trace;         // n_steps rows
  std::vector<double> width_true;
  // First step at which the averaged width estimate falls inside the band;
  // -1 when it never does.  Empty when the band check is disabled.
  std::vector<int> band_entry;
  // True when every averaged width lies inside the band at the final step
  // (always true when the band check is disabled).
  bool accepted = true;
  double truth_seconds = 0.0;
  double filter_seconds = 0.0;
};

// Simulates the truth at the true widths, synthesizes noisy fracture-trace
// observations, and runs the direct filter against them.
TwinResult run_twin(const ExperimentSpec& spec);

// Truth simulation and observation synthesis only (the first half of
// run_twin); used by the forward-only command.
void simulate_truth(const ExperimentSpec& spec, Eigen::MatrixXd& truth_obs,
                    Eigen::MatrixXd& y);

// First step at which |trace - target| <= band * |target|; -1 if never
// (1-based).
int band_entry_step(const Eigen::VectorXd& trace, double target, double band);

// Writers.  run outputs: observations.csv, truth_trace.csv,
// estimate_trace.csv, summary.json, config.echo.
void write_csv_matrix(std::ostream& os, const std::string& index_name,
                      const std::vector<std::string>& columns,
                      double index_scale, const Eigen::MatrixXd& m);
void write_run_outputs(const ExperimentSpec& spec, const Config& echo,
                       const TwinResult& r, const std::string& out_dir);

} // namespace fracfilt
