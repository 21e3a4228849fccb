// Command-line front end: twin-experiment runs, parameter sweeps, forward
// simulation, and mesh inspection over the flat key-value config format.

#include "fracfilt/experiment.hpp"
#include "fracfilt/presets.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using fracfilt::Config;

struct CommonOpts {
  std::string config_path;
  std::string preset;
  std::string out_dir = "out";
  std::vector<std::string> overrides;
  bool quiet = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_out = true) {
  cmd->add_option("--config", o.config_path, "config file (flat key = value)");
  cmd->add_option("--preset", o.preset,
                  "built-in case: case1, case2, case3a, case3b");
  cmd->add_option("-D,--set", o.overrides,
                  "override one key, e.g. -D filter.seed=3 (repeatable)");
  if (with_out) cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--quiet", o.quiet, "suppress progress output");
}

Config load_config(const CommonOpts& o, std::uint64_t seed_override,
                   int threads_override) {
  if (o.config_path.empty() == o.preset.empty())
    throw std::invalid_argument("pass exactly one of --config or --preset");
  Config cfg = o.config_path.empty() ? fracfilt::preset_config(o.preset)
                                     : Config::parse_file(o.config_path);
  for (const std::string& kv : o.overrides) cfg.set_pair(kv);
  if (seed_override) cfg.set("filter.seed", std::to_string(seed_override));
  if (threads_override > 0)
    cfg.set("filter.threads", std::to_string(threads_override));
  return cfg;
}

void report(const fracfilt::ExperimentSpec& spec, const fracfilt::TwinResult& r,
            std::ostream& os) {
  const Eigen::Index last = r.trace.width_avg.rows() - 1;
  for (std::size_t k = 0; k < r.width_true.size(); ++k) {
    os << "fracture " << k << ": true width " << r.width_true[k]
       << ", estimate " << r.trace.width_avg(last, k);
    if (spec.band >= 0.0) {
      os << ", band entry ";
      if (r.band_entry[k] < 0)
        os << "never";
      else
        os << "step " << r.band_entry[k];
    }
    os << "\n";
  }
  if (spec.band >= 0.0)
    os << (r.accepted ? "PASS" : "FAIL") << ": averaged widths "
       << (r.accepted ? "inside" : "outside") << " the " << spec.band * 100
       << "% band at the final step\n";
}

int cmd_run(const CommonOpts& o, std::uint64_t seed, int threads) {
  const Config cfg = load_config(o, seed, threads);
  const fracfilt::ExperimentSpec spec = fracfilt::build_spec(cfg);
  const fracfilt::TwinResult r = fracfilt::run_twin(spec);
  fracfilt::write_run_outputs(spec, cfg, r, o.out_dir);
  if (!o.quiet) {
    std::cout << "case " << spec.label << ": " << spec.n_steps()
              << " steps, outputs in " << o.out_dir << "\n";
    report(spec, r, std::cout);
  }
  return r.accepted ? 0 : 3;
}

int cmd_forward_only(const CommonOpts& o, std::uint64_t seed, int threads) {
  const Config cfg = load_config(o, seed, threads);
  const fracfilt::ExperimentSpec spec = fracfilt::build_spec(cfg);
  Eigen::MatrixXd truth, y;
  fracfilt::simulate_truth(spec, truth, y);
  namespace fs = std::filesystem;
  fs::create_directories(o.out_dir);
  std::vector<std::string> cols;
  for (Eigen::Index i = 0; i < truth.cols(); ++i)
    cols.push_back("y" + std::to_string(i));
  Eigen::MatrixXd ty(truth.rows(), truth.cols() + 1),
      yy(y.rows(), y.cols() + 1);
  for (Eigen::Index i = 0; i < truth.rows(); ++i) ty(i, 0) = yy(i, 0) = i;
  ty.rightCols(truth.cols()) = truth;
  yy.rightCols(y.cols()) = y;
  {
    std::ofstream os(fs::path(o.out_dir) / "truth_trace.csv");
    fracfilt::write_csv_matrix(os, "step", cols, spec.dt, ty);
  }
  {
    std::ofstream os(fs::path(o.out_dir) / "observations.csv");
    fracfilt::write_csv_matrix(os, "step", cols, spec.dt, yy);
  }
  {
    std::ofstream os(fs::path(o.out_dir) / "config.echo");
    cfg.write(os);
  }
  if (!o.quiet)
    std::cout << "case " << spec.label << ": wrote " << truth.rows()
              << " states x " << truth.cols() << " fracture coordinates to "
              << o.out_dir << "\n";
  return 0;
}

int cmd_mesh_dump(const CommonOpts& o) {
  const Config cfg = load_config(o, 0, 0);
  const fracfilt::ExperimentSpec spec = fracfilt::build_spec(cfg);
  const fracfilt::Geometry geo =
      fracfilt::build_geometry(spec.domain, spec.fractures);
  const fracfilt::Mesh mesh = fracfilt::generate_mesh(geo, spec.h);
  if (o.out_dir == "-") {
    fracfilt::dump_mesh(mesh, std::cout);
  } else {
    std::filesystem::create_directories(o.out_dir);
    std::ofstream os(std::filesystem::path(o.out_dir) / "mesh.txt");
    fracfilt::dump_mesh(mesh, os);
    if (!o.quiet) std::cout << "wrote " << o.out_dir << "/mesh.txt\n";
  }
  return 0;
}

int cmd_sweep(const CommonOpts& o, const std::string& axis,
              const std::vector<std::string>& values, std::uint64_t seed,
              int threads) {
  if (values.empty()) throw std::invalid_argument("sweep: no --values given");
  namespace fs = std::filesystem;
  fs::create_directories(o.out_dir);
  std::ofstream agg(fs::path(o.out_dir) / "sweep.csv");
  std::size_t n_frac = 0;
  {
    const Config base = load_config(o, seed, threads);
    while (base.has("frac." + std::to_string(n_frac))) ++n_frac;
  }
  agg << axis;
  for (std::size_t k = 0; k < n_frac; ++k)
    agg << ",width_avg_" << k << ",band_entry_" << k;
  agg << ",accepted\n";
  int failures = 0;
  for (const std::string& v : values) {
    Config cfg = load_config(o, seed, threads);
    if (axis == "seed") {
      cfg.set("filter.seed", v);
    } else if (axis == "eps") {
      cfg.set("filter.eps_var", v);
    } else if (axis == "m") {
      cfg.set("filter.m", v);
    } else {
      throw std::invalid_argument("sweep: axis must be seed, eps, or m");
    }
    const std::string run_dir =
        (fs::path(o.out_dir) / (axis + "_" + v)).string();
    try {
      const fracfilt::ExperimentSpec spec = fracfilt::build_spec(cfg);
      const fracfilt::TwinResult r = fracfilt::run_twin(spec);
      fracfilt::write_run_outputs(spec, cfg, r, run_dir);
      const Eigen::Index last = r.trace.width_avg.rows() - 1;
      agg << v << std::setprecision(17);
      for (std::size_t k = 0; k < r.width_true.size(); ++k)
        agg << "," << r.trace.width_avg(last, k) << ","
            << (spec.band >= 0.0 ? r.band_entry[k] : -1);
      agg << "," << (r.accepted ? 1 : 0) << "\n";
      if (!r.accepted) ++failures;
      if (!o.quiet) {
        std::cout << axis << " = " << v << ":\n";
        report(spec, r, std::cout);
      }
    } catch (const std::exception& e) {
      // one bad run must not kill the batch
      ++failures;
      agg << v << ",error\n";
      std::cerr << axis << " = " << v << ": error: " << e.what() << "\n";
    }
  }
  if (!o.quiet)
    std::cout << "sweep over " << values.size() << " values, " << failures
              << " failures, aggregate in " << o.out_dir << "/sweep.csv\n";
  return failures == 0 ? 0 : 3;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"reduced fracture model: forward solver and width estimation"};
  app.require_subcommand(1);

  std::uint64_t seed = 0;
  int threads = 0;
  app.add_option("--seed", seed, "override filter.seed (global)");
  app.add_option("--threads", threads, "override filter.threads (global)");

  CommonOpts run_o, fwd_o, mesh_o, sweep_o;
  CLI::App* run = app.add_subcommand(
      "run", "twin experiment: simulate, observe, estimate widths");
  add_common(run, run_o);
  CLI::App* fwd = app.add_subcommand(
      "forward-only", "simulate the truth and write the observation series");
  add_common(fwd, fwd_o);
  CLI::App* mesh = app.add_subcommand(
      "mesh-dump", "write the mesh summary for a config (--out - for stdout)");
  add_common(mesh, mesh_o);
  CLI::App* sweep = app.add_subcommand(
      "sweep", "repeat a run varying one axis; aggregate results");
  add_common(sweep, sweep_o);
  std::string axis = "seed";
  std::vector<std::string> values;
  sweep->add_option("--axis", axis, "seed, eps, or m");
  sweep->add_option("--values", values,
                    "axis values; eps values may quote lists like '4000 8000'")
      ->delimiter(',');

  CLI11_PARSE(app, argc, argv);
  try {
    if (run->parsed()) return cmd_run(run_o, seed, threads);
    if (fwd->parsed()) return cmd_forward_only(fwd_o, seed, threads);
    if (mesh->parsed()) return cmd_mesh_dump(mesh_o);
    return cmd_sweep(sweep_o, axis, values, seed, threads);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
