#include "fracfilt/experiment.hpp"

#include "fracfilt/rng.hpp"

#include <json.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>

namespace fracfilt {

namespace {

using nlohmann::json;

Orientation parse_orientation(const std::string& tok, const std::string& key) {
  if (tok == "v") return Orientation::vertical;
  if (tok == "h") return Orientation::horizontal;
  throw std::invalid_argument("config: key '" + key +
                              "' needs 'v' or 'h', got '" + tok + "'");
}

std::uint64_t parse_seed(const Config& cfg, const std::string& key) {
  const std::string v = cfg.str(key);
  try {
    std::size_t pos = 0;
    const std::uint64_t s = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return s;
  } catch (const std::exception&) {
    throw std::invalid_argument("config: key '" + key +
                                "' is not an unsigned integer: '" + v + "'");
  }
}

std::vector<Fracture> parse_fractures(const Config& cfg) {
  std::vector<Fracture> out;
  for (int i = 0;; ++i) {
    const std::string key = "frac." + std::to_string(i);
    if (!cfg.has(key)) break;
    std::istringstream is(cfg.str(key));
    std::string o;
    double coord = 0.0, width = 0.0;
    if (!(is >> o >> coord >> width) || !(is >> std::ws).eof())
      throw std::invalid_argument("config: key '" + key +
                                  "' needs 'v|h coord width'");
    out.push_back({parse_orientation(o, key), coord, width});
  }
  if (out.empty())
    throw std::invalid_argument("config: no fractures (frac.0 missing)");
  return out;
}

BoundaryConditions parse_bc(const Config& cfg, std::size_t n_frac) {
  BoundaryConditions bc;
  for (int i = 0;; ++i) {
    const std::string key = "bc.p." + std::to_string(i);
    if (!cfg.has(key)) break;
    std::istringstream is(cfg.str(key));
    std::string o;
    PressureBc pb{};
    if (!(is >> o >> pb.coord >> pb.lo >> pb.hi >> pb.value) ||
        !(is >> std::ws).eof())
      throw std::invalid_argument("config: key '" + key +
                                  "' needs 'v|h coord lo hi value'");
    pb.line = parse_orientation(o, key);
    bc.pressure.push_back(pb);
  }
  bc.fracture_ends.resize(n_frac);
  for (std::size_t k = 0; k < n_frac; ++k)
    for (int end = 0; end < 2; ++end) {
      const std::string key = "bc.frac." + std::to_string(k) +
                              (end == 0 ? ".lo" : ".hi");
      std::istringstream is(cfg.str(key));
      std::string kind;
      is >> kind;
      if (kind == "noflow" && (is >> std::ws).eof()) {
        bc.fracture_ends[k][end] = {false, 0.0};
      } else if (kind == "pressure") {
        double v = 0.0;
        if (!(is >> v) || !(is >> std::ws).eof())
          throw std::invalid_argument("config: key '" + key +
                                      "' needs 'pressure <value>'");
        bc.fracture_ends[k][end] = {true, v};
      } else {
        throw std::invalid_argument("config: key '" + key +
                                    "' needs 'pressure <value>' or 'noflow'");
      }
    }
  return bc;
}

struct Built {
  Mesh mesh;
  DofLayout layout;
  SystemBlocks blocks;
  ObservationOperator h;
};

Built build_model(const ExperimentSpec& spec) {
  const Geometry geo = build_geometry(spec.domain, spec.fractures);
  Built b{generate_mesh(geo, spec.h), {}, {}, {}};
  b.layout = build_dof_layout(b.mesh, spec.bc);
  b.blocks = assemble_blocks(b.mesh, b.layout, spec.coeffs);
  b.h = fracture_observation(b.mesh, b.layout);
  return b;
}

void synthesize(const ExperimentSpec& spec, const Built& b,
                Eigen::MatrixXd& truth_obs, Eigen::MatrixXd& y) {
  const int n = spec.n_steps();
  Eigen::VectorXd theta(spec.fractures.size());
  for (std::size_t k = 0; k < spec.fractures.size(); ++k)
    theta[k] = 1.0 / spec.fractures[k].width;
  const BlockSystem sys(b.blocks, spec.dt, theta, spec.coeffs.k_gamma);
  const Eigen::VectorXd x0 = initial_state(
      b.mesh, b.layout, [&](double, double) { return spec.p0; });
  const Eigen::VectorXd zero_load = Eigen::VectorXd::Zero(b.layout.n_pressure);

  truth_obs.resize(n + 1, b.h.size());
  truth_obs.row(0) = b.h.apply(x0);
  simulate(
      sys, x0, n, [&](int) { return zero_load; },
      [&](int step, const Eigen::VectorXd& x) {
        truth_obs.row(step) = b.h.apply(x);
      });

  const double sd = std::sqrt(spec.obs_noise_var);
  y.resize(n + 1, b.h.size());
  for (int row = 0; row <= n; ++row)
    for (int i = 0; i < b.h.size(); ++i)
      y(row, i) = truth_obs(row, i) + sd * normal01(spec.obs_seed, row, i);
}

} // namespace

int ExperimentSpec::n_steps() const {
  if (!(dt > 0.0) || !(t_end > 0.0))
    throw std::invalid_argument("config: time.dt and time.t_end must be positive");
  const int n = static_cast<int>(std::lround(t_end / dt));
  if (n < 1 || std::abs(n * dt - t_end) > 1e-9 * t_end)
    throw std::invalid_argument("config: time.t_end must be a multiple of time.dt");
  return n;
}

ExperimentSpec build_spec(const Config& cfg) {
  ExperimentSpec s;
  s.label = cfg.str_or("case", "custom");

  const std::vector<double> dom = cfg.numbers("domain");
  if (dom.size() != 4)
    throw std::invalid_argument("config: domain needs 'x0 y0 x1 y1'");
  s.domain = {dom[0], dom[1], dom[2], dom[3]};
  s.fractures = parse_fractures(cfg);
  const std::size_t p = s.fractures.size();
  s.bc = parse_bc(cfg, p);

  s.coeffs.k = cfg.num_or("coeffs.k", 1.0);
  s.coeffs.k_gamma = cfg.num("coeffs.k_gamma");
  s.coeffs.phi = cfg.num_or("coeffs.phi", 1.0);
  s.coeffs.phi_f = cfg.num_or("coeffs.phi_f", 1.0);
  s.p0 = cfg.num_or("init.p0", 0.0);

  s.h = cfg.num("mesh.h");
  s.dt = cfg.num("time.dt");
  s.t_end = cfg.num("time.t_end");
  s.n_steps(); // validate early

  s.obs_noise_var = cfg.num("obs.noise_var");
  if (s.obs_noise_var < 0.0)
    throw std::invalid_argument("config: obs.noise_var must be nonnegative");
  s.obs_seed = parse_seed(cfg, "obs.seed");
  s.r_var = cfg.num_or("filter.r_var", s.obs_noise_var);
  if (!(s.r_var > 0.0))
    throw std::invalid_argument("config: filter.r_var must be positive");

  s.filter.m = cfg.integer("filter.m");
  const std::vector<double> eps = cfg.numbers("filter.eps_var");
  if (eps.size() != p)
    throw std::invalid_argument("config: filter.eps_var needs one entry per fracture");
  s.filter.eps_var = Eigen::Map<const Eigen::VectorXd>(eps.data(), eps.size());

  s.width_guess = cfg.numbers("filter.guess");
  if (s.width_guess.size() != p)
    throw std::invalid_argument("config: filter.guess needs one entry per fracture");
  const std::vector<double> scale = cfg.numbers("filter.prior_scale");
  if (scale.size() != 2 || !(scale[0] > 0.0) || !(scale[0] < scale[1]))
    throw std::invalid_argument("config: filter.prior_scale needs '0 < lo < hi'");
  s.filter.prior_lo.resize(p);
  s.filter.prior_hi.resize(p);
  for (std::size_t k = 0; k < p; ++k) {
    if (!(s.width_guess[k] > 0.0))
      throw std::invalid_argument("config: filter.guess entries must be positive");
    s.filter.prior_lo[k] = scale[0] / s.width_guess[k];
    s.filter.prior_hi[k] = scale[1] / s.width_guess[k];
  }

  s.filter.burn_in = cfg.integer_or("filter.burn_in", 10);
  s.filter.theta_floor = cfg.num_or("filter.theta_floor", 1.0);
  s.filter.seed = parse_seed(cfg, "filter.seed");
  s.filter.threads = cfg.integer_or("filter.threads", 1);
  s.band = cfg.has("accept.band") ? cfg.num("accept.band") : -1.0;

  cfg.ensure_consumed();
  return s;
}

void simulate_truth(const ExperimentSpec& spec, Eigen::MatrixXd& truth_obs,
                    Eigen::MatrixXd& y) {
  const Built b = build_model(spec);
  synthesize(spec, b, truth_obs, y);
}

int band_entry_step(const Eigen::VectorXd& trace, double target, double band) {
  for (int n = 0; n < trace.size(); ++n)
    if (std::abs(trace[n] - target) <= band * std::abs(target)) return n + 1;
  return -1;
}

TwinResult run_twin(const ExperimentSpec& spec) {
  using clock = std::chrono::steady_clock;
  const Built b = build_model(spec);
  const std::size_t p = spec.fractures.size();
  const int n = spec.n_steps();

  TwinResult r;
  const auto t0 = clock::now();
  synthesize(spec, b, r.truth_obs, r.y);
  r.truth_seconds = std::chrono::duration<double>(clock::now() - t0).count();

  for (const Fracture& f : spec.fractures) r.width_true.push_back(f.width);

  Eigen::VectorXd theta0(p);
  for (std::size_t k = 0; k < p; ++k) theta0[k] = 1.0 / spec.width_guess[k];
  LowRankStepper stepper(b.blocks, spec.dt, theta0, spec.coeffs.k_gamma,
                         b.h.dofs);

  FilterConfig fc = spec.filter;
  fc.r_var = Eigen::VectorXd::Constant(b.h.size(), spec.r_var);

  const Eigen::VectorXd zero_load = Eigen::VectorXd::Zero(b.layout.n_pressure);
  Eigen::VectorXd companion = initial_state(
      b.mesh, b.layout, [&](double, double) { return spec.p0; });

  FilterHooks hooks;
  hooks.begin_step = [&](int step) {
    const Eigen::VectorXd lifted = r.y.row(step - 1).transpose();
    b.h.lift_into(lifted, companion);
    stepper.set_rhs(companion, zero_load);
  };
  hooks.predict_obs = [&](const Eigen::VectorXd& theta) {
    return stepper.predict_obs(theta);
  };
  hooks.end_step = [&](int, const Eigen::VectorXd& mean) {
    companion = stepper.advance(mean);
  };

  const auto t1 = clock::now();
  r.trace = run_filter(hooks, r.y.bottomRows(n), fc);
  r.filter_seconds = std::chrono::duration<double>(clock::now() - t1).count();

  if (spec.band >= 0.0) {
    const Eigen::Index last = r.trace.width_avg.rows() - 1;
    for (std::size_t k = 0; k < p; ++k) {
      r.band_entry.push_back(band_entry_step(r.trace.width_avg.col(k),
                                             r.width_true[k], spec.band));
      if (std::abs(r.trace.width_avg(last, k) - r.width_true[k]) >
          spec.band * r.width_true[k])
        r.accepted = false;
    }
  }
  return r;
}

void write_csv_matrix(std::ostream& os, const std::string& index_name,
                      const std::vector<std::string>& columns,
                      double index_scale, const Eigen::MatrixXd& m) {
  os << index_name << ",t";
  for (const std::string& c : columns) os << "," << c;
  os << "\n" << std::setprecision(17);
  for (Eigen::Index row = 0; row < m.rows(); ++row) {
    os << m(row, 0) << "," << m(row, 0) * index_scale;
    for (Eigen::Index j = 1; j < m.cols(); ++j) os << "," << m(row, j);
    os << "\n";
  }
}

namespace {

// Prepends the step index as column 0.
Eigen::MatrixXd with_steps(const Eigen::MatrixXd& m, int first_step) {
  Eigen::MatrixXd out(m.rows(), m.cols() + 1);
  for (Eigen::Index i = 0; i < m.rows(); ++i) out(i, 0) = first_step + i;
  out.rightCols(m.cols()) = m;
  return out;
}

std::vector<std::string> coord_names(const std::string& stem, int q) {
  std::vector<std::string> names;
  for (int i = 0; i < q; ++i) names.push_back(stem + std::to_string(i));
  return names;
}

} // namespace

void write_run_outputs(const ExperimentSpec& spec, const Config& echo,
                       const TwinResult& r, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);
  const int q = static_cast<int>(r.y.cols());
  const int p = static_cast<int>(r.width_true.size());

  {
    std::ofstream os(fs::path(out_dir) / "observations.csv");
    write_csv_matrix(os, "step", coord_names("y", q), spec.dt,
                     with_steps(r.y, 0));
  }
  {
    std::ofstream os(fs::path(out_dir) / "truth_trace.csv");
    write_csv_matrix(os, "step", coord_names("obs", q), spec.dt,
                     with_steps(r.truth_obs, 0));
  }
  {
    Eigen::MatrixXd est(r.trace.theta_mean.rows(), 5 * p);
    std::vector<std::string> cols;
    for (int k = 0; k < p; ++k) {
      const std::string id = std::to_string(k);
      est.col(5 * k + 0) = r.trace.theta_mean.col(k);
      est.col(5 * k + 1) = r.trace.theta_std.col(k);
      est.col(5 * k + 2) = r.trace.theta_avg.col(k);
      est.col(5 * k + 3) = r.trace.width_step.col(k);
      est.col(5 * k + 4) = r.trace.width_avg.col(k);
      for (const char* stem :
           {"theta_mean_", "theta_std_", "theta_avg_", "width_step_",
            "width_avg_"})
        cols.push_back(stem + id);
    }
    std::ofstream os(fs::path(out_dir) / "estimate_trace.csv");
    write_csv_matrix(os, "step", cols, spec.dt, with_steps(est, 1));
  }
  {
    std::ofstream os(fs::path(out_dir) / "config.echo");
    echo.write(os);
  }

  json summary;
  summary["case"] = spec.label;
  summary["n_steps"] = spec.n_steps();
  summary["dt"] = spec.dt;
  summary["t_end"] = spec.t_end;
  summary["h"] = spec.h;
  summary["observed_coords"] = q;
  summary["width_true"] = r.width_true;
  summary["width_guess"] = spec.width_guess;
  const Eigen::Index last = r.trace.width_avg.rows() - 1;
  std::vector<double> final_avg, final_step, final_theta;
  for (int k = 0; k < p; ++k) {
    final_avg.push_back(r.trace.width_avg(last, k));
    final_step.push_back(r.trace.width_step(last, k));
    final_theta.push_back(r.trace.theta_avg(last, k));
  }
  summary["final"]["width_avg"] = final_avg;
  summary["final"]["width_step"] = final_step;
  summary["final"]["theta_avg"] = final_theta;
  summary["obs"]["noise_var"] = spec.obs_noise_var;
  summary["obs"]["seed"] = spec.obs_seed;
  summary["filter"]["m"] = spec.filter.m;
  summary["filter"]["eps_var"] = std::vector<double>(
      spec.filter.eps_var.data(),
      spec.filter.eps_var.data() + spec.filter.eps_var.size());
  summary["filter"]["r_var"] = spec.r_var;
  summary["filter"]["burn_in"] = spec.filter.burn_in;
  summary["filter"]["theta_floor"] = spec.filter.theta_floor;
  summary["filter"]["seed"] = spec.filter.seed;
  summary["filter"]["threads"] = spec.filter.threads;
  summary["timing"]["truth_seconds"] = r.truth_seconds;
  summary["timing"]["filter_seconds"] = r.filter_seconds;
  if (spec.band >= 0.0) {
    summary["accept"]["band"] = spec.band;
    summary["accept"]["band_entry"] = r.band_entry;
    summary["accept"]["accepted"] = r.accepted;
  }
  std::ofstream os(fs::path(out_dir) / "summary.json");
  os << summary.dump(2) << "\n";
}

} // namespace fracfilt
