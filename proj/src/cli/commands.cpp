#include "minact/cli/commands.hpp"

#include <chrono>
#include <cmath>
#include <filesystem>
#include <functional>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "minact/cli/artifacts.hpp"
#include "minact/errors.hpp"

namespace minact::cli {

namespace {

using ojson = nlohmann::ordered_json;
using Clock = std::chrono::steady_clock;

constexpr const char* kVersion = "1.0.0";

std::vector<std::string> coord_names(const std::string& prefix, Eigen::Index d) {
  if (d == 2) return {prefix + "x", prefix + "y"};
  std::vector<std::string> out;
  for (Eigen::Index i = 1; i <= d; ++i) out.push_back(prefix + std::to_string(i));
  return out;
}

template <class... Parts>
std::vector<std::string> header(Parts&&... parts) {
  std::vector<std::string> out;
  (
      [&](auto&& p) {
        if constexpr (std::is_convertible_v<decltype(p), std::string>)
          out.emplace_back(p);
        else
          out.insert(out.end(), p.begin(), p.end());
      }(parts),
      ...);
  return out;
}

void cells(Csv& csv, const Vec& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) csv.cell(v(i));
}

ojson to_json(const Vec& v) {
  ojson a = ojson::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(v(i));
  return a;
}

std::vector<double> uniform_times(int n) {
  std::vector<double> t(n);
  for (int i = 0; i < n; ++i) t[i] = n == 1 ? 0.0 : static_cast<double>(i) / (n - 1);
  return t;
}

ojson path_json(const ChebyshevPath& path, int j, const std::vector<double>& times) {
  ojson p;
  p["j"] = j;
  p["w0"] = to_json(path.w0);
  p["w1"] = to_json(path.w1);
  ojson coeffs = ojson::array();
  for (Eigen::Index k = 0; k < path.coeffs.cols(); ++k) coeffs.push_back(to_json(path.coeffs.col(k)));
  p["coeffs"] = coeffs;
  ojson samples = ojson::array();
  for (double t : times) {
    ojson row = ojson::array({t});
    const Vec w = path_state(path, t).w;
    for (Eigen::Index i = 0; i < w.size(); ++i) row.push_back(w(i));
    samples.push_back(row);
  }
  p["samples"] = samples;
  return p;
}

struct Context {
  const json& config;
  Section root;
  std::uint64_t seed;
  ArtifactSet artifacts;
  std::ostream& log;
  double solve_seconds = 0.0;
};

std::uint64_t read_seed(const Section& root) {
  if (!root.has("seed")) return 0;
  const json& v = root.raw("seed");
  if (!v.is_number_integer() || v.get<long long>() < 0) throw ConfigError("seed", "expected a non-negative integer");
  return v.get<std::uint64_t>();
}

// ---- pairwise ----

void cmd_pairwise(Context& ctx) {
  const DensityPtr density = parse_density(ctx.root.child("density"));
  const PairwiseConfig cfg = ctx.root.has("solver") ? parse_pairwise_config(ctx.root.child("solver")) : PairwiseConfig{};
  cfg.validate();
  std::shared_ptr<MetricField> metric;
  if (ctx.root.has("metric")) metric = parse_metric(ctx.root.child("metric"), density, cfg.alpha);
  const auto pairs = parse_pairs(ctx.root, "pairs");
  const int n_samples = ctx.root.integer("samples", 101, 2);
  ctx.root.finish();

  const DensityLagrangian dens(*density, cfg.alpha);
  std::unique_ptr<MetricLagrangian> met;
  if (metric) met = std::make_unique<MetricLagrangian>(*metric);
  const Lagrangian& lag = met ? static_cast<const Lagrangian&>(*met) : dens;

  const auto d = pairs.front().x0.size();
  Csv summary(header("pair", coord_names("x0_", d), coord_names("x1_", d), "action", "objective", "iterations",
                     "converged", "grad_norm"));
  Csv paths(header("pair", "t", coord_names("", d)));
  Csv history(header("pair", "iteration", "objective"));
  const auto times = uniform_times(n_samples);
  const auto t0 = Clock::now();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p].x0.size() != d) throw ConfigError("pairs", "all pairs must share one dimension");
    const PairwiseResult r = solve_pairwise(pairs[p].x0, pairs[p].x1, lag, cfg);
    summary.cell(static_cast<int>(p));
    cells(summary, pairs[p].x0);
    cells(summary, pairs[p].x1);
    summary.cell(r.action).cell(r.objective).cell(r.iterations).cell(r.converged ? 1 : 0).cell(r.final_grad_norm);
    summary.end_row();
    for (double t : times) {
      paths.cell(static_cast<int>(p)).cell(t);
      cells(paths, path_state(r.path, t).w);
      paths.end_row();
    }
    for (std::size_t i = 0; i < r.objective_history.size(); ++i)
      history.cell(static_cast<int>(p)).cell(static_cast<int>(i)).cell(r.objective_history[i]).end_row();
    ctx.log << "pair " << p << ": action " << fmt(r.action) << ", " << r.iterations << " iterations"
            << (r.converged ? "" : " (not converged)") << "\n";
  }
  ctx.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  ctx.artifacts.add("pairwise_summary.csv", summary.str());
  ctx.artifacts.add("pairwise_paths.csv", paths.str());
  ctx.artifacts.add("pairwise_history.csv", history.str());
}

// ---- validate ----

void cmd_validate(Context& ctx) {
  PairwiseConfig cfg = ctx.root.has("solver") ? parse_pairwise_config(ctx.root.child("solver")) : PairwiseConfig{};
  if (cfg.alpha != 1.0) throw ConfigError("solver.alpha", "the shooting oracle covers the standard Gaussian with alpha = 1");
  cfg.validate();
  const ShootingOptions shoot = ctx.root.has("shooting") ? parse_shooting(ctx.root.child("shooting")) : ShootingOptions{};
  const auto pairs = parse_pairs(ctx.root, "pairs");
  const double threshold = ctx.root.positive("sup_threshold", 1e-2);
  ctx.root.finish();

  StandardGaussian gauss;
  Csv traj(header("pair", "t", coord_names("cheb_", 2), coord_names("el_", 2)));
  Csv summary(header("pair", "action_cheb", "action_el", "action_rel_err", "sup_dev", "terminal_mismatch",
                     "iterations", "converged", "shooting_evaluations"));
  double max_dev = 0.0, max_rel = 0.0;
  const auto t0 = Clock::now();
  for (std::size_t p = 0; p < pairs.size(); ++p) {
    if (pairs[p].x0.size() != 2) throw ConfigError("pairs", "validation pairs must be planar");
    const PairwiseResult r = solve_pairwise(pairs[p].x0, pairs[p].x1, gauss, cfg);
    const ShootingResult s = shoot_bvp(pairs[p].x0, pairs[p].x1, shoot);
    const double a_el = oracle_action(pairs[p].x0, s.v_star, cfg.quadrature_order, shoot.ivp);
    double dev = 0.0;
    for (const auto& smp : s.trajectory.samples) {
      const Vec w = path_state(r.path, smp.t).w;
      dev = std::max(dev, (w - smp.w).cwiseAbs().maxCoeff());
      traj.cell(static_cast<int>(p)).cell(smp.t);
      cells(traj, w);
      cells(traj, smp.w);
      traj.end_row();
    }
    const double rel = std::abs(r.action - a_el) / std::abs(a_el);
    max_dev = std::max(max_dev, dev);
    max_rel = std::max(max_rel, rel);
    summary.cell(static_cast<int>(p)).cell(r.action).cell(a_el).cell(rel).cell(dev).cell(s.terminal_mismatch);
    summary.cell(r.iterations).cell(r.converged ? 1 : 0).cell(s.evaluations).end_row();
    ctx.log << "pair " << p << ": sup deviation " << fmt(dev) << ", action rel. error " << fmt(rel) << "\n";
  }
  ctx.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  ojson report;
  report["pairs"] = pairs.size();
  report["max_sup_deviation"] = max_dev;
  report["max_action_rel_error"] = max_rel;
  report["sup_threshold"] = threshold;
  report["within_threshold"] = max_dev < threshold;
  ctx.artifacts.add("validate_trajectories.csv", traj.str());
  ctx.artifacts.add("validate_summary.csv", summary.str());
  ctx.artifacts.add("validate_report.json", report.dump(2) + "\n");
  ctx.log << "max sup deviation " << fmt(max_dev) << (max_dev < threshold ? " (ok)" : " (above threshold)") << "\n";
}

// ---- transport ----

struct Clouds {
  Cloud X0, X1;
};

Clouds parse_transport_scene(const Section& s, std::uint64_t seed) {
  const std::string kind = s.text("kind", "");
  Clouds c;
  const int m = s.integer("m", 30, 2);
  if (kind == "ring") {
    const double z0 = s.number("z0", 0.0), z1 = s.number("z1", M_PI / 2), sigma = s.positive("cloud_sigma", 0.1);
    Vec c0(2), c1(2);
    c0 << std::cos(z0), std::sin(z0);
    c1 << std::cos(z1), std::sin(z1);
    c.X0 = sample_gaussian_cloud(c0, sigma, m, split_seed(seed, 10));
    c.X1 = sample_gaussian_cloud(c1, sigma, m, split_seed(seed, 11));
  } else if (kind == "translation") {
    Vec center = s.vector("center", Vec::Zero(2));
    const Vec shift = s.vector("shift");
    if (shift.size() != center.size()) throw ConfigError(s.path("shift"), "dimension differs from center");
    c.X0 = sample_gaussian_cloud(center, s.positive("sigma", 0.5), m, split_seed(seed, 10));
    c.X1 = c.X0.colwise() + shift;
  } else if (kind == "gaussian-clouds") {
    const Vec a = s.vector("source_center"), b = s.vector("target_center");
    if (a.size() != b.size()) throw ConfigError(s.path("target_center"), "dimension differs from source_center");
    const double sigma = s.positive("sigma", 0.2);
    c.X0 = sample_gaussian_cloud(a, sigma, m, split_seed(seed, 10));
    c.X1 = sample_gaussian_cloud(b, sigma, m, split_seed(seed, 11));
  } else {
    throw ConfigError(s.path("kind"), "expected one of ring, translation, gaussian-clouds");
  }
  s.finish();
  return c;
}

ojson transport_summary(const TransportResult& r) {
  ojson j;
  j["total_cost"] = r.total_cost;
  j["objective"] = r.objective;
  j["penalty0"] = r.penalty0;
  j["penalty1"] = r.penalty1;
  j["lambda0"] = r.lambda0;
  j["lambda1"] = r.lambda1;
  j["iterations"] = r.iterations;
  j["converged"] = r.converged;
  j["stagnated"] = r.stagnated;
  j["final_grad_norm"] = r.final_grad_norm;
  j["bandwidth"] = r.theta.bandwidth;
  return j;
}

void add_transport_artifacts(Context& ctx, const std::string& prefix, const Cloud& X0, const Cloud& X1,
                             const TransportResult& r, int n_samples) {
  const auto d = X0.rows();
  Csv ends(header("j", coord_names("x0_", d), coord_names("x1_", d), coord_names("w0_", d), coord_names("w1_", d)));
  for (Eigen::Index j = 0; j < X0.cols(); ++j) {
    ends.cell(static_cast<int>(j));
    cells(ends, X0.col(j));
    cells(ends, X1.col(j));
    cells(ends, r.W0.col(j));
    cells(ends, r.W1.col(j));
    ends.end_row();
  }
  Csv trace(header("iter", "S_dist", "penalty0", "penalty1", "J"));
  for (const auto& t : r.trace) trace.cell(t.iteration).cell(t.action).cell(t.penalty0).cell(t.penalty1).cell(t.objective).end_row();
  ojson paths;
  paths["paths"] = ojson::array();
  const auto times = uniform_times(n_samples);
  for (std::size_t j = 0; j < r.paths.size(); ++j) paths["paths"].push_back(path_json(r.paths[j], static_cast<int>(j), times));
  ctx.artifacts.add(prefix + "_endpoints.csv", ends.str());
  ctx.artifacts.add(prefix + "_trace.csv", trace.str());
  ctx.artifacts.add(prefix + "_paths.json", paths.dump() + "\n");
  ctx.artifacts.add(prefix + "_summary.json", transport_summary(r).dump(2) + "\n");
}

void cmd_transport(Context& ctx) {
  const DensityPtr density = parse_density(ctx.root.child("density"));
  const TransportConfig cfg =
      ctx.root.has("transport") ? parse_transport_config(ctx.root.child("transport"), ctx.seed) : [&] {
        TransportConfig c;
        c.seed = ctx.seed;
        return c;
      }();
  const Clouds clouds = parse_transport_scene(ctx.root.child("scene"), ctx.seed);
  const int n_samples = ctx.root.integer("samples", 101, 2);
  ctx.root.finish();

  const auto t0 = Clock::now();
  const TransportResult r = solve_transport(clouds.X0, clouds.X1, *density, cfg);
  ctx.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  ctx.log << "transport: cost " << fmt(r.total_cost) << ", penalties " << fmt(r.penalty0) << " / " << fmt(r.penalty1)
          << ", " << r.iterations << " iterations" << (r.converged ? "" : " (not converged)") << "\n";
  add_transport_artifacts(ctx, "transport", clouds.X0, clouds.X1, r, n_samples);
}

// ---- cluster ----

ClusterSceneSpec parse_cluster_scene(const Section& s, std::uint64_t seed) {
  ClusterSceneSpec c;
  c.ridge_x = s.positive("ridge_x", c.ridge_x);
  c.ridge_half_len = s.positive("ridge_half_len", c.ridge_half_len);
  c.ridge_components = s.integer("ridge_components", c.ridge_components, 1);
  c.ridge_sigma = s.positive("ridge_sigma", c.ridge_sigma);
  c.cloud_y = s.positive("cloud_y", c.cloud_y);
  c.cloud_sigma = s.positive("cloud_sigma", c.cloud_sigma);
  c.cloud_size = s.integer("cloud_size", c.cloud_size, 2);
  c.seed = seed;
  s.finish();
  return c;
}

ojson labels_json(const Clustering& c) {
  ojson j;
  j["labels"] = c.labels;
  j["merges"] = ojson::array();
  for (const auto& m : c.merges) j["merges"].push_back({{"a", m.a}, {"b", m.b}, {"distance", m.distance}, {"size", m.size}});
  return j;
}

void cmd_cluster(Context& ctx) {
  const ClusterSceneSpec spec = parse_cluster_scene(ctx.root.child("scene"), ctx.seed);
  TransportConfig cfg;
  if (ctx.root.has("transport")) cfg = parse_transport_config(ctx.root.child("transport"), ctx.seed);
  cfg.seed = ctx.seed;
  const int k = ctx.root.integer("k", 20, 2);
  const int n_clusters = ctx.root.integer("n_clusters", 2, 1);
  const int threads = ctx.root.integer("threads", 0, 0);
  ctx.root.finish();
  if (k > spec.cloud_size) throw ConfigError("k", "must not exceed scene.cloud_size");
  if (n_clusters > 4) throw ConfigError("n_clusters", "the scene has four clouds");

  const ClusterScene scene = make_cluster_scene(spec);
  const auto t0 = Clock::now();
  const DissimilarityMatrix D = dissimilarity_matrix(scene.clouds, *scene.density, cfg, k, threads);
  const Mat E = euclidean_dissimilarity_matrix(scene.clouds, k, cfg.seed);
  const Mat E_sym = 0.5 * (E + E.transpose());
  const Clustering action = average_linkage_cluster(D.D_sym, n_clusters);
  const Clustering eucl = average_linkage_cluster(E_sym, n_clusters);
  ctx.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  Csv dcsv(header("g", "h", "D", "D_sym", "euclidean", "total_cost", "penalty0", "penalty1", "iterations", "converged"));
  for (const auto& e : D.provenance) {
    dcsv.cell(e.g).cell(e.h).cell(D.D(e.g, e.h)).cell(D.D_sym(e.g, e.h)).cell(E(e.g, e.h));
    dcsv.cell(e.total_cost).cell(e.penalty0).cell(e.penalty1).cell(e.iterations).cell(e.converged ? 1 : 0).end_row();
  }
  Csv clouds(header("g", "i", "x", "y"));
  for (std::size_t g = 0; g < scene.clouds.size(); ++g)
    for (Eigen::Index i = 0; i < scene.clouds[g].cols(); ++i)
      clouds.cell(static_cast<int>(g)).cell(static_cast<int>(i)).cell(scene.clouds[g](0, i)).cell(scene.clouds[g](1, i)).end_row();
  ojson labels;
  labels["action"] = labels_json(action);
  labels["euclidean"] = labels_json(eucl);
  labels["intended"] = scene.intended;
  ctx.artifacts.add("cluster_dissimilarity.csv", dcsv.str());
  ctx.artifacts.add("cluster_clouds.csv", clouds.str());
  ctx.artifacts.add("cluster_labels.json", labels.dump(2) + "\n");
  ctx.log << "action labels:";
  for (int l : action.labels) ctx.log << ' ' << l;
  ctx.log << "\neuclidean labels:";
  for (int l : eucl.labels) ctx.log << ' ' << l;
  ctx.log << "\n";
}

// ---- match ----

MatchingSceneSpec parse_matching_scene(const Section& s, std::uint64_t seed) {
  MatchingSceneSpec c;
  c.z0 = s.number("z0", c.z0);
  c.delta_z = s.number("delta_z", c.delta_z);
  c.cloud_sigma = s.positive("cloud_sigma", c.cloud_sigma);
  c.m = s.integer("m", c.m, 2);
  c.ring_sigma = s.positive("ring_sigma", c.ring_sigma);
  c.ring_nz = s.integer("ring_nz", c.ring_nz, 1);
  c.seed = seed;
  s.finish();
  return c;
}

void cmd_match(Context& ctx) {
  const MatchingSceneSpec spec = parse_matching_scene(ctx.root.child("scene"), ctx.seed);
  TransportConfig cfg;
  if (ctx.root.has("transport")) cfg = parse_transport_config(ctx.root.child("transport"), ctx.seed);
  cfg.seed = ctx.seed;
  const int n_samples = ctx.root.integer("samples", 101, 2);
  ctx.root.finish();

  const MatchingScene scene = make_matching_scene(spec);
  const auto t0 = Clock::now();
  const MatchingReport rep = run_matching(scene, DensityLagrangian(*scene.density, cfg.alpha), cfg);
  ctx.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();

  Csv pairing(header("i", "j_method", "j_baseline", "j_truth", "j_snapped"));
  for (std::size_t i = 0; i < rep.pairs.size(); ++i)
    pairing.cell(static_cast<int>(i)).cell(rep.pairs[i]).cell(rep.baseline_pairs[i]).cell(rep.truth[i]).cell(rep.snapped[i]).end_row();
  ojson summary;
  summary["accuracy"] = rep.accuracy;
  summary["baseline_accuracy"] = rep.baseline_accuracy;
  summary["snap_collisions"] = rep.snap_collisions;
  summary["delta_z"] = scene.delta_z;
  summary["transport"] = transport_summary(rep.transport);
  ctx.artifacts.add("match_pairing.csv", pairing.str());
  ctx.artifacts.add("match_summary.json", summary.dump(2) + "\n");
  add_transport_artifacts(ctx, "match_transport", scene.X0, scene.X1, rep.transport, n_samples);
  ctx.log << "accuracy " << fmt(rep.accuracy) << " vs Euclidean baseline " << fmt(rep.baseline_accuracy) << "\n";
}

// ---- density-grid ----

void cmd_density_grid(Context& ctx) {
  const DensityPtr density = parse_density(ctx.root.child("density"));
  double x_min = -1.5, x_max = 1.5, y_min = -1.5, y_max = 1.5;
  int nx = 200, ny = 200;
  if (ctx.root.has("grid")) {
    const Section g = ctx.root.child("grid");
    x_min = g.number("x_min", x_min);
    x_max = g.number("x_max", x_max);
    y_min = g.number("y_min", y_min);
    y_max = g.number("y_max", y_max);
    nx = g.integer("nx", nx, 2);
    ny = g.integer("ny", ny, 2);
    g.finish();
    if (!(x_min < x_max) || !(y_min < y_max)) throw ConfigError("grid", "empty bounding box");
  }
  ctx.root.finish();
  const auto t0 = Clock::now();
  const auto grid = density_grid(*density, x_min, x_max, y_min, y_max, nx, ny);
  ctx.solve_seconds = std::chrono::duration<double>(Clock::now() - t0).count();
  Csv csv(header("x", "y", "rho", "rho_1_5"));
  for (const auto& p : grid) csv.cell(p.x).cell(p.y).cell(p.rho).cell(std::pow(p.rho, 0.2)).end_row();
  ctx.artifacts.add("density_grid.csv", csv.str());
}

const std::map<std::string, std::function<void(Context&)>>& commands() {
  static const std::map<std::string, std::function<void(Context&)>> table{
      {"pairwise", cmd_pairwise}, {"validate", cmd_validate}, {"transport", cmd_transport},
      {"cluster", cmd_cluster},   {"match", cmd_match},       {"density-grid", cmd_density_grid}};
  return table;
}

void write_snapshot(const std::string& out_dir, const std::string& what, int iteration,
                    const std::vector<double>& snapshot, std::ostream& err) {
  try {
    std::filesystem::create_directories(out_dir);
    const std::string path = (std::filesystem::path(out_dir) / "failure_snapshot.json").string();
    ojson j;
    j["error"] = what;
    j["iteration"] = iteration;
    j["snapshot"] = snapshot;
    ArtifactSet::write_atomic(path, j.dump() + "\n");
    err << "snapshot: " << path << "\n";
  } catch (const std::exception& e) {
    err << "could not write snapshot: " << e.what() << "\n";
  }
}

}  // namespace

int run_command(const std::string& command, json config, const std::string& out_dir, std::ostream& log,
                std::ostream& err) {
  const auto it = commands().find(command);
  if (it == commands().end()) {
    err << "unknown command '" << command << "'\n";
    return kUsage;
  }
  const auto start = Clock::now();
  try {
    Context ctx{config, Section(config, ""), 0, ArtifactSet(out_dir), log};
    ctx.seed = read_seed(ctx.root);
    it->second(ctx);

    ojson manifest;
    manifest["command"] = command;
    manifest["version"] = kVersion;
    manifest["config_sha256"] = sha256_hex(config.dump());
    manifest["seed"] = ctx.seed;
    manifest["artifact_list"] = ctx.artifacts.names();
    manifest["timings"] = {{"solve_seconds", ctx.solve_seconds},
                           {"total_seconds", std::chrono::duration<double>(Clock::now() - start).count()}};
    ctx.artifacts.add("manifest.json", manifest.dump(2) + "\n");
    ctx.artifacts.commit();
    return kOk;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const InvalidArgument& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const UnsupportedDimension& e) {
    err << "config error: " << e.what() << "\n";
    return kConfigError;
  } catch (const OptimizationFailure& e) {
    err << "solver failure: " << e.what() << "\n";
    write_snapshot(out_dir, e.what(), e.iteration(), e.snapshot(), err);
    return kSolverFailure;
  } catch (const std::runtime_error& e) {
    // Integration, shooting, range, degenerate-cloud and heuristic failures.
    err << "solver failure: " << e.what() << "\n";
    write_snapshot(out_dir, e.what(), -1, {}, err);
    return kSolverFailure;
  }
}

int run_cli(int argc, char** argv) {
  CLI::App app{"Minimal-action optimal transport experiments"};
  app.require_subcommand(1);
  std::string config_path, out_dir;
  long long seed = -1;
  std::vector<std::string> sets;
  for (const auto& [name, fn] : commands()) {
    auto* sub = app.add_subcommand(name);
    sub->add_option("-c,--config", config_path, "JSON config file")->required();
    sub->add_option("-o,--out", out_dir, "output directory (default out/<command>)");
    sub->add_option("--seed", seed, "root seed, overrides the config")->check(CLI::NonNegativeNumber);
    sub->add_option("--set", sets, "override a config key: dotted.path=value");
  }
  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }
  const std::string command = app.get_subcommands().front()->get_name();
  if (out_dir.empty()) out_dir = "out/" + command;
  json config;
  try {
    config = load_config_file(config_path);
    for (const auto& s : sets) apply_override(config, s);
    if (seed >= 0) config["seed"] = seed;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kConfigError;
  }
  return run_command(command, std::move(config), out_dir, std::cout, std::cerr);
}

}  // namespace minact::cli
