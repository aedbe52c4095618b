// Command-line front end: single episodes, batch experiments, Monte Carlo
// drift studies, scoring, raster labeling, photometric augmentation and
// dataset pose plans.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "nanorace/nanorace.hpp"

namespace fs = std::filesystem;
using namespace nanorace;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitConfig = 3;
constexpr int kExitRuntime = 4;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case ErrorCode::io_error:
    case ErrorCode::placement_failed:
      return kExitRuntime;
    default:
      return kExitConfig;
  }
}

Arena load_arena(const std::string& path) {
  if (path.empty()) return build_arena(ArenaConfig::standard());
  return build_arena(arena_config_from_json(load_json_file(path)));
}

json run_summary_json(const RunRecord& rec, const Arena& arena) {
  int crashes = 0, exits = 0;
  for (const auto& e : rec.events) {
    if (e.kind == EventKind::WALL_CONTACT) ++crashes;
    if (e.kind == EventKind::AREA_EXIT) ++exits;
  }
  return {{"seed", rec.seed},
          {"in_area_m", in_area_distance(rec, arena)},
          {"total_m", total_distance(rec)},
          {"outside_frac", outside_fraction(rec, arena)},
          {"gates", count_gate_passes(rec, arena)},
          {"crashes", crashes},
          {"area_exits", exits},
          {"wp_visits", rec.wp_visit_times.size()}};
}

int cmd_run(const std::string& arena_path, const std::string& config_path,
            const std::string& policy_name, double speed, double seconds,
            std::uint64_t seed, const std::string& out_dir) {
  Arena arena = load_arena(arena_path);
  EpisodeConfig cfg;
  if (!config_path.empty()) cfg = episode_config_from_json(load_json_file(config_path));
  if (!policy_name.empty()) cfg.policy.kind = policy_kind_from_string(policy_name);
  if (speed > 0.0) cfg.policy.v_target = speed;
  if (seconds > 0.0) cfg.timings.episode_length = seconds;

  const RunRecord rec = run_episode(arena, cfg, seed);
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "run.csv").string(), run_csv(rec));
  write_text_file((fs::path(out_dir) / "events.csv").string(), events_csv(rec));
  const json summary = run_summary_json(rec, arena);
  save_json_file((fs::path(out_dir) / "summary.json").string(), summary);
  std::cout << summary.dump(2) << "\n";
  return 0;
}

int cmd_batch(const std::string& config_path, std::optional<std::uint64_t> seed,
              const std::string& out_dir) {
  ExperimentConfig cfg;
  if (!config_path.empty())
    cfg = experiment_config_from_json(load_json_file(config_path));
  if (seed) cfg.master_seed = *seed;
  const BatchSummary summary = run_batch(cfg, out_dir);
  std::printf("%-10s %-6s %8s %12s %8s %8s\n", "policy", "speed", "in_area",
              "outside_frac", "gates", "crashes");
  for (const auto& c : summary.cells) {
    std::printf("%-10s %-6.2f %8.1f %12.4f %8.1f %8.1f\n", policy_kind_name(c.policy),
                c.speed, c.median_in_area_m, c.median_outside_frac, c.median_gates,
                c.median_crashes);
  }
  return 0;
}

int cmd_mc(const std::string& traj_path, const std::string& model_path, int n,
           std::uint64_t seed, double dt, double half_side, double speed,
           double duration, int dump_realizations, const std::string& out_dir) {
  std::vector<Pose2> nominal;
  if (!traj_path.empty()) {
    nominal = read_trajectory_csv(traj_path);
  } else {
    nominal = square_lap_trajectory(half_side, speed, dt, duration);
  }
  ErrorModel model = ErrorModel::defaults();
  if (!model_path.empty()) model = error_model_from_json(load_json_file(model_path));

  const MarginStats stats = margin_study(nominal, model, n, seed, dt);
  fs::create_directories(out_dir);
  write_text_file((fs::path(out_dir) / "margins.csv").string(), margins_csv(stats));

  json out = {{"realizations", n},
              {"seed", seed},
              {"model", error_model_to_json(model)},
              {"margin_median", stats.margin_quantile(0.5)},
              {"margin_p95", stats.margin_quantile(0.95)},
              {"fraction_within_1m", stats.fraction_within(1.0)},
              {"fraction_within_2m", stats.fraction_within(2.0)}};
  for (std::size_t ti = 0; ti < stats.thresholds.size(); ++ti) {
    const std::string tag = fmt_g(stats.thresholds[ti]) + "m";
    out["median_time_outside_" + tag] = median(stats.time_outside[ti]);
    std::vector<double> cr(stats.crossings[ti].begin(), stats.crossings[ti].end());
    out["median_crossings_" + tag] = median(cr);
  }
  save_json_file((fs::path(out_dir) / "stats.json").string(), out);
  std::cout << out.dump(2) << "\n";

  for (int r = 0; r < dump_realizations && r < n; ++r) {
    const auto traj = corrupt_trajectory(nominal, model, derive_seed(seed, r), dt);
    char name[48];
    std::snprintf(name, sizeof(name), "realization_%04d.csv", r);
    write_text_file((fs::path(out_dir) / name).string(), trajectory_csv(traj, dt));
  }
  return 0;
}

int cmd_score(std::optional<double> dist, int gates, int env, int comp,
              const std::string& traj_path, const std::string& arena_path) {
  if (dist) {
    const double s = score({*dist, gates, env, comp});
    std::printf("%.10g\n", s);
    return 0;
  }
  if (traj_path.empty())
    fail(ErrorCode::bad_config, "need either --dist or --traj");
  const Arena arena = load_arena(arena_path);
  const auto traj = read_trajectory_csv(traj_path);
  std::vector<Vec2> pts;
  pts.reserve(traj.size());
  for (const auto& p : traj) pts.push_back(p.pos);
  const double in_area = in_area_distance_points(pts, arena);
  const int gate_count = count_gate_passes_points(pts, arena);
  const double total = score({in_area, gate_count, env, comp});
  const json out = {{"in_area_m", in_area},  {"gates", gate_count},
                    {"alpha_env", env},      {"alpha_comp", comp},
                    {"score", total}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

int cmd_label(const std::string& depth_path, const std::string& seg_path,
              bool ground_aware, double d_max, double fraction) {
  const DepthRaster depth = depth_from_pgm(read_pgm_file(depth_path));
  const SegRaster seg = seg_from_pgm(read_pgm_file(seg_path));
  SensorGeometry geom;
  geom.d_max = d_max;
  geom.pixel_fraction = fraction;
  const SectorLabels l = label_from_rasters(depth, seg, geom, ground_aware);
  const json out = {{"left", l.left}, {"center", l.center}, {"right", l.right}};
  std::cout << out.dump() << "\n";
  return 0;
}

int cmd_augment(const std::string& in_path, const std::string& out_path,
                const std::string& params_path, std::uint64_t seed, int resize_to) {
  GrayImage img = gray_from_pgm(read_pgm_file(in_path));
  AugParams params;
  if (!params_path.empty()) params = aug_params_from_json(load_json_file(params_path));
  img = augment(img, params, seed);
  if (resize_to > 0) img = resize_gray(img, resize_to, resize_to);
  write_pgm_file(out_path, gray_to_pgm(img));
  return 0;
}

int cmd_poses(const std::string& arena_path, const std::string& plan_path,
              std::uint64_t seed, const std::string& out_path) {
  const Arena arena = load_arena(arena_path);
  DatasetPlan plan;
  if (!plan_path.empty()) plan = dataset_plan_from_json(load_json_file(plan_path));
  const auto poses = sample_dataset_poses(arena, plan, seed);
  const std::string csv = poses_csv(poses);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    write_text_file(out_path, csv);
    std::cout << poses.size() << " poses written to " << out_path << "\n";
  }
  return 0;
}

int cmd_dump_defaults() {
  const json out = {{"arena", arena_config_to_json(ArenaConfig::standard())},
                    {"episode", episode_config_to_json(EpisodeConfig{})},
                    {"experiment", experiment_config_to_json(ExperimentConfig{})},
                    {"drift_defaults", error_model_to_json(ErrorModel::defaults())},
                    {"augment", aug_params_to_json(AugParams{})},
                    {"dataset_plan", dataset_plan_to_json(DatasetPlan{})}};
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nano-drone racing simulation toolkit"};
  app.require_subcommand(1);

  std::string arena_path, config_path, out_dir, policy_name;
  std::string traj_path, model_path, depth_path, seg_path, in_path, out_path;
  std::string plan_path, params_path;
  std::uint64_t seed = 1;
  std::optional<std::uint64_t> batch_seed;
  std::optional<double> dist;
  double speed = 0.0, seconds = 0.0, dt = 0.01, half_side = 3.0;
  double mc_speed = 1.5, duration = 300.0, d_max = 2.0, fraction = 0.10;
  int n = 1024, gates = 0, env = 10, comp = 5, dump_realizations = 0, resize_to = 0;
  bool ground_aware = false;

  auto* run = app.add_subcommand("run", "simulate one episode");
  run->add_option("--arena", arena_path, "arena JSON file");
  run->add_option("--config", config_path, "episode config JSON file");
  run->add_option("--policy", policy_name, "baseline|policy1|policy2");
  run->add_option("--speed", speed, "target speed, m/s");
  run->add_option("--seconds", seconds, "episode length, s");
  run->add_option("--seed", seed, "episode seed");
  run->add_option("--out", out_dir, "output directory")->required();

  auto* batch = app.add_subcommand("batch", "run the policy/speed experiment grid");
  batch->add_option("--config", config_path, "experiment config JSON file");
  batch->add_option("--seed", [&batch_seed](const std::vector<std::string>& v) {
    batch_seed = std::stoull(v.at(0));
    return true;
  }, "master seed override");
  batch->add_option("--out", out_dir, "output directory")->required();

  auto* mc = app.add_subcommand("mc", "Monte Carlo drift margin study");
  mc->add_option("--traj", traj_path, "nominal trajectory CSV (t,x,y,yaw)");
  mc->add_option("--model", model_path, "error model JSON file");
  mc->add_option("-n,--realizations", n, "number of realizations");
  mc->add_option("--seed", seed, "study seed");
  mc->add_option("--dt", dt, "time step, s");
  mc->add_option("--half-side", half_side, "generated square half side, m");
  mc->add_option("--speed", mc_speed, "generated path speed, m/s");
  mc->add_option("--duration", duration, "generated path duration, s");
  mc->add_option("--dump-realizations", dump_realizations,
                 "write the first K corrupted trajectories");
  mc->add_option("--out", out_dir, "output directory")->required();

  auto* sc = app.add_subcommand("score", "competition score");
  sc->add_option("--dist", [&dist](const std::vector<std::string>& v) {
    dist = std::stod(v.at(0));
    return true;
  }, "in-area distance, m");
  sc->add_option("--gates", gates, "gate passes");
  sc->add_option("--env", env, "environment multiplier (1|5|10)");
  sc->add_option("--comp", comp, "computation multiplier (1|5)");
  sc->add_option("--traj", traj_path, "trajectory CSV to score");
  sc->add_option("--arena", arena_path, "arena JSON for trajectory scoring");

  auto* label = app.add_subcommand("label", "collision labels from depth/seg rasters");
  label->add_option("--depth", depth_path, "16-bit depth PGM (millimeters)")->required();
  label->add_option("--seg", seg_path, "8-bit segmentation PGM")->required();
  label->add_flag("--ground-aware", ground_aware, "count out-of-area ground as obstacle");
  label->add_option("--d-max", d_max, "collision distance threshold, m");
  label->add_option("--fraction", fraction, "pixel fraction threshold");

  auto* aug = app.add_subcommand("augment", "photometric augmentation of a PGM image");
  aug->add_option("--in", in_path, "input PGM")->required();
  aug->add_option("--out", out_path, "output PGM")->required();
  aug->add_option("--params", params_path, "augmentation params JSON");
  aug->add_option("--seed", seed, "noise seed");
  aug->add_option("--resize-to", resize_to, "square resize after augmentation, px");

  auto* poses = app.add_subcommand("poses", "dataset pose plan CSV");
  poses->add_option("--arena", arena_path, "arena JSON file");
  poses->add_option("--plan", plan_path, "dataset plan JSON file");
  poses->add_option("--seed", seed, "plan seed");
  poses->add_option("--out", out_path, "output CSV (stdout when omitted)");

  app.add_subcommand("dump-defaults", "print all default configs as JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (app.got_subcommand("run"))
      return cmd_run(arena_path, config_path, policy_name, speed, seconds, seed, out_dir);
    if (app.got_subcommand("batch")) return cmd_batch(config_path, batch_seed, out_dir);
    if (app.got_subcommand("mc"))
      return cmd_mc(traj_path, model_path, n, seed, dt, half_side, mc_speed, duration,
                    dump_realizations, out_dir);
    if (app.got_subcommand("score"))
      return cmd_score(dist, gates, env, comp, traj_path, arena_path);
    if (app.got_subcommand("label"))
      return cmd_label(depth_path, seg_path, ground_aware, d_max, fraction);
    if (app.got_subcommand("augment"))
      return cmd_augment(in_path, out_path, params_path, seed, resize_to);
    if (app.got_subcommand("poses")) return cmd_poses(arena_path, plan_path, seed, out_path);
    if (app.got_subcommand("dump-defaults")) return cmd_dump_defaults();
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return 0;
}
