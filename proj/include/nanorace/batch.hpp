#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "nanorace/analysis.hpp"
#include "nanorace/arena.hpp"
#include "nanorace/error.hpp"
#include "nanorace/io.hpp"
#include "nanorace/json_config.hpp"
#include "nanorace/scoring.hpp"
#include "nanorace/vehicle.hpp"

namespace nanorace {

// Batch protocol: every (policy, speed) cell runs runs_per_config episodes;
// run r of every cell shares one layout seed so the obstacle placements are
// consistent across cells, while the episode streams differ per cell.
struct ExperimentConfig {
  ArenaConfig arena = ArenaConfig::standard();
  EpisodeConfig episode;  // policy kind and v_target are overridden per cell
  std::vector<PolicyKind> policies = {PolicyKind::BASELINE, PolicyKind::POLICY1,
                                      PolicyKind::POLICY2};
  std::vector<double> speeds = {1.0, 1.5, 2.0};
  int runs_per_config = 10;
  std::uint64_t master_seed = 1;
  bool randomize_layout = true;

  void validate() const {
    episode.validate();
    if (policies.empty() || speeds.empty())
      fail(ErrorCode::bad_config, "need at least one policy and one speed");
    for (const double s : speeds)
      if (s <= 0.0) fail(ErrorCode::bad_config, "speeds must be positive");
    if (runs_per_config < 1) fail(ErrorCode::bad_config, "runs_per_config must be >= 1");
  }
};

struct RunMetrics {
  PolicyKind policy = PolicyKind::BASELINE;
  double speed = 0.0;
  int run = 0;
  std::uint64_t seed = 0;
  double in_area_m = 0.0;
  double total_m = 0.0;
  double outside_frac = 0.0;
  int gates = 0;
  int crashes = 0;
  int area_exits = 0;
};

struct CellSummary {
  PolicyKind policy = PolicyKind::BASELINE;
  double speed = 0.0;
  int runs = 0;
  double median_in_area_m = 0.0;
  double median_outside_frac = 0.0;
  double median_gates = 0.0;
  double median_crashes = 0.0;
};

struct BatchSummary {
  std::vector<RunMetrics> runs;
  std::vector<CellSummary> cells;
};

inline json experiment_config_to_json(const ExperimentConfig& c) {
  json policies = json::array();
  for (const auto p : c.policies) policies.push_back(policy_kind_name(p));
  return {{"arena", arena_config_to_json(c.arena)},
          {"episode", episode_config_to_json(c.episode)},
          {"policies", policies},
          {"speeds", c.speeds},
          {"runs_per_config", c.runs_per_config},
          {"master_seed", c.master_seed},
          {"randomize_layout", c.randomize_layout}};
}

inline ExperimentConfig experiment_config_from_json(const json& j) {
  detail::check_keys(j, "experiment",
                     {"arena", "episode", "policies", "speeds", "runs_per_config",
                      "master_seed", "randomize_layout"});
  ExperimentConfig c;
  if (j.contains("arena")) c.arena = arena_config_from_json(j.at("arena"));
  if (j.contains("episode")) c.episode = episode_config_from_json(j.at("episode"));
  if (j.contains("policies")) {
    c.policies.clear();
    for (const auto& p : j.at("policies"))
      c.policies.push_back(policy_kind_from_string(p.get<std::string>()));
  }
  if (j.contains("speeds")) c.speeds = j.at("speeds").get<std::vector<double>>();
  c.runs_per_config = detail::get_or(j, "runs_per_config", c.runs_per_config);
  c.master_seed = detail::get_or(j, "master_seed", c.master_seed);
  c.randomize_layout = detail::get_or(j, "randomize_layout", c.randomize_layout);
  c.validate();
  return c;
}

namespace detail {

inline std::string speed_tag(double speed) {
  char buf[24];
  std::snprintf(buf, sizeof(buf), "%.2f", speed);
  return buf;
}

inline std::string run_stem(PolicyKind p, double speed, int run) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "r%02d", run);
  return std::string(policy_kind_name(p)) + "_" + speed_tag(speed) + "_" + buf;
}

// Round a metric through its CSV representation so that summary medians are
// exactly recomputable from the emitted files.
inline double through_csv(double v) { return std::stod(fmt_exact(v)); }

}  // namespace detail

inline std::string run_metrics_csv(const std::vector<RunMetrics>& runs) {
  std::string out =
      "policy,speed,run,seed,in_area_m,total_m,outside_frac,gates,crashes,area_exits\n";
  for (const auto& m : runs) {
    out += policy_kind_name(m.policy);
    out += ',';
    out += detail::speed_tag(m.speed);
    out += ',';
    out += std::to_string(m.run);
    out += ',';
    out += std::to_string(m.seed);
    out += ',';
    out += fmt_exact(m.in_area_m);
    out += ',';
    out += fmt_exact(m.total_m);
    out += ',';
    out += fmt_exact(m.outside_frac);
    out += ',';
    out += std::to_string(m.gates);
    out += ',';
    out += std::to_string(m.crashes);
    out += ',';
    out += std::to_string(m.area_exits);
    out += '\n';
  }
  return out;
}

// Runs the full experiment grid. When out_dir is non-empty, per-run CSVs and
// the summary files are written beneath it (byte-identical on rerun with the
// same config and seed).
inline BatchSummary run_batch(const ExperimentConfig& cfg, const std::string& out_dir = "") {
  cfg.validate();
  const Arena base = build_arena(cfg.arena);
  const Pose2 start = cfg.episode.has_start ? cfg.episode.start : default_start_pose(base);

  const bool emit = !out_dir.empty();
  namespace fs = std::filesystem;
  if (emit) {
    fs::create_directories(fs::path(out_dir) / "runs");
  }

  BatchSummary summary;
  int cell_index = 0;
  for (const auto policy : cfg.policies) {
    for (const double speed : cfg.speeds) {
      std::vector<double> dists, fracs, gates, crashes;
      for (int r = 0; r < cfg.runs_per_config; ++r) {
        Arena arena = base;
        if (cfg.randomize_layout) {
          RngStream layout_rng(derive_seed(cfg.master_seed, 101, r));
          arena = randomize_layout(base, start.pos, layout_rng);
        }
        EpisodeConfig ec = cfg.episode;
        ec.policy.kind = policy;
        ec.policy.v_target = speed;
        const std::uint64_t seed = derive_seed(cfg.master_seed, 202, cell_index, r);
        const RunRecord rec = run_episode(arena, ec, seed);

        RunMetrics m;
        m.policy = policy;
        m.speed = speed;
        m.run = r;
        m.seed = seed;
        m.in_area_m = in_area_distance(rec, arena);
        m.total_m = total_distance(rec);
        m.outside_frac = outside_fraction(rec, arena);
        m.gates = count_gate_passes(rec, arena);
        for (const auto& e : rec.events) {
          if (e.kind == EventKind::WALL_CONTACT) ++m.crashes;
          if (e.kind == EventKind::AREA_EXIT) ++m.area_exits;
        }
        summary.runs.push_back(m);
        dists.push_back(detail::through_csv(m.in_area_m));
        fracs.push_back(detail::through_csv(m.outside_frac));
        gates.push_back(m.gates);
        crashes.push_back(m.crashes);

        if (emit) {
          const std::string stem = detail::run_stem(policy, speed, r);
          write_text_file((fs::path(out_dir) / "runs" / (stem + ".csv")).string(),
                          run_csv(rec));
          write_text_file((fs::path(out_dir) / "runs" / (stem + "_events.csv")).string(),
                          events_csv(rec));
        }
      }
      CellSummary cell;
      cell.policy = policy;
      cell.speed = speed;
      cell.runs = cfg.runs_per_config;
      cell.median_in_area_m = median(dists);
      cell.median_outside_frac = median(fracs);
      cell.median_gates = median(gates);
      cell.median_crashes = median(crashes);
      summary.cells.push_back(cell);
      ++cell_index;
    }
  }

  if (emit) {
    write_text_file((fs::path(out_dir) / "summary.csv").string(),
                    run_metrics_csv(summary.runs));
    json cells = json::array();
    for (const auto& c : summary.cells) {
      cells.push_back({{"policy", policy_kind_name(c.policy)},
                       {"speed", c.speed},
                       {"runs", c.runs},
                       {"median_in_area_m", c.median_in_area_m},
                       {"median_outside_frac", c.median_outside_frac},
                       {"median_gates", c.median_gates},
                       {"median_crashes", c.median_crashes}});
    }
    const json doc = {{"config", experiment_config_to_json(cfg)}, {"cells", cells}};
    save_json_file((fs::path(out_dir) / "summary.json").string(), doc);
  }
  return summary;
}

}  // namespace nanorace
