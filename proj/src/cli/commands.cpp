#include "physnav/cli/commands.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "physnav/bench/evaluate.hpp"
#include "physnav/bench/metrics.hpp"
#include "physnav/bench/results.hpp"
#include "physnav/bench/runner.hpp"
#include "physnav/core/errors.hpp"
#include "physnav/core/file_io.hpp"
#include "physnav/core/text.hpp"

namespace physnav {

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string scene_name(const std::string& path) { return fs::path(path).stem().string(); }

void log_config(std::ostream& log, const std::string& command,
                const std::vector<std::pair<std::string, std::string>>& fields) {
  log << "[physnav] " << command << " config:";
  for (const auto& [k, v] : fields) log << " " << k << "=" << v;
  log << "\n";
}

std::string upper(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  return out;
}

char heading_glyph(double heading) {
  // Text rows grow downward with y, so +y renders as 'v'.
  const double a = normalize_angle(heading);
  if (std::abs(a) <= kPi / 4) return '>';
  if (a > kPi / 4 && a < 3 * kPi / 4) return 'v';
  if (a < -kPi / 4 && a > -3 * kPi / 4) return '^';
  return '<';
}

}  // namespace

void cmd_generate(const GenerateConfig& config, std::ostream& log) {
  const GridMap map = load_map_file(config.map);
  SamplingConfig sampling = config.sampling;
  sampling.scene_id = scene_name(config.map);

  const std::string canonical = "map_fnv=" + hex64(fnv1a64(to_text(map))) + ";scene=" + sampling.scene_id +
                                ";count=" + std::to_string(config.count) + ";min=" +
                                format_double(sampling.min_length) + ";max=" + format_double(sampling.max_length) +
                                ";similarity=" + format_double(sampling.similarity_radius) +
                                ";dilation=" + format_double(sampling.dilation_radius) +
                                ";seed=" + std::to_string(config.seed);
  const SampleResult result = sample_episodes(map, config.count, sampling, config.seed);
  if (!result.warning.empty()) log << "[physnav] warning: " << result.warning << "\n";

  std::map<std::string, int> splits{{"train", 0}, {"val_seen", 0}, {"val_unseen", 0}};
  for (const Episode& e : result.episodes) ++splits[std::string(to_string(e.split))];
  Json manifest;
  manifest["seed"] = config.seed;
  manifest["config_hash"] = hex64(fnv1a64(canonical));
  manifest["scene_id"] = sampling.scene_id;
  manifest["requested"] = config.count;
  manifest["episodes"] = result.episodes.size();
  manifest["splits"] = {{"train", splits["train"]}, {"val_seen", splits["val_seen"]},
                        {"val_unseen", splits["val_unseen"]}};
  manifest["warning"] = result.warning;

  const fs::path out(config.out);
  write_file_atomic((out / "episodes.json").string(), dataset_to_json(result.episodes));
  write_file_atomic((out / "manifest.json").string(), manifest.dump(2) + "\n");
  log << "[physnav] wrote " << result.episodes.size() << " episodes to " << (out / "episodes.json").string() << "\n";
}

void cmd_eval(const EvalConfig& config, std::ostream& log) {
  if (config.maps.empty()) throw ValidationError("at least one --map is required");
  if (config.workers < 1) throw ValidationError("--workers must be >= 1");
  if (config.max_steps < 1) throw ValidationError("--max-steps must be >= 1");
  if (!(config.success_radius > 0.0)) throw ValidationError("--success-radius must be > 0");

  const PolicyRegistry registry = PolicyRegistry::builtin(config.weights_dir);
  const PolicyFactory& factory = registry.factory(config.policy);

  RunOptions options;
  options.controller = parse_controller_kind(config.controller);
  options.profile = default_profile(parse_robot_kind(config.profile));
  options.lighting = default_lighting(parse_lighting_kind(config.lighting));
  options.max_steps = config.max_steps;
  options.success_radius = config.success_radius;
  options.seed = config.seed;

  const std::vector<Episode> episodes = load_dataset(config.dataset);
  SceneMaps maps;
  if (config.maps.size() == 1) {
    auto map = std::make_shared<const GridMap>(load_map_file(config.maps[0]));
    for (const Episode& e : episodes) maps[e.scene_id] = map;
  } else {
    for (const std::string& path : config.maps) {
      maps[scene_name(path)] = std::make_shared<const GridMap>(load_map_file(path));
    }
  }

  const EvalResult result = evaluate(episodes, maps, factory, options, config.workers);
  const ResultSummary summary{{config.policy, std::string(to_string(options.controller)),
                               std::string(to_string(options.profile.kind)),
                               std::string(to_string(options.lighting.kind)), config.seed, config.max_steps,
                               config.success_radius},
                              result.report.aggregate};

  const fs::path out(config.out);
  write_file_atomic((out / "results.csv").string(), metrics_to_csv(result.report));
  write_file_atomic((out / "summary.json").string(), summary_to_json(summary));
  const std::string table = format_table({summary});
  write_file_atomic((out / "table.txt").string(), table);
  if (config.write_traces) {
    for (const EpisodeTrace& t : result.traces) {
      write_file_atomic((out / "traces" / (t.episode_id + ".json")).string(), trace_to_json(t));
    }
  }
  log << table;
}

std::string render_replay(const EpisodeTrace& trace, const GridMap& map) {
  // The grid rows are the last height() lines of the text form.
  const std::string text = to_text(map);
  const std::size_t row_bytes = static_cast<std::size_t>(map.width()) + 1;
  const std::string base = text.substr(text.size() - row_bytes * static_cast<std::size_t>(map.height()));

  std::string out;
  auto frame = [&](int step, const TracePose& p) {
    std::string grid = base;
    const Cell c = map.cell_of({p.x, p.y});
    if (map.in_bounds(c)) {
      grid[static_cast<std::size_t>(c.row) * row_bytes +
           static_cast<std::size_t>(c.col)] = heading_glyph(p.heading);
    }
    out += "step " + std::to_string(step);
    if (step > 0 && static_cast<std::size_t>(step) <= trace.actions.size()) {
      out += " action=" + trace.actions[static_cast<std::size_t>(step - 1)];
    }
    out += " pose=(" + format_double(std::round(p.x * 1000) / 1000) + ", " +
           format_double(std::round(p.y * 1000) / 1000) + ")";
    for (const TraceEvent& e : trace.events) {
      if (e.step == step) out += " " + upper(to_string(e.kind));
    }
    out += "\n" + grid;
  };

  std::size_t i = 0;
  for (int step = 0; step <= trace.steps; ++step) {
    // Last recorded pose of this step.
    const TracePose* last = nullptr;
    while (i < trace.poses.size() && trace.poses[i].step == step) last = &trace.poses[i++];
    if (last) frame(step, *last);
  }
  if (!trace.failure_reason.empty()) out += "gave up: " + trace.failure_reason + "\n";
  out += "TL " + format_double(trace.path_length()) + "\n";
  return out;
}

void cmd_replay(const ReplayConfig& config, std::ostream& out) {
  const EpisodeTrace trace = load_trace(config.trace);
  const GridMap map = load_map_file(config.map);
  out << render_replay(trace, map);
}

void cmd_report(const ReportConfig& config, std::ostream& out) {
  if (config.inputs.empty()) throw ValidationError("report needs at least one results file");
  std::vector<ResultSummary> rows;
  for (const std::string& path : config.inputs) rows.push_back(summary_from_json(read_file(path)));
  const std::vector<ResultSummary> merged = merge_summaries(std::move(rows));
  const std::string table = format_table(merged);
  if (!config.out.empty()) {
    write_file_atomic((fs::path(config.out) / "report.json").string(), summaries_to_json(merged));
    write_file_atomic((fs::path(config.out) / "report.txt").string(), table);
  }
  out << table;
}

void cmd_make_map(const MakeMapConfig& config, std::ostream& log) {
  const GridMap map = make_random_map(config.seed, config.map);
  write_file_atomic(config.out, to_text(map));
  log << "[physnav] wrote " << map.width() << "x" << map.height() << " map to " << config.out << "\n";
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Embodied navigation benchmark"};
  app.set_config("--config", "", "INI or TOML file; [eval], [generate] ... sections hold subcommand options");
  app.require_subcommand(1);

  GenerateConfig gen;
  auto* g = app.add_subcommand("generate", "Sample an episode dataset from a map");
  g->add_option("--map", gen.map, "Map file")->required()->check(CLI::ExistingFile)->envname("PHYSNAV_MAP");
  g->add_option("--seed", gen.seed, "Sampling seed")->required()->envname("PHYSNAV_SEED");
  g->add_option("--count", gen.count, "Episodes to sample")->capture_default_str()->envname("PHYSNAV_COUNT");
  g->add_option("--min-length", gen.sampling.min_length, "Minimum geodesic length (m)")->capture_default_str();
  g->add_option("--max-length", gen.sampling.max_length, "Maximum geodesic length (m)")->capture_default_str();
  g->add_option("--out", gen.out, "Output directory")->required()->envname("PHYSNAV_OUT");

  EvalConfig ev;
  auto* e = app.add_subcommand("eval", "Run a policy over a dataset and score it");
  e->add_option("--map", ev.maps, "Map file (repeat for several scenes)")
      ->required()
      ->check(CLI::ExistingFile)
      ->envname("PHYSNAV_MAP");
  e->add_option("--dataset", ev.dataset, "Episode JSON")->required()->check(CLI::ExistingFile)->envname("PHYSNAV_DATASET");
  e->add_option("--policy", ev.policy, "Policy name")->capture_default_str()->envname("PHYSNAV_POLICY");
  e->add_option("--controller", ev.controller, "flash | move_by_speed | move_along_path")
      ->capture_default_str()
      ->envname("PHYSNAV_CONTROLLER");
  e->add_option("--profile", ev.profile, "flash | wheeled | quadruped | humanoid")
      ->capture_default_str()
      ->envname("PHYSNAV_PROFILE");
  e->add_option("--lighting", ev.lighting, "DL5000 | DL300 | CL")->capture_default_str()->envname("PHYSNAV_LIGHTING");
  e->add_option("--seed", ev.seed, "Run seed")->required()->envname("PHYSNAV_SEED");
  e->add_option("--max-steps", ev.max_steps, "Step budget per episode")->capture_default_str()->envname("PHYSNAV_MAX_STEPS");
  e->add_option("--success-radius", ev.success_radius, "Success distance (m)")
      ->capture_default_str()
      ->envname("PHYSNAV_SUCCESS_RADIUS");
  e->add_option("--workers", ev.workers, "Parallel episodes")->capture_default_str()->envname("PHYSNAV_WORKERS");
  e->add_option("--weights", ev.weights_dir, "Directory holding <policy>.pnwb weight blobs")->envname("PHYSNAV_WEIGHTS");
  e->add_option("--out", ev.out, "Output directory")->required()->envname("PHYSNAV_OUT");
  bool no_traces = false;
  e->add_flag("--no-traces", no_traces, "Skip per-episode trace files");

  ReplayConfig rep;
  auto* r = app.add_subcommand("replay", "Render a trace as ASCII frames");
  r->add_option("trace", rep.trace, "Trace JSON")->required()->check(CLI::ExistingFile);
  r->add_option("--map", rep.map, "Map the trace was recorded on")->required()->check(CLI::ExistingFile)->envname("PHYSNAV_MAP");

  ReportConfig report;
  auto* p = app.add_subcommand("report", "Merge result summaries into one table");
  p->add_option("inputs", report.inputs, "summary.json files")->required()->check(CLI::ExistingFile);
  p->add_option("--out", report.out, "Directory for the merged report");

  MakeMapConfig mk;
  auto* m = app.add_subcommand("make-map", "Generate a random house map");
  m->add_option("--seed", mk.seed, "Generator seed")->required()->envname("PHYSNAV_SEED");
  m->add_option("--width", mk.map.width, "Columns")->capture_default_str();
  m->add_option("--height", mk.map.height, "Rows")->capture_default_str();
  m->add_option("--cell", mk.map.cell_size, "Cell size (m)")->capture_default_str();
  m->add_option("--furniture", mk.map.furniture_count, "Furniture blocks")->capture_default_str();
  m->add_option("--holes", mk.map.hole_patches, "Floor hole patches")->capture_default_str();
  m->add_option("--landmarks", mk.map.landmarks_per_room, "Landmarks per room")->capture_default_str();
  m->add_option("--out", mk.out, "Output map file")->required();

  // CLI11 lets a config file override the environment; the documented order
  // is flags > environment > config file, so set variables become flags.
  std::vector<std::string> args(argv + 1, argv + argc);
  for (std::size_t i = 0; i < args.size(); ++i) {
    CLI::App* sub = nullptr;
    for (CLI::App* candidate : app.get_subcommands({})) {
      if (candidate->get_name() == args[i]) sub = candidate;
    }
    if (!sub) continue;
    std::vector<std::string> injected;
    for (const CLI::Option* opt : sub->get_options()) {
      const char* value = opt->get_envname().empty() ? nullptr : std::getenv(opt->get_envname().c_str());
      if (!value || opt->get_lnames().empty()) continue;
      const std::string flag = "--" + opt->get_lnames().front();
      const bool given = std::any_of(args.begin(), args.end(),
                                     [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
      if (!given) {
        injected.push_back(flag);
        injected.push_back(value);
      }
    }
    args.insert(args.begin() + static_cast<long>(i) + 1, injected.begin(), injected.end());
    break;
  }
  std::reverse(args.begin(), args.end());

  try {
    app.parse(args);
  } catch (const CLI::ParseError& ex) {
    std::ostringstream o, eo;
    const int code = app.exit(ex, o, eo);
    out << o.str();
    err << eo.str();
    return code == 0 ? 0 : 2;
  }

  try {
    if (g->parsed()) {
      log_config(err, "generate",
                 {{"map", gen.map}, {"seed", std::to_string(gen.seed)}, {"count", std::to_string(gen.count)},
                  {"min_length", format_double(gen.sampling.min_length)},
                  {"max_length", format_double(gen.sampling.max_length)}, {"out", gen.out}});
      cmd_generate(gen, err);
    } else if (e->parsed()) {
      ev.write_traces = !no_traces;
      std::string maps;
      for (const auto& path : ev.maps) maps += (maps.empty() ? "" : ",") + path;
      log_config(err, "eval",
                 {{"map", maps},
                  {"dataset", ev.dataset},
                  {"policy", ev.policy},
                  {"controller", ev.controller},
                  {"profile", ev.profile},
                  {"lighting", ev.lighting},
                  {"seed", std::to_string(ev.seed)},
                  {"max_steps", std::to_string(ev.max_steps)},
                  {"success_radius", format_double(ev.success_radius)},
                  {"workers", std::to_string(ev.workers)},
                  {"weights", ev.weights_dir},
                  {"out", ev.out}});
      cmd_eval(ev, err);
    } else if (r->parsed()) {
      log_config(err, "replay", {{"trace", rep.trace}, {"map", rep.map}});
      cmd_replay(rep, out);
    } else if (p->parsed()) {
      std::string inputs;
      for (const auto& path : report.inputs) inputs += (inputs.empty() ? "" : ",") + path;
      log_config(err, "report", {{"inputs", inputs}, {"out", report.out}});
      cmd_report(report, out);
    } else if (m->parsed()) {
      log_config(err, "make-map",
                 {{"seed", std::to_string(mk.seed)}, {"width", std::to_string(mk.map.width)},
                  {"height", std::to_string(mk.map.height)}, {"cell", format_double(mk.map.cell_size)},
                  {"out", mk.out}});
      cmd_make_map(mk, err);
    }
  } catch (const ValidationError& ex) {
    err << "physnav: " << ex.what() << "\n";
    return 2;
  } catch (const ParseError& ex) {
    err << "physnav: " << ex.what() << "\n";
    return 2;
  } catch (const std::exception& ex) {
    err << "physnav: " << ex.what() << "\n";
    return 1;
  }
  return 0;
}

}  // namespace physnav
