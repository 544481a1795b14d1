#include "sdg/cli/cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <regex>

#include "CLI11.hpp"
#include "nlohmann/json.hpp"
#include "sdg/common/rng.hpp"
#include "sdg/deduction/evaluate.hpp"
#include "sdg/deduction/solve.hpp"
#include "sdg/grounding/grounding.hpp"
#include "sdg/induction/cluster.hpp"
#include "sdg/induction/registry.hpp"
#include "sdg/induction/train_skill.hpp"
#include "sdg/planner/http.hpp"
#include "sdg/planner/scripted.hpp"
#include "sdg/rl/config.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace sdg::cli {

namespace {

constexpr gridworld::Level kAllLevels[] = {
    gridworld::Level::GoToLocal, gridworld::Level::PickupLoc, gridworld::Level::PutNextLocal,
    gridworld::Level::Open,      gridworld::Level::SynthSeq,  gridworld::Level::BossLevel};

std::vector<gridworld::Level> resolve_levels(const std::string& csv) {
  std::vector<gridworld::Level> out;
  std::string token;
  std::vector<std::string> tokens;
  for (char c : csv + ",") {
    if (c == ',') {
      std::size_t b = token.find_first_not_of(" \t");
      std::size_t e = token.find_last_not_of(" \t");
      if (b != std::string::npos) tokens.push_back(token.substr(b, e - b + 1));
      token.clear();
    } else {
      token += c;
    }
  }
  if (tokens.size() == 1 && tokens[0] == "all") return {std::begin(kAllLevels), std::end(kAllLevels)};
  for (const std::string& name : tokens) {
    const auto level = gridworld::level_from_name(name);
    if (!level) throw ConfigError("unknown level name: " + name);
    out.push_back(*level);
  }
  if (out.empty()) throw ConfigError("no levels selected");
  return out;
}

void validate_config(RunConfig& cfg) {
  cfg.levels = resolve_levels(cfg.levels_csv);
  if (cfg.backend != "scripted" && cfg.backend != "http")
    throw ConfigError("backend must be scripted or http, got " + cfg.backend);
  if (cfg.restore != "on" && cfg.restore != "off")
    throw ConfigError("restore must be on or off, got " + cfg.restore);
  if (cfg.k_min < 2) throw ConfigError("k-min must be >= 2 (CH score is undefined below)");
  if (cfg.k_max < cfg.k_min) throw ConfigError("k-max must be >= k-min");
  if (cfg.t_verify < 1) throw ConfigError("t-verify must be positive");
  if (cfg.skill_frames < 1) throw ConfigError("skill-frames must be positive");
  if (cfg.instructions < 0) throw ConfigError("instructions must be >= 0");
  if (cfg.eval_instructions < 0) throw ConfigError("eval-instructions must be >= 0");
  if (cfg.eval_repeats < 1) throw ConfigError("eval-repeats must be >= 1");
  if (cfg.debug_rounds < 0) throw ConfigError("debug-rounds must be >= 0");
  if (cfg.attempts < 1) throw ConfigError("attempts must be >= 1");
  if (cfg.workers < 1) throw ConfigError("workers must be >= 1");
  if (cfg.http_timeout < 1) throw ConfigError("http-timeout must be >= 1");
  if (cfg.http_retries < 1) throw ConfigError("http-retries must be >= 1");
}

std::unique_ptr<planner::Planner> make_planner(const RunConfig& cfg) {
  if (cfg.backend == "scripted") return planner::make_scripted_planner();
  planner::HttpPlannerConfig h;
  h.endpoint = cfg.http_endpoint;
  h.model = cfg.http_model;
  h.embedding_model = cfg.http_embedding_model;
  h.key_env_var = cfg.http_key_env;
  h.prompt_dir = cfg.http_prompt_dir;
  h.transcript_path = cfg.http_transcript;
  h.timeout_seconds = cfg.http_timeout;
  h.retries = cfg.http_retries;
  return std::make_unique<planner::HttpPlanner>(std::move(h));
}

int missing_input(const fs::path& path) {
  std::cerr << "missing input: " << path.string() << "\n";
  return kExitMissingInput;
}

// --- report writers shared by the phase commands and plot-data --------------

void write_verification_report(const std::vector<grounding::GroundingExperience>& xs,
                               const fs::path& path) {
  std::map<std::string, std::pair<int, int>> counts;  // level -> (attempted, verified)
  for (const auto& x : xs) {
    auto& c = counts[x.level];
    ++c.first;
    if (x.verified) c.second += 1;
  }
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "level,attempted,verified\n";
  for (gridworld::Level level : kAllLevels) {
    const auto it = counts.find(std::string(gridworld::level_name(level)));
    if (it == counts.end()) continue;
    out << it->first << ',' << it->second.first << ',' << it->second.second << '\n';
  }
}

struct SkillReport {
  induction::SkillEntry entry;
  std::vector<induction::SkillCurveRow> curves;
};

void write_induction_report(const induction::SkillRegistry& reg,
                            const std::vector<SkillReport>& skills, const fs::path& path) {
  json j;
  j["chosen_k"] = reg.chosen_k;
  j["degenerate"] = reg.degenerate;
  json scores = json::object();
  for (const auto& [k, score] : reg.ch_scores)
    scores[std::to_string(k)] = std::isfinite(score) ? json(score) : json(nullptr);
  j["ch_scores"] = std::move(scores);
  json rows = json::array();
  for (const SkillReport& s : skills) {
    json curves = json::array();
    for (const auto& row : s.curves)
      curves.push_back(
          {{"frames", row.frames}, {"train", row.train_success}, {"val", row.val_success}});
    rows.push_back({{"label", s.entry.label},
                    {"api_label", s.entry.api_label},
                    {"cluster_id", s.entry.cluster_id},
                    {"member_count", s.entry.member_count},
                    {"val_success", s.entry.val_success},
                    {"mixed", s.entry.mixed},
                    {"curves", std::move(curves)}});
  }
  j["skills"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

void emit_curves_from_report(const fs::path& report_path, const fs::path& out_dir) {
  std::ifstream in(report_path);
  if (!in) throw IoError("cannot open for reading: " + report_path.string());
  json j;
  in >> j;
  for (const json& s : j.at("skills")) {
    std::vector<induction::SkillCurveRow> curves;
    for (const json& row : s.at("curves"))
      curves.push_back({row.at("frames").get<long>(), row.at("train").get<double>(),
                        row.at("val").get<double>()});
    const std::string label = s.at("label").get<std::string>();
    induction::write_curves_csv(curves, (out_dir / ("curves_" + label + ".csv")).string());
  }
}

// One sweep CSV row per (level, budget) point, canonical level order.
void write_sweep_csv(const std::vector<deduction::EvalReport>& reports, bool sweep_attempts,
                     const fs::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "level," << (sweep_attempts ? "attempts" : "debug_rounds")
      << ",successes,trials,success_rate\n";
  for (gridworld::Level level : kAllLevels) {
    const std::string name(gridworld::level_name(level));
    std::map<int, const deduction::EvalReport*> by_budget;
    for (const auto& r : reports)
      if (r.level == name) by_budget[sweep_attempts ? r.attempts : r.debug_rounds] = &r;
    for (const auto& [budget, r] : by_budget)
      out << name << ',' << budget << ',' << r->successes << ','
          << static_cast<long>(r->instructions) * r->repeats << ',' << r->success_rate << '\n';
  }
}

// --- commands ----------------------------------------------------------------

int cmd_hypothesize(const RunConfig& cfg) {
  fs::create_directories(cfg.out_dir);
  const auto pl = make_planner(cfg);
  std::vector<grounding::HypothesisRecord> records;
  int failures = 0;
  for (gridworld::Level level : cfg.levels) {
    const std::string name(gridworld::level_name(level));
    for (int i = 0; i < cfg.instructions; ++i) {
      const uint64_t world_seed = hash64("verify-world-" + name + "-" + std::to_string(i), cfg.seed);
      const auto [task, world] = gridworld::generate_task(level, world_seed);
      (void)world;
      try {
        records.push_back({level, world_seed, grounding::hypothesize(task, *pl)});
      } catch (const Error& e) {
        ++failures;  // logged and skipped; the command keeps going
        std::cerr << "[hypothesize] " << name << " \"" << task.text << "\": " << e.what() << "\n";
      }
    }
  }
  const fs::path out = fs::path(cfg.out_dir) / "hypotheses.jsonl";
  grounding::store_hypotheses(out.string(), records);
  std::cout << "hypotheses: " << records.size() << " written, " << failures << " failed -> "
            << out.string() << "\n";
  return kExitOk;
}

int cmd_verify(const RunConfig& cfg) {
  const fs::path in = fs::path(cfg.out_dir) / "hypotheses.jsonl";
  if (!fs::exists(in)) return missing_input(in);
  const auto records = grounding::load_hypotheses(in.string());

  grounding::VerificationBudget budget;
  budget.t_verify = cfg.t_verify;

  std::vector<grounding::GroundingExperience> xs;
  int done = 0;
  for (const grounding::HypothesisRecord& rec : records) {
    if (std::find(cfg.levels.begin(), cfg.levels.end(), rec.level) == cfg.levels.end()) continue;
    const std::string name(gridworld::level_name(rec.level));
    const auto [task, world] = gridworld::generate_task(rec.level, rec.world_seed);
    (void)world;
    const uint64_t train_seed =
        hash64("verify-train-" + name + "-" + std::to_string(rec.world_seed), cfg.seed);
    xs.push_back(grounding::verify(task, rec.hypothesis, budget, train_seed));
    ++done;
    std::cerr << "[verify] " << done << " " << name << " seed=" << rec.world_seed
              << " verified=" << xs.back().verified << " frames=" << xs.back().total_frames
              << "\n";
  }

  const fs::path exp_path = fs::path(cfg.out_dir) / "experiences.jsonl";
  grounding::store_experiences(exp_path.string(), xs);
  const fs::path report_path = fs::path(cfg.out_dir) / "verification_report.csv";
  write_verification_report(xs, report_path);

  int verified = 0;
  for (const auto& x : xs) verified += x.verified ? 1 : 0;
  std::cout << "verified: " << verified << " of " << xs.size() << " -> " << exp_path.string()
            << "\n";
  return kExitOk;
}

int cmd_induce(const RunConfig& cfg) {
  const fs::path in = fs::path(cfg.out_dir) / "experiences.jsonl";
  if (!fs::exists(in)) return missing_input(in);
  const auto xs = grounding::load_experiences(in.string());
  const auto pl = make_planner(cfg);

  induction::InductionClustering clustering;
  try {
    clustering = induction::cluster_experiences(xs, *pl, cfg.seed, cfg.k_min, cfg.k_max);
  } catch (const induction::TooFewMembers& e) {
    std::cerr << "too few experiences: " << e.what() << "\n";
    return kExitMissingInput;
  }
  induction::write_clustering_csv(clustering,
                                  (fs::path(cfg.out_dir) / "clustering.csv").string());
  std::cout << "clustering: " << clustering.members.size() << " members, chosen_k="
            << clustering.report.chosen_k << (clustering.report.degenerate ? " (degenerate)" : "")
            << "\n";

  induction::SkillRegistry reg;
  reg.chosen_k = clustering.report.chosen_k;
  reg.degenerate = clustering.report.degenerate;
  reg.ch_scores = clustering.report.ch_scores;

  std::vector<SkillReport> skill_reports;
  std::map<std::string, int> label_uses;
  const bool restore = cfg.restore == "on";
  for (induction::SkillCluster& cluster : clustering.clusters) {
    if (cluster.members.size() < 2) {
      std::cerr << "[induce] skipping cluster " << cluster.id << " (" << cluster.api_label
                << "): only " << cluster.members.size() << " member\n";
      continue;
    }
    induction::split_train_val(cluster, 0.8, cfg.seed);
    const uint64_t seed = hash64("induce-train-" + std::to_string(cluster.id), cfg.seed);
    rl::PPOConfig pcfg = rl::skill_config(seed, cfg.skill_frames);
    pcfg.workers = cfg.workers;
    pcfg.validate();
    std::cerr << "[induce] training cluster " << cluster.id << " (" << cluster.api_label << ", "
              << cluster.members.size() << " members, " << cfg.skill_frames << " frames)\n";
    induction::SkillModel model = induction::train_skill(xs, cluster, pcfg, seed, restore);

    std::string label = model.api_label;
    const int uses = ++label_uses[model.api_label];
    if (uses > 1) label += "_" + std::to_string(uses);

    induction::SkillEntry entry;
    entry.label = label;
    entry.api_label = model.api_label;
    entry.cluster_id = cluster.id;
    entry.member_count = static_cast<int>(cluster.members.size());
    entry.val_success = model.val_success;
    entry.mixed = cluster.mixed;
    entry.params_file = label + ".params";

    rl::ActorCriticNet<float> net{rl::NetConfig{}};
    if (net.params().size() != model.params.size())
      throw Error("trained parameter count does not match the registry net");
    net.params() = std::move(model.params);
    reg.add_skill(entry, std::move(net));
    skill_reports.push_back({entry, std::move(model.curves)});
    std::cerr << "[induce] " << label << " val_success=" << entry.val_success << "\n";
  }

  for (const SkillReport& s : skill_reports)
    induction::write_curves_csv(
        s.curves, (fs::path(cfg.out_dir) / ("curves_" + s.entry.label + ".csv")).string());
  write_induction_report(reg, skill_reports, fs::path(cfg.out_dir) / "induction_report.json");
  induction::save_registry(reg, (fs::path(cfg.out_dir) / "registry").string());
  std::cout << "registry: " << reg.skills().size() << " skills, chosen_k=" << reg.chosen_k
            << " -> " << (fs::path(cfg.out_dir) / "registry").string() << "\n";
  return kExitOk;
}

int cmd_eval(const RunConfig& cfg) {
  const fs::path reg_dir = fs::path(cfg.out_dir) / "registry";
  if (!fs::exists(reg_dir / "registry.json")) return missing_input(reg_dir / "registry.json");
  const induction::SkillRegistry reg = induction::load_registry(reg_dir.string());
  const auto pl = make_planner(cfg);
  const std::string docs = deduction::skill_api_docs(reg);

  struct Point {
    int debug_rounds;
    int attempts;
    std::string suffix;
  };
  std::vector<Point> points;
  if (cfg.sweep_a)
    for (int a : {1, 2, 5}) points.push_back({0, a, "_A" + std::to_string(a)});
  if (cfg.sweep_d)
    for (int d : {0, 1, 3}) points.push_back({d, 5, "_D" + std::to_string(d)});
  if (points.empty()) points.push_back({cfg.debug_rounds, cfg.attempts, ""});

  std::vector<deduction::EvalReport> a_reports, d_reports;
  for (const Point& pt : points) {
    for (gridworld::Level level : cfg.levels) {
      deduction::EvalConfig ec;
      ec.level = level;
      ec.instructions = cfg.eval_instructions;
      ec.repeats = cfg.eval_repeats;
      ec.debug_rounds = pt.debug_rounds;
      ec.attempts = pt.attempts;
      ec.seed = cfg.seed;
      ec.skill_api_docs = docs;
      int trials = 0;
      const deduction::EvalReport report =
          deduction::evaluate(reg, *pl, ec, [&trials](const deduction::EvalTrial&) {
            if (++trials % 50 == 0) std::cerr << "[eval] " << trials << " trials\n";
          });
      const std::string stem = "eval_" + report.level + pt.suffix;
      deduction::write_eval_json(report, fs::path(cfg.out_dir) / (stem + ".json"));
      deduction::write_eval_csv(report, fs::path(cfg.out_dir) / (stem + ".csv"));
      std::cout << report.level << " D=" << pt.debug_rounds << " A=" << pt.attempts
                << " success_rate=" << report.success_rate << " (" << report.successes << "/"
                << static_cast<long>(report.instructions) * report.repeats << ")\n";
      if (!pt.suffix.empty() && pt.suffix[1] == 'A') a_reports.push_back(report);
      if (!pt.suffix.empty() && pt.suffix[1] == 'D') d_reports.push_back(report);
    }
  }
  if (cfg.sweep_a)
    write_sweep_csv(a_reports, /*sweep_attempts=*/true, fs::path(cfg.out_dir) / "sweep_A.csv");
  if (cfg.sweep_d)
    write_sweep_csv(d_reports, /*sweep_attempts=*/false, fs::path(cfg.out_dir) / "sweep_D.csv");
  return kExitOk;
}

int cmd_plot_data(const RunConfig& cfg) {
  const fs::path dir(cfg.out_dir);
  if (!fs::exists(dir)) return missing_input(dir);
  bool any = false;

  const fs::path exp_path = dir / "experiences.jsonl";
  if (fs::exists(exp_path)) {
    const auto xs = grounding::load_experiences(exp_path.string());
    write_verification_report(xs, dir / "verification_report.csv");
    any = true;
    try {
      const auto pl = make_planner(cfg);
      const auto clustering =
          induction::cluster_experiences(xs, *pl, cfg.seed, cfg.k_min, cfg.k_max);
      induction::write_clustering_csv(clustering, (dir / "clustering.csv").string());
    } catch (const Error& e) {
      std::cerr << "[plot-data] skipping clustering.csv: " << e.what() << "\n";
    }
  }

  const fs::path report_path = dir / "induction_report.json";
  if (fs::exists(report_path)) {
    emit_curves_from_report(report_path, dir);
    any = true;
  }

  std::vector<deduction::EvalReport> a_reports, d_reports;
  const std::regex eval_re("^eval_([A-Za-z]+?)(_([AD])([0-9]+))?\\.json$");
  std::vector<fs::path> eval_files;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file()) eval_files.push_back(entry.path());
  std::sort(eval_files.begin(), eval_files.end());
  for (const fs::path& file : eval_files) {
    std::smatch m;
    const std::string fname = file.filename().string();
    if (!std::regex_match(fname, m, eval_re)) continue;
    const deduction::EvalReport report = deduction::load_eval_json(file);
    deduction::write_eval_csv(report, dir / (file.stem().string() + ".csv"));
    if (m[3] == "A") a_reports.push_back(report);
    if (m[3] == "D") d_reports.push_back(report);
    any = true;
  }
  if (!a_reports.empty()) write_sweep_csv(a_reports, true, dir / "sweep_A.csv");
  if (!d_reports.empty()) write_sweep_csv(d_reports, false, dir / "sweep_D.csv");

  if (!any) {
    std::cerr << "no artifacts found in " << dir.string() << "\n";
    return kExitMissingInput;
  }
  std::cout << "plot data refreshed in " << dir.string() << "\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  RunConfig cfg;
  CLI::App app{"self-driven grounding pipeline"};
  app.set_config("--config", "", "flat key=value config file (flag > file > default)");

  app.add_option("command", cfg.command, "hypothesize | verify | induce | eval | plot-data")
      ->required()
      ->check(CLI::IsMember({"hypothesize", "verify", "induce", "eval", "plot-data"}));
  app.add_option("--levels", cfg.levels_csv, "comma-separated level names, or 'all'")
      ->capture_default_str();
  app.add_option("--out", cfg.out_dir, "artifact directory")->capture_default_str();
  app.add_option("--backend", cfg.backend, "planner backend: scripted | http")
      ->capture_default_str();
  app.add_option("--seed", cfg.seed, "base seed for every derived stream")->capture_default_str();
  app.add_option("--workers", cfg.workers, "vectorized rollout slots")->capture_default_str();
  app.add_option("--instructions", cfg.instructions, "hypothesize: tasks per level")
      ->capture_default_str();
  app.add_option("--t-verify", cfg.t_verify, "verify: frame budget per instruction")
      ->capture_default_str();
  app.add_option("--k-min", cfg.k_min, "induce: smallest k for the CH search")
      ->capture_default_str();
  app.add_option("--k-max", cfg.k_max, "induce: largest k for the CH search")
      ->capture_default_str();
  app.add_option("--skill-frames", cfg.skill_frames, "induce: PPO frames per skill")
      ->capture_default_str();
  app.add_option("--restore", cfg.restore, "induce: on | off (prefix replay ablation)")
      ->capture_default_str();
  app.add_option("--eval-instructions", cfg.eval_instructions, "eval: tasks per level")
      ->capture_default_str();
  app.add_option("--eval-repeats", cfg.eval_repeats, "eval: repeats per task")
      ->capture_default_str();
  app.add_option("-D,--debug-rounds", cfg.debug_rounds, "eval: repair rounds after the first run")
      ->capture_default_str();
  app.add_option("-A,--attempts", cfg.attempts, "eval: attempts per mandatory skill call")
      ->capture_default_str();
  app.add_flag("--sweep-A", cfg.sweep_a, "eval: sweep attempts over {1,2,5} at D=0");
  app.add_flag("--sweep-D", cfg.sweep_d, "eval: sweep debug rounds over {0,1,3} at A=5");
  app.add_option("--http-endpoint", cfg.http_endpoint, "http: scheme://host[:port]")
      ->capture_default_str();
  app.add_option("--http-model", cfg.http_model, "http: chat model name")->capture_default_str();
  app.add_option("--http-embedding-model", cfg.http_embedding_model, "http: embedding model")
      ->capture_default_str();
  app.add_option("--http-key-env", cfg.http_key_env, "http: env var holding the API key")
      ->capture_default_str();
  app.add_option("--http-prompt-dir", cfg.http_prompt_dir, "http: prompt override directory");
  app.add_option("--http-transcript", cfg.http_transcript, "http: JSONL transcript path");
  app.add_option("--http-timeout", cfg.http_timeout, "http: request timeout seconds")
      ->capture_default_str();
  app.add_option("--http-retries", cfg.http_retries, "http: transport retry count")
      ->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitConfig;
  }

  try {
    validate_config(cfg);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (cfg.command == "hypothesize") return cmd_hypothesize(cfg);
    if (cfg.command == "verify") return cmd_verify(cfg);
    if (cfg.command == "induce") return cmd_induce(cfg);
    if (cfg.command == "eval") return cmd_eval(cfg);
    if (cfg.command == "plot-data") return cmd_plot_data(cfg);
    std::cerr << "config error: unknown command " << cfg.command << "\n";
    return kExitConfig;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace sdg::cli
