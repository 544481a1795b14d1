#include "sdg/deduction/evaluate.hpp"

#include <fstream>

#include "nlohmann/json.hpp"

namespace sdg::deduction {

namespace {

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

EvalReport evaluate(const induction::SkillRegistry& registry, planner::Planner& planner,
                    const EvalConfig& cfg, const EvalProgress& progress) {
  EvalReport report;
  report.level = gridworld::level_name(cfg.level);
  report.instructions = cfg.instructions;
  report.repeats = cfg.repeats;
  report.debug_rounds = cfg.debug_rounds;
  report.attempts = cfg.attempts;
  report.seed = cfg.seed;

  SolveConfig scfg;
  scfg.debug_rounds = cfg.debug_rounds;
  scfg.attempts = cfg.attempts;
  scfg.greedy = cfg.greedy;
  scfg.skill_api_docs =
      cfg.skill_api_docs.empty() ? skill_api_docs(registry) : cfg.skill_api_docs;

  for (int i = 0; i < cfg.instructions; ++i) {
    const uint64_t world_seed =
        hash64("eval-world-" + report.level + "-" + std::to_string(i), cfg.seed);
    const auto [task, world] = gridworld::generate_task(cfg.level, world_seed);
    (void)world;
    for (int r = 0; r < cfg.repeats; ++r) {
      scfg.trial_seed =
          hash64("eval-trial-" + std::to_string(i) + "-" + std::to_string(r), cfg.seed);
      const SolveResult res = solve(task, registry, planner, scfg);

      EvalTrial trial;
      trial.instruction_index = i;
      trial.repeat = r;
      trial.world_seed = world_seed;
      trial.instruction = task.text;
      trial.success = res.success;
      trial.rounds_used = res.rounds_used;
      trial.steps = res.total_steps;
      if (!res.success) {
        trial.error = !res.planner_error.empty() ? res.planner_error
                      : res.rounds.empty()       ? std::string("no rounds ran")
                                                 : res.rounds.back().error;
      }
      if (trial.success) ++report.successes;
      if (progress) progress(trial);
      report.trials.push_back(std::move(trial));
    }
  }

  const long total = static_cast<long>(cfg.instructions) * cfg.repeats;
  report.success_rate = total > 0 ? 100.0 * report.successes / static_cast<double>(total) : 0.0;
  return report;
}

void write_eval_csv(const EvalReport& report, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "level,instruction_index,repeat,world_seed,success,rounds,steps,instruction,error\n";
  for (const EvalTrial& t : report.trials) {
    out << report.level << ',' << t.instruction_index << ',' << t.repeat << ',' << t.world_seed
        << ',' << (t.success ? 1 : 0) << ',' << t.rounds_used << ',' << t.steps << ','
        << csv_quote(t.instruction) << ',' << csv_quote(t.error) << '\n';
  }
}

void write_eval_json(const EvalReport& report, const std::filesystem::path& path) {
  nlohmann::json j;
  j["level"] = report.level;
  j["instructions"] = report.instructions;
  j["repeats"] = report.repeats;
  j["debug_rounds"] = report.debug_rounds;
  j["attempts"] = report.attempts;
  j["seed"] = report.seed;
  j["successes"] = report.successes;
  j["success_rate"] = report.success_rate;
  nlohmann::json rows = nlohmann::json::array();
  for (const EvalTrial& t : report.trials) {
    rows.push_back({{"instruction_index", t.instruction_index},
                    {"repeat", t.repeat},
                    {"world_seed", t.world_seed},
                    {"instruction", t.instruction},
                    {"success", t.success},
                    {"rounds", t.rounds_used},
                    {"steps", t.steps},
                    {"error", t.error}});
  }
  j["trials"] = std::move(rows);
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << j.dump(2) << '\n';
}

EvalReport load_eval_json(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open for reading: " + path.string());
  nlohmann::json j;
  try {
    in >> j;
    EvalReport report;
    report.level = j.at("level").get<std::string>();
    report.instructions = j.at("instructions").get<int>();
    report.repeats = j.at("repeats").get<int>();
    report.debug_rounds = j.at("debug_rounds").get<int>();
    report.attempts = j.at("attempts").get<int>();
    report.seed = j.at("seed").get<uint64_t>();
    report.successes = j.at("successes").get<int>();
    report.success_rate = j.at("success_rate").get<double>();
    for (const nlohmann::json& t : j.at("trials")) {
      EvalTrial trial;
      trial.instruction_index = t.at("instruction_index").get<int>();
      trial.repeat = t.at("repeat").get<int>();
      trial.world_seed = t.at("world_seed").get<uint64_t>();
      trial.instruction = t.at("instruction").get<std::string>();
      trial.success = t.at("success").get<bool>();
      trial.rounds_used = t.at("rounds").get<int>();
      trial.steps = t.at("steps").get<long>();
      trial.error = t.at("error").get<std::string>();
      report.trials.push_back(std::move(trial));
    }
    return report;
  } catch (const nlohmann::json::exception& e) {
    throw IoError("bad eval report " + path.string() + ": " + e.what());
  }
}

}  // namespace sdg::deduction
