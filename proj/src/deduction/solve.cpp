#include "sdg/deduction/solve.hpp"

#include "sdg/deduction/parser.hpp"
#include "sdg/perception/perception.hpp"

namespace sdg::deduction {

SolveResult solve(const gridworld::InstructionTask& task, const induction::SkillRegistry& registry,
                  planner::Planner& planner, const SolveConfig& cfg) {
  SolveResult out;
  std::string program_text;
  try {
    program_text = planner.generate_program(task.text, cfg.skill_api_docs);
  } catch (const Error& e) {
    out.planner_error = e.what();
    return out;
  }

  const int total_rounds = cfg.debug_rounds + 1;
  for (int round = 0; round < total_rounds; ++round) {
    RoundRecord rec;
    rec.round = round;
    rec.program_text = program_text;

    Program prog;
    bool parsed = true;
    try {
      prog = parse_program(program_text);
    } catch (const Error& e) {
      parsed = false;  // backends emit canonical text, so this is defensive
      rec.error = e.what();
    }

    if (parsed) {
      auto [regen, world] = gridworld::generate_task(task.level, task.seed);
      (void)regen;
      perception::EpisodeContext ctx(world);
      gridworld::TaskJudge judge(task.goal);

      SkillRuntimeConfig rcfg;
      rcfg.attempts = cfg.attempts;
      rcfg.loop_attempts = cfg.loop_attempts;
      rcfg.horizon = cfg.horizon;
      rcfg.greedy = cfg.greedy;
      rcfg.trial_seed = hash64("solve-round-" + std::to_string(round), cfg.trial_seed);

      const RunResult run = run_program(
          prog, ctx, registry, rcfg,
          [&judge](const gridworld::WorldState& w) { judge.on_step(w); });
      rec.ran = true;
      rec.steps = run.steps;
      rec.success = judge.succeeded();
      out.total_steps += run.steps;
      if (!run.ok)
        rec.error = run.error->message;
      else if (!rec.success)
        rec.error = "Task error! the program finished but the instruction is not satisfied";
    }

    const bool success = rec.success;
    const std::string error = rec.error;
    out.rounds.push_back(std::move(rec));
    out.rounds_used = round + 1;
    if (success) {
      out.success = true;
      break;
    }
    if (round + 1 >= total_rounds) break;
    try {
      program_text = planner.debug_program(task.text, program_text, error);
    } catch (const Error&) {
      // No repair produced: rerun the same program on the next round's
      // fresh RNG stream.
    }
  }
  return out;
}

std::string skill_api_docs(const induction::SkillRegistry& registry) {
  struct DocRow {
    const char* api;
    const char* sig;
    const char* post;
  };
  static const DocRow kRows[] = {
      {"discover_object", "skill discover_object(\"<color> <type>\")", "in_obs(<color> <type>)"},
      {"discover_door", "skill discover_door(\"<color> door\")", "in_obs(<color> door)"},
      {"go_next_to", "skill go_next_to(\"<color> <type>\")", "next_to(<color> <type>)"},
      {"go_to_door", "skill go_to_door(\"<color> door\")", "next_to(<color> door)"},
      {"pick", "skill pick(\"<color> <type>\")", "carried(<color> <type>)"},
      {"put_next_to", "skill put_next_to(\"<a>\", \"<b>\")", "obj_adj(<a>, <b>)"},
      {"open_door", "skill open_door(\"<color> door\")", "door_open(<color> door)"},
      {"find_unexplored_door", "skill find_unexplored_door()", "unexplored_door_visible()"},
      {"enter_unexplored_room", "skill enter_unexplored_room()", "in_unvisited_room()"},
  };
  std::string out;
  for (const auto& row : kRows) {
    if (!registry.find(row.api)) continue;
    out += std::string("- ") + row.sig + "  post-condition: " + row.post + "\n";
  }
  return out;
}

}  // namespace sdg::deduction
