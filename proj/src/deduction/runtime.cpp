#include "sdg/deduction/runtime.hpp"

#include <map>

#include "sdg/grounding/grounding.hpp"
#include "sdg/rl/tokenizer.hpp"

namespace sdg::deduction {

namespace {

const char* action_reason_text(gridworld::ActionReason r) {
  using gridworld::ActionReason;
  switch (r) {
    case ActionReason::Ok: return "ok";
    case ActionReason::Blocked: return "the way ahead is blocked";
    case ActionReason::NothingToPick: return "nothing to pick ahead";
    case ActionReason::HandsFull: return "already carrying an object";
    case ActionReason::DropOccupied: return "the cell ahead is occupied";
    case ActionReason::NoDoorAhead: return "no door ahead to toggle";
    case ActionReason::NothingCarried: return "carrying nothing to put";
  }
  return "unknown";
}

std::optional<gridworld::Action> primitive_from_name(const std::string& name) {
  static const std::map<std::string, gridworld::Action> kMap{
      {"turn_left", gridworld::Action::TurnLeft},   {"turn_right", gridworld::Action::TurnRight},
      {"move_forward", gridworld::Action::MoveForward}, {"pick", gridworld::Action::Pick},
      {"put", gridworld::Action::Put},              {"toggle", gridworld::Action::Toggle}};
  auto it = kMap.find(name);
  if (it == kMap.end()) return std::nullopt;
  return it->second;
}

// "Pick error!"-style prefix for skill failure messages.
std::string verb_prefix(const std::string& api) {
  if (api == "pick") return "Pick";
  if (api == "put_next_to") return "Put";
  if (api.rfind("discover", 0) == 0) return "Discover";
  if (api.rfind("go_", 0) == 0) return "Go";
  if (api == "open_door") return "Open";
  if (api == "find_unexplored_door") return "Find";
  if (api == "enter_unexplored_room") return "Enter";
  return "Skill";
}

std::string call_text(const std::string& name, const std::vector<std::string>& params) {
  std::string out = "skill " + name + "(";
  for (std::size_t i = 0; i < params.size(); ++i) {
    if (i) out += ", ";
    out += "\"" + params[i] + "\"";
  }
  return out + ")";
}

class Interpreter {
 public:
  Interpreter(perception::EpisodeContext& ctx, const induction::SkillRegistry& registry,
              const SkillRuntimeConfig& cfg, const StepObserver& on_step)
      : ctx_(ctx), registry_(registry), cfg_(cfg), on_step_(on_step) {}

  RunResult run(const Program& p) {
    std::vector<int> path;
    std::optional<ExecError> err = exec_list(p.stmts, path, /*in_loop=*/false);
    RunResult out;
    out.steps = steps_;
    if (err) {
      out.ok = false;
      out.error = std::move(err);
    }
    return out;
  }

 private:
  static bool tolerated_in_loop(ExecErrorKind kind) {
    return kind == ExecErrorKind::SkillFailed || kind == ExecErrorKind::IllegalAction ||
           kind == ExecErrorKind::LoopExhausted;
  }

  std::optional<ExecError> exec_list(const std::vector<StmtPtr>& stmts, std::vector<int>& path,
                                     bool in_loop) {
    for (int i = 0; i < static_cast<int>(stmts.size()); ++i) {
      path.push_back(i);
      std::optional<ExecError> err = exec_stmt(*stmts[static_cast<std::size_t>(i)], path, in_loop);
      path.pop_back();
      if (err) {
        if (in_loop && tolerated_in_loop(err->kind)) continue;  // loop retries
        return err;
      }
    }
    return std::nullopt;
  }

  std::optional<ExecError> exec_stmt(const Stmt& s, std::vector<int>& path, bool in_loop) {
    switch (s.kind) {
      case Stmt::Kind::Skill: return exec_skill(s, path, in_loop);
      case Stmt::Kind::Prim: return exec_prim(s, path);
      case Stmt::Kind::While: return exec_while(s, path);
      case Stmt::Kind::If: return exec_if(s, path, in_loop);
      case Stmt::Kind::Flush:
        ctx_.flush_log();
        return std::nullopt;
      case Stmt::Kind::Fail:
        return ExecError{ExecErrorKind::UserFail,
                         "Fail: " + s.message + " at statement " + path_to_string(path), path};
    }
    return std::nullopt;
  }

  std::optional<ExecError> exec_skill(const Stmt& s, std::vector<int>& path, bool in_loop) {
    const int attempts = in_loop ? cfg_.loop_attempts : cfg_.attempts;
    Rng rng(hash64("invocation-" + std::to_string(invocations_++), cfg_.trial_seed));
    InvokeResult res;
    try {
      res = invoke_skill(s.name, s.params, ctx_, registry_, attempts, cfg_, rng, on_step_);
    } catch (const Error& e) {
      return ExecError{ExecErrorKind::UnknownSkill,
                       "Unknown skill error! " + call_text(s.name, s.params) + ": " + e.what() +
                           " at statement " + path_to_string(path),
                       path};
    }
    steps_ += res.steps;
    if (!res.success)
      return ExecError{ExecErrorKind::SkillFailed,
                       verb_prefix(s.name) + " error! " + call_text(s.name, s.params) +
                           " did not reach its post-condition at statement " +
                           path_to_string(path),
                       path};
    return std::nullopt;
  }

  std::optional<ExecError> exec_prim(const Stmt& s, std::vector<int>& path) {
    const auto action = primitive_from_name(s.name);
    if (!action)
      return ExecError{ExecErrorKind::UnknownSkill,
                       "Unknown skill error! prim " + s.name +
                           " is not a primitive action at statement " + path_to_string(path),
                       path};
    const gridworld::ActionOutcome outcome = ctx_.apply(*action);
    ++steps_;
    if (on_step_) on_step_(ctx_.world());
    if (!outcome.legal)
      return ExecError{ExecErrorKind::IllegalAction,
                       "Action error! primitive " + s.name + " rejected: " +
                           action_reason_text(outcome.reason) + " at statement " +
                           path_to_string(path),
                       path};
    return std::nullopt;
  }

  std::optional<ExecError> exec_while(const Stmt& s, std::vector<int>& path) {
    for (int iter = 0; iter < s.max_iter; ++iter) {
      if (checkdsl::eval_check(s.guard, ctx_.current_snapshot())) return std::nullopt;
      std::optional<ExecError> err = exec_list(s.body, path, /*in_loop=*/true);
      if (err) return err;  // only non-tolerated kinds propagate out of exec_list
    }
    if (checkdsl::eval_check(s.guard, ctx_.current_snapshot())) return std::nullopt;
    return ExecError{ExecErrorKind::LoopExhausted,
                     "Loop error! guard " + checkdsl::print_check(s.guard) +
                         " still false after " + std::to_string(s.max_iter) +
                         " iterations at statement " + path_to_string(path),
                     path};
  }

  std::optional<ExecError> exec_if(const Stmt& s, std::vector<int>& path, bool in_loop) {
    bool cond = checkdsl::eval_check(s.guard, ctx_.current_snapshot());
    if (s.negate_if) cond = !cond;
    const std::vector<StmtPtr>& branch = cond ? s.body : s.else_body;
    // Path indices continue across then/else (locate_stmt's combined view).
    const int base = cond ? 0 : static_cast<int>(s.body.size());
    for (int i = 0; i < static_cast<int>(branch.size()); ++i) {
      path.push_back(base + i);
      std::optional<ExecError> err = exec_stmt(*branch[static_cast<std::size_t>(i)], path, in_loop);
      path.pop_back();
      if (err) {
        if (in_loop && tolerated_in_loop(err->kind)) continue;
        return err;
      }
    }
    return std::nullopt;
  }

  perception::EpisodeContext& ctx_;
  const induction::SkillRegistry& registry_;
  const SkillRuntimeConfig& cfg_;
  const StepObserver& on_step_;
  long steps_ = 0;
  long invocations_ = 0;
};

}  // namespace

const char* exec_error_kind_name(ExecErrorKind kind) {
  switch (kind) {
    case ExecErrorKind::IllegalAction: return "illegal_action";
    case ExecErrorKind::SkillFailed: return "skill_failed";
    case ExecErrorKind::UnknownSkill: return "unknown_skill";
    case ExecErrorKind::LoopExhausted: return "loop_exhausted";
    case ExecErrorKind::UserFail: return "user_fail";
  }
  return "unknown";
}

InvokeResult invoke_skill(const std::string& name, const std::vector<std::string>& params,
                          perception::EpisodeContext& ctx,
                          const induction::SkillRegistry& registry, int attempts,
                          const SkillRuntimeConfig& cfg, Rng& rng, const StepObserver& on_step) {
  const checkdsl::ExprPtr post = checkdsl::canonical_check(name, params);  // throws UnknownApi
  const induction::SkillRegistry::LoadedSkill* skill = registry.find(name);
  if (!skill) throw Error("no trained skill for \"" + name + "\"");

  InvokeResult out;
  if (checkdsl::eval_check(post, ctx.current_snapshot())) {
    out.success = true;  // post-condition already holds: zero steps
    return out;
  }

  const rl::ActorCriticNet<float>& net = *skill->net;
  const rl::Tokenizer tokenizer;
  const std::string text = grounding::condition_text(params);
  const auto text_state = net.encode_text(tokenizer.encode(text));

  for (int attempt = 0; attempt < attempts; ++attempt) {
    for (int t = 0; t < cfg.horizon; ++t) {
      const auto fwd =
          net.forward(gridworld::observe(ctx.world()), text_state.h_final, false, nullptr);
      int action = 0;
      if (cfg.greedy) {
        for (int a = 1; a < static_cast<int>(fwd.probs.size()); ++a)
          if (fwd.probs[static_cast<std::size_t>(a)] > fwd.probs[static_cast<std::size_t>(action)])
            action = a;
      } else {
        const std::vector<double> weights(fwd.probs.begin(), fwd.probs.end());
        action = rng.categorical(weights);
      }
      ctx.apply(static_cast<gridworld::Action>(action));
      ++out.steps;
      if (on_step) on_step(ctx.world());
      if (checkdsl::eval_check(post, ctx.last_snapshot())) {
        out.success = true;
        return out;
      }
    }
  }
  return out;
}

RunResult run_program(const Program& p, perception::EpisodeContext& ctx,
                      const induction::SkillRegistry& registry, const SkillRuntimeConfig& cfg,
                      const StepObserver& on_step) {
  return Interpreter(ctx, registry, cfg, on_step).run(p);
}

}  // namespace sdg::deduction
