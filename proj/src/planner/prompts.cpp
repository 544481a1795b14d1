#include "sdg/planner/prompts.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>

namespace sdg::planner {

namespace {

constexpr const char* kVersion = "2026.08-1";

constexpr const char* kRoleDecompose =
    "There is a robot in the maze, which consists of multiple rooms connected by doors. "
    "Some objects are in the room, like boxes, balls, doors, and keys. "
    "You are a kindful assistant that helps to guide the robot to complete some objects "
    "manipulating tasks.";

constexpr const char* kTaskDefinitions =
    "Tasks like \"go to X\", the robot should first discover X, and then go next to X.\n"
    "Tasks like \"pick X\", the robot should first \"go to X\", then pick X.\n"
    "Tasks like \"put X next to Y\", the robot should first \"pick X\", then discover Y, "
    "and finally put X next to Y.\n"
    "Tasks like \"open the X\", the robot should consider door X may be in the current room "
    "or another room. The robot should first try to discover, go to, and open door X in the "
    "current room. Otherwise, the robot should go to a new room. Specifically, it should find "
    "an unexplored door Y, and then enter the new room door Y leads to.";

constexpr const char* kPerceptionApi =
    "Checks are written in a small condition language over the robot's perception:\n"
    "  in_obs(\"red ball\")            -- the named object is in the robot's vision\n"
    "  next_to(\"red ball\")           -- the robot is adjacent to the named object\n"
    "  carried(\"red ball\")           -- the robot currently carries the named object\n"
    "  obj_adj(\"red key\", \"red ball\") -- the two named objects are adjacent\n"
    "  door_open(\"green door\")       -- the named door is visible and open\n"
    "  door_closed(\"green door\")     -- the named door is visible and closed\n"
    "  unexplored_door_visible()     -- some visible door leads to an unvisited room\n"
    "  in_unvisited_room()           -- the robot stands in a room it had not visited\n"
    "Conditions may be combined with \"and\", \"or\", and \"not\". Object names are a color "
    "(red, green, blue, purple, yellow, grey) followed by a type (ball, box, key, door).";

constexpr const char* kOutputFormatDecompose =
    "After the robot is given the task, your works are:\n"
    "(1) decompose the task instruction into several goals to help the robot complete the "
    "task. Each goal should be small and easy to check.\n"
    "(2) write one condition in the condition language per goal to check whether the robot "
    "achieves it. Only the check condition, and no implementation to help the robot.\n"
    "Your output should follow this format:\n"
    "Task instruction: \"...\"\n"
    "Goal 1: <short description>\n"
    "check: <condition>\n"
    "Goal 2: <short description>\n"
    "check: <condition>\n"
    "...";

constexpr const char* kFewShotDecompose =
    "Task instruction: \"put the red key next to the red ball\"\n"
    "Goal 1: discover the red key\n"
    "check: in_obs(\"red key\")\n"
    "Goal 2: go next to the red key\n"
    "check: next_to(\"red key\")\n"
    "Goal 3: pick up the red key\n"
    "check: carried(\"red key\")\n"
    "Goal 4: discover the red ball\n"
    "check: in_obs(\"red ball\")\n"
    "Goal 5: go next to the red ball\n"
    "check: next_to(\"red ball\")\n"
    "Goal 6: put the red key next to the red ball\n"
    "check: obj_adj(\"red key\", \"red ball\")";

constexpr const char* kRoleGenerate =
    "There is a robot in the maze, which consists of multiple rooms connected by doors. "
    "Some objects are in the room, like boxes, balls, doors, and keys. "
    "You are a kindful assistant that helps to generate the program to control the robot to "
    "complete some objects manipulating tasks.";

constexpr const char* kOutputFormatGenerate =
    "The whole task may consist of multiple small tasks or only one small task. Programs are "
    "written in a small skill language, one statement per line:\n"
    "  skill NAME(\"param\", ...)   -- run a learned skill\n"
    "  while not CONDITION { ... } -- repeat until the condition holds (bounded)\n"
    "  if not CONDITION { ... } else { ... } -- branch on a condition\n"
    "  flush                      -- reset the visited-room memory\n"
    "Conditions use the same condition language as the checks. Your output should be exactly "
    "one fenced code block containing the program and nothing else.";

constexpr const char* kFewShotGenerate =
    "Here is an example of a good program.\n"
    "Instruction: put the blue ball next to a green ball after you put a blue box next to the "
    "yellow door and open the grey door\n"
    "```\n"
    "while not in_obs(\"blue box\") {\n"
    "  skill discover_object(\"blue box\")\n"
    "  if not in_obs(\"blue box\") {\n"
    "    skill find_unexplored_door()\n"
    "    skill enter_unexplored_room()\n"
    "  }\n"
    "}\n"
    "flush\n"
    "skill go_next_to(\"blue box\")\n"
    "skill pick(\"blue box\")\n"
    "while not in_obs(\"yellow door\") {\n"
    "  skill discover_door(\"yellow door\")\n"
    "  if not in_obs(\"yellow door\") {\n"
    "    skill find_unexplored_door()\n"
    "    skill enter_unexplored_room()\n"
    "  }\n"
    "}\n"
    "flush\n"
    "skill go_to_door(\"yellow door\")\n"
    "skill put_next_to(\"blue box\", \"yellow door\")\n"
    "while not in_obs(\"grey door\") {\n"
    "  skill discover_door(\"grey door\")\n"
    "  if not in_obs(\"grey door\") {\n"
    "    skill find_unexplored_door()\n"
    "    skill enter_unexplored_room()\n"
    "  }\n"
    "}\n"
    "flush\n"
    "skill go_to_door(\"grey door\")\n"
    "skill open_door(\"grey door\")\n"
    "while not in_obs(\"blue ball\") {\n"
    "  skill discover_object(\"blue ball\")\n"
    "  if not in_obs(\"blue ball\") {\n"
    "    skill find_unexplored_door()\n"
    "    skill enter_unexplored_room()\n"
    "  }\n"
    "}\n"
    "flush\n"
    "skill go_next_to(\"blue ball\")\n"
    "skill pick(\"blue ball\")\n"
    "while not in_obs(\"green ball\") {\n"
    "  skill discover_object(\"green ball\")\n"
    "  if not in_obs(\"green ball\") {\n"
    "    skill find_unexplored_door()\n"
    "    skill enter_unexplored_room()\n"
    "  }\n"
    "}\n"
    "flush\n"
    "skill go_next_to(\"green ball\")\n"
    "skill put_next_to(\"blue ball\", \"green ball\")\n"
    "```";

constexpr const char* kRoleDebug =
    "There is a robot in the maze, which consists of multiple rooms connected by doors. "
    "Some objects are in the room, like boxes, balls, doors, and keys. "
    "You are a kindful assistant that helps to modify the given candidate program of the "
    "robot to complete some object manipulating tasks.";

constexpr const char* kOutputFormatDebug =
    "You would be given the objects manipulating tasks instruction, the candidate program, "
    "and some error message, you need to modify the program to guide the robot to complete "
    "the task. Your output should be exactly one fenced code block containing the modified "
    "program and nothing else.";

constexpr const char* kDebuggingSuggestions =
    "You should learn from the good example and APIs, such as:\n"
    "(1) Before manipulating some object (like open, pick, put, and open door), the robot "
    "must discover it first (using some discover APIs) and then go to the target object.\n"
    "(2) For a task like \"put A next to the B\", before discovering and going to B to put A, "
    "the robot must first discover and pick A.";

std::optional<std::string> read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return std::nullopt;
  std::ostringstream ss;
  ss << in.rdbuf();
  std::string s = ss.str();
  while (!s.empty() && (s.back() == '\n' || s.back() == '\r')) s.pop_back();
  return s;
}

}  // namespace

PromptSet default_prompts() {
  PromptSet p;
  p.version = kVersion;
  p.role_decompose = kRoleDecompose;
  p.task_definitions = kTaskDefinitions;
  p.perception_api = kPerceptionApi;
  p.output_format_decompose = kOutputFormatDecompose;
  p.few_shot_decompose = kFewShotDecompose;
  p.role_generate = kRoleGenerate;
  p.output_format_generate = kOutputFormatGenerate;
  p.few_shot_generate = kFewShotGenerate;
  p.role_debug = kRoleDebug;
  p.output_format_debug = kOutputFormatDebug;
  p.debugging_suggestions = kDebuggingSuggestions;
  return p;
}

PromptSet load_prompts(const std::string& dir) {
  PromptSet p = default_prompts();
  const std::filesystem::path base(dir);
  bool changed = false;
  auto overlay = [&](const char* field, std::string& slot) {
    if (auto text = read_text_file(base / (std::string(field) + ".txt"))) {
      slot = *text;
      changed = true;
    }
  };
  overlay("role_decompose", p.role_decompose);
  overlay("task_definitions", p.task_definitions);
  overlay("perception_api", p.perception_api);
  overlay("output_format_decompose", p.output_format_decompose);
  overlay("few_shot_decompose", p.few_shot_decompose);
  overlay("role_generate", p.role_generate);
  overlay("output_format_generate", p.output_format_generate);
  overlay("few_shot_generate", p.few_shot_generate);
  overlay("role_debug", p.role_debug);
  overlay("output_format_debug", p.output_format_debug);
  overlay("debugging_suggestions", p.debugging_suggestions);
  if (changed) p.version += "+local";
  return p;
}

std::string decompose_system_prompt(const PromptSet& p) {
  return p.role_decompose + "\n\n" + p.task_definitions + "\n\n" + p.perception_api + "\n\n" +
         p.output_format_decompose + "\n\nHere is a decomposition example:\n" +
         p.few_shot_decompose;
}

std::string decompose_user_prompt(const std::string& instruction) {
  return "Task instruction: \"" + instruction + "\"";
}

std::string translate_system_prompt(const PromptSet& p) {
  return p.role_decompose +
         "\n\nTranslate one subgoal description into a robot API call. The available APIs "
         "are: discover_object(object), go_next_to(object), pick(object), "
         "put_next_to(object1, object2), discover_door(door), go_to_door(door), "
         "open_door(door), find_unexplored_door(), enter_unexplored_room(). Objects are a "
         "color (red, green, blue, purple, yellow, grey) followed by a type (ball, box, key, "
         "door).\nYour output should be a single line containing only the call, for example:\n"
         "discover_object(\"green box\")";
}

std::string translate_user_prompt(const std::string& subgoal_description) {
  return "Subgoal: " + subgoal_description;
}

std::string generate_system_prompt(const PromptSet& p, const std::string& skill_api_docs) {
  std::string s = p.role_generate + "\n\n";
  if (!skill_api_docs.empty())
    s += "You can use the following skills to control the robot:\n" + skill_api_docs + "\n\n";
  s += p.perception_api + "\n\n" + p.output_format_generate + "\n\n" + p.few_shot_generate;
  return s;
}

std::string generate_user_prompt(const std::string& instruction) {
  return "Instruction: " + instruction;
}

std::string debug_system_prompt(const PromptSet& p, const std::string& skill_api_docs) {
  std::string s = p.role_debug + "\n\n";
  if (!skill_api_docs.empty())
    s += "You can use the following skills to control the robot:\n" + skill_api_docs + "\n\n";
  s += p.perception_api + "\n\n" + p.output_format_debug + "\n\n" + p.debugging_suggestions +
       "\n\n" + p.few_shot_generate;
  return s;
}

std::string debug_user_prompt(const std::string& instruction, const std::string& program_text,
                              const std::string& error_message) {
  return "Instruction: " + instruction + "\n# Candidate program:\n```\n" + program_text +
         "\n```\n# Error messages:\n" + error_message;
}

}  // namespace sdg::planner
