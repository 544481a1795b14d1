#include "sdg/induction/registry.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>

#include <nlohmann/json.hpp>

#include "sdg/common/errors.hpp"
#include "sdg/rl/params_io.hpp"

namespace sdg::induction {

namespace {
using nlohmann::json;
}

void SkillRegistry::add_skill(SkillEntry info, rl::ActorCriticNet<float> net) {
  if (by_name_.count(info.label)) throw Error("duplicate skill label: " + info.label);
  const std::size_t idx = skills_.size();
  by_name_[info.label] = idx;
  if (!info.api_label.empty()) by_name_.emplace(info.api_label, idx);  // first wins
  skills_.push_back(
      {std::move(info), std::make_shared<const rl::ActorCriticNet<float>>(std::move(net))});
}

const SkillRegistry::LoadedSkill* SkillRegistry::find(const std::string& name) const {
  const std::string& canonical = name == "go_next_to_door" ? std::string("go_to_door") : name;
  auto it = by_name_.find(canonical);
  if (it == by_name_.end()) return nullptr;
  return &skills_[it->second];
}

void save_registry(const SkillRegistry& reg, const std::string& dir) {
  std::filesystem::create_directories(dir);
  json j;
  j["chosen_k"] = reg.chosen_k;
  j["degenerate"] = reg.degenerate;
  json scores = json::object();
  for (const auto& [k, score] : reg.ch_scores)
    scores[std::to_string(k)] = std::isfinite(score) ? json(score) : json(nullptr);
  j["ch_scores"] = scores;
  j["skills"] = json::array();
  for (const auto& skill : reg.skills()) {
    const SkillEntry& e = skill.info;
    j["skills"].push_back(json{{"label", e.label},
                               {"api_label", e.api_label},
                               {"cluster_id", e.cluster_id},
                               {"member_count", e.member_count},
                               {"val_success", e.val_success},
                               {"mixed", e.mixed},
                               {"params_file", e.params_file}});
    rl::save_params(*skill.net, (std::filesystem::path(dir) / e.params_file).string());
  }
  std::ofstream out(std::filesystem::path(dir) / "registry.json");
  if (!out) throw IoError("cannot write registry.json in " + dir);
  out << j.dump(2) << "\n";
}

SkillRegistry load_registry(const std::string& dir) {
  const auto path = std::filesystem::path(dir) / "registry.json";
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw IoError("bad registry.json: " + std::string(e.what()));
  }
  SkillRegistry reg;
  try {
    reg.chosen_k = j.at("chosen_k").get<int>();
    reg.degenerate = j.value("degenerate", false);
    for (const auto& [k, score] : j.at("ch_scores").items())
      reg.ch_scores[std::stoi(k)] =
          score.is_null() ? std::numeric_limits<double>::infinity() : score.get<double>();
    for (const json& s : j.at("skills")) {
      SkillEntry e;
      e.label = s.at("label").get<std::string>();
      e.api_label = s.at("api_label").get<std::string>();
      e.cluster_id = s.at("cluster_id").get<int>();
      e.member_count = s.at("member_count").get<int>();
      e.val_success = s.at("val_success").get<double>();
      e.mixed = s.value("mixed", false);
      e.params_file = s.at("params_file").get<std::string>();
      rl::ActorCriticNet<float> net =
          rl::load_params((std::filesystem::path(dir) / e.params_file).string());
      reg.add_skill(std::move(e), std::move(net));
    }
  } catch (const json::exception& e) {
    throw IoError("registry.json missing fields: " + std::string(e.what()));
  }
  return reg;
}

}  // namespace sdg::induction
