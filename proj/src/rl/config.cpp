#include "sdg/rl/config.hpp"

#include "sdg/common/errors.hpp"

namespace sdg::rl {

void PPOConfig::validate() const {
  if (!(discount > 0.0 && discount <= 1.0)) throw ConfigError("discount must be in (0, 1]");
  if (!(gae_lambda >= 0.0 && gae_lambda <= 1.0)) throw ConfigError("gae_lambda must be in [0, 1]");
  if (!(clip_eps > 0.0)) throw ConfigError("clip_eps must be positive");
  if (horizon < 1) throw ConfigError("horizon must be >= 1");
  if (max_frames < 1) throw ConfigError("max_frames must be >= 1");
  if (!(dropout >= 0.0 && dropout < 1.0)) throw ConfigError("dropout must be in [0, 1)");
  if (!(lr > 0.0)) throw ConfigError("lr must be positive");
  if (epochs_per_update < 1 || minibatch_size < 1 || rollout_length < 1 || workers < 1)
    throw ConfigError("epochs/minibatch/rollout/workers must be >= 1");
}

PPOConfig verification_config(std::uint64_t seed) {
  PPOConfig cfg;
  cfg.max_frames = 3000;
  cfg.entropy_coef = 0.05;
  cfg.horizon = 30;
  cfg.dropout = 0.0;
  cfg.seed = seed;
  return cfg;
}

PPOConfig skill_config(std::uint64_t seed, long max_frames) {
  PPOConfig cfg;
  cfg.max_frames = max_frames;
  cfg.entropy_coef = 0.01;
  cfg.horizon = 15;
  cfg.dropout = 0.2;
  cfg.seed = seed;
  return cfg;
}

}  // namespace sdg::rl
