#pragma once

#include <cstdint>

namespace sdg::rl {

// Hyperparameters for the clipped-surrogate policy-gradient trainer. The two
// factory functions below bake in the two operating points used by the
// pipeline: short-horizon verification runs and long multitask skill runs.
struct PPOConfig {
  long max_frames = 3000;
  double discount = 0.99;
  double lr = 0.001;
  double gae_lambda = 0.95;
  double entropy_coef = 0.05;
  double value_loss_coef = 0.5;
  double max_grad_norm = 0.5;
  double clip_eps = 0.2;
  int horizon = 30;
  double dropout = 0.0;
  bool text_encoder_enabled = true;
  int epochs_per_update = 4;
  int minibatch_size = 256;
  int rollout_length = 128;  // per worker; one update consumes rollout_length*workers frames
  int workers = 8;
  std::uint64_t seed = 0;

  void validate() const;  // throws ConfigError on out-of-range values
};

PPOConfig verification_config(std::uint64_t seed);
PPOConfig skill_config(std::uint64_t seed, long max_frames = 1000000);

}  // namespace sdg::rl
