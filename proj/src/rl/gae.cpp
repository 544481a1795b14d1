#include "sdg/rl/gae.hpp"

#include "sdg/common/errors.hpp"

namespace sdg::rl {

GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      const std::vector<std::uint8_t>& dones, double bootstrap_value, double gamma,
                      double lambda) {
  const size_t n = rewards.size();
  if (values.size() != n || dones.size() != n)
    throw Error("compute_gae: rewards/values/dones length mismatch");
  GaeResult out;
  out.advantages.resize(n);
  out.returns.resize(n);
  double next_adv = 0.0;
  double next_value = bootstrap_value;
  for (size_t i = n; i-- > 0;) {
    const double live = dones[i] ? 0.0 : 1.0;
    const double delta = rewards[i] + gamma * next_value * live - values[i];
    next_adv = delta + gamma * lambda * live * next_adv;
    out.advantages[i] = next_adv;
    out.returns[i] = next_adv + values[i];
    next_value = values[i];
  }
  return out;
}

}  // namespace sdg::rl
