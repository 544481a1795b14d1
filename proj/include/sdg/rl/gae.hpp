#pragma once

#include <cstdint>
#include <vector>

namespace sdg::rl {

struct GaeResult {
  std::vector<double> advantages;
  std::vector<double> returns;  // advantages + values
};

// Exponentially-weighted advantage estimator over one trajectory segment.
// delta_t = r_t + gamma*V_{t+1}*(1-done_t) - V_t
// A_t     = delta_t + gamma*lambda*(1-done_t)*A_{t+1}
// V_{T} is `bootstrap_value` (pass the critic's estimate of the state after
// the segment, or 0 when the segment ends at a terminal).
GaeResult compute_gae(const std::vector<double>& rewards, const std::vector<double>& values,
                      const std::vector<std::uint8_t>& dones, double bootstrap_value, double gamma,
                      double lambda);

}  // namespace sdg::rl
