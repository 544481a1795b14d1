#pragma once

#include <cmath>
#include <vector>

#include "sdg/common/errors.hpp"

namespace sdg::rl {

// Adaptive-moment optimizer with the usual defaults. Moment buffers are kept
// in double so float-parameter training stays numerically stable.
template <typename T>
class Adam {
 public:
  Adam(std::size_t n, double lr, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
      : m_(n, 0.0), v_(n, 0.0), lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}

  void step(std::vector<T>& params, const std::vector<T>& grads) {
    if (params.size() != m_.size() || grads.size() != m_.size())
      throw Error("Adam::step: size mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(beta1_, t_);
    const double bc2 = 1.0 - std::pow(beta2_, t_);
    for (std::size_t i = 0; i < params.size(); ++i) {
      const double g = static_cast<double>(grads[i]);
      m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * g;
      v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * g * g;
      const double mhat = m_[i] / bc1;
      const double vhat = v_[i] / bc2;
      params[i] = static_cast<T>(static_cast<double>(params[i]) -
                                 lr_ * mhat / (std::sqrt(vhat) + eps_));
    }
  }

 private:
  std::vector<double> m_, v_;
  double lr_, beta1_, beta2_, eps_;
  long t_ = 0;
};

}  // namespace sdg::rl
