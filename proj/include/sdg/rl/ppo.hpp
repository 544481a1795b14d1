#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <unordered_map>
#include <vector>

#include "sdg/common/errors.hpp"
#include "sdg/common/rng.hpp"
#include "sdg/gridworld/types.hpp"
#include "sdg/rl/adam.hpp"
#include "sdg/rl/config.hpp"
#include "sdg/rl/net.hpp"

namespace sdg::rl {

// One update's worth of experience. `advantages` must already be normalized
// (mean 0, std 1) by the caller; `text_idx` points into `token_seqs`, -1
// meaning empty conditioning text.
template <typename T>
struct PPOBatch {
  std::vector<gridworld::SymbolicView> views;
  std::vector<int> text_idx;
  std::vector<int> actions;
  std::vector<T> old_logp;
  std::vector<T> advantages;
  std::vector<T> returns;
  std::vector<std::vector<int>> token_seqs;

  std::size_t size() const { return views.size(); }
};

struct PPOStats {
  double policy_loss = 0.0;
  double value_loss = 0.0;
  double entropy = 0.0;
  double clip_fraction = 0.0;
  int minibatches = 0;
};

inline void normalize_advantages_inplace(std::vector<float>& adv) {
  if (adv.empty()) return;
  double mean = 0.0;
  for (float a : adv) mean += a;
  mean /= static_cast<double>(adv.size());
  double var = 0.0;
  for (float a : adv) var += (a - mean) * (a - mean);
  var /= static_cast<double>(adv.size());
  const double denom = std::sqrt(var) + 1e-8;
  for (float& a : adv) a = static_cast<float>((a - mean) / denom);
}

template <typename T>
void clip_global_norm(std::vector<T>& grads, double max_norm) {
  double sq = 0.0;
  for (T g : grads) sq += static_cast<double>(g) * static_cast<double>(g);
  const double norm = std::sqrt(sq);
  if (norm > max_norm && norm > 0.0) {
    const T scale = static_cast<T>(max_norm / norm);
    for (T& g : grads) g *= scale;
  }
}

namespace detail {

struct SampleLoss {
  double policy = 0.0, value = 0.0, entropy = 0.0, total = 0.0;
  double ratio = 1.0;
  bool unclipped_active = true;
};

// Loss pieces for one sample; shared by the gradient and forward-only paths.
template <typename T>
SampleLoss sample_loss(const typename ActorCriticNet<T>::Forward& f, int action, T old_logp, T adv,
                       T ret, const PPOConfig& cfg) {
  SampleLoss out;
  T mx = f.logits[0];
  for (T v : f.logits) mx = std::max(mx, v);
  T lse = T(0);
  for (T v : f.logits) lse += std::exp(v - mx);
  const double logp =
      static_cast<double>(f.logits[action] - mx) - std::log(static_cast<double>(lse));
  out.ratio = std::exp(logp - static_cast<double>(old_logp));
  const double a = static_cast<double>(adv);
  const double s1 = out.ratio * a;
  const double s2 = std::clamp(out.ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps) * a;
  out.unclipped_active = s1 <= s2;
  out.policy = -std::min(s1, s2);
  const double verr = static_cast<double>(f.value) - static_cast<double>(ret);
  out.value = verr * verr;
  double h = 0.0;
  for (T p : f.probs)
    if (p > T(0)) h -= static_cast<double>(p) * std::log(static_cast<double>(p));
  out.entropy = h;
  out.total = out.policy + cfg.value_loss_coef * out.value - cfg.entropy_coef * out.entropy;
  return out;
}

// Encodes every distinct conditioning text referenced by `idx` once.
template <typename T>
std::unordered_map<int, typename ActorCriticNet<T>::TextState> encode_texts(
    const ActorCriticNet<T>& net, const PPOBatch<T>& batch, const std::vector<int>& idx) {
  std::unordered_map<int, typename ActorCriticNet<T>::TextState> texts;
  for (int i : idx) {
    const int tid = batch.text_idx[i];
    if (tid >= 0 && !texts.count(tid)) texts.emplace(tid, net.encode_text(batch.token_seqs[tid]));
  }
  return texts;
}

}  // namespace detail

// Accumulates d(mean minibatch loss)/d(params) into net.grads() for the
// samples selected by `idx`, and returns the mean loss. No clipping and no
// optimizer step happen here, so the result is directly comparable to finite
// differences of ppo_minibatch_loss (run both with dropout 0).
template <typename T>
double accumulate_ppo_minibatch(ActorCriticNet<T>& net, const PPOBatch<T>& batch,
                                const std::vector<int>& idx, const PPOConfig& cfg,
                                Rng* dropout_rng, PPOStats* stats) {
  const double inv_m = 1.0 / static_cast<double>(idx.size());
  net.set_dropout(cfg.dropout);
  auto texts = detail::encode_texts(net, batch, idx);
  std::unordered_map<int, std::vector<T>> dtexts;
  for (const auto& [tid, st] : texts) dtexts.emplace(tid, std::vector<T>(net.config().text_hidden, T(0)));
  const std::vector<T> empty_hidden(net.config().text_encoder_enabled ? net.config().text_hidden : 0,
                                    T(0));
  const bool train_mode = cfg.dropout > 0.0;
  double total = 0.0, pol = 0.0, val = 0.0, ent = 0.0, clipped = 0.0;
  for (int i : idx) {
    const int tid = batch.text_idx[i];
    const std::vector<T>& th = tid >= 0 ? texts.at(tid).h_final : empty_hidden;
    auto f = net.forward(batch.views[i], th, train_mode, dropout_rng);
    const auto loss = detail::sample_loss<T>(f, batch.actions[i], batch.old_logp[i],
                                             batch.advantages[i], batch.returns[i], cfg);
    total += loss.total * inv_m;
    pol += loss.policy * inv_m;
    val += loss.value * inv_m;
    ent += loss.entropy * inv_m;
    if (std::abs(loss.ratio - 1.0) > cfg.clip_eps) clipped += inv_m;

    std::vector<T> dlogits(f.logits.size(), T(0));
    const double a = static_cast<double>(batch.advantages[i]);
    if (loss.unclipped_active) {
      const double dlp = -a * loss.ratio * inv_m;  // d(policy term)/d(logp)
      for (std::size_t j = 0; j < dlogits.size(); ++j) {
        const double onehot = (static_cast<int>(j) == batch.actions[i]) ? 1.0 : 0.0;
        dlogits[j] += static_cast<T>(dlp * (onehot - static_cast<double>(f.probs[j])));
      }
    }
    for (std::size_t j = 0; j < dlogits.size(); ++j) {
      const double pj = static_cast<double>(f.probs[j]);
      if (pj > 0.0)
        dlogits[j] += static_cast<T>(cfg.entropy_coef * pj * (std::log(pj) + loss.entropy) * inv_m);
    }
    const T dvalue = static_cast<T>(
        2.0 * cfg.value_loss_coef *
        (static_cast<double>(f.value) - static_cast<double>(batch.returns[i])) * inv_m);
    std::vector<T>* dtext = tid >= 0 ? &dtexts.at(tid) : nullptr;
    net.backward(batch.views[i], f, dlogits, dvalue, net.grads(), dtext);
  }
  for (auto& [tid, st] : texts) net.backward_text(st, dtexts.at(tid), net.grads());
  if (stats) {
    stats->policy_loss += pol;
    stats->value_loss += val;
    stats->entropy += ent;
    stats->clip_fraction += clipped;
    ++stats->minibatches;
  }
  return total;
}

// Forward-only mean loss over the selected samples, evaluated without dropout
// so it is a deterministic function of the parameters (for gradient checks).
template <typename T>
double ppo_minibatch_loss(const ActorCriticNet<T>& net, const PPOBatch<T>& batch,
                          const std::vector<int>& idx, const PPOConfig& cfg) {
  const double inv_m = 1.0 / static_cast<double>(idx.size());
  auto texts = detail::encode_texts(net, batch, idx);
  const std::vector<T> empty_hidden(net.config().text_encoder_enabled ? net.config().text_hidden : 0,
                                    T(0));
  double total = 0.0;
  for (int i : idx) {
    const int tid = batch.text_idx[i];
    const std::vector<T>& th = tid >= 0 ? texts.at(tid).h_final : empty_hidden;
    auto f = net.forward(batch.views[i], th, false, nullptr);
    total += detail::sample_loss<T>(f, batch.actions[i], batch.old_logp[i], batch.advantages[i],
                                    batch.returns[i], cfg)
                 .total *
             inv_m;
  }
  return total;
}

// Full update: epochs x shuffled minibatches of gradient steps with global
// norm clipping. Throws on a non-finite minibatch loss, identifying the
// offending minibatch.
template <typename T>
PPOStats ppo_update(ActorCriticNet<T>& net, Adam<T>& opt, const PPOBatch<T>& batch,
                    const PPOConfig& cfg, Rng& rng) {
  PPOStats stats;
  const int n = static_cast<int>(batch.size());
  if (n == 0) return stats;
  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  Rng dropout_rng = rng.split(hash64("ppo-dropout"));
  for (int epoch = 0; epoch < cfg.epochs_per_update; ++epoch) {
    // Fisher-Yates driven by our own RNG for cross-platform determinism.
    for (int i = n - 1; i > 0; --i) {
      const int j = static_cast<int>(rng.uniform_int(0, i));
      std::swap(order[i], order[j]);
    }
    int mb_index = 0;
    for (int start = 0; start < n; start += cfg.minibatch_size, ++mb_index) {
      const int end = std::min(n, start + cfg.minibatch_size);
      const std::vector<int> idx(order.begin() + start, order.begin() + end);
      net.zero_grads();
      const double loss = accumulate_ppo_minibatch(net, batch, idx, cfg, &dropout_rng, &stats);
      if (!std::isfinite(loss))
        throw Error("ppo_update: non-finite loss at epoch " + std::to_string(epoch) +
                    ", minibatch " + std::to_string(mb_index));
      clip_global_norm(net.grads(), cfg.max_grad_norm);
      opt.step(net.params(), net.grads());
    }
  }
  if (stats.minibatches > 0) {
    stats.policy_loss /= stats.minibatches;
    stats.value_loss /= stats.minibatches;
    stats.entropy /= stats.minibatches;
    stats.clip_fraction /= stats.minibatches;
  }
  return stats;
}

}  // namespace sdg::rl
