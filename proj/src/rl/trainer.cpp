#include "sdg/rl/trainer.hpp"

#include <cmath>
#include <fstream>
#include <unordered_map>

#include "sdg/common/errors.hpp"
#include "sdg/rl/adam.hpp"
#include "sdg/rl/gae.hpp"
#include "sdg/rl/ppo.hpp"
#include "sdg/rl/tokenizer.hpp"

namespace sdg::rl {

namespace {

int sample_action(const std::vector<float>& probs, Rng& rng) {
  double x = rng.uniform();
  double acc = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (x < acc) return static_cast<int>(i);
  }
  return static_cast<int>(probs.size()) - 1;
}

int argmax_action(const std::vector<float>& probs) {
  int best = 0;
  for (std::size_t i = 1; i < probs.size(); ++i)
    if (probs[i] > probs[best]) best = static_cast<int>(i);
  return best;
}

struct WorkerBuffer {
  std::vector<gridworld::SymbolicView> views;
  std::vector<int> text_idx;
  std::vector<int> actions;
  std::vector<float> logp;
  std::vector<double> values;
  std::vector<double> rewards;
  std::vector<std::uint8_t> dones;
};

}  // namespace

TrainReport train_policy(const EnvFactory& factory, const PPOConfig& cfg,
                         ActorCriticNet<float>& net, bool stop_on_first_success,
                         const TrainHooks* hooks) {
  cfg.validate();
  net.set_dropout(cfg.dropout);
  const Tokenizer tokenizer;
  const int W = cfg.workers;
  const bool train_mode = cfg.dropout > 0.0;

  std::vector<std::unique_ptr<RolloutEnv>> envs;
  envs.reserve(W);
  for (int w = 0; w < W; ++w) {
    envs.push_back(factory(w));
    if (!envs.back()) throw Error("train_policy: env factory returned null");
    envs.back()->reset();
  }

  Rng base(cfg.seed);
  Rng action_rng = base.split(hash64("action"));
  Rng update_rng = base.split(hash64("update"));
  Rng rollout_dropout_rng = base.split(hash64("rollout-dropout"));
  Adam<float> opt(net.param_count(), cfg.lr);

  std::vector<std::vector<int>> ep_actions(W);
  std::vector<double> ep_return(W, 0.0);
  std::vector<std::string> cur_text(W);
  std::vector<std::vector<int>> cur_tokens(W);
  std::vector<std::vector<float>> cur_hidden(W);
  auto refresh_text = [&](int w) {
    cur_text[w] = envs[w]->text();
    cur_tokens[w] = tokenizer.encode(cur_text[w]);
    cur_hidden[w] = net.encode_text(cur_tokens[w]).h_final;
  };
  for (int w = 0; w < W; ++w) refresh_text(w);

  TrainReport report;
  long frames = 0;

  while (frames < cfg.max_frames) {
    std::vector<WorkerBuffer> wb(W);
    std::vector<std::vector<int>> token_pool;
    std::unordered_map<std::string, int> pool_index;
    auto text_pool_id = [&](int w) {
      auto [it, inserted] = pool_index.try_emplace(cur_text[w], static_cast<int>(token_pool.size()));
      if (inserted) token_pool.push_back(cur_tokens[w]);
      return it->second;
    };

    int episodes_done = 0, successes = 0;
    double returns_sum = 0.0;
    bool stop_all = false;
    for (int step = 0; step < cfg.rollout_length && !stop_all; ++step) {
      for (int w = 0; w < W; ++w) {
        if (frames >= cfg.max_frames) {
          stop_all = true;
          break;
        }
        const gridworld::SymbolicView view = envs[w]->view();
        const auto f = net.forward(view, cur_hidden[w], train_mode, &rollout_dropout_rng);
        const int a = sample_action(f.probs, action_rng);
        const float logp = std::log(std::max(f.probs[a], 1e-30f));
        const EnvStep es = envs[w]->step(a);
        ++frames;
        ep_actions[w].push_back(a);
        ep_return[w] += es.reward;

        wb[w].views.push_back(view);
        wb[w].text_idx.push_back(text_pool_id(w));
        wb[w].actions.push_back(a);
        wb[w].logp.push_back(logp);
        wb[w].values.push_back(f.value);
        wb[w].rewards.push_back(es.reward);
        wb[w].dones.push_back(es.done ? 1 : 0);

        if (es.done) {
          ++episodes_done;
          returns_sum += ep_return[w];
          if (es.success) {
            ++successes;
            if (!report.found_success) {
              report.found_success = true;
              report.success_actions = ep_actions[w];
            }
            if (stop_on_first_success) {
              stop_all = true;
            }
          }
          ep_actions[w].clear();
          ep_return[w] = 0.0;
          if (stop_all) break;
          envs[w]->reset();
          refresh_text(w);
        }
      }
    }

    report.total_frames = frames;
    if (report.found_success && stop_on_first_success) return report;

    PPOBatch<float> batch;
    batch.token_seqs = token_pool;
    for (int w = 0; w < W; ++w) {
      if (wb[w].views.empty()) continue;
      double bootstrap = 0.0;
      if (!wb[w].dones.back()) {
        const auto f = net.forward(envs[w]->view(), cur_hidden[w], false, nullptr);
        bootstrap = f.value;
      }
      const GaeResult g =
          compute_gae(wb[w].rewards, wb[w].values, wb[w].dones, bootstrap, cfg.discount,
                      cfg.gae_lambda);
      for (std::size_t i = 0; i < wb[w].views.size(); ++i) {
        batch.views.push_back(wb[w].views[i]);
        batch.text_idx.push_back(wb[w].text_idx[i]);
        batch.actions.push_back(wb[w].actions[i]);
        batch.old_logp.push_back(wb[w].logp[i]);
        batch.advantages.push_back(static_cast<float>(g.advantages[i]));
        batch.returns.push_back(static_cast<float>(g.returns[i]));
      }
    }
    if (batch.size() == 0) break;
    normalize_advantages_inplace(batch.advantages);
    const PPOStats stats = ppo_update(net, opt, batch, cfg, update_rng);

    for (int w = 0; w < W; ++w) refresh_text(w);

    TrainReportRow row;
    row.frames = frames;
    row.mean_return = episodes_done > 0 ? returns_sum / episodes_done : 0.0;
    row.success_rate = episodes_done > 0 ? static_cast<double>(successes) / episodes_done : 0.0;
    row.policy_loss = stats.policy_loss;
    row.value_loss = stats.value_loss;
    row.entropy = stats.entropy;
    report.rows.push_back(row);

    if (hooks && hooks->after_update && !hooks->after_update(frames, net)) break;
  }
  report.total_frames = frames;
  return report;
}

void write_report_csv(const TrainReport& report, const std::string& path) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw IoError("cannot open report csv for writing: " + path);
  os << "frames,mean_return,success_rate,policy_loss,value_loss,entropy\n";
  for (const auto& r : report.rows)
    os << r.frames << ',' << r.mean_return << ',' << r.success_rate << ',' << r.policy_loss << ','
       << r.value_loss << ',' << r.entropy << '\n';
}

GreedyResult run_greedy_episode(const ActorCriticNet<float>& net, RolloutEnv& env, int max_steps) {
  const Tokenizer tokenizer;
  env.reset();
  const std::vector<float> hidden = net.encode_text(tokenizer.encode(env.text())).h_final;
  GreedyResult out;
  for (int t = 0; t < max_steps; ++t) {
    const auto f = net.forward(env.view(), hidden, false, nullptr);
    const int a = argmax_action(f.probs);
    const EnvStep es = env.step(a);
    out.actions.push_back(a);
    ++out.steps;
    out.episode_return += es.reward;
    if (es.done) {
      out.success = es.success;
      break;
    }
  }
  return out;
}

}  // namespace sdg::rl
