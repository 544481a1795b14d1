#pragma once

#include <cmath>
#include <cstdint>
#include <string>
#include <vector>

#include "sdg/common/errors.hpp"
#include "sdg/common/rng.hpp"
#include "sdg/gridworld/types.hpp"

namespace sdg::rl {

// Architecture hyperparameters. The defaults give the production policy
// (~83k parameters); tests shrink every width to finite-difference scale.
struct NetConfig {
  int emb_dim = 8;
  int conv1_channels = 16;
  int conv2_channels = 32;
  int img_features = 128;
  int text_emb_dim = 8;
  int text_hidden = 64;
  int joint_features = 128;
  int num_actions = 6;
  int vocab_size = 19;
  bool text_encoder_enabled = true;

  static constexpr int kView = gridworld::kViewSize;  // 7
  static constexpr int kKindVocab = 7;                // ViewKind codes
  static constexpr int kColorVocab = 7;
  static constexpr int kDoorVocab = 3;

  int conv1_out_size() const { return kView - 2; }            // 5
  int conv2_out_size() const { return conv1_out_size() - 2; }  // 3
  int flat_size() const { return conv2_channels * conv2_out_size() * conv2_out_size(); }
  int joint_in_size() const {
    return img_features + (text_encoder_enabled ? text_hidden : 0);
  }
};

struct TensorSpec {
  std::string name;
  std::vector<int> shape;
  std::size_t offset = 0;  // element offset into the flat parameter vector
  std::size_t size = 0;
};

// Convolutional actor-critic over the 7x7x3 symbolic view with a GRU encoder
// for the conditioning text. Per-channel cell embeddings are summed into an
// emb_dim image, passed through two 3x3 convolutions, flattened to
// img_features, fused with the final GRU hidden state, and read out by a
// 6-way actor and a scalar critic. All forward/backward passes are hand
// written over a single flat parameter vector so gradients can be checked
// against finite differences at double precision.
template <typename T>
class ActorCriticNet {
 public:
  explicit ActorCriticNet(const NetConfig& cfg) : cfg_(cfg) { build_registry(); }

  const NetConfig& config() const { return cfg_; }
  const std::vector<TensorSpec>& tensors() const { return tensors_; }
  std::size_t param_count() const { return params_.size(); }

  std::vector<T>& params() { return params_; }
  const std::vector<T>& params() const { return params_; }
  std::vector<T>& grads() { return grads_; }
  void zero_grads() { std::fill(grads_.begin(), grads_.end(), T(0)); }

  const TensorSpec* find_tensor(const std::string& name) const {
    for (const auto& t : tensors_)
      if (t.name == name) return &t;
    return nullptr;
  }
  T* tensor_data(const std::string& name) {
    const TensorSpec* t = find_tensor(name);
    if (!t) throw Error("no tensor named '" + name + "'");
    return params_.data() + t->offset;
  }

  // Default initialization: centered uniform at 1/sqrt(fan_in) for linear and
  // convolution layers (matching common deep-learning library defaults),
  // standard normal embeddings, and an actor head scaled down 100x so the
  // initial policy is near uniform.
  void init_params(std::uint64_t seed) {
    Rng rng(seed);
    for (const auto& t : tensors_) init_tensor(t, rng);
  }

  // --- text encoder ---------------------------------------------------------

  struct TextState {
    std::vector<int> tokens;
    std::vector<T> xs;   // tokens x E token embeddings
    std::vector<T> hs;   // (tokens+1) x H hidden states, hs[0] = 0
    std::vector<T> r, z, n, hn;  // per-step gate activations (hn = W_hn h + b_hn)
    std::vector<T> h_final;      // H
  };

  TextState encode_text(const std::vector<int>& tokens) const {
    const int H = cfg_.text_hidden, E = cfg_.text_emb_dim;
    TextState st;
    st.h_final.assign(H, T(0));
    if (!cfg_.text_encoder_enabled) return st;
    st.tokens = tokens;
    const int n_tok = static_cast<int>(tokens.size());
    st.xs.resize(static_cast<std::size_t>(n_tok) * E);
    st.hs.assign(static_cast<std::size_t>(n_tok + 1) * H, T(0));
    st.r.resize(static_cast<std::size_t>(n_tok) * H);
    st.z.resize(static_cast<std::size_t>(n_tok) * H);
    st.n.resize(static_cast<std::size_t>(n_tok) * H);
    st.hn.resize(static_cast<std::size_t>(n_tok) * H);
    const T* emb = params_.data() + off_tok_emb_;
    const T* w_ih = params_.data() + off_gru_w_ih_;
    const T* w_hh = params_.data() + off_gru_w_hh_;
    const T* b_ih = params_.data() + off_gru_b_ih_;
    const T* b_hh = params_.data() + off_gru_b_hh_;
    std::vector<T> gi(3 * H), gh(3 * H);
    for (int t = 0; t < n_tok; ++t) {
      const int tok = tokens[t];
      if (tok < 0 || tok >= cfg_.vocab_size) throw Error("token index out of range");
      T* x = st.xs.data() + static_cast<std::size_t>(t) * E;
      for (int e = 0; e < E; ++e) x[e] = emb[static_cast<std::size_t>(tok) * E + e];
      const T* h_prev = st.hs.data() + static_cast<std::size_t>(t) * H;
      T* h_next = st.hs.data() + static_cast<std::size_t>(t + 1) * H;
      // gi = W_ih x + b_ih ; gh = W_hh h + b_hh ; gate rows ordered r, z, n
      for (int i = 0; i < 3 * H; ++i) {
        T acc = b_ih[i];
        const T* row = w_ih + static_cast<std::size_t>(i) * E;
        for (int e = 0; e < E; ++e) acc += row[e] * x[e];
        gi[i] = acc;
      }
      for (int i = 0; i < 3 * H; ++i) {
        T acc = b_hh[i];
        const T* row = w_hh + static_cast<std::size_t>(i) * H;
        for (int j = 0; j < H; ++j) acc += row[j] * h_prev[j];
        gh[i] = acc;
      }
      T* rt = st.r.data() + static_cast<std::size_t>(t) * H;
      T* zt = st.z.data() + static_cast<std::size_t>(t) * H;
      T* nt = st.n.data() + static_cast<std::size_t>(t) * H;
      T* hnt = st.hn.data() + static_cast<std::size_t>(t) * H;
      for (int j = 0; j < H; ++j) {
        rt[j] = sigmoid(gi[j] + gh[j]);
        zt[j] = sigmoid(gi[H + j] + gh[H + j]);
        hnt[j] = gh[2 * H + j];
        nt[j] = std::tanh(gi[2 * H + j] + rt[j] * hnt[j]);
        h_next[j] = (T(1) - zt[j]) * nt[j] + zt[j] * h_prev[j];
      }
    }
    for (int j = 0; j < H; ++j)
      st.h_final[j] = st.hs[static_cast<std::size_t>(n_tok) * H + j];
    return st;
  }

  // Backpropagates d(loss)/d(h_final) through the GRU and token embeddings.
  void backward_text(const TextState& st, const std::vector<T>& dh_final,
                     std::vector<T>& grads) const {
    if (!cfg_.text_encoder_enabled || st.tokens.empty()) return;
    const int H = cfg_.text_hidden, E = cfg_.text_emb_dim;
    const T* w_ih = params_.data() + off_gru_w_ih_;
    const T* w_hh = params_.data() + off_gru_w_hh_;
    T* d_emb = grads.data() + off_tok_emb_;
    T* d_w_ih = grads.data() + off_gru_w_ih_;
    T* d_w_hh = grads.data() + off_gru_w_hh_;
    T* d_b_ih = grads.data() + off_gru_b_ih_;
    T* d_b_hh = grads.data() + off_gru_b_hh_;
    std::vector<T> dh(dh_final.begin(), dh_final.end());
    std::vector<T> dh_prev(H), dpre_r(H), dpre_z(H), dpre_n(H), dhn(H);
    for (int t = static_cast<int>(st.tokens.size()) - 1; t >= 0; --t) {
      const T* rt = st.r.data() + static_cast<std::size_t>(t) * H;
      const T* zt = st.z.data() + static_cast<std::size_t>(t) * H;
      const T* nt = st.n.data() + static_cast<std::size_t>(t) * H;
      const T* hnt = st.hn.data() + static_cast<std::size_t>(t) * H;
      const T* h_prev = st.hs.data() + static_cast<std::size_t>(t) * H;
      const T* x = st.xs.data() + static_cast<std::size_t>(t) * E;
      for (int j = 0; j < H; ++j) {
        const T dn = dh[j] * (T(1) - zt[j]);
        const T dz = dh[j] * (h_prev[j] - nt[j]);
        dh_prev[j] = dh[j] * zt[j];
        dpre_n[j] = dn * (T(1) - nt[j] * nt[j]);
        const T dr = dpre_n[j] * hnt[j];
        dhn[j] = dpre_n[j] * rt[j];
        dpre_r[j] = dr * rt[j] * (T(1) - rt[j]);
        dpre_z[j] = dz * zt[j] * (T(1) - zt[j]);
      }
      const int tok = st.tokens[t];
      T* dx = d_emb + static_cast<std::size_t>(tok) * E;
      for (int j = 0; j < H; ++j) {
        accumulate_gate(d_w_ih, d_b_ih, j, x, E, dpre_r[j]);
        accumulate_gate(d_w_ih, d_b_ih, H + j, x, E, dpre_z[j]);
        accumulate_gate(d_w_ih, d_b_ih, 2 * H + j, x, E, dpre_n[j]);
        accumulate_gate(d_w_hh, d_b_hh, j, h_prev, H, dpre_r[j]);
        accumulate_gate(d_w_hh, d_b_hh, H + j, h_prev, H, dpre_z[j]);
        accumulate_gate(d_w_hh, d_b_hh, 2 * H + j, h_prev, H, dhn[j]);
      }
      for (int e = 0; e < E; ++e) {
        T acc = T(0);
        for (int j = 0; j < H; ++j) {
          acc += w_ih[static_cast<std::size_t>(j) * E + e] * dpre_r[j];
          acc += w_ih[static_cast<std::size_t>(H + j) * E + e] * dpre_z[j];
          acc += w_ih[static_cast<std::size_t>(2 * H + j) * E + e] * dpre_n[j];
        }
        dx[e] += acc;
      }
      for (int k = 0; k < H; ++k) {
        T acc = dh_prev[k];
        for (int j = 0; j < H; ++j) {
          acc += w_hh[static_cast<std::size_t>(j) * H + k] * dpre_r[j];
          acc += w_hh[static_cast<std::size_t>(H + j) * H + k] * dpre_z[j];
          acc += w_hh[static_cast<std::size_t>(2 * H + j) * H + k] * dhn[j];
        }
        dh[k] = acc;
      }
    }
  }

  // --- image + fusion forward/backward ---------------------------------------

  struct Forward {
    std::vector<T> emb;                // C0 x 7 x 7 (channel-major)
    std::vector<T> c1_pre, c1;         // C1 x 5 x 5
    std::vector<T> c2_pre, c2;         // C2 x 3 x 3
    std::vector<T> img_pre, img;       // F_img
    std::vector<T> joint_in;           // F_img (+ H)
    std::vector<T> joint_pre, joint;   // F_j
    std::vector<T> drop_mask;          // F_j; empty = identity
    std::vector<T> hidden;             // F_j after dropout
    std::vector<T> logits, probs;      // A
    T value = T(0);
  };

  // text_hidden must have size text_hidden (use encode_text(...).h_final) when
  // the text encoder is enabled; it is ignored otherwise. Dropout draws one
  // uniform per joint feature from `dropout_rng` when active.
  Forward forward(const gridworld::SymbolicView& view, const std::vector<T>& text_hidden,
                  bool train_mode, Rng* dropout_rng) const {
    const int V = NetConfig::kView;
    const int C0 = cfg_.emb_dim, C1 = cfg_.conv1_channels, C2 = cfg_.conv2_channels;
    const int S1 = cfg_.conv1_out_size(), S2 = cfg_.conv2_out_size();
    if (cfg_.text_encoder_enabled &&
        static_cast<int>(text_hidden.size()) != cfg_.text_hidden)
      throw Error("forward: text hidden state has wrong size");
    Forward f;

    f.emb.assign(static_cast<std::size_t>(C0) * V * V, T(0));
    const T* ek = params_.data() + off_emb_kind_;
    const T* ec = params_.data() + off_emb_color_;
    const T* ed = params_.data() + off_emb_door_;
    for (int y = 0; y < V; ++y)
      for (int x = 0; x < V; ++x) {
        const int kind = view.at(y, x, 0), color = view.at(y, x, 1), door = view.at(y, x, 2);
        if (kind >= NetConfig::kKindVocab || color >= NetConfig::kColorVocab ||
            door >= NetConfig::kDoorVocab)
          throw Error("forward: view channel code out of range");
        for (int c = 0; c < C0; ++c)
          f.emb[(static_cast<std::size_t>(c) * V + y) * V + x] =
              ek[static_cast<std::size_t>(kind) * C0 + c] +
              ec[static_cast<std::size_t>(color) * C0 + c] +
              ed[static_cast<std::size_t>(door) * C0 + c];
      }

    conv_forward(f.emb, C0, V, params_.data() + off_conv1_w_, params_.data() + off_conv1_b_, C1,
                 f.c1_pre);
    relu(f.c1_pre, f.c1);
    conv_forward(f.c1, C1, S1, params_.data() + off_conv2_w_, params_.data() + off_conv2_b_, C2,
                 f.c2_pre);
    relu(f.c2_pre, f.c2);

    linear_forward(f.c2, params_.data() + off_fc_img_w_, params_.data() + off_fc_img_b_,
                   cfg_.img_features, f.img_pre);
    relu(f.img_pre, f.img);

    f.joint_in = f.img;
    if (cfg_.text_encoder_enabled)
      f.joint_in.insert(f.joint_in.end(), text_hidden.begin(), text_hidden.end());

    linear_forward(f.joint_in, params_.data() + off_fc_joint_w_, params_.data() + off_fc_joint_b_,
                   cfg_.joint_features, f.joint_pre);
    relu(f.joint_pre, f.joint);

    f.hidden = f.joint;
    if (train_mode && dropout_ > 0.0) {
      if (!dropout_rng) throw Error("forward: dropout active but no RNG given");
      f.drop_mask.resize(f.joint.size());
      const T keep_scale = T(1.0 / (1.0 - dropout_));
      for (std::size_t i = 0; i < f.joint.size(); ++i) {
        f.drop_mask[i] = dropout_rng->uniform() < dropout_ ? T(0) : keep_scale;
        f.hidden[i] = f.joint[i] * f.drop_mask[i];
      }
    }

    linear_forward(f.hidden, params_.data() + off_actor_w_, params_.data() + off_actor_b_,
                   cfg_.num_actions, f.logits);
    std::vector<T> v1;
    linear_forward(f.hidden, params_.data() + off_critic_w_, params_.data() + off_critic_b_, 1, v1);
    f.value = v1[0];

    f.probs = softmax(f.logits);
    // S2 is only used in debug size reasoning; silence unused warnings in release.
    (void)S2;
    return f;
  }

  // Accumulates parameter gradients for one sample given d(loss)/d(logits) and
  // d(loss)/d(value); adds d(loss)/d(text hidden) into *dtext when non-null.
  void backward(const gridworld::SymbolicView& view, const Forward& f,
                const std::vector<T>& dlogits, T dvalue, std::vector<T>& grads,
                std::vector<T>* dtext) const {
    const int V = NetConfig::kView;
    const int C0 = cfg_.emb_dim, C1 = cfg_.conv1_channels, C2 = cfg_.conv2_channels;
    const int S1 = cfg_.conv1_out_size();
    const int F_img = cfg_.img_features, F_j = cfg_.joint_features;

    std::vector<T> dhidden(F_j, T(0));
    linear_backward(f.hidden, dlogits, params_.data() + off_actor_w_,
                    grads.data() + off_actor_w_, grads.data() + off_actor_b_, dhidden);
    const std::vector<T> dv{dvalue};
    linear_backward(f.hidden, dv, params_.data() + off_critic_w_, grads.data() + off_critic_w_,
                    grads.data() + off_critic_b_, dhidden);

    std::vector<T> djoint_pre(F_j);
    for (int i = 0; i < F_j; ++i) {
      T d = dhidden[i];
      if (!f.drop_mask.empty()) d *= f.drop_mask[i];
      djoint_pre[i] = f.joint_pre[i] > T(0) ? d : T(0);
    }
    std::vector<T> djoint_in(f.joint_in.size(), T(0));
    linear_backward(f.joint_in, djoint_pre, params_.data() + off_fc_joint_w_,
                    grads.data() + off_fc_joint_w_, grads.data() + off_fc_joint_b_, djoint_in);
    if (cfg_.text_encoder_enabled && dtext) {
      for (int j = 0; j < cfg_.text_hidden; ++j) (*dtext)[j] += djoint_in[F_img + j];
    }

    std::vector<T> dimg_pre(F_img);
    for (int i = 0; i < F_img; ++i)
      dimg_pre[i] = f.img_pre[i] > T(0) ? djoint_in[i] : T(0);
    std::vector<T> dflat(f.c2.size(), T(0));
    linear_backward(f.c2, dimg_pre, params_.data() + off_fc_img_w_, grads.data() + off_fc_img_w_,
                    grads.data() + off_fc_img_b_, dflat);

    std::vector<T> dc2_pre(dflat.size());
    for (std::size_t i = 0; i < dflat.size(); ++i)
      dc2_pre[i] = f.c2_pre[i] > T(0) ? dflat[i] : T(0);
    std::vector<T> dc1(f.c1.size(), T(0));
    conv_backward(f.c1, C1, S1, params_.data() + off_conv2_w_, C2, dc2_pre,
                  grads.data() + off_conv2_w_, grads.data() + off_conv2_b_, dc1);

    std::vector<T> dc1_pre(dc1.size());
    for (std::size_t i = 0; i < dc1.size(); ++i)
      dc1_pre[i] = f.c1_pre[i] > T(0) ? dc1[i] : T(0);
    std::vector<T> demb(f.emb.size(), T(0));
    conv_backward(f.emb, C0, V, params_.data() + off_conv1_w_, C1, dc1_pre,
                  grads.data() + off_conv1_w_, grads.data() + off_conv1_b_, demb);

    T* dek = grads.data() + off_emb_kind_;
    T* dec = grads.data() + off_emb_color_;
    T* ded = grads.data() + off_emb_door_;
    for (int y = 0; y < V; ++y)
      for (int x = 0; x < V; ++x) {
        const int kind = view.at(y, x, 0), color = view.at(y, x, 1), door = view.at(y, x, 2);
        for (int c = 0; c < C0; ++c) {
          const T d = demb[(static_cast<std::size_t>(c) * V + y) * V + x];
          dek[static_cast<std::size_t>(kind) * C0 + c] += d;
          dec[static_cast<std::size_t>(color) * C0 + c] += d;
          ded[static_cast<std::size_t>(door) * C0 + c] += d;
        }
      }
  }

  void set_dropout(double p) { dropout_ = p; }
  double dropout() const { return dropout_; }

  static std::vector<T> softmax(const std::vector<T>& logits) {
    T mx = logits[0];
    for (T v : logits) mx = std::max(mx, v);
    std::vector<T> p(logits.size());
    T sum = T(0);
    for (std::size_t i = 0; i < logits.size(); ++i) {
      p[i] = std::exp(logits[i] - mx);
      sum += p[i];
    }
    for (T& v : p) v /= sum;
    return p;
  }

 private:
  static T sigmoid(T x) { return T(1) / (T(1) + std::exp(-x)); }

  static void relu(const std::vector<T>& in, std::vector<T>& out) {
    out.resize(in.size());
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] > T(0) ? in[i] : T(0);
  }

  // 3x3 valid convolution, stride 1. in: ic x s x s, out: oc x (s-2) x (s-2).
  static void conv_forward(const std::vector<T>& in, int ic, int s, const T* w, const T* b, int oc,
                           std::vector<T>& out) {
    const int so = s - 2;
    out.assign(static_cast<std::size_t>(oc) * so * so, T(0));
    for (int o = 0; o < oc; ++o)
      for (int y = 0; y < so; ++y)
        for (int x = 0; x < so; ++x) {
          T acc = b[o];
          for (int i = 0; i < ic; ++i) {
            const T* wrow = w + ((static_cast<std::size_t>(o) * ic + i) * 9);
            const T* irow = in.data() + (static_cast<std::size_t>(i) * s + y) * s + x;
            for (int ky = 0; ky < 3; ++ky)
              for (int kx = 0; kx < 3; ++kx)
                acc += wrow[ky * 3 + kx] * irow[static_cast<std::size_t>(ky) * s + kx];
          }
          out[(static_cast<std::size_t>(o) * so + y) * so + x] = acc;
        }
  }

  static void conv_backward(const std::vector<T>& in, int ic, int s, const T* w, int oc,
                            const std::vector<T>& dout, T* dw, T* db, std::vector<T>& din) {
    const int so = s - 2;
    for (int o = 0; o < oc; ++o)
      for (int y = 0; y < so; ++y)
        for (int x = 0; x < so; ++x) {
          const T d = dout[(static_cast<std::size_t>(o) * so + y) * so + x];
          if (d == T(0)) continue;
          db[o] += d;
          for (int i = 0; i < ic; ++i) {
            T* dwrow = dw + ((static_cast<std::size_t>(o) * ic + i) * 9);
            const T* wrow = w + ((static_cast<std::size_t>(o) * ic + i) * 9);
            const T* irow = in.data() + (static_cast<std::size_t>(i) * s + y) * s + x;
            T* dirow = din.data() + (static_cast<std::size_t>(i) * s + y) * s + x;
            for (int ky = 0; ky < 3; ++ky)
              for (int kx = 0; kx < 3; ++kx) {
                dwrow[ky * 3 + kx] += d * irow[static_cast<std::size_t>(ky) * s + kx];
                dirow[static_cast<std::size_t>(ky) * s + kx] += d * wrow[ky * 3 + kx];
              }
          }
        }
  }

  // out = W in + b with W stored row-major [out x in].
  static void linear_forward(const std::vector<T>& in, const T* w, const T* b, int out_dim,
                             std::vector<T>& out) {
    const std::size_t in_dim = in.size();
    out.resize(out_dim);
    for (int o = 0; o < out_dim; ++o) {
      T acc = b[o];
      const T* row = w + static_cast<std::size_t>(o) * in_dim;
      for (std::size_t i = 0; i < in_dim; ++i) acc += row[i] * in[i];
      out[o] = acc;
    }
  }

  static void linear_backward(const std::vector<T>& in, const std::vector<T>& dout, const T* w,
                              T* dw, T* db, std::vector<T>& din) {
    const std::size_t in_dim = in.size();
    for (std::size_t o = 0; o < dout.size(); ++o) {
      const T d = dout[o];
      if (d == T(0)) continue;
      db[o] += d;
      T* dwrow = dw + o * in_dim;
      const T* wrow = w + o * in_dim;
      for (std::size_t i = 0; i < in_dim; ++i) {
        dwrow[i] += d * in[i];
        din[i] += d * wrow[i];
      }
    }
  }

  static void accumulate_gate(T* dw, T* db, int row, const T* vec, int n, T d) {
    if (d == T(0)) return;
    db[row] += d;
    T* dst = dw + static_cast<std::size_t>(row) * n;
    for (int i = 0; i < n; ++i) dst[i] += d * vec[i];
  }

  std::size_t add_tensor(const std::string& name, std::vector<int> shape) {
    std::size_t size = 1;
    for (int d : shape) size *= static_cast<std::size_t>(d);
    const std::size_t offset = total_;
    tensors_.push_back({name, std::move(shape), offset, size});
    total_ += size;
    return offset;
  }

  void build_registry() {
    const int C0 = cfg_.emb_dim, C1 = cfg_.conv1_channels, C2 = cfg_.conv2_channels;
    off_emb_kind_ = add_tensor("emb_kind", {NetConfig::kKindVocab, C0});
    off_emb_color_ = add_tensor("emb_color", {NetConfig::kColorVocab, C0});
    off_emb_door_ = add_tensor("emb_door", {NetConfig::kDoorVocab, C0});
    off_conv1_w_ = add_tensor("conv1_w", {C1, C0, 3, 3});
    off_conv1_b_ = add_tensor("conv1_b", {C1});
    off_conv2_w_ = add_tensor("conv2_w", {C2, C1, 3, 3});
    off_conv2_b_ = add_tensor("conv2_b", {C2});
    off_fc_img_w_ = add_tensor("fc_img_w", {cfg_.img_features, cfg_.flat_size()});
    off_fc_img_b_ = add_tensor("fc_img_b", {cfg_.img_features});
    if (cfg_.text_encoder_enabled) {
      off_tok_emb_ = add_tensor("tok_emb", {cfg_.vocab_size, cfg_.text_emb_dim});
      off_gru_w_ih_ = add_tensor("gru_w_ih", {3 * cfg_.text_hidden, cfg_.text_emb_dim});
      off_gru_w_hh_ = add_tensor("gru_w_hh", {3 * cfg_.text_hidden, cfg_.text_hidden});
      off_gru_b_ih_ = add_tensor("gru_b_ih", {3 * cfg_.text_hidden});
      off_gru_b_hh_ = add_tensor("gru_b_hh", {3 * cfg_.text_hidden});
    }
    off_fc_joint_w_ = add_tensor("fc_joint_w", {cfg_.joint_features, cfg_.joint_in_size()});
    off_fc_joint_b_ = add_tensor("fc_joint_b", {cfg_.joint_features});
    off_actor_w_ = add_tensor("actor_w", {cfg_.num_actions, cfg_.joint_features});
    off_actor_b_ = add_tensor("actor_b", {cfg_.num_actions});
    off_critic_w_ = add_tensor("critic_w", {1, cfg_.joint_features});
    off_critic_b_ = add_tensor("critic_b", {1});
    params_.assign(total_, T(0));
    grads_.assign(total_, T(0));
  }

  void init_tensor(const TensorSpec& t, Rng& rng) {
    T* data = params_.data() + t.offset;
    auto uniform_fan_in = [&](std::size_t fan_in) {
      const double k = 1.0 / std::sqrt(static_cast<double>(fan_in));
      for (std::size_t i = 0; i < t.size; ++i)
        data[i] = static_cast<T>((rng.uniform() * 2.0 - 1.0) * k);
    };
    if (t.name.rfind("emb_", 0) == 0 || t.name == "tok_emb") {
      for (std::size_t i = 0; i < t.size; ++i) data[i] = static_cast<T>(rng.normal());
    } else if (t.name.rfind("conv1", 0) == 0) {
      uniform_fan_in(static_cast<std::size_t>(cfg_.emb_dim) * 9);
    } else if (t.name.rfind("conv2", 0) == 0) {
      uniform_fan_in(static_cast<std::size_t>(cfg_.conv1_channels) * 9);
    } else if (t.name.rfind("fc_img", 0) == 0) {
      uniform_fan_in(static_cast<std::size_t>(cfg_.flat_size()));
    } else if (t.name.rfind("gru_", 0) == 0) {
      uniform_fan_in(static_cast<std::size_t>(cfg_.text_hidden));
    } else if (t.name.rfind("fc_joint", 0) == 0) {
      uniform_fan_in(static_cast<std::size_t>(cfg_.joint_in_size()));
    } else if (t.name.rfind("actor", 0) == 0) {
      uniform_fan_in(static_cast<std::size_t>(cfg_.joint_features));
      for (std::size_t i = 0; i < t.size; ++i) data[i] *= T(0.01);
    } else {  // critic
      uniform_fan_in(static_cast<std::size_t>(cfg_.joint_features));
    }
  }

  NetConfig cfg_;
  double dropout_ = 0.0;
  std::vector<TensorSpec> tensors_;
  std::vector<T> params_, grads_;
  std::size_t total_ = 0;
  std::size_t off_emb_kind_ = 0, off_emb_color_ = 0, off_emb_door_ = 0;
  std::size_t off_conv1_w_ = 0, off_conv1_b_ = 0, off_conv2_w_ = 0, off_conv2_b_ = 0;
  std::size_t off_fc_img_w_ = 0, off_fc_img_b_ = 0;
  std::size_t off_tok_emb_ = 0, off_gru_w_ih_ = 0, off_gru_w_hh_ = 0, off_gru_b_ih_ = 0,
              off_gru_b_hh_ = 0;
  std::size_t off_fc_joint_w_ = 0, off_fc_joint_b_ = 0;
  std::size_t off_actor_w_ = 0, off_actor_b_ = 0, off_critic_w_ = 0, off_critic_b_ = 0;
};

}  // namespace sdg::rl
