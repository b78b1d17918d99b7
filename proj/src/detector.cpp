#include "pixmap/detector.hpp"

#include <algorithm>
#include <cmath>

#include "pixmap/error.hpp"
#include "pixmap/rng.hpp"

namespace pixmap {

namespace {

using P = DetectorParams;

// Activations of one sample, kept for the backward pass.
struct Activations {
  int h1 = 0, w1 = 0;  // conv1 output
  int hp = 0, wp = 0;  // pooled
  int h2 = 0, w2 = 0;  // conv2 output
  std::vector<double> a1;      // [kMid][h1][w1] pre-activation
  std::vector<double> pooled;  // [kMid][hp][wp]
  std::vector<double> a2;      // [kOut][h2][w2] pre-activation
  std::array<double, P::kOut> features{};
  double logit = 0.0;
};

void check_batch(const Batch& batch) {
  if (batch.count < 1 || batch.height < kMinInputSize ||
      batch.width < kMinInputSize ||
      batch.values.size() != batch.sample_size() * batch.count) {
    throw Error(ErrorCode::kShapeMismatch,
                "detector input must be N x 3 x H x W with N >= 1 and H, W >= " +
                    std::to_string(kMinInputSize));
  }
}

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// out[o] += sum_c kernel[o][c] (*) in[c], valid 3x3 correlation.
void conv3x3(std::span<const double> in, int channels, int h, int w,
             std::span<const double> kernel, std::span<const double> bias,
             int outputs, std::vector<double>& out) {
  const int oh = h - 2;
  const int ow = w - 2;
  out.assign(static_cast<std::size_t>(outputs) * oh * ow, 0.0);
  for (int o = 0; o < outputs; ++o) {
    double* dst = out.data() + static_cast<std::size_t>(o) * oh * ow;
    std::fill(dst, dst + oh * ow, bias[o]);
    for (int c = 0; c < channels; ++c) {
      const double* src = in.data() + static_cast<std::size_t>(c) * h * w;
      const double* k = kernel.data() + (static_cast<std::size_t>(o) * channels + c) * 9;
      for (int ky = 0; ky < 3; ++ky) {
        for (int kx = 0; kx < 3; ++kx) {
          const double weight = k[ky * 3 + kx];
          for (int y = 0; y < oh; ++y) {
            const double* row = src + (y + ky) * w + kx;
            double* acc = dst + y * ow;
            for (int x = 0; x < ow; ++x) acc[x] += weight * row[x];
          }
        }
      }
    }
  }
}

Activations run_forward(const P& params, std::span<const double> x, int h, int w) {
  Activations act;
  act.h1 = h - 2;
  act.w1 = w - 2;
  conv3x3(x, P::kIn, h, w, params.conv1_w.values, params.conv1_b.values, P::kMid,
          act.a1);

  act.hp = act.h1 / 2;
  act.wp = act.w1 / 2;
  act.pooled.assign(static_cast<std::size_t>(P::kMid) * act.hp * act.wp, 0.0);
  for (int o = 0; o < P::kMid; ++o) {
    const double* a = act.a1.data() + static_cast<std::size_t>(o) * act.h1 * act.w1;
    double* p = act.pooled.data() + static_cast<std::size_t>(o) * act.hp * act.wp;
    for (int y = 0; y < act.hp; ++y) {
      for (int x = 0; x < act.wp; ++x) {
        const double* r0 = a + (2 * y) * act.w1 + 2 * x;
        const double* r1 = r0 + act.w1;
        p[y * act.wp + x] = 0.25 * (std::max(r0[0], 0.0) + std::max(r0[1], 0.0) +
                                    std::max(r1[0], 0.0) + std::max(r1[1], 0.0));
      }
    }
  }

  act.h2 = act.hp - 2;
  act.w2 = act.wp - 2;
  conv3x3(act.pooled, P::kMid, act.hp, act.wp, params.conv2_w.values,
          params.conv2_b.values, P::kOut, act.a2);

  const int area = act.h2 * act.w2;
  act.logit = params.linear_b.values[0];
  for (int o = 0; o < P::kOut; ++o) {
    const double* a = act.a2.data() + static_cast<std::size_t>(o) * area;
    double sum = 0.0;
    for (int i = 0; i < area; ++i) sum += std::max(a[i], 0.0);
    act.features[o] = sum / area;
    act.logit += params.linear_w.values[o] * act.features[o];
  }
  return act;
}

}  // namespace

DetectorParams zeros_like_params() { return DetectorParams{}; }

DetectorParams init_params(std::uint64_t seed) {
  DetectorParams params;
  SplitMix64 rng(seed);
  const double s1 = std::sqrt(2.0 / (P::kIn * 9));
  const double s2 = std::sqrt(2.0 / (P::kMid * 9));
  const double s3 = std::sqrt(1.0 / P::kOut);
  for (auto& v : params.conv1_w.values) v = s1 * rng.normal();
  for (auto& v : params.conv2_w.values) v = s2 * rng.normal();
  for (auto& v : params.linear_w.values) v = s3 * rng.normal();
  return params;
}

Batch make_batch(std::span<const ImageF> images) {
  if (images.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "empty batch");
  }
  Batch batch;
  batch.count = static_cast<int>(images.size());
  batch.height = images.front().height();
  batch.width = images.front().width();
  batch.values.resize(batch.sample_size() * batch.count);
  const std::size_t area = static_cast<std::size_t>(batch.height) * batch.width;
  for (int n = 0; n < batch.count; ++n) {
    const ImageF& img = images[n];
    if (img.height() != batch.height || img.width() != batch.width ||
        img.channels() != Batch::kChannels) {
      throw Error(ErrorCode::kShapeMismatch, "batch images differ in shape");
    }
    double* dst = batch.values.data() + n * batch.sample_size();
    const auto src = img.data();
    for (std::size_t i = 0; i < area; ++i) {
      for (int c = 0; c < Batch::kChannels; ++c) {
        dst[c * area + i] = src[i * Batch::kChannels + c];
      }
    }
  }
  return batch;
}

std::vector<double> forward(const DetectorParams& params, const Batch& batch) {
  check_batch(batch);
  std::vector<double> probs(batch.count);
  for (int n = 0; n < batch.count; ++n) {
    probs[n] = sigmoid(run_forward(params, batch.sample(n), batch.height,
                                   batch.width).logit);
  }
  return probs;
}

double bce_loss(std::span<const double> probs, std::span<const int> labels) {
  if (probs.size() != labels.size() || probs.empty()) {
    throw Error(ErrorCode::kShapeMismatch, "loss needs equal, non-empty inputs");
  }
  double total = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) {
    const double p = std::clamp(probs[i], kProbEpsilon, 1.0 - kProbEpsilon);
    total += labels[i] ? -std::log(p) : -std::log(1.0 - p);
  }
  return total / static_cast<double>(probs.size());
}

DetectorParams backward(const DetectorParams& params, const Batch& batch,
                        std::span<const int> labels) {
  return loss_and_gradient(params, batch, labels).gradient;
}

LossAndGradient loss_and_gradient(const DetectorParams& params, const Batch& batch,
                                  std::span<const int> labels) {
  check_batch(batch);
  if (labels.size() != static_cast<std::size_t>(batch.count)) {
    throw Error(ErrorCode::kShapeMismatch, "one label per sample required");
  }
  LossAndGradient out;
  DetectorParams& grad = out.gradient;
  const double inv_n = 1.0 / batch.count;
  std::vector<double> d_a2, d_pooled, d_a1;

  for (int n = 0; n < batch.count; ++n) {
    const auto x = batch.sample(n);
    const Activations act = run_forward(params, x, batch.height, batch.width);
    const double p = sigmoid(act.logit);
    const double pc = std::clamp(p, kProbEpsilon, 1.0 - kProbEpsilon);
    out.loss -= (labels[n] ? std::log(pc) : std::log(1.0 - pc)) * inv_n;
    // Inside the clamp the loss derivative w.r.t. the logit is p - y; the
    // clamped plateau has zero slope.
    const bool clamped = p < kProbEpsilon || p > 1.0 - kProbEpsilon;
    const double d_logit = clamped ? 0.0 : (p - labels[n]) * inv_n;
    if (d_logit == 0.0) continue;

    grad.linear_b.values[0] += d_logit;
    const int area2 = act.h2 * act.w2;
    d_a2.assign(act.a2.size(), 0.0);
    for (int o = 0; o < P::kOut; ++o) {
      grad.linear_w.values[o] += d_logit * act.features[o];
      const double d_feature = d_logit * params.linear_w.values[o] / area2;
      const double* a = act.a2.data() + static_cast<std::size_t>(o) * area2;
      double* d = d_a2.data() + static_cast<std::size_t>(o) * area2;
      for (int i = 0; i < area2; ++i) d[i] = a[i] > 0.0 ? d_feature : 0.0;
    }

    // conv2: kernel, bias and input gradients.
    const int area_p = act.hp * act.wp;
    d_pooled.assign(act.pooled.size(), 0.0);
    for (int o = 0; o < P::kOut; ++o) {
      const double* d = d_a2.data() + static_cast<std::size_t>(o) * area2;
      double bias_sum = 0.0;
      for (int i = 0; i < area2; ++i) bias_sum += d[i];
      grad.conv2_b.values[o] += bias_sum;
      for (int c = 0; c < P::kMid; ++c) {
        const double* in = act.pooled.data() + static_cast<std::size_t>(c) * area_p;
        double* d_in = d_pooled.data() + static_cast<std::size_t>(c) * area_p;
        const std::size_t k_off = (static_cast<std::size_t>(o) * P::kMid + c) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            const double weight = params.conv2_w.values[k_off + ky * 3 + kx];
            double acc = 0.0;
            for (int y = 0; y < act.h2; ++y) {
              const double* row = in + (y + ky) * act.wp + kx;
              double* d_row = d_in + (y + ky) * act.wp + kx;
              const double* dy = d + y * act.w2;
              for (int xx = 0; xx < act.w2; ++xx) {
                acc += dy[xx] * row[xx];
                d_row[xx] += dy[xx] * weight;
              }
            }
            grad.conv2_w.values[k_off + ky * 3 + kx] += acc;
          }
        }
      }
    }

    // Mean pool and ReLU back to conv1 pre-activations.
    const int area1 = act.h1 * act.w1;
    d_a1.assign(act.a1.size(), 0.0);
    for (int c = 0; c < P::kMid; ++c) {
      const double* a = act.a1.data() + static_cast<std::size_t>(c) * area1;
      double* d = d_a1.data() + static_cast<std::size_t>(c) * area1;
      const double* dp = d_pooled.data() + static_cast<std::size_t>(c) * area_p;
      for (int y = 0; y < act.hp; ++y) {
        for (int xx = 0; xx < act.wp; ++xx) {
          const double g = 0.25 * dp[y * act.wp + xx];
          for (int sy = 0; sy < 2; ++sy) {
            for (int sx = 0; sx < 2; ++sx) {
              const int idx = (2 * y + sy) * act.w1 + 2 * xx + sx;
              d[idx] = a[idx] > 0.0 ? g : 0.0;
            }
          }
        }
      }
    }

    // conv1: kernel and bias gradients (the input needs none).
    const int area0 = batch.height * batch.width;
    for (int o = 0; o < P::kMid; ++o) {
      const double* d = d_a1.data() + static_cast<std::size_t>(o) * area1;
      double bias_sum = 0.0;
      for (int i = 0; i < area1; ++i) bias_sum += d[i];
      grad.conv1_b.values[o] += bias_sum;
      for (int c = 0; c < P::kIn; ++c) {
        const double* in = x.data() + static_cast<std::size_t>(c) * area0;
        const std::size_t k_off = (static_cast<std::size_t>(o) * P::kIn + c) * 9;
        for (int ky = 0; ky < 3; ++ky) {
          for (int kx = 0; kx < 3; ++kx) {
            double acc = 0.0;
            for (int y = 0; y < act.h1; ++y) {
              const double* row = in + (y + ky) * batch.width + kx;
              const double* dy = d + y * act.w1;
              for (int xx = 0; xx < act.w1; ++xx) acc += dy[xx] * row[xx];
            }
            grad.conv1_w.values[k_off + ky * 3 + kx] += acc;
          }
        }
      }
    }
  }
  return out;
}

void adam_step(DetectorParams& params, const DetectorParams& grads,
               AdamState& state, const AdamConfig& config) {
  state.step += 1;
  const double bc1 = 1.0 - std::pow(config.beta1, static_cast<double>(state.step));
  const double bc2 = 1.0 - std::pow(config.beta2, static_cast<double>(state.step));
  auto p_t = params.tensors();
  auto g_t = grads.tensors();
  auto m_t = state.m.tensors();
  auto v_t = state.v.tensors();
  for (std::size_t t = 0; t < p_t.size(); ++t) {
    auto& theta = p_t[t]->values;
    const auto& g = g_t[t]->values;
    auto& m = m_t[t]->values;
    auto& v = v_t[t]->values;
    for (std::size_t i = 0; i < theta.size(); ++i) {
      theta[i] -= config.lr * config.weight_decay * theta[i];
      m[i] = config.beta1 * m[i] + (1.0 - config.beta1) * g[i];
      v[i] = config.beta2 * v[i] + (1.0 - config.beta2) * g[i] * g[i];
      const double m_hat = m[i] / bc1;
      const double v_hat = v[i] / bc2;
      theta[i] -= config.lr * m_hat / (std::sqrt(v_hat) + config.eps);
    }
  }
}

}  // namespace pixmap
