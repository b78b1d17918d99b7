#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pixmap/image.hpp"

namespace pixmap {

struct Tensor {
  std::string name;
  std::vector<int> shape;
  std::vector<double> values;

  bool operator==(const Tensor&) const = default;
};

/// conv(3x3, 3->8) -> ReLU -> 2x2 mean pool -> conv(3x3, 8->16) -> ReLU ->
/// global mean pool -> affine(16->1) -> sigmoid. Both convolutions are
/// unpadded with stride 1. Kernels are [out][in][ky][kx].
struct DetectorParams {
  static constexpr int kIn = 3;
  static constexpr int kMid = 8;
  static constexpr int kOut = 16;

  Tensor conv1_w{"conv1.weight", {kMid, kIn, 3, 3}, std::vector<double>(kMid * kIn * 9)};
  Tensor conv1_b{"conv1.bias", {kMid}, std::vector<double>(kMid)};
  Tensor conv2_w{"conv2.weight", {kOut, kMid, 3, 3}, std::vector<double>(kOut * kMid * 9)};
  Tensor conv2_b{"conv2.bias", {kOut}, std::vector<double>(kOut)};
  Tensor linear_w{"linear.weight", {1, kOut}, std::vector<double>(kOut)};
  Tensor linear_b{"linear.bias", {1}, std::vector<double>(1)};

  std::array<Tensor*, 6> tensors() {
    return {&conv1_w, &conv1_b, &conv2_w, &conv2_b, &linear_w, &linear_b};
  }
  std::array<const Tensor*, 6> tensors() const {
    return {&conv1_w, &conv1_b, &conv2_w, &conv2_b, &linear_w, &linear_b};
  }

  bool operator==(const DetectorParams&) const = default;
};

/// He-normal kernels, zero biases.
DetectorParams init_params(std::uint64_t seed);
/// Same shapes, all zeros.
DetectorParams zeros_like_params();

/// N x C x H x W batch, C = 3.
struct Batch {
  int count = 0;
  int height = 0;
  int width = 0;
  std::vector<double> values;

  static constexpr int kChannels = 3;
  std::size_t sample_size() const {
    return static_cast<std::size_t>(kChannels) * height * width;
  }
  std::span<const double> sample(int n) const {
    return std::span(values).subspan(n * sample_size(), sample_size());
  }
};

/// Packs equally sized 3-channel interleaved images into planar NCHW.
Batch make_batch(std::span<const ImageF> images);

/// Smallest accepted spatial size: the pooled map must fit a 3x3 kernel.
inline constexpr int kMinInputSize = 8;

std::vector<double> forward(const DetectorParams& params, const Batch& batch);

inline constexpr double kProbEpsilon = 1e-7;

/// Mean binary cross-entropy with probabilities clamped to [eps, 1 - eps].
double bce_loss(std::span<const double> probs, std::span<const int> labels);

/// Gradient of bce_loss(forward(params, batch), labels).
DetectorParams backward(const DetectorParams& params, const Batch& batch,
                        std::span<const int> labels);

struct LossAndGradient {
  double loss = 0.0;
  DetectorParams gradient = zeros_like_params();
};

/// bce_loss and backward from a single forward pass.
LossAndGradient loss_and_gradient(const DetectorParams& params, const Batch& batch,
                                  std::span<const int> labels);

struct AdamConfig {
  double lr = 2e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double weight_decay = 2e-4;
};

struct AdamState {
  DetectorParams m = zeros_like_params();
  DetectorParams v = zeros_like_params();
  long step = 0;
};

/// Decoupled weight decay (theta -= lr * wd * theta) followed by a
/// bias-corrected Adam update.
void adam_step(DetectorParams& params, const DetectorParams& grads,
               AdamState& state, const AdamConfig& config);

}  // namespace pixmap
