#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "pixmap/detector.hpp"
#include "pixmap/reducers.hpp"
#include "pixmap/synthgen.hpp"

namespace pixmap {

struct TrainConfig {
  AdamConfig adam;
  int epochs = 30;
  int batch_size = 8;
  int crop = 32;
  ReducerSpec reducer;
  std::uint64_t seed = 1;
};

/// Throws on out-of-range hyperparameters or a reducer that cannot run on
/// the crop.
void validate(const TrainConfig& config);

/// Applies "key = value" lines ('#' starts a comment). Keys: lr, beta1,
/// beta2, eps, weight_decay, epochs, batch_size, crop, reducer, seed.
void apply_config_text(TrainConfig& config, std::string_view text);

/// Manifest plus decoded images, in manifest order.
struct Dataset {
  DatasetManifest manifest;
  std::vector<Image8> images;
};

Dataset load_dataset(const std::filesystem::path& dir);

struct TrainResult {
  DetectorParams params;
  std::vector<double> epoch_loss;  // sample-weighted mean loss per epoch
};

/// Seeded epoch shuffle, per-sample random crop, reducer, minibatch Adam.
/// Deterministic given (dataset, config).
TrainResult train(const Dataset& data, const TrainConfig& config);

struct GroupReport {
  long count = 0;
  double accuracy = 0.0;
};

struct EvalReport {
  double accuracy = 0.0;
  double average_precision = 0.0;
  std::vector<double> scores;  // manifest order
  std::map<std::string, GroupReport> per_generator;
};

/// Center crop, reducer, forward. Stochastic reducers are seeded from
/// (seed, image path), so the report does not depend on manifest order.
EvalReport evaluate(const DetectorParams& params, const Dataset& data,
                    const ReducerSpec& reducer, int crop, std::uint64_t seed);

/// "key=value" summary lines.
std::string report_to_text(const EvalReport& report);
/// "generator,count,accuracy" CSV.
std::string report_breakdown_csv(const EvalReport& report);

}  // namespace pixmap
