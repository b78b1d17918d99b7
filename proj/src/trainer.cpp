#include "pixmap/trainer.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

#include "pixmap/error.hpp"
#include "pixmap/metrics.hpp"
#include "pixmap/rng.hpp"

namespace pixmap {

namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
  T value{};
  const auto res = std::from_chars(text.data(), text.data() + text.size(), value);
  if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
    throw Error(ErrorCode::kInvalidArgument,
                "config key '" + key + "': bad value '" + text + "'");
  }
  return value;
}

}  // namespace

void validate(const TrainConfig& config) {
  auto fail = [](const std::string& why) {
    throw Error(ErrorCode::kInvalidArgument, why);
  };
  if (!(config.adam.lr > 0.0)) fail("lr must be > 0");
  if (!(config.adam.beta1 >= 0.0 && config.adam.beta1 < 1.0)) fail("beta1 must be in [0, 1)");
  if (!(config.adam.beta2 >= 0.0 && config.adam.beta2 < 1.0)) fail("beta2 must be in [0, 1)");
  if (!(config.adam.weight_decay >= 0.0)) fail("weight_decay must be >= 0");
  if (config.epochs < 1) fail("epochs must be >= 1");
  if (config.batch_size < 1) fail("batch_size must be >= 1");
  if (config.crop < kMinInputSize) {
    fail("crop must be >= " + std::to_string(kMinInputSize));
  }
  validate_reducer(config.reducer, config.crop);
}

void apply_config_text(TrainConfig& config, std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    if (trim(line).empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw Error(ErrorCode::kInvalidArgument, "config line without '=': " + line);
    }
    const std::string key = trim(std::string_view(line).substr(0, eq));
    const std::string value = trim(std::string_view(line).substr(eq + 1));
    if (key == "lr") config.adam.lr = parse_value<double>(key, value);
    else if (key == "beta1") config.adam.beta1 = parse_value<double>(key, value);
    else if (key == "beta2") config.adam.beta2 = parse_value<double>(key, value);
    else if (key == "eps") config.adam.eps = parse_value<double>(key, value);
    else if (key == "weight_decay") config.adam.weight_decay = parse_value<double>(key, value);
    else if (key == "epochs") config.epochs = parse_value<int>(key, value);
    else if (key == "batch_size") config.batch_size = parse_value<int>(key, value);
    else if (key == "crop") config.crop = parse_value<int>(key, value);
    else if (key == "seed") config.seed = parse_value<std::uint64_t>(key, value);
    else if (key == "reducer") config.reducer = parse_reducer(value);
    else throw Error(ErrorCode::kInvalidArgument, "unknown config key '" + key + "'");
  }
}

Dataset load_dataset(const std::filesystem::path& dir) {
  Dataset data;
  data.manifest = read_manifest(dir);
  data.images.reserve(data.manifest.entries.size());
  for (const auto& e : data.manifest.entries) {
    data.images.push_back(read_ppm(dir / e.path));
  }
  return data;
}

TrainResult train(const Dataset& data, const TrainConfig& config) {
  validate(config);
  const auto& entries = data.manifest.entries;
  if (entries.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "training manifest is empty");
  }
  if (data.images.size() != entries.size()) {
    throw Error(ErrorCode::kShapeMismatch, "dataset images and manifest disagree");
  }
  const bool has_real = std::any_of(entries.begin(), entries.end(),
                                    [](const auto& e) { return e.label == 0; });
  const bool has_fake = std::any_of(entries.begin(), entries.end(),
                                    [](const auto& e) { return e.label == 1; });
  if (!has_real || !has_fake) {
    throw Error(ErrorCode::kInvalidArgument,
                "training manifest must contain both labels");
  }

  TrainResult result;
  result.params = init_params(derive_seed(config.seed, "init"));
  AdamState state;
  const auto n = static_cast<std::uint64_t>(entries.size());

  std::vector<std::size_t> order(entries.size());
  std::vector<ImageF> inputs;
  std::vector<int> labels;
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    SplitMix64 shuffler(derive_seed(config.seed, "epoch", epoch));
    for (std::size_t i = order.size() - 1; i > 0; --i) {
      std::swap(order[i], order[shuffler.below(i + 1)]);
    }

    double loss_sum = 0.0;
    for (std::size_t start = 0; start < order.size();
         start += static_cast<std::size_t>(config.batch_size)) {
      const std::size_t stop =
          std::min(order.size(), start + static_cast<std::size_t>(config.batch_size));
      inputs.clear();
      labels.clear();
      for (std::size_t k = start; k < stop; ++k) {
        const std::uint64_t draw = static_cast<std::uint64_t>(epoch) * n + k;
        const Image8 cropped =
            crop(data.images[order[k]],
                 CropSpec{config.crop, RandomCrop{derive_seed(config.seed, "crop", draw)}});
        inputs.push_back(apply_reducer(cropped, config.reducer,
                                       derive_seed(config.seed, "reducer", draw)));
        labels.push_back(entries[order[k]].label);
      }
      const Batch batch = make_batch(inputs);
      const LossAndGradient step = loss_and_gradient(result.params, batch, labels);
      loss_sum += step.loss * static_cast<double>(stop - start);
      adam_step(result.params, step.gradient, state, config.adam);
    }
    result.epoch_loss.push_back(loss_sum / static_cast<double>(order.size()));
  }
  return result;
}

EvalReport evaluate(const DetectorParams& params, const Dataset& data,
                    const ReducerSpec& reducer, int crop_size, std::uint64_t seed) {
  const auto& entries = data.manifest.entries;
  if (entries.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "evaluation manifest is empty");
  }
  validate_reducer(reducer, crop_size);
  EvalReport report;
  std::vector<int> labels;
  for (std::size_t i = 0; i < entries.size(); ++i) {
    const Image8 cropped = crop(data.images[i], CropSpec{crop_size, CenterCrop{}});
    const ImageF input = apply_reducer(
        cropped, reducer, derive_seed(seed, "eval", hash_tag(entries[i].path)));
    const Batch batch = make_batch(std::span(&input, 1));
    report.scores.push_back(forward(params, batch).front());
    labels.push_back(entries[i].label);
  }
  report.accuracy = accuracy(report.scores, labels);
  report.average_precision = average_precision(report.scores, labels);

  std::map<std::string, std::pair<long, long>> tally;  // count, correct
  for (std::size_t i = 0; i < entries.size(); ++i) {
    auto& [count, correct] = tally[entries[i].generator];
    ++count;
    correct += (report.scores[i] >= kDecisionThreshold) == (labels[i] == 1);
  }
  for (const auto& [gen, t] : tally) {
    report.per_generator[gen] = GroupReport{
        t.first, static_cast<double>(t.second) / static_cast<double>(t.first)};
  }
  return report;
}

namespace {

std::string shortest(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

std::string report_to_text(const EvalReport& report) {
  std::string out;
  out += "accuracy=" + shortest(report.accuracy) + "\n";
  out += "average_precision=" + shortest(report.average_precision) + "\n";
  out += "count=" + std::to_string(report.scores.size()) + "\n";
  for (const auto& [gen, g] : report.per_generator) {
    out += "accuracy." + gen + "=" + shortest(g.accuracy) + "\n";
  }
  return out;
}

std::string report_breakdown_csv(const EvalReport& report) {
  std::string out = "generator,count,accuracy\n";
  for (const auto& [gen, g] : report.per_generator) {
    out += gen + "," + std::to_string(g.count) + "," + shortest(g.accuracy) + "\n";
  }
  return out;
}

}  // namespace pixmap
