#include "pixmap/cli.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <ostream>

#include "CLI11.hpp"
#include "pixmap/error.hpp"
#include "pixmap/manifest.hpp"
#include "pixmap/mapping.hpp"
#include "pixmap/rng.hpp"
#include "pixmap/spectral.hpp"
#include "pixmap/weights_io.hpp"

namespace pixmap {

namespace {

namespace fs = std::filesystem;

std::string text_of(std::span<const std::uint8_t> bytes) {
  return std::string(reinterpret_cast<const char*>(bytes.data()), bytes.size());
}

std::string fmt_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

Error usage(const std::string& why) { return Error(ErrorCode::kUsage, why); }

// Options shared by train and report; flags override config-file values.
struct TrainFlags {
  std::optional<fs::path> config_file;
  double lr = 0, beta1 = 0, beta2 = 0, weight_decay = 0;
  int epochs = 0, batch_size = 0, crop = 0;
  std::uint64_t seed = 0;
  std::string reducer;
  std::vector<std::pair<CLI::Option*, std::function<void(TrainConfig&)>>> setters;

  void attach(CLI::App* app, bool with_reducer) {
    const TrainConfig d;
    app->add_option("--config", config_file,
                    "key=value file (lr, beta1, beta2, eps, weight_decay, epochs, "
                    "batch_size, crop, reducer, seed); flags take precedence")
        ->check(CLI::ExistingFile);
    add(app, "--lr", lr, d.adam.lr,
        "Adam learning rate; the published training protocol uses 2e-4",
        [this](TrainConfig& c) { c.adam.lr = lr; });
    add(app, "--beta1", beta1, d.adam.beta1,
        "Adam first-moment decay; published protocol value 0.9",
        [this](TrainConfig& c) { c.adam.beta1 = beta1; });
    add(app, "--beta2", beta2, d.adam.beta2,
        "Adam second-moment decay; published protocol value 0.999",
        [this](TrainConfig& c) { c.adam.beta2 = beta2; });
    add(app, "--weight-decay", weight_decay, d.adam.weight_decay,
        "decoupled weight decay; published protocol value 2e-4",
        [this](TrainConfig& c) { c.adam.weight_decay = weight_decay; });
    add(app, "--epochs", epochs, d.epochs,
        "training epochs (desk-scale default; the published protocol runs 200)",
        [this](TrainConfig& c) { c.epochs = epochs; });
    add(app, "--batch-size", batch_size, d.batch_size,
        "minibatch size (desk-scale default; the published protocol uses 128)",
        [this](TrainConfig& c) { c.batch_size = batch_size; });
    add(app, "--crop", crop, d.crop,
        "square crop: random at train time, center at eval time "
        "(desk-scale default; the published protocol crops 128)",
        [this](TrainConfig& c) { c.crop = crop; });
    add(app, "--seed", seed, d.seed, "root seed for init, shuffling, crops, reducers",
        [this](TrainConfig& c) { c.seed = seed; });
    if (with_reducer) {
      auto* opt = app->add_option(
          "--reducer", reducer,
          "none | fixed | random | npr | highpass[:cutoff] | shuffle:N");
      opt->default_str("none");
      setters.emplace_back(opt, [this](TrainConfig& c) {
        c.reducer = parse_reducer(reducer);
      });
    }
  }

  template <typename T>
  void add(CLI::App* app, const std::string& name, T& slot, T def,
           const std::string& help, std::function<void(TrainConfig&)> set) {
    slot = def;
    auto* opt = app->add_option(name, slot, help);
    opt->default_val(def);
    setters.emplace_back(opt, std::move(set));
  }

  TrainConfig resolve() const {
    TrainConfig config;
    if (config_file) {
      apply_config_text(config, text_of(read_file(*config_file)));
    }
    for (const auto& [opt, set] : setters) {
      if (opt->count() > 0) set(config);
    }
    return config;
  }
};

RunManifest base_manifest(const std::string& subcommand,
                          const std::vector<std::string>& argv) {
  RunManifest m;
  m.subcommand = subcommand;
  m.argv = argv;
  return m;
}

void put_config(RunManifest& m, const TrainConfig& c) {
  m.settings["lr"] = fmt_double(c.adam.lr);
  m.settings["beta1"] = fmt_double(c.adam.beta1);
  m.settings["beta2"] = fmt_double(c.adam.beta2);
  m.settings["eps"] = fmt_double(c.adam.eps);
  m.settings["weight_decay"] = fmt_double(c.adam.weight_decay);
  m.settings["epochs"] = std::to_string(c.epochs);
  m.settings["batch_size"] = std::to_string(c.batch_size);
  m.settings["crop"] = std::to_string(c.crop);
  m.settings["reducer"] = to_string(c.reducer);
  m.seeds["root"] = std::to_string(c.seed);
  m.seeds["init"] = std::to_string(derive_seed(c.seed, "init"));
}

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<fs::path> ppm_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) {
    throw Error(ErrorCode::kIo, "not a directory: " + dir.string());
  }
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".ppm") {
      files.push_back(entry.path());
    }
  }
  std::sort(files.begin(), files.end());
  if (files.empty()) {
    throw Error(ErrorCode::kIo, "no .ppm files in " + dir.string());
  }
  return files;
}

void run_gen(const GenCommand& cmd, const std::vector<std::string>& argv,
             std::ostream& out) {
  const auto start = Clock::now();
  const Benchmark b = build_benchmark(cmd.bench, cmd.out);
  RunManifest m = base_manifest("gen", argv);
  m.settings["benchmark"] = benchmark_to_json(cmd.bench);
  m.seeds["root"] = std::to_string(cmd.bench.seed);
  m.outputs = {(cmd.out / "train").string(), (cmd.out / "test").string(),
               (cmd.out / "benchmark.json").string()};
  m.wall_clock_seconds = seconds_since(start);
  write_run_manifest(cmd.out / "benchmark.json", m);
  out << "train=" << b.train.entries.size() << "\n"
      << "test=" << b.test.entries.size() << "\n";
}

void run_map(const MapCommand& cmd, const std::vector<std::string>& argv,
             std::ostream& out) {
  using Mode = MapCommand::Mode;
  const auto start = Clock::now();
  const Image8 img = read_ppm(cmd.in);
  RunManifest m = base_manifest("map", argv);
  m.inputs = {cmd.in.string()};
  m.outputs = {cmd.out.string()};
  if (cmd.seed) m.seeds["root"] = std::to_string(*cmd.seed);

  std::vector<MappingTable> tables;
  switch (cmd.mode) {
    case Mode::kFixed:
      tables = tables_for(FixedMapping{});
      write_imagef(cmd.out, apply_mapping(img, tables));
      break;
    case Mode::kRandom:
      tables = tables_for(RandomMapping{*cmd.seed});
      write_imagef(cmd.out, apply_mapping(img, tables));
      break;
    case Mode::kHighpass:
      m.settings["cutoff"] = fmt_double(cmd.cutoff);
      write_imagef(cmd.out, highpass(img, cmd.cutoff));
      break;
    case Mode::kShuffle: {
      m.settings["patch"] = std::to_string(cmd.patch);
      const Image8 shuffled = patch_shuffle(img, cmd.patch, *cmd.seed);
      if (cmd.out.extension() == ".ppm") {
        write_ppm(cmd.out, shuffled);
      } else {
        write_imagef(cmd.out, to_float(shuffled));
      }
      break;
    }
    case Mode::kNpr:
      m.settings["block"] = std::to_string(cmd.block);
      write_imagef(cmd.out, npr_residual(img, cmd.block));
      break;
  }
  if (cmd.table_csv) {
    write_text_atomic(*cmd.table_csv, tables_to_csv(tables));
    m.outputs.push_back(cmd.table_csv->string());
  }
  m.wall_clock_seconds = seconds_since(start);
  write_run_manifest(cmd.out, m);
  out << "wrote " << cmd.out.string() << "\n";
}

void run_spectrum(const SpectrumCommand& cmd, const std::vector<std::string>& argv,
                  std::ostream& out) {
  const auto start = Clock::now();
  RunManifest m = base_manifest("spectrum", argv);
  std::vector<ImageF> images;
  for (const auto& file : ppm_files(cmd.in)) {
    images.push_back(apply_reducer(
        read_ppm(file), cmd.reducer,
        derive_seed(cmd.seed, "spectrum", hash_tag(file.filename().string()))));
    m.inputs.push_back(file.string());
  }
  const Spectrum2D spectrum = mean_spectrum(images);
  const RadialProfile profile = azimuthal_profile(spectrum);
  write_text_atomic(cmd.out, profile_to_csv(profile, cmd.log_scale));
  m.outputs = {cmd.out.string()};
  if (cmd.heatmap) {
    write_file_atomic(*cmd.heatmap, spectrum_heatmap_pgm(spectrum));
    m.outputs.push_back(cmd.heatmap->string());
  }
  m.settings["reducer"] = to_string(cmd.reducer);
  m.settings["log_scale"] = cmd.log_scale ? "true" : "false";
  m.seeds["root"] = std::to_string(cmd.seed);
  m.wall_clock_seconds = seconds_since(start);
  write_run_manifest(cmd.out, m);
  if (profile.values.size() >= 6) {
    out << "band_ratio=" << fmt_double(band_ratio(profile)) << "\n";
  }
  out << "images=" << images.size() << "\n";
}

void run_train(const TrainCommand& cmd, const std::vector<std::string>& argv,
               std::ostream& out) {
  const auto start = Clock::now();
  const Dataset data = load_dataset(cmd.data);
  const TrainResult result = train(data, cmd.config);
  ModelFile model{result.params, cmd.config.reducer, cmd.config.crop,
                  cmd.config.seed};
  write_text_atomic(cmd.out, encode_weights(model));

  std::string trace = "epoch,loss\n";
  for (std::size_t e = 0; e < result.epoch_loss.size(); ++e) {
    trace += std::to_string(e + 1) + "," + fmt_double(result.epoch_loss[e]) + "\n";
  }
  auto trace_path = cmd.out;
  trace_path += ".loss.csv";
  write_text_atomic(trace_path, trace);

  RunManifest m = base_manifest("train", argv);
  put_config(m, cmd.config);
  m.inputs = {(cmd.data / "manifest.csv").string()};
  m.outputs = {cmd.out.string(), trace_path.string()};
  m.wall_clock_seconds = seconds_since(start);
  write_run_manifest(cmd.out, m);
  out << "final_loss=" << fmt_double(result.epoch_loss.back()) << "\n";
}

void run_eval(const EvalCommand& cmd, const std::vector<std::string>& argv,
              std::ostream& out) {
  const auto start = Clock::now();
  const ModelFile model = decode_weights(text_of(read_file(cmd.model)));
  if (cmd.reducer && *cmd.reducer != model.reducer) {
    throw Error(ErrorCode::kInvalidArgument,
                "reducer mismatch: model was trained with '" +
                    to_string(model.reducer) + "', eval asked for '" +
                    to_string(*cmd.reducer) + "'");
  }
  const Dataset data = load_dataset(cmd.data);
  const EvalReport report =
      evaluate(model.params, data, model.reducer, model.crop, model.seed);
  out << report_to_text(report);
  if (cmd.breakdown) {
    write_text_atomic(*cmd.breakdown, report_breakdown_csv(report));
    RunManifest m = base_manifest("eval", argv);
    m.settings["reducer"] = to_string(model.reducer);
    m.settings["crop"] = std::to_string(model.crop);
    m.seeds["root"] = std::to_string(model.seed);
    m.inputs = {cmd.model.string(), (cmd.data / "manifest.csv").string()};
    m.outputs = {cmd.breakdown->string()};
    m.wall_clock_seconds = seconds_since(start);
    write_run_manifest(*cmd.breakdown, m);
  }
}

void run_report(const ReportCommand& cmd, const std::vector<std::string>& argv,
                std::ostream& out) {
  const auto start = Clock::now();
  const Dataset train_set = load_dataset(cmd.data / "train");
  const Dataset test_set = load_dataset(cmd.data / "test");
  const auto rows = run_experiment(train_set, test_set, cmd.base);
  const std::string csv = experiment_csv(rows);
  write_text_atomic(cmd.out, csv);
  RunManifest m = base_manifest("report", argv);
  put_config(m, cmd.base);
  m.settings.erase("reducer");
  m.inputs = {(cmd.data / "train" / "manifest.csv").string(),
              (cmd.data / "test" / "manifest.csv").string()};
  m.outputs = {cmd.out.string()};
  m.wall_clock_seconds = seconds_since(start);
  write_run_manifest(cmd.out, m);
  out << csv;
}

void run_replay(const ReplayCommand& cmd, std::ostream& out) {
  const RunManifest m = run_manifest_from_json(text_of(read_file(cmd.manifest)));
  const Command inner = parse_args(m.argv);
  if (std::holds_alternative<ReplayCommand>(inner) ||
      std::holds_alternative<HelpRequest>(inner)) {
    throw Error(ErrorCode::kInvalidArgument, "manifest does not record a runnable command");
  }
  run_command(inner, m.argv, out);
}

}  // namespace

Command parse_args(const std::vector<std::string>& args) {
  CLI::App app{"pixmap: pixel-level mapping preprocessing, semantic-reduction "
               "baselines, spectral diagnostics and a synthetic detection benchmark"};
  app.require_subcommand(1, 1);
  app.set_version_flag("--version", kToolVersion);

  // gen
  GenCommand gen;
  std::string train_up = "nearest", test_up = "bilinear";
  auto* gen_cmd = app.add_subcommand("gen", "generate a synthetic train/test benchmark");
  gen_cmd->add_option("--out", gen.out, "output directory")->required();
  gen_cmd->add_option("--train-upsampler", train_up,
                      "fake upsampler in the training split")
      ->check(CLI::IsMember({"nearest", "bilinear", "zero_insert_conv"}))
      ->capture_default_str();
  gen_cmd->add_option("--test-upsampler", test_up, "fake upsampler in the test split")
      ->check(CLI::IsMember({"nearest", "bilinear", "zero_insert_conv"}))
      ->capture_default_str();
  gen_cmd->add_flag("--confound,!--no-confound", gen.bench.confound,
                    "tie content family to the label in train and swap it in test");
  gen_cmd->add_option("--n", gen.bench.n_per_class, "images per class and split")
      ->capture_default_str();
  gen_cmd->add_option("--seed", gen.bench.seed, "root seed")->capture_default_str();
  gen_cmd->add_option("--size", gen.bench.size, "image side, even")->capture_default_str();
  gen_cmd->add_option("--noise-sigma", gen.bench.noise_sigma,
                      "sensor noise std in levels")->capture_default_str();
  gen_cmd->add_option("--family-brightness", gen.bench.family_brightness,
                      "brightness offset: family A -x, family B +x")
      ->capture_default_str();
  gen_cmd->add_option("--field-amplitude", gen.bench.field_amplitude,
                      "std of the smooth content field in levels")
      ->capture_default_str();
  gen_cmd->add_option("--pattern-amplitude", gen.bench.pattern_amplitude,
                      "peak-to-peak family gradient in levels")
      ->capture_default_str();
  gen_cmd->add_option("--residual-noise", gen.bench.residual_noise,
                      "fakes: full-size noise as a fraction of --noise-sigma")
      ->capture_default_str();
  gen_cmd->add_option("--brightness-jitter", gen.bench.brightness_jitter,
                      "per-image uniform brightness offset half-width")
      ->capture_default_str();

  // map
  MapCommand map;
  std::string mode = "fixed";
  std::uint64_t map_seed = 0;
  auto* map_cmd = app.add_subcommand("map", "apply a mapping or reducer to one PPM");
  map_cmd->add_option("--mode", mode,
                      "fixed: shared rounding-remainder table; random: per-channel "
                      "uniform tables; highpass | shuffle | npr baselines")
      ->check(CLI::IsMember({"fixed", "random", "highpass", "shuffle", "npr"}))
      ->capture_default_str();
  auto* seed_opt = map_cmd->add_option("--seed", map_seed,
                                       "seed (required for random and shuffle)");
  map_cmd->add_option("--in", map.in, "input PPM (P6, maxval 255)")
      ->required()->check(CLI::ExistingFile);
  map_cmd->add_option("--out", map.out,
                      "output float raster (PIXMAP-F1); shuffle may write .ppm")
      ->required();
  auto* cutoff_opt = map_cmd->add_option("--cutoff", map.cutoff,
                                         "highpass radius as a fraction of min(H,W)/2")
                         ->capture_default_str();
  auto* patch_opt = map_cmd->add_option("--patch", map.patch, "shuffle tile size")
                        ->capture_default_str();
  auto* block_opt = map_cmd->add_option("--block", map.block, "npr block size")
                        ->capture_default_str();
  map_cmd->add_option("--table-csv", map.table_csv,
                      "also write the mapping tables (fixed/random) as CSV");

  // spectrum
  SpectrumCommand spectrum;
  std::string spectrum_reducer = "none";
  auto* spec_cmd = app.add_subcommand(
      "spectrum", "mean power spectrum and azimuthal profile of a PPM directory");
  spec_cmd->add_option("--in", spectrum.in, "directory of equally sized PPMs")
      ->required();
  spec_cmd->add_option("--reducer", spectrum_reducer,
                       "preprocessing before the transform")->capture_default_str();
  spec_cmd->add_option("--seed", spectrum.seed, "seed for stochastic reducers")
      ->capture_default_str();
  spec_cmd->add_option("--out", spectrum.out, "profile CSV (radius,mean_power,count)")
      ->required();
  spec_cmd->add_option("--heatmap", spectrum.heatmap,
                       "log-scaled, max-normalized PGM of the 2-D mean spectrum");
  spec_cmd->add_flag("--log", spectrum.log_scale, "write log10 power in the CSV");

  // train
  TrainCommand train_c;
  TrainFlags train_flags;
  auto* train_cmd = app.add_subcommand("train", "train a detector on a manifest directory");
  train_cmd->add_option("--data", train_c.data, "directory containing manifest.csv")
      ->required();
  train_cmd->add_option("--out", train_c.out, "weights file (PIXMAP-W1)")->required();
  train_flags.attach(train_cmd, true);

  // eval
  EvalCommand eval;
  std::string eval_reducer;
  auto* eval_cmd = app.add_subcommand("eval", "evaluate a trained detector");
  eval_cmd->add_option("--model", eval.model, "weights file")->required();
  eval_cmd->add_option("--data", eval.data, "directory containing manifest.csv")
      ->required();
  auto* eval_reducer_opt = eval_cmd->add_option(
      "--reducer", eval_reducer, "must match the reducer stored in the model");
  eval_cmd->add_option("--breakdown", eval.breakdown,
                       "per-generator CSV (generator,count,accuracy)");

  // report
  ReportCommand report;
  TrainFlags report_flags;
  auto* report_cmd = app.add_subcommand(
      "report", "train and evaluate every reducer on a benchmark; writes a comparison CSV");
  report_cmd->add_option("--data", report.data, "benchmark root with train/ and test/")
      ->required();
  report_cmd->add_option("--out", report.out, "comparison CSV")->required();
  report_flags.attach(report_cmd, false);

  // replay
  ReplayCommand replay;
  auto* replay_cmd = app.add_subcommand("replay", "re-run the command recorded in a run manifest");
  replay_cmd->add_option("--manifest", replay.manifest, "*.run.json file")
      ->required()->check(CLI::ExistingFile);

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    for (auto* sub : app.get_subcommands()) return HelpRequest{sub->help()};
    return HelpRequest{app.help()};
  } catch (const CLI::CallForAllHelp&) {
    return HelpRequest{app.help("", CLI::AppFormatMode::All)};
  } catch (const CLI::CallForVersion&) {
    return HelpRequest{std::string(kToolVersion) + "\n"};
  } catch (const CLI::ParseError& e) {
    std::string what = e.what();
    std::replace(what.begin(), what.end(), '\n', ' ');
    throw usage(what);
  }

  if (gen_cmd->parsed()) {
    gen.bench.train_upsampler = parse_upsampler(train_up);
    gen.bench.test_upsampler = parse_upsampler(test_up);
    if (gen.bench.n_per_class < 1) throw usage("--n must be >= 1");
    if (gen.bench.size < 2 || gen.bench.size % 2) throw usage("--size must be even");
    if (gen.bench.noise_sigma < 0) throw usage("--noise-sigma must be >= 0");
    return gen;
  }
  if (map_cmd->parsed()) {
    using Mode = MapCommand::Mode;
    map.mode = mode == "fixed"      ? Mode::kFixed
               : mode == "random"   ? Mode::kRandom
               : mode == "highpass" ? Mode::kHighpass
               : mode == "shuffle"  ? Mode::kShuffle
                                    : Mode::kNpr;
    if (seed_opt->count()) map.seed = map_seed;
    if ((map.mode == Mode::kRandom || map.mode == Mode::kShuffle) && !map.seed) {
      throw usage("--mode " + mode + " requires --seed");
    }
    if (cutoff_opt->count() && map.mode != Mode::kHighpass) {
      throw usage("conflicting options: --cutoff only applies to --mode highpass");
    }
    if (patch_opt->count() && map.mode != Mode::kShuffle) {
      throw usage("conflicting options: --patch only applies to --mode shuffle");
    }
    if (block_opt->count() && map.mode != Mode::kNpr) {
      throw usage("conflicting options: --block only applies to --mode npr");
    }
    if (map.table_csv && map.mode != Mode::kFixed && map.mode != Mode::kRandom) {
      throw usage("conflicting options: --table-csv needs --mode fixed or random");
    }
    if (map.mode == Mode::kHighpass && !(map.cutoff > 0 && map.cutoff < 1)) {
      throw usage("--cutoff must lie in (0, 1)");
    }
    return map;
  }
  if (spec_cmd->parsed()) {
    spectrum.reducer = parse_reducer(spectrum_reducer);
    return spectrum;
  }
  if (train_cmd->parsed()) {
    train_c.config = train_flags.resolve();
    validate(train_c.config);
    return train_c;
  }
  if (eval_cmd->parsed()) {
    if (eval_reducer_opt->count()) eval.reducer = parse_reducer(eval_reducer);
    return eval;
  }
  if (report_cmd->parsed()) {
    report.base = report_flags.resolve();
    validate(report.base);
    for (const auto& [name, reducer] : experiment_reducers()) {
      validate_reducer(reducer, report.base.crop);
    }
    return report;
  }
  return replay;
}

std::vector<std::pair<std::string, ReducerSpec>> experiment_reducers() {
  std::vector<std::pair<std::string, ReducerSpec>> out;
  for (const char* name :
       {"none", "highpass", "shuffle:8", "shuffle:2", "npr", "fixed", "random"}) {
    out.emplace_back(name, parse_reducer(name));
  }
  return out;
}

std::vector<ExperimentRow> run_experiment(const Dataset& train_set,
                                          const Dataset& test_set,
                                          const TrainConfig& base) {
  std::vector<ExperimentRow> rows;
  for (const auto& [name, reducer] : experiment_reducers()) {
    TrainConfig config = base;
    config.reducer = reducer;
    const TrainResult trained = train(train_set, config);
    const EvalReport on_train =
        evaluate(trained.params, train_set, reducer, config.crop, config.seed);
    const EvalReport on_test =
        evaluate(trained.params, test_set, reducer, config.crop, config.seed);
    rows.push_back({name, on_train.accuracy, on_test.accuracy,
                    on_test.average_precision});
  }
  return rows;
}

std::string experiment_csv(const std::vector<ExperimentRow>& rows) {
  std::string out = "reducer,train_acc,test_acc,test_ap\n";
  char buf[128];
  for (const auto& r : rows) {
    std::snprintf(buf, sizeof buf, "%s,%.6f,%.6f,%.6f\n", r.reducer.c_str(),
                  r.train_acc, r.test_acc, r.test_ap);
    out += buf;
  }
  return out;
}

void run_command(const Command& command, const std::vector<std::string>& argv,
                 std::ostream& out) {
  std::visit(
      [&](const auto& cmd) {
        using T = std::decay_t<decltype(cmd)>;
        if constexpr (std::is_same_v<T, GenCommand>) run_gen(cmd, argv, out);
        else if constexpr (std::is_same_v<T, MapCommand>) run_map(cmd, argv, out);
        else if constexpr (std::is_same_v<T, SpectrumCommand>) run_spectrum(cmd, argv, out);
        else if constexpr (std::is_same_v<T, TrainCommand>) run_train(cmd, argv, out);
        else if constexpr (std::is_same_v<T, EvalCommand>) run_eval(cmd, argv, out);
        else if constexpr (std::is_same_v<T, ReportCommand>) run_report(cmd, argv, out);
        else if constexpr (std::is_same_v<T, ReplayCommand>) run_replay(cmd, out);
        else out << cmd.text;
      },
      command);
}

int cli_main(const std::vector<std::string>& args, std::ostream& out,
             std::ostream& err) {
  try {
    run_command(parse_args(args), args, out);
    return 0;
  } catch (const Error& e) {
    err << "pixmap: error: " << to_string(e.code()) << ": " << e.what() << "\n";
  } catch (const std::filesystem::filesystem_error& e) {
    err << "pixmap: error: io: " << e.what() << "\n";
  } catch (const std::exception& e) {
    err << "pixmap: error: internal: " << e.what() << "\n";
  }
  return 1;
}

}  // namespace pixmap
