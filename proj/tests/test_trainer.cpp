#include <algorithm>

#include "doctest.h"
#include "pixmap/error.hpp"
#include "pixmap/trainer.hpp"
#include "pixmap/weights_io.hpp"

using namespace pixmap;

namespace {

Dataset small_dataset(int n_per_class, std::uint64_t seed, int size = 16) {
  BenchmarkSpec bench;
  bench.n_per_class = n_per_class;
  bench.seed = seed;
  bench.size = size;
  const Benchmark b = plan_benchmark(bench);
  Dataset d;
  d.manifest = b.train;
  for (const auto& e : d.manifest.entries) d.images.push_back(generate(entry_spec(bench, e)));
  return d;
}

TrainConfig small_config() {
  TrainConfig c;
  c.epochs = 3;
  c.batch_size = 4;
  c.crop = 8;
  return c;
}

}  // namespace

TEST_CASE("two samples overfit") {
  Dataset d = small_dataset(1, 5, 8);
  TrainConfig c = small_config();
  c.epochs = 200;
  c.batch_size = 1;
  c.adam.lr = 1e-2;
  c.reducer = parse_reducer("fixed");
  const TrainResult r = train(d, c);
  REQUIRE(r.epoch_loss.size() == 200);
  CHECK(r.epoch_loss.back() < 0.01);
  CHECK(r.epoch_loss.back() < r.epoch_loss.front());
}

TEST_CASE("training is deterministic and label sensitive") {
  const Dataset d = small_dataset(4, 2);
  TrainConfig c = small_config();
  c.reducer = parse_reducer("random");
  const TrainResult a = train(d, c);
  const TrainResult b = train(d, c);
  CHECK(a.params == b.params);
  CHECK(encode_weights({a.params, c.reducer, c.crop, c.seed}) ==
        encode_weights({b.params, c.reducer, c.crop, c.seed}));

  Dataset flipped = d;
  for (auto& e : flipped.manifest.entries) e.label = 1 - e.label;
  CHECK(train(flipped, c).params != a.params);

  c.seed = 2;
  CHECK(train(d, c).params != a.params);
}

TEST_CASE("train rejects bad inputs") {
  const TrainConfig c = small_config();
  Dataset d = small_dataset(2, 1);
  Dataset one_class = d;
  one_class.manifest.entries.resize(2);
  one_class.images.resize(2);
  CHECK_THROWS_AS(train(one_class, c), Error);
  CHECK_THROWS_AS(train(Dataset{}, c), Error);

  TrainConfig bad = c;
  bad.crop = 32;  // larger than the 16 px images
  CHECK_THROWS_AS(train(d, bad), Error);
  bad = c;
  bad.adam.lr = 0.0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.adam.beta1 = 1.0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.batch_size = 0;
  CHECK_THROWS_AS(validate(bad), Error);
  bad = c;
  bad.crop = 32;
  bad.reducer = parse_reducer("shuffle:3");
  CHECK_THROWS_AS(validate(bad), Error);
}

TEST_CASE("config text") {
  TrainConfig c;
  apply_config_text(c, "# desk run\nlr = 0.001\nepochs=4\n\nreducer = shuffle:4\nseed=9 # root\n");
  CHECK(c.adam.lr == 0.001);
  CHECK(c.epochs == 4);
  CHECK(c.reducer == parse_reducer("shuffle:4"));
  CHECK(c.seed == 9);
  CHECK_THROWS_AS(apply_config_text(c, "momentum = 0.5"), Error);
  CHECK_THROWS_AS(apply_config_text(c, "lr"), Error);
  CHECK_THROWS_AS(apply_config_text(c, "epochs = many"), Error);
}

TEST_CASE("evaluate") {
  const Dataset d = small_dataset(4, 3);
  const TrainConfig c = small_config();
  const TrainResult r = train(d, c);
  const EvalReport rep = evaluate(r.params, d, c.reducer, c.crop, c.seed);
  CHECK(rep.scores.size() == 8);
  CHECK(rep.accuracy >= 0.0);
  CHECK(rep.accuracy <= 1.0);
  CHECK(rep.per_generator.at("real").count == 4);
  CHECK(rep.per_generator.at("nearest").count == 4);
  CHECK(report_to_text(rep).rfind("accuracy=", 0) == 0);
  CHECK(report_breakdown_csv(rep).rfind("generator,count,accuracy\nnearest,4,", 0) == 0);

  const EvalReport zero = evaluate(zeros_like_params(), d, c.reducer, c.crop, c.seed);
  CHECK(zero.accuracy == 0.5);  // every score is 0.5, counted as fake
  CHECK_THROWS_AS(evaluate(r.params, Dataset{}, c.reducer, c.crop, c.seed), Error);
}

TEST_CASE("manifest order does not change a fixed-mapping evaluation") {
  const Dataset d = small_dataset(5, 4);
  TrainConfig c = small_config();
  c.reducer = parse_reducer("fixed");
  const TrainResult r = train(d, c);
  const EvalReport base = evaluate(r.params, d, c.reducer, c.crop, c.seed);

  Dataset rev = d;
  std::reverse(rev.manifest.entries.begin(), rev.manifest.entries.end());
  std::reverse(rev.images.begin(), rev.images.end());
  const EvalReport other = evaluate(r.params, rev, c.reducer, c.crop, c.seed);
  CHECK(other.accuracy == base.accuracy);
  CHECK(other.average_precision == base.average_precision);
  CHECK(report_to_text(other) == report_to_text(base));
}

TEST_CASE("weights round trip exactly") {
  ModelFile m{init_params(3), parse_reducer("highpass:0.3"), 24, 77};
  m.params.linear_b.values[0] = 0.1 + 0.2;
  const std::string text = encode_weights(m);
  CHECK(text.rfind("PIXMAP-W1\n", 0) == 0);
  const ModelFile back = decode_weights(text);
  CHECK(back.params == m.params);
  CHECK(back.reducer == m.reducer);
  CHECK(back.crop == 24);
  CHECK(back.seed == 77);
  CHECK(encode_weights(back) == text);

  CHECK_THROWS_AS(decode_weights("PIXMAP-W2\n"), Error);
  CHECK_THROWS_AS(decode_weights(text.substr(0, text.size() / 2)), Error);
  std::string extra = text;
  extra.insert(extra.find('\n', extra.find("tensor linear.bias")) + 1, "1 ");
  CHECK_THROWS_AS(decode_weights(extra), Error);
}
