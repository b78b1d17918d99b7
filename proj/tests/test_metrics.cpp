#include <vector>

#include "doctest.h"
#include "oracles.hpp"
#include "pixmap/metrics.hpp"

using namespace pixmap;

TEST_CASE("perfect ranking") {
  const std::vector<double> s{0.9, 0.8, 0.1};
  const std::vector<int> l{1, 1, 0};
  CHECK(accuracy(s, l) == 1.0);
  CHECK(average_precision(s, l) == 1.0);
}

TEST_CASE("hand-computed AP") {
  const std::vector<double> s{0.9, 0.6, 0.4};
  const std::vector<int> l{0, 1, 1};
  CHECK(average_precision(s, l) == doctest::Approx((1.0 / 2 + 2.0 / 3) / 2));
}

TEST_CASE("ties at the threshold count as positive") {
  const std::vector<double> s(4, 0.5);
  CHECK(accuracy(s, std::vector<int>{1, 0, 0, 0}) == 0.25);
  CHECK(accuracy(std::vector<double>{0.4999}, std::vector<int>{0}) == 1.0);
}

TEST_CASE("tied scores enter together") {
  const std::vector<double> s{0.7, 0.7, 0.2};
  CHECK(average_precision(s, std::vector<int>{0, 1, 1}) == doctest::Approx((0.5 + 2.0 / 3) / 2));
  CHECK(average_precision(s, std::vector<int>{1, 0, 1}) == doctest::Approx((0.5 + 2.0 / 3) / 2));
}

TEST_CASE("no positives gives zero AP") {
  CHECK(average_precision(std::vector<double>{0.3, 0.9}, std::vector<int>{0, 0}) == 0.0);
}

TEST_CASE("AP equals the brute-force oracle on all small instances") {
  // Lengths up to 5 on a 3-level grid here; the acceptance run is wider.
  const double grid[3] = {0.1, 0.5, 0.9};
  long cases = 0;
  for (int n = 1; n <= 5; ++n) {
    int score_combos = 1;
    for (int i = 0; i < n; ++i) score_combos *= 3;
    for (int sc = 0; sc < score_combos; ++sc) {
      std::vector<double> scores(n);
      for (int i = 0, k = sc; i < n; ++i, k /= 3) scores[i] = grid[k % 3];
      for (int lab = 0; lab < (1 << n); ++lab) {
        std::vector<int> labels(n);
        for (int i = 0; i < n; ++i) labels[i] = (lab >> i) & 1;
        CHECK(average_precision(scores, labels) ==
              doctest::Approx(oracle::brute_force_ap(scores, labels)).epsilon(1e-12));
        ++cases;
      }
    }
  }
  CHECK(cases > 0);
}

TEST_CASE("metric ranges") {
  const std::vector<double> s{0.2, 0.6, 0.6, 0.1, 0.95};
  const std::vector<int> l{1, 0, 1, 0, 1};
  const double acc = accuracy(s, l);
  const double ap = average_precision(s, l);
  CHECK(acc >= 0.0);
  CHECK(acc <= 1.0);
  CHECK(ap >= 0.0);
  CHECK(ap <= 1.0);
}
