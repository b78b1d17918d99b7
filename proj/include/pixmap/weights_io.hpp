#pragma once

#include <cstdint>
#include <string>
#include <string_view>

#include "pixmap/detector.hpp"
#include "pixmap/reducers.hpp"

namespace pixmap {

struct ModelFile {
  DetectorParams params;
  ReducerSpec reducer;
  int crop = 32;
  std::uint64_t seed = 0;
};

// Text format, one item per line:
//   PIXMAP-W1
//   reducer <spec>
//   crop <n>
//   seed <n>
//   tensor <name> <rank> <dims...>
//   <values, space separated, shortest round-trip decimals>
// repeated for each tensor in DetectorParams order.
std::string encode_weights(const ModelFile& model);
ModelFile decode_weights(std::string_view text);

}  // namespace pixmap
