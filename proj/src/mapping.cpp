#include "pixmap/mapping.hpp"

#include <charconv>
#include <cmath>

#include "pixmap/error.hpp"
#include "pixmap/rng.hpp"

namespace pixmap {

MappingTable build_fixed_table() {
  MappingTable table;
  for (int v = 0; v < 256; ++v) {
    // 100 * v / 256 is exact in binary, so the tie test below is exact and
    // the bucket k is an integer number of hundredths.
    const double k = round_half_even(100.0 * v / 256.0);
    const double numerator = 100.0 * v - 256.0 * k;
    table.entries[v] = numerator / 100.0;
  }
  return table;
}

std::array<MappingTable, 3> build_random_tables(std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::array<MappingTable, 3> tables;
  for (auto& table : tables) {
    for (auto& e : table.entries) e = rng.uniform(-1.0, 1.0);
  }
  return tables;
}

MappingTable build_normalization_table() {
  MappingTable table;
  for (int v = 0; v < 256; ++v) table.entries[v] = v / 127.5 - 1.0;
  return table;
}

std::vector<MappingTable> tables_for(const MappingMode& mode) {
  if (const auto* random = std::get_if<RandomMapping>(&mode)) {
    const auto tables = build_random_tables(random->seed);
    return {tables.begin(), tables.end()};
  }
  return {build_fixed_table()};
}

ImageF apply_mapping(const Image8& img, std::span<const MappingTable> tables) {
  if (tables.size() != 1 && tables.size() != 3) {
    throw Error(ErrorCode::kInvalidArgument,
                "apply_mapping takes 1 or 3 tables, got " +
                    std::to_string(tables.size()));
  }
  ImageF out(img.height(), img.width(), 3);
  auto src = img.data();
  auto dst = out.data();
  const bool shared = tables.size() == 1;
  for (std::size_t i = 0; i < src.size(); ++i) {
    const auto& table = tables[shared ? 0 : i % 3];
    dst[i] = table[src[i]];
  }
  return out;
}

std::array<double, 255> adjacent_gap_profile(const MappingTable& table) {
  std::array<double, 255> gaps{};
  for (int v = 0; v < 255; ++v) {
    gaps[v] = std::abs(table.entries[v + 1] - table.entries[v]);
  }
  return gaps;
}

std::string tables_to_csv(std::span<const MappingTable> tables) {
  std::string out = "level";
  for (std::size_t c = 0; c < tables.size(); ++c) {
    out += ",t" + std::to_string(c);
  }
  out += '\n';
  char buf[64];
  for (int v = 0; v < 256; ++v) {
    out += std::to_string(v);
    for (const auto& table : tables) {
      auto res = std::to_chars(buf, buf + sizeof buf, table.entries[v]);
      out += ',';
      out.append(buf, res.ptr);
    }
    out += '\n';
  }
  return out;
}

}  // namespace pixmap
