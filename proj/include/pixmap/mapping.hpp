#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "pixmap/image.hpp"

namespace pixmap {

/// Lookup of one real output per 8-bit input level.
struct MappingTable {
  std::array<double, 256> entries{};

  double operator[](std::uint8_t v) const { return entries[v]; }
  bool operator==(const MappingTable&) const = default;
};

struct FixedMapping {};
struct RandomMapping {
  std::uint64_t seed = 0;
};
using MappingMode = std::variant<FixedMapping, RandomMapping>;

/// entries[v] = v - round(v / 256, 2) * 256 with the two-decimal rounding
/// taken half to even. The table is the signed remainder of v modulo 2.56,
/// so every entry lies in [-1.28, 1.28] and consecutive levels jump by 1
/// or wrap by -1.56.
MappingTable build_fixed_table();

/// Three independent tables with entries i.i.d. uniform on [-1, 1).
std::array<MappingTable, 3> build_random_tables(std::uint64_t seed);

/// T[v] = v / 127.5 - 1, the ordinary monotone normalization.
MappingTable build_normalization_table();

/// Tables for a mode: one shared table (fixed) or three per-channel tables.
std::vector<MappingTable> tables_for(const MappingMode& mode);

/// out_c[y, x] = T_c[in_c[y, x]]; a single table is broadcast to all channels.
ImageF apply_mapping(const Image8& img, std::span<const MappingTable> tables);

/// |T[v+1] - T[v]| for v = 0..254.
std::array<double, 255> adjacent_gap_profile(const MappingTable& table);

/// "level,value" lines with a header; one column per table.
std::string tables_to_csv(std::span<const MappingTable> tables);

}  // namespace pixmap
