#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "expanse/diagnostics.hpp"
#include "expanse/grid.hpp"

namespace expanse::io {

/// Column order of the records file.
const std::vector<std::string>& record_columns();

void write_records_header(std::ostream& os);
/// One comma-separated row with 17 significant digits per value.
void write_record_row(std::ostream& os, const DiagnosticsRecord& r);
void write_records(const std::string& path, const std::vector<DiagnosticsRecord>& records);

/// 64-byte little-endian snapshot header followed by (re, im) f64 pairs.
struct SnapshotHeader {
  std::uint32_t version = 1;
  std::uint32_t dim = 1;
  std::uint64_t points = 0;
  double length = 0.0;
  double s = 0.0;
  std::uint64_t step = 0;
};

inline constexpr char kSnapshotMagic[8] = {'E', 'X', 'P', 'S', 'N', 'A', 'P', '1'};

void write_snapshot(const std::string& path, const SnapshotHeader& header, const Field& u);

struct Snapshot {
  SnapshotHeader header;
  Field u;
};

/// Throws std::runtime_error on a bad magic, version or truncated payload.
Snapshot read_snapshot(const std::string& path);

/// Hex SHA-256 of a byte string.
std::string sha256_hex(const std::string& data);

}  // namespace expanse::io
