#pragma once

#include <filesystem>

#include "dnf/grid.hpp"

namespace dnf {

/// A field read back from disk with its simulation time.
struct Snapshot {
  Field field;
  double t = 0.0;
};

/// Binary field snapshot, all little-endian:
///   bytes  0..3   magic "DNF1"
///   bytes  4..7   format version, u32 = 1
///   bytes  8..11  n_x,  u32
///   bytes 12..15  n_xi, u32
///   bytes 16..19  zero pad, u32
///   bytes 20..27  L_x,  f64
///   bytes 28..35  L_xi, f64
///   bytes 36..43  t,    f64
///   bytes 44..    n_x * n_xi f64 values, row-major (x outer, xi inner)
/// Total size is exactly 44 + 8 * n_x * n_xi bytes.
void write_snapshot(const Field& field, double t, const std::filesystem::path& path);

/// Reads and validates a snapshot; write-then-read is bitwise lossless.
/// Throws ConfigError on magic/version/size mismatch or IO failure.
Snapshot read_snapshot(const std::filesystem::path& path);

}  // namespace dnf
