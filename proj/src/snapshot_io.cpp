#include "dnf/snapshot_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "dnf/errors.hpp"

namespace dnf {

static_assert(std::endian::native == std::endian::little,
              "snapshot files are little-endian; big-endian hosts are unsupported");

namespace {

constexpr char kMagic[4] = {'D', 'N', 'F', '1'};
constexpr std::uint32_t kVersion = 1;
constexpr std::size_t kHeaderBytes = 44;

// field offsets within the 44-byte header
constexpr std::size_t kOffVersion = 4;
constexpr std::size_t kOffNx = 8;
constexpr std::size_t kOffNxi = 12;
constexpr std::size_t kOffPad = 16;
constexpr std::size_t kOffLx = 20;
constexpr std::size_t kOffLxi = 28;
constexpr std::size_t kOffT = 36;

template <typename T>
void put(std::array<char, kHeaderBytes>& buf, std::size_t off, T value) {
  std::memcpy(buf.data() + off, &value, sizeof(T));
}

template <typename T>
T get(const std::array<char, kHeaderBytes>& buf, std::size_t off) {
  T value;
  std::memcpy(&value, buf.data() + off, sizeof(T));
  return value;
}

}  // namespace

void write_snapshot(const Field& field, double t, const std::filesystem::path& path) {
  std::array<char, kHeaderBytes> header{};
  std::memcpy(header.data(), kMagic, 4);
  put(header, kOffVersion, kVersion);
  put(header, kOffNx, static_cast<std::uint32_t>(field.nx()));
  put(header, kOffNxi, static_cast<std::uint32_t>(field.nxi()));
  put(header, kOffPad, std::uint32_t{0});
  put(header, kOffLx, field.grid().spec.L_x);
  put(header, kOffLxi, field.grid().spec.L_xi);
  put(header, kOffT, t);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ConfigError("cannot open snapshot for writing: " + path.string());
  out.write(header.data(), header.size());
  const auto data = field.data();
  out.write(reinterpret_cast<const char*>(data.data()),
            static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw ConfigError("failed writing snapshot: " + path.string());
}

Snapshot read_snapshot(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open snapshot: " + path.string());

  std::error_code ec;
  const auto file_size = std::filesystem::file_size(path, ec);
  if (ec) throw ConfigError("cannot stat snapshot: " + path.string());
  if (file_size < kHeaderBytes) {
    throw ConfigError("snapshot too short for its header: " + path.string());
  }

  std::array<char, kHeaderBytes> header{};
  in.read(header.data(), header.size());
  if (!in) throw ConfigError("failed reading snapshot header: " + path.string());
  if (std::memcmp(header.data(), kMagic, 4) != 0) {
    throw ConfigError("bad snapshot magic in " + path.string());
  }
  if (const auto version = get<std::uint32_t>(header, kOffVersion); version != kVersion) {
    throw ConfigError("unsupported snapshot version " + std::to_string(version) + " in " +
                      path.string());
  }

  const auto n_x = get<std::uint32_t>(header, kOffNx);
  const auto n_xi = get<std::uint32_t>(header, kOffNxi);
  const std::uint64_t n_values = static_cast<std::uint64_t>(n_x) * n_xi;
  const std::uint64_t expected = kHeaderBytes + 8 * n_values;
  if (file_size != expected) {
    throw ConfigError("snapshot size mismatch in " + path.string() + ": expected " +
                      std::to_string(expected) + " bytes, found " + std::to_string(file_size));
  }

  GridSpec spec{static_cast<int>(n_x), static_cast<int>(n_xi), get<double>(header, kOffLx),
                get<double>(header, kOffLxi)};
  try {
    spec.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError("snapshot header describes an invalid grid: " + std::string(e.what()));
  }

  Snapshot snap{Field(make_grid(spec)), get<double>(header, kOffT)};
  auto data = snap.field.data();
  in.read(reinterpret_cast<char*>(data.data()),
          static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!in) throw ConfigError("failed reading snapshot values: " + path.string());
  return snap;
}

}  // namespace dnf
