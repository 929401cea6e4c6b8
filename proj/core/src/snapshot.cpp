#include <bit>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "pfw/errors.hpp"
#include "pfw/io.hpp"

namespace pfw {

namespace {

constexpr char kMagic[4] = {'P', 'F', 'W', 'F'};

template <class T>
void put(std::string& out, T value) {
  static_assert(std::is_trivially_copyable_v<T>);
  unsigned char b[sizeof(T)];
  std::memcpy(b, &value, sizeof(T));
  if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
  out.append(reinterpret_cast<const char*>(b), sizeof(T));
}

class Reader {
 public:
  explicit Reader(std::string bytes) : data_(std::move(bytes)) {}

  template <class T>
  T get(const char* what) {
    if (pos_ + sizeof(T) > data_.size())
      throw FormatError(FormatError::Kind::truncated, std::string("snapshot truncated while reading ") + what);
    unsigned char b[sizeof(T)];
    std::memcpy(b, data_.data() + pos_, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(b, b + sizeof(T));
    pos_ += sizeof(T);
    T v;
    std::memcpy(&v, b, sizeof(T));
    return v;
  }

  void doubles(std::vector<double>& out, std::size_t n, const char* what) {
    if (pos_ + n * sizeof(double) > data_.size())
      throw FormatError(FormatError::Kind::truncated, std::string("snapshot truncated while reading ") + what);
    out.resize(n);
    for (std::size_t k = 0; k < n; ++k) out[k] = get<double>(what);
  }

  std::size_t remaining() const { return data_.size() - pos_; }

 private:
  std::string data_;
  std::size_t pos_ = 0;
};

}  // namespace

Snapshot Snapshot::from_session(const FlowSession& s) {
  Snapshot snap;
  snap.dims = s.grid.dims();
  snap.points.assign(static_cast<std::size_t>(snap.dims), static_cast<std::uint32_t>(s.grid.points()));
  snap.eps = s.params.eps;
  snap.alpha = s.params.alpha;
  snap.time = s.t;
  snap.kind = s.params.kind;
  snap.u = s.u.values;
  snap.mu = s.mu.values;
  return snap;
}

PeriodicGrid Snapshot::grid() const {
  if (points.empty()) throw ValidationError("snapshot has no grid");
  for (auto p : points)
    if (p != points.front()) throw ValidationError("snapshot grids must have equal points per axis");
  return make_grid(dims, static_cast<int>(points.front() / 2));
}

void write_file_atomic(const std::string& path, const std::string& bytes) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(target.parent_path(), ec);
    if (ec) throw FormatError(FormatError::Kind::io, "cannot create directory for '" + path + "': " + ec.message());
  }
  const std::string tmp = path + ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw FormatError(FormatError::Kind::io, "cannot open '" + tmp + "' for writing");
    f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    f.flush();
    if (!f) throw FormatError(FormatError::Kind::io, "write failed for '" + tmp + "'");
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw FormatError(FormatError::Kind::io, "cannot rename into '" + path + "': " + ec.message());
  }
}

void write_snapshot(const std::string& path, const Snapshot& s) {
  if (s.dims < 1 || s.dims > 3 || s.points.size() != static_cast<std::size_t>(s.dims))
    throw ValidationError("snapshot dims and points disagree");
  std::size_t n = 1;
  for (auto p : s.points) n *= p;
  if (s.u.size() != n || s.mu.size() != n) throw ValidationError("snapshot payload length does not match grid");
  std::string out;
  out.reserve(64 + 16 * n);
  out.append(kMagic, 4);
  put<std::uint32_t>(out, Snapshot::kVersion);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(s.dims));
  for (auto p : s.points) put<std::uint32_t>(out, p);
  put<double>(out, s.eps);
  put<double>(out, s.alpha);
  put<double>(out, s.time);
  put<std::uint8_t>(out, static_cast<std::uint8_t>(s.kind));
  for (double x : s.u) put<double>(out, x);
  for (double x : s.mu) put<double>(out, x);
  write_file_atomic(path, out);
}

Snapshot read_snapshot(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw FormatError(FormatError::Kind::io, "cannot open snapshot '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  std::string bytes = ss.str();
  if (bytes.size() < 4) throw FormatError(FormatError::Kind::truncated, "snapshot truncated in magic");
  if (std::memcmp(bytes.data(), kMagic, 4) != 0) throw FormatError(FormatError::Kind::bad_magic, "not a PFWF snapshot");
  Reader r(bytes.substr(4));
  const auto version = r.get<std::uint32_t>("version");
  if (version != Snapshot::kVersion)
    throw FormatError(FormatError::Kind::unsupported_version,
                      "unsupported snapshot version " + std::to_string(version));
  Snapshot s;
  s.dims = r.get<std::uint8_t>("dims");
  if (s.dims < 1 || s.dims > 3) throw FormatError(FormatError::Kind::bad_magic, "invalid dims in snapshot header");
  std::size_t n = 1;
  for (int a = 0; a < s.dims; ++a) {
    s.points.push_back(r.get<std::uint32_t>("points"));
    n *= s.points.back();
  }
  s.eps = r.get<double>("eps");
  s.alpha = r.get<double>("alpha");
  s.time = r.get<double>("time");
  const auto kind = r.get<std::uint8_t>("flow kind");
  if (kind > 2) throw FormatError(FormatError::Kind::bad_magic, "invalid flow kind in snapshot header");
  s.kind = static_cast<FlowKind>(kind);
  r.doubles(s.u, n, "u");
  r.doubles(s.mu, n, "mu");
  return s;
}

}  // namespace pfw
