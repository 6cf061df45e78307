#include "xrsched/nets/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <stdexcept>

namespace xrsched {

namespace {

constexpr char kMagic[8] = {'X', 'R', 'C', 'K', 'P', 'T', '0', '1'};

void append(std::string& buf, const void* p, std::size_t n) {
  buf.append(static_cast<const char*>(p), n);
}

template <typename T>
void append_pod(std::string& buf, T v) {
  append(buf, &v, sizeof(T));
}

template <typename T>
T read_pod(const std::string& buf, std::size_t& pos) {
  if (pos + sizeof(T) > buf.size()) {
    throw std::runtime_error("checkpoint: truncated file");
  }
  T v;
  std::memcpy(&v, buf.data() + pos, sizeof(T));
  pos += sizeof(T);
  return v;
}

}  // namespace

std::uint64_t fnv1a64(const void* data, std::size_t n, std::uint64_t basis) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = basis;
  for (std::size_t i = 0; i < n; ++i) {
    h ^= p[i];
    h *= 0x100000001b3ULL;
  }
  return h;
}

void save_checkpoint(const std::string& path, const std::vector<CheckpointEntry>& entries) {
  std::string buf;
  append(buf, kMagic, sizeof(kMagic));
  append_pod<std::uint32_t>(buf, 1u);
  append_pod<std::uint32_t>(buf, static_cast<std::uint32_t>(entries.size()));
  for (const auto& e : entries) {
    append_pod<std::uint32_t>(buf, static_cast<std::uint32_t>(e.name.size()));
    append(buf, e.name.data(), e.name.size());
    append_pod<std::uint32_t>(buf, static_cast<std::uint32_t>(e.shape.size()));
    for (int s : e.shape) append_pod<std::int32_t>(buf, s);
    append_pod<std::uint64_t>(buf, static_cast<std::uint64_t>(e.values.size()));
    append(buf, e.values.data(), static_cast<std::size_t>(e.values.size()) * sizeof(double));
  }
  const std::uint64_t checksum = fnv1a64(buf.data(), buf.size());
  append_pod<std::uint64_t>(buf, checksum);

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("checkpoint: cannot open for write: " + path);
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
  if (!out) throw std::runtime_error("checkpoint: write failed: " + path);
}

std::vector<CheckpointEntry> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("checkpoint: cannot open: " + path);
  std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (buf.size() < sizeof(kMagic) + sizeof(std::uint64_t)) {
    throw std::runtime_error("checkpoint: truncated file");
  }
  const std::size_t body = buf.size() - sizeof(std::uint64_t);
  std::uint64_t stored;
  std::memcpy(&stored, buf.data() + body, sizeof(stored));
  if (fnv1a64(buf.data(), body) != stored) {
    throw std::runtime_error("checkpoint: checksum mismatch: " + path);
  }
  std::size_t pos = 0;
  if (std::memcmp(buf.data(), kMagic, sizeof(kMagic)) != 0) {
    throw std::runtime_error("checkpoint: bad magic: " + path);
  }
  pos += sizeof(kMagic);
  const auto version = read_pod<std::uint32_t>(buf, pos);
  if (version != 1u) throw std::runtime_error("checkpoint: unsupported version");
  const auto count = read_pod<std::uint32_t>(buf, pos);
  std::vector<CheckpointEntry> entries(count);
  for (auto& e : entries) {
    const auto name_len = read_pod<std::uint32_t>(buf, pos);
    if (pos + name_len > body) throw std::runtime_error("checkpoint: truncated file");
    e.name.assign(buf.data() + pos, name_len);
    pos += name_len;
    const auto shape_len = read_pod<std::uint32_t>(buf, pos);
    e.shape.resize(shape_len);
    for (auto& s : e.shape) s = read_pod<std::int32_t>(buf, pos);
    const auto n = read_pod<std::uint64_t>(buf, pos);
    if (pos + n * sizeof(double) > body) throw std::runtime_error("checkpoint: truncated file");
    e.values.resize(static_cast<Eigen::Index>(n));
    std::memcpy(e.values.data(), buf.data() + pos, n * sizeof(double));
    pos += n * sizeof(double);
  }
  if (pos != body) throw std::runtime_error("checkpoint: trailing bytes");
  return entries;
}

}  // namespace xrsched
