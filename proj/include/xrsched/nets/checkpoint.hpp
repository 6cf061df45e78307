#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

namespace xrsched {

// One named flat parameter array plus its shape descriptor (layer sizes for
// nets, arbitrary ints otherwise). Every network in the system serializes
// through this same layout.
struct CheckpointEntry {
  std::string name;
  std::vector<int> shape;
  Eigen::VectorXd values;
};

// Binary file: magic, version, entry table, trailing FNV-1a checksum over all
// preceding bytes. Round-trips are bit exact; load throws on a checksum or
// framing mismatch.
void save_checkpoint(const std::string& path, const std::vector<CheckpointEntry>& entries);
std::vector<CheckpointEntry> load_checkpoint(const std::string& path);

std::uint64_t fnv1a64(const void* data, std::size_t n,
                      std::uint64_t basis = 0xcbf29ce484222325ULL);

}  // namespace xrsched
