#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace tvps {

/// A seeded stream of random variates.
///
/// Streams are identified by their seed material: the master seed, the
/// replication index and any names appended through split(). A child stream
/// does not depend on how many draws the parent has made, so the arrival,
/// job-size and probe streams of a replication stay fixed when one of them
/// is consumed differently (for example under another control).
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t index);

  RandomStream split(std::string_view name) const;
  RandomStream split(std::uint64_t index) const;

  /// Uniform on the open interval (0, 1).
  double uniform();
  double standard_normal();
  std::uint64_t next_u64() { return engine_(); }

 private:
  explicit RandomStream(std::vector<std::uint32_t> words);

  std::vector<std::uint32_t> words_;
  std::mt19937_64 engine_;
};

}  // namespace tvps
