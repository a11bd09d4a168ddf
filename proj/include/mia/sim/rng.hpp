#pragma once

#include <cstdint>
#include <random>

namespace mia::sim {

/// Fixed stream ids, one per model component, so draws in one component
/// never shift the draws seen by another.
enum class StreamId : std::uint64_t {
  Arrivals = 1,
  Mission = 2,
  Attacker = 3,
  Defender = 4,
  Generator = 5,
  // Per-task duration and rework streams are offset from these bases.
  TaskDurationBase = 0x1000,
  TaskReworkBase = 0x2000,
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Seed for replication `index` of a batch started from `base_seed`.
std::uint64_t replication_seed(std::uint64_t base_seed, std::uint64_t index) noexcept;

/// A reproducible random stream: identical (seed, stream_id, draw index) gives
/// an identical value.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);
  RngStream(std::uint64_t seed, StreamId stream_id)
      : RngStream(seed, static_cast<std::uint64_t>(stream_id)) {}

  /// Uniform in [0, 1) with 53 bits of resolution.
  double uniform();
  /// Uniform integer in [0, n). n must be positive.
  std::uint64_t below(std::uint64_t n);

  std::uint64_t seed() const noexcept { return seed_; }
  std::uint64_t stream_id() const noexcept { return stream_id_; }
  std::uint64_t draws() const noexcept { return draws_; }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::uint64_t draws_ = 0;
  std::mt19937_64 engine_;
};

}  // namespace mia::sim
