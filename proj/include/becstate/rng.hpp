#pragma once

#include <cstdint>
#include <random>

namespace becstate {

/// Independent random streams per trajectory.
enum class Stream : std::uint64_t { InitialState = 0, Dynamics = 1 };

/// Mixes (seed, trajectory, stream) through SplitMix64 rounds into a 64-bit seed.
/// Streams depend only on these three values, never on execution order.
std::uint64_t stream_seed(std::uint64_t seed, std::uint64_t traj_id, Stream stream);

class StreamRng {
 public:
  StreamRng(std::uint64_t seed, std::uint64_t traj_id, Stream stream)
      : id_(stream_seed(seed, traj_id, stream)), engine_(id_) {}

  double normal() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t id() const { return id_; }

 private:
  std::uint64_t id_;
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace becstate
