#pragma once

#include <cstdint>
#include <random>

namespace truncls {

/// Deterministic random stream with O(1) derivation of child streams.
///
/// Stream s of a run with base seed b always reads from Rng::child(b, s),
/// so any replication can be regenerated in isolation: the stream does not
/// depend on which other replications ran or in what order.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// SplitMix64-style mix of (base_seed, stream) into a child seed.
  static std::uint64_t derive(std::uint64_t base_seed, std::uint64_t stream);

  static Rng child(std::uint64_t base_seed, std::uint64_t stream) {
    return Rng(derive(base_seed, stream));
  }

  std::uint64_t next_u64() { return gen_(); }

  /// Uniform on the open interval (0, 1); never returns an endpoint.
  double uniform();

  /// Standard normal via Box-Muller. Values are generated in pairs and the
  /// spare is cached until the next call.
  double normal();

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace truncls
