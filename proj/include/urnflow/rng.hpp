#pragma once

#include <cstdint>

namespace urnflow {

// Splittable counter-style generator. Every (seed, stream) pair yields an
// independent deterministic sequence, so parallel workers can each be handed
// a stream index without any coordination and results stay reproducible
// regardless of thread count.
class RngStream {
 public:
  explicit RngStream(std::uint64_t seed, std::uint64_t stream = 0);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an exact endpoint.
  double uniform();

  // Standard normal via the polar rejection method.
  double normal();

  // Unbiased integer in [0, n); n must be positive.
  std::uint64_t below(std::uint64_t n);

  bool coin() { return (next_u64() & 1u) != 0; }

 private:
  std::uint64_t state_;
};

}  // namespace urnflow
