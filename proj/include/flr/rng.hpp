#pragma once

#include <array>
#include <cstdint>

namespace flr {

/// Philox4x32-10 counter-based generator (Salmon et al., SC'11).
/// A stream is addressed by (key, stream_id); draws advance only a local
/// block counter, so streams can be handed to parallel workers and replayed
/// bit-exactly regardless of scheduling. Gaussian variates come from an
/// explicit Box-Muller transform rather than std::normal_distribution,
/// whose output is implementation-defined.
class Rng {
  public:
    explicit Rng(std::uint64_t key, std::uint64_t stream_id = 0);

    // Derives an independent child stream; deterministic in (parent, salt).
    Rng split(std::uint64_t salt) const;

    std::uint32_t next_u32();
    std::uint64_t next_u64();

    // Uniform on [0,1), 53-bit mantissa.
    double uniform();

    // Standard normal.
    double gaussian();

  private:
    void refill();

    std::array<std::uint32_t, 2> key_;
    std::uint64_t stream_;
    std::uint64_t counter_ = 0;
    std::array<std::uint32_t, 4> block_{};
    int block_pos_ = 4;
    double cached_gaussian_ = 0.0;
    bool has_cached_gaussian_ = false;
};

}  // namespace flr
