#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace aimac::sim
{

/// Named counter-based random stream.
///
/// The n-th draw is a pure function of (episode seed, stream name, n): the key is
/// derived by hashing the name into the seed and each output is the SplitMix64
/// finalizer applied to key + (n + 1) * golden-ratio increment. Streams with
/// different names never share state, so adding a consumer in one subsystem does
/// not perturb draws anywhere else.
class RngStream
{
  public:
    RngStream() = default;
    RngStream(std::uint64_t seed, std::string_view name);

    std::uint64_t next_u64() noexcept;

    /// Uniform real in [0, 1) with 53 bits of resolution.
    double next_uniform() noexcept;

    /// Uniform real in (0, 1); zero is re-drawn.
    double next_open_uniform() noexcept;

    /// Uniform integer in [0, bound] (inclusive), unbiased.
    std::uint64_t next_below_inclusive(std::uint64_t bound) noexcept;

    bool next_bernoulli(double p) noexcept { return next_uniform() < p; }

    const std::string& name() const noexcept { return name_; }
    std::uint64_t counter() const noexcept { return counter_; }

  private:
    std::string name_;
    std::uint64_t key_ = 0;
    std::uint64_t counter_ = 0;
};

/// 64-bit FNV-1a over the bytes of a label.
std::uint64_t fnv1a64(std::string_view text) noexcept;

/// SplitMix64 output function.
std::uint64_t splitmix64(std::uint64_t x) noexcept;

} // namespace aimac::sim
