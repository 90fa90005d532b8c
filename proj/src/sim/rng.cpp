#include "aimac/sim/rng.hpp"

#include "aimac/sim/time.hpp"

#include <cmath>

namespace aimac::sim
{

namespace
{
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

SimTime from_ms(double ms)
{
    return SimTime{static_cast<std::int64_t>(std::llround(ms * 1000.0))};
}

std::uint64_t fnv1a64(std::string_view text) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text)
    {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t splitmix64(std::uint64_t z) noexcept
{
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

RngStream::RngStream(std::uint64_t seed, std::string_view name)
    : name_(name), key_(splitmix64(splitmix64(seed + kGolden) ^ fnv1a64(name)))
{
}

std::uint64_t RngStream::next_u64() noexcept
{
    ++counter_;
    return splitmix64(key_ + counter_ * kGolden);
}

double RngStream::next_uniform() noexcept
{
    return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double RngStream::next_open_uniform() noexcept
{
    double u = 0.0;
    do
    {
        u = next_uniform();
    } while (u == 0.0);
    return u;
}

std::uint64_t RngStream::next_below_inclusive(std::uint64_t bound) noexcept
{
    if (bound == ~std::uint64_t{0})
    {
        return next_u64();
    }
    const std::uint64_t range = bound + 1;
    // Reject the top partial bucket so every value is equally likely.
    const std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % range);
    std::uint64_t x = 0;
    do
    {
        x = next_u64();
    } while (x >= limit);
    return x % range;
}

} // namespace aimac::sim
