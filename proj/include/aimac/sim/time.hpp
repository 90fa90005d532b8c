#pragma once

#include <compare>
#include <cstdint>

namespace aimac::sim
{

/// Simulation time in integer microseconds since episode start.
struct SimTime
{
    std::int64_t micros = 0;

    constexpr auto operator<=>(const SimTime&) const = default;

    constexpr SimTime& operator+=(SimTime rhs) noexcept
    {
        micros += rhs.micros;
        return *this;
    }
    constexpr SimTime& operator-=(SimTime rhs) noexcept
    {
        micros -= rhs.micros;
        return *this;
    }

    constexpr double as_ms() const noexcept { return static_cast<double>(micros) / 1000.0; }
    constexpr double as_seconds() const noexcept { return static_cast<double>(micros) / 1.0e6; }
};

constexpr SimTime operator+(SimTime a, SimTime b) noexcept { return SimTime{a.micros + b.micros}; }
constexpr SimTime operator-(SimTime a, SimTime b) noexcept { return SimTime{a.micros - b.micros}; }
constexpr SimTime operator*(SimTime a, std::int64_t k) noexcept { return SimTime{a.micros * k}; }
constexpr SimTime operator*(std::int64_t k, SimTime a) noexcept { return SimTime{a.micros * k}; }

constexpr SimTime microseconds(std::int64_t us) noexcept { return SimTime{us}; }
constexpr SimTime milliseconds(std::int64_t ms) noexcept { return SimTime{ms * 1000}; }
constexpr SimTime seconds(std::int64_t s) noexcept { return SimTime{s * 1000000}; }

/// Rounds a fractional millisecond value to the nearest microsecond.
SimTime from_ms(double ms);

} // namespace aimac::sim
