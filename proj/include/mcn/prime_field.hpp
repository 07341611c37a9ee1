#pragma once

#include <cstdint>

namespace mcn::field {

// Arithmetic modulo the Mersenne prime 2^61 - 1.
inline constexpr std::uint64_t modulus = (std::uint64_t{1} << 61) - 1;

inline constexpr std::uint64_t reduce(unsigned __int128 x) noexcept
{
    // x = hi * 2^61 + lo  ==  hi + lo  (mod 2^61 - 1)
    std::uint64_t folded = static_cast<std::uint64_t>(x & modulus) + static_cast<std::uint64_t>(x >> 61);
    folded = (folded & modulus) + (folded >> 61);
    return folded >= modulus ? folded - modulus : folded;
}

inline constexpr std::uint64_t add(std::uint64_t a, std::uint64_t b) noexcept
{
    std::uint64_t s = a + b;
    return s >= modulus ? s - modulus : s;
}

inline constexpr std::uint64_t sub(std::uint64_t a, std::uint64_t b) noexcept
{
    return a >= b ? a - b : a + modulus - b;
}

inline constexpr std::uint64_t mul(std::uint64_t a, std::uint64_t b) noexcept
{
    return reduce(static_cast<unsigned __int128>(a) * b);
}

inline constexpr std::uint64_t pow(std::uint64_t base, std::uint64_t e) noexcept
{
    std::uint64_t result = 1;
    while (e) {
        if (e & 1)
            result = mul(result, base);
        base = mul(base, base);
        e >>= 1;
    }
    return result;
}

// a must be nonzero.
inline constexpr std::uint64_t inverse(std::uint64_t a) noexcept { return pow(a, modulus - 2); }

} // namespace mcn::field
