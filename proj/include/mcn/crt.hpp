#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "errors.hpp"

namespace mcn::crt {

// x == remainder (mod modulus)
struct Congruence {
    std::uint64_t remainder = 0;
    std::uint64_t modulus = 0;

    friend bool operator==(const Congruence&, const Congruence&) = default;
};

using CongruenceSystem = std::vector<Congruence>;

enum class Method { graphical, garner };

inline std::string_view to_string(Method m) { return m == Method::graphical ? "graphical" : "garner"; }

struct CrtSolution {
    std::uint64_t x0 = 0;
    std::uint64_t modulus_product = 0;
    // Smallest common successor found by the graphical search.
    std::optional<std::uint64_t> witness;
    Method method = Method::garner;

    friend bool operator==(const CrtSolution&, const CrtSolution&) = default;
};

// Products must stay below 2^63.
inline constexpr std::uint64_t max_modulus_product = std::uint64_t{1} << 63;

// Parses "<r> mod <m>".
inline Congruence parse_congruence(std::string_view text)
{
    std::istringstream in{std::string(text)};
    long long r = -1, m = -1;
    std::string word, rest;
    if (!(in >> r >> word >> m) || word != "mod" || (in >> rest) || r < 0 || m < 0)
        throw validation_error("cannot parse congruence '" + std::string(text) + "', expected '<r> mod <m>'");
    return {static_cast<std::uint64_t>(r), static_cast<std::uint64_t>(m)};
}

inline std::uint64_t modulus_product(const CongruenceSystem& sys)
{
    std::uint64_t product = 1;
    for (const auto& c : sys) {
        if (c.modulus != 0 && product > (max_modulus_product - 1) / c.modulus)
            throw validation_error("modulus product exceeds 2^63");
        product *= c.modulus;
    }
    return product;
}

// Accepts a non-empty system with 0 <= r_i < m_i, m_i >= 2, pairwise coprime
// moduli and a product below 2^63.
inline void validate_system(const CongruenceSystem& sys)
{
    if (sys.empty())
        throw validation_error("empty congruence system");
    for (const auto& c : sys) {
        if (c.modulus < 2)
            throw validation_error("modulus must be at least 2, got " + std::to_string(c.modulus));
        if (c.remainder >= c.modulus)
            throw validation_error("remainder " + std::to_string(c.remainder) + " is not below modulus " +
                                   std::to_string(c.modulus));
    }
    for (std::size_t i = 0; i < sys.size(); ++i) {
        for (std::size_t j = i + 1; j < sys.size(); ++j) {
            const auto g = std::gcd(sys[i].modulus, sys[j].modulus);
            if (g != 1)
                throw infeasible_error("moduli " + std::to_string(sys[i].modulus) + " and " +
                                       std::to_string(sys[j].modulus) + " share the factor " +
                                       std::to_string(g));
        }
    }
    modulus_product(sys);
}

inline std::uint64_t first_successor(std::uint64_t r, std::uint64_t m) { return r == 0 ? 2 * m : m + r; }

// Successors of node m in layer r, truncated at `limit`: {m+r, 2m+r, ...} in (m, limit].
inline std::vector<std::uint64_t> successor_set(std::uint64_t r, std::uint64_t m, std::uint64_t limit)
{
    if (m <= r)
        throw domain_error("node " + std::to_string(m) + " is not in layer r=" + std::to_string(r));
    if (limit < m)
        throw validation_error("limit must be at least the node label");
    std::vector<std::uint64_t> out;
    for (unsigned __int128 x = first_successor(r, m); x <= limit; x += m)
        out.push_back(static_cast<std::uint64_t>(x));
    return out;
}

// Common successor of the modulus nodes across their remainder layers. The
// layers are capped at N = M + max(m_i) so a witness exists even when the
// canonical solution is not above every modulus. Progressions are walked
// lazily: each is advanced to the current maximum until all agree.
inline CrtSolution solve_graphical(const CongruenceSystem& sys)
{
    validate_system(sys);
    const std::uint64_t product = modulus_product(sys);
    std::uint64_t max_mod = 0;
    for (const auto& c : sys)
        max_mod = std::max(max_mod, c.modulus);
    const unsigned __int128 ceiling = static_cast<unsigned __int128>(product) + max_mod;

    std::vector<unsigned __int128> head;
    head.reserve(sys.size());
    for (const auto& c : sys)
        head.push_back(first_successor(c.remainder, c.modulus));

    while (true) {
        const unsigned __int128 hi = *std::max_element(head.begin(), head.end());
        if (hi > ceiling)
            throw std::logic_error("graphical CRT search ran past the layer ceiling");
        bool agree = true;
        for (std::size_t i = 0; i < sys.size(); ++i) {
            if (head[i] < hi) {
                const std::uint64_t m = sys[i].modulus;
                head[i] += (hi - head[i] + m - 1) / m * m;
            }
            agree = agree && head[i] == hi;
        }
        if (agree) {
            const auto witness = static_cast<std::uint64_t>(hi);
            return {witness % product, product, witness, Method::graphical};
        }
    }
}

// Inverse of a modulo m; requires gcd(a, m) = 1.
inline std::uint64_t inverse_mod(std::uint64_t a, std::uint64_t m)
{
    __int128 old_r = static_cast<__int128>(a % m), r = m;
    __int128 old_s = 1, s = 0;
    while (r != 0) {
        const __int128 q = old_r / r;
        std::swap(old_r, r);
        r -= q * old_r;
        std::swap(old_s, s);
        s -= q * old_s;
    }
    if (old_r != 1)
        throw domain_error("no modular inverse");
    __int128 result = old_s % static_cast<__int128>(m);
    if (result < 0)
        result += m;
    return static_cast<std::uint64_t>(result);
}

// Mixed-radix reconstruction: x = c_1 + c_2 m_1 + c_3 m_1 m_2 + ..., with
// c_i = (r_i - x_{i-1}) * (m_1 ... m_{i-1})^{-1} mod m_i.
inline CrtSolution solve_garner(const CongruenceSystem& sys)
{
    validate_system(sys);
    unsigned __int128 x = sys.front().remainder;
    unsigned __int128 partial = sys.front().modulus;
    for (std::size_t i = 1; i < sys.size(); ++i) {
        const std::uint64_t m = sys[i].modulus;
        const std::uint64_t x_mod = static_cast<std::uint64_t>(x % m);
        const std::uint64_t diff = (sys[i].remainder + m - x_mod) % m;
        const std::uint64_t inv = inverse_mod(static_cast<std::uint64_t>(partial % m), m);
        const std::uint64_t c = static_cast<std::uint64_t>(static_cast<unsigned __int128>(diff) * inv % m);
        x += static_cast<unsigned __int128>(c) * partial;
        partial *= m;
    }
    return {static_cast<std::uint64_t>(x), static_cast<std::uint64_t>(partial), std::nullopt, Method::garner};
}

} // namespace mcn::crt
