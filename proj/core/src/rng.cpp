#include "latcount/rng.hpp"

#include "latcount/error.hpp"

#include <cmath>
#include <numbers>

namespace latcount {

const char* to_string(ErrorKind kind) noexcept
{
    switch (kind) {
    case ErrorKind::input: return "input";
    case ErrorKind::unbounded: return "unbounded";
    case ErrorKind::infeasible: return "infeasible";
    case ErrorKind::degenerate: return "degenerate";
    case ErrorKind::resource_cap: return "resource_cap";
    case ErrorKind::numerical: return "numerical";
    }
    return "unknown";
}

std::uint64_t splitmix64(std::uint64_t& state)
{
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

std::uint64_t mix64(std::uint64_t x)
{
    std::uint64_t state = x;
    return splitmix64(state);
}

namespace {

inline std::uint64_t rotl(std::uint64_t x, int k)
{
    return (x << k) | (x >> (64 - k));
}

}  // namespace

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : seed_(seed), stream_(stream)
{
    std::uint64_t sm = seed ^ mix64(stream + 0x632be59bd9b4e019ULL);
    for (auto& word : s_) word = splitmix64(sm);
    // all-zero state is a fixed point of xoshiro
    if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;
}

std::uint64_t Rng::next()
{
    const std::uint64_t result = rotl(s_[1] * 5, 7) * 9;
    const std::uint64_t t = s_[1] << 17;
    s_[2] ^= s_[0];
    s_[3] ^= s_[1];
    s_[1] ^= s_[2];
    s_[0] ^= s_[3];
    s_[2] ^= t;
    s_[3] = rotl(s_[3], 45);
    return result;
}

double Rng::uniform01()
{
    return static_cast<double>(next() >> 11) * 0x1.0p-53;
}

double Rng::uniform(double lo, double hi)
{
    return lo + (hi - lo) * uniform01();
}

std::uint64_t Rng::below(std::uint64_t bound)
{
    if (bound == 0) throw Error(ErrorKind::input, "Rng::below: bound must be positive");
    const std::uint64_t threshold = (0 - bound) % bound;
    for (;;) {
        const std::uint64_t r = next();
        if (r >= threshold) return r % bound;
    }
}

std::int64_t Rng::integer(std::int64_t lo, std::int64_t hi)
{
    if (hi < lo) throw Error(ErrorKind::input, "Rng::integer: empty range");
    const auto span = static_cast<std::uint64_t>(hi) - static_cast<std::uint64_t>(lo);
    if (span == ~std::uint64_t{0}) return static_cast<std::int64_t>(next());
    return lo + static_cast<std::int64_t>(below(span + 1));
}

double Rng::normal()
{
    if (has_spare_) {
        has_spare_ = false;
        return spare_normal_;
    }
    double u1 = uniform01();
    while (u1 <= 0.0) u1 = uniform01();
    const double u2 = uniform01();
    const double radius = std::sqrt(-2.0 * std::log(u1));
    const double angle = 2.0 * std::numbers::pi * u2;
    spare_normal_ = radius * std::sin(angle);
    has_spare_ = true;
    return radius * std::cos(angle);
}

Rng Rng::derive(std::uint64_t substream) const
{
    return Rng(seed_, mix64(stream_ * 0x9e3779b97f4a7c15ULL + substream + 1));
}

}  // namespace latcount
