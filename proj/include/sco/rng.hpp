#ifndef SCO_RNG_HPP
#define SCO_RNG_HPP

#include <cstdint>
#include <random>

#include "sco/point.hpp"

namespace sco {

// splitmix64 step; used to derive independent sub-stream seeds from one
// user-facing seed so that each consumer owns a reproducible stream.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ull);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream, std::uint64_t index = 0) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= stream * 0x9e3779b97f4a7c15ull;
    std::uint64_t b = splitmix64(s);
    s ^= index * 0xd1b54a32d192ed03ull;
    std::uint64_t c = splitmix64(s);
    return a ^ (b << 1) ^ c;
}

class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Uniform double in [0,1).
    double uniform() { return unit_(engine_); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, bound).
    std::uint64_t integer(std::uint64_t bound) {
        return std::uniform_int_distribution<std::uint64_t>(0, bound - 1)(engine_);
    }

    std::mt19937_64& engine() { return engine_; }

private:
    std::mt19937_64 engine_;
    std::uniform_real_distribution<double> unit_{0.0, 1.0};
};

inline Point uniform_point(Rng& rng, std::size_t dim) {
    std::vector<double> c(dim);
    for (std::size_t k = 0; k < dim; ++k) c[k] = rng.uniform();
    return Point(std::move(c));
}

} // namespace sco

#endif
