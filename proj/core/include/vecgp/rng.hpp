#pragma once

#include <cstdint>
#include <limits>
#include <random>
#include <string_view>
#include <utility>
#include <vector>

namespace vecgp {

// Deterministic random stream. All draws go through the helpers below so a
// given seed produces the same stream on every platform; std::*_distribution
// is avoided because its output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next_u64() { return engine_(); }

    // Uniform in [0, n), unbiased via rejection. n must be > 0.
    std::size_t index(std::size_t n) {
        const std::uint64_t max = std::numeric_limits<std::uint64_t>::max();
        const std::uint64_t limit = max - max % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return static_cast<std::size_t>(x % n);
    }

    // Uniform in [lo, hi], inclusive.
    int int_range(int lo, int hi) {
        return lo + static_cast<int>(index(static_cast<std::size_t>(hi - lo) + 1));
    }

    // Uniform in [0, 1).
    double real01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    bool coin() { return (next_u64() >> 63) != 0; }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::swap(v[i - 1], v[index(i)]);
        }
    }

private:
    std::mt19937_64 engine_;
};

// splitmix64 finalizer; full-avalanche 64-bit mix.
constexpr std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

// Child-seed derivation: a pure function of the master seed and the labels
// identifying one run, so every (dataset, stream, fold, repeat) combination
// gets its own non-overlapping stream.
inline std::uint64_t derive_seed(std::uint64_t master, std::string_view dataset_id,
                                 std::string_view stream, std::uint64_t a = 0,
                                 std::uint64_t b = 0) {
    std::uint64_t h = mix64(master);
    for (unsigned char c : dataset_id) h = mix64(h ^ c);
    h = mix64(h ^ 0x1fULL);
    for (unsigned char c : stream) h = mix64(h ^ c);
    h = mix64(h ^ a);
    h = mix64(h ^ b);
    return h;
}

} // namespace vecgp
