#pragma once

#include <cstdint>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

namespace semilab {

/// SplitMix64 mixing step, used to derive independent stream seeds.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ull;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

/// Number of draws assigned to one RNG chunk; chunk boundaries are part of
/// the reproducibility contract, so this constant must not change.
inline constexpr std::size_t rng_chunk = 65536;

/// Engine for (seed, stream, chunk); every chunk gets a fresh engine so
/// sample batches are bit-identical regardless of partitioning.
inline std::mt19937_64 make_rng(std::uint64_t seed, std::uint64_t stream, std::uint64_t chunk = 0) {
    return std::mt19937_64(mix64(mix64(mix64(seed) ^ stream) ^ (0x517cc1b727220a95ull + chunk)));
}

/// Runs fn(i) for i in [0, count) on up to `threads` workers with a static
/// partition; fn must only write to slot-i state.
inline void parallel_for(std::size_t count, int threads, const std::function<void(std::size_t)>& fn) {
    if (threads <= 1 || count < 2) {
        for (std::size_t i = 0; i < count; ++i) fn(i);
        return;
    }
    std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < count; i += workers) fn(i);
        });
    }
    for (auto& th : pool) th.join();
}

/// FNV-1a 64-bit digest, hex-encoded; used to fingerprint canonical specs.
inline std::string fnv1a64_hex(const std::string& data) {
    std::uint64_t h = 0xcbf29ce484222325ull;
    for (unsigned char c : data) {
        h ^= c;
        h *= 0x100000001b3ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

/// Locale-independent shortest round-trip float formatting for CSV output.
inline std::string format_double(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return std::string(buf);
}

}
