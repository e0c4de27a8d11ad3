#pragma once

#include <atomic>
#include <cstdint>
#include <exception>
#include <random>
#include <thread>
#include <vector>

namespace bell {

/// SplitMix64 finalizer. Used only to mix (seed, stream index) pairs into
/// well-separated engine seeds.
constexpr std::uint64_t splitmix64(std::uint64_t x) noexcept {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

/// Reproducible random stream.
///
/// Identity: std::mt19937_64 (algorithm fixed by the C++ standard, so output
/// is identical across platforms and standard libraries) seeded with
/// splitmix64(splitmix64(seed) ^ splitmix64(stream)). Uniform doubles take
/// the top 53 bits of one engine output; std::* distributions are avoided
/// because their output is implementation-defined.
class Rng {
public:
    explicit Rng(std::uint64_t seed, std::uint64_t stream = 0)
        : engine_(splitmix64(splitmix64(seed) ^ splitmix64(stream))) {}

    std::uint64_t next() { return engine_(); }

    /// Uniform on [0, 1) with 53-bit resolution.
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    /// Uniform on [lo, hi).
    double uniform(double lo, double hi) { return lo + uniform() * (hi - lo); }

    /// Unbiased uniform integer on [0, n) by rejection.
    std::uint64_t uniform_below(std::uint64_t n) {
        const std::uint64_t limit = n * (~std::uint64_t{0} / n);
        std::uint64_t x = next();
        while (x >= limit) x = next();
        return x % n;
    }

private:
    std::mt19937_64 engine_;
};

/// Fixed Monte Carlo chunk size. Sample i always belongs to chunk i / kChunkSize
/// and is generated from the stream Rng(seed, chunk), so results do not depend
/// on how chunks are scheduled across threads.
inline constexpr std::uint64_t kMcChunkSize = 1ull << 16;

/// Runs fn(chunk_index, begin, end, rng, state[chunk_index]) over [0, n) split
/// into kMcChunkSize chunks, each with its own substream. Returns the per-chunk
/// states in chunk order; the caller reduces them. n_threads = 0 picks the
/// hardware concurrency.
template <typename State, typename Fn>
std::vector<State> run_chunked(std::uint64_t n, std::uint64_t seed, Fn&& fn,
                               unsigned n_threads = 0) {
    const std::uint64_t n_chunks = (n + kMcChunkSize - 1) / kMcChunkSize;
    std::vector<State> states(static_cast<std::size_t>(n_chunks));
    if (n_chunks == 0) return states;
    if (n_threads == 0) n_threads = std::thread::hardware_concurrency();
    if (n_threads < 1) n_threads = 1;
    if (n_threads > n_chunks) n_threads = static_cast<unsigned>(n_chunks);

    std::atomic<std::uint64_t> next_chunk{0};
    std::exception_ptr failure;
    std::atomic_flag failed = ATOMIC_FLAG_INIT;
    auto worker = [&] {
        try {
            for (std::uint64_t c; (c = next_chunk.fetch_add(1)) < n_chunks;) {
                Rng rng(seed, c);
                const std::uint64_t begin = c * kMcChunkSize;
                const std::uint64_t end = std::min(n, begin + kMcChunkSize);
                fn(c, begin, end, rng, states[static_cast<std::size_t>(c)]);
            }
        } catch (...) {
            if (!failed.test_and_set()) failure = std::current_exception();
        }
    };

    if (n_threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(n_threads);
        for (unsigned t = 0; t < n_threads; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return states;
}

}  // namespace bell
