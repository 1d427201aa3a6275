#include "igfade/random.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <mutex>
#include <thread>
#include <vector>

namespace igfade::random {

Engine make_engine(std::uint64_t seed, Stream stream, std::uint64_t chunk) {
    const auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
    const auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
    const auto tag = static_cast<std::uint64_t>(stream);
    std::seed_seq seq{lo(seed), hi(seed), lo(tag), hi(tag), lo(chunk), hi(chunk)};
    return Engine(seq);
}

void fill_chunked(std::span<double> out, std::uint64_t seed, Stream stream, const ChunkFiller& fill) {
    const std::size_t chunks = (out.size() + kChunkSize - 1) / kChunkSize;
    if (chunks == 0) return;
    auto run_chunk = [&](std::size_t c) {
        const std::size_t begin = c * kChunkSize;
        const std::size_t len = std::min(kChunkSize, out.size() - begin);
        Engine engine = make_engine(seed, stream, c);
        fill(engine, out.subspan(begin, len));
    };
    const std::size_t workers =
        std::min<std::size_t>(chunks, std::max(1u, std::thread::hardware_concurrency()));
    if (workers == 1) {
        for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
        pool.emplace_back([&] {
            for (std::size_t c = next++; c < chunks; c = next++) {
                try {
                    run_chunk(c);
                } catch (...) {
                    std::lock_guard lock(failure_mutex);
                    if (!failure) failure = std::current_exception();
                }
            }
        });
    }
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
}

}  // namespace igfade::random
