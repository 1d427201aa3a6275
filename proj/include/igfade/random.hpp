#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <random>
#include <span>

namespace igfade::random {

using Engine = std::mt19937_64;

/// Substream identifiers. Shadowing and fading draws for the same seed never
/// share an engine.
enum class Stream : std::uint64_t { Shadowing = 1, Fading = 2 };

/// Samples per chunk. Each chunk owns an engine derived from (seed, stream, chunk),
/// so output does not depend on how many workers fill it.
inline constexpr std::size_t kChunkSize = std::size_t{1} << 16;

Engine make_engine(std::uint64_t seed, Stream stream, std::uint64_t chunk);

using ChunkFiller = std::function<void(Engine&, std::span<double>)>;

/// Splits `out` into kChunkSize pieces and calls `fill` on each with its own
/// engine. Chunks are spread over hardware threads.
void fill_chunked(std::span<double> out, std::uint64_t seed, Stream stream, const ChunkFiller& fill);

}  // namespace igfade::random
