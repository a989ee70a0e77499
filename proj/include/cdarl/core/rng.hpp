#pragma once

#include <cstdint>
#include <random>

namespace cdarl {

using Rng = std::mt19937_64;

/// Stateless 64-bit mixer (splitmix64 finalizer). Used to derive
/// well-separated seeds from a master seed and stream indices.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

/// Derives an independent seed from (master, stream, substream).
/// Deterministic; distinct index pairs give unrelated streams.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream,
                                 std::uint64_t substream = 0) {
    return mix64(mix64(master ^ mix64(stream)) + substream);
}

inline Rng make_rng(std::uint64_t seed) { return Rng(mix64(seed)); }

/// A source of fresh seeds. One owner draws from it sequentially, so a
/// fixed construction seed yields a reproducible seed sequence.
class SeedStream {
public:
    explicit SeedStream(std::uint64_t seed) : state_(seed) {}
    std::uint64_t next() { return mix64(state_ += 0x9e3779b97f4a7c15ULL); }

private:
    std::uint64_t state_;
};

}  // namespace cdarl
