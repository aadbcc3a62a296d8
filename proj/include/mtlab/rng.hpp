#ifndef MTLAB_RNG_HPP
#define MTLAB_RNG_HPP

#include <bit>
#include <cstdint>
#include <limits>

namespace mtlab {

namespace detail {

// SplitMix64 finalizer; used for seed expansion and stream derivation.
inline constexpr std::uint64_t mix64(std::uint64_t z) noexcept {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

inline constexpr std::uint64_t GOLDEN_GAMMA = 0x9E3779B97F4A7C15ULL;

}  // namespace detail

/// PCG XSL-RR 128/64. One full-period 2^128 sequence per odd increment, so
/// distinct stream selectors give structurally distinct sequences.
class Pcg64 {
  public:
    using result_type = std::uint64_t;

    Pcg64(std::uint64_t seed, std::uint64_t stream) noexcept {
        using detail::GOLDEN_GAMMA;
        using detail::mix64;
        const uint128 init_state = (uint128(mix64(seed)) << 64) | mix64(seed + GOLDEN_GAMMA);
        const uint128 init_seq =
            (uint128(mix64(stream ^ 0x5851F42D4C957F2DULL)) << 64) | mix64(stream + GOLDEN_GAMMA);
        state_ = 0u;
        inc_ = (init_seq << 1) | 1u;
        advance();
        state_ += init_state;
        advance();
    }

    std::uint64_t operator()() noexcept {
        const uint128 old = state_;
        advance();
        const std::uint64_t xored = static_cast<std::uint64_t>(old >> 64) ^ static_cast<std::uint64_t>(old);
        const int rot = static_cast<int>(old >> 122);
        return std::rotr(xored, rot);
    }

    /// Uniform double strictly inside (0, 1); 53-bit resolution.
    double uniform() noexcept {
        return (static_cast<double>((*this)() >> 11) + 0.5) * 0x1.0p-53;
    }

    static constexpr std::uint64_t min() noexcept { return 0; }
    static constexpr std::uint64_t max() noexcept { return std::numeric_limits<std::uint64_t>::max(); }

  private:
    using uint128 = unsigned __int128;

    void advance() noexcept { state_ = state_ * MULT + inc_; }

    static constexpr uint128 MULT = (uint128(2549297995355413924ULL) << 64) | 4865540595714422341ULL;

    uint128 state_;
    uint128 inc_;
};

/// Value identifying one reproducible draw sequence. (master_seed, stream_index)
/// fully determines the sequence; distinct indices give independent streams.
struct RandomStream {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_index = 0;

    Pcg64 engine() const noexcept { return Pcg64(master_seed, stream_index); }

    /// Derive a child stream family rooted at this stream. Children of
    /// distinct parents are distinct; the result is a plain value.
    RandomStream child(std::uint64_t key) const noexcept {
        const std::uint64_t derived =
            detail::mix64(master_seed ^ detail::mix64(stream_index + detail::GOLDEN_GAMMA));
        return RandomStream{derived, key};
    }

    friend bool operator==(const RandomStream&, const RandomStream&) = default;
};

}  // namespace mtlab

#endif
