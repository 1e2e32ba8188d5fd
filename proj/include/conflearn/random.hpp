#pragma once

#include <array>
#include <cstdint>

namespace conflearn {

// Philox4x32-10 counter-based generator (Salmon et al., Random123).
// Stateless: output is a pure function of (counter, key).
using PhiloxCounter = std::array<std::uint32_t, 4>;
using PhiloxKey = std::array<std::uint32_t, 2>;

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept;

// Purposes a draw can serve; part of the counter so streams never overlap.
enum class StreamPurpose : std::uint32_t {
    shock = 1,
    type = 2,
    signal = 3,
    generic = 15,
};

// A reproducible stream of uniforms addressed by (seed, path, period, purpose).
// Copying a stream copies its position; two copies yield identical draws.
class RandomStream {
public:
    explicit RandomStream(std::uint64_t master_seed) noexcept;

    // Independent child stream. Children with different coordinates never
    // share a counter value.
    RandomStream split(std::uint64_t path, std::uint32_t period,
                       StreamPurpose purpose) const noexcept;

    // Uniform on the open interval (0, 1), 53-bit resolution.
    double uniform() noexcept;

    std::uint64_t next_u64() noexcept;

    std::uint64_t seed() const noexcept { return seed_; }

private:
    RandomStream(std::uint64_t seed, PhiloxKey key, PhiloxCounter base) noexcept
        : seed_(seed), key_(key), base_(base) {}

    std::uint64_t seed_;
    PhiloxKey key_;
    PhiloxCounter base_;
    std::uint32_t draw_ = 0;
    std::array<std::uint32_t, 4> buffer_{};
    int buffered_ = 0;
};

}  // namespace conflearn
