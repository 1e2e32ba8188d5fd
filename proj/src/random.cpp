#include "conflearn/random.hpp"

namespace conflearn {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi,
                    std::uint32_t& lo) noexcept {
    const std::uint64_t prod = static_cast<std::uint64_t>(a) * b;
    hi = static_cast<std::uint32_t>(prod >> 32);
    lo = static_cast<std::uint32_t>(prod);
}

}  // namespace

PhiloxCounter philox4x32_10(PhiloxCounter ctr, PhiloxKey key) noexcept {
    for (int round = 0; round < 10; ++round) {
        std::uint32_t hi0, lo0, hi1, lo1;
        mulhilo(kMul0, ctr[0], hi0, lo0);
        mulhilo(kMul1, ctr[2], hi1, lo1);
        ctr = {hi1 ^ ctr[1] ^ key[0], lo1, hi0 ^ ctr[3] ^ key[1], lo0};
        key[0] += kWeyl0;
        key[1] += kWeyl1;
    }
    return ctr;
}

RandomStream::RandomStream(std::uint64_t master_seed) noexcept
    : seed_(master_seed),
      key_{static_cast<std::uint32_t>(master_seed),
           static_cast<std::uint32_t>(master_seed >> 32)},
      base_{0, 0, 0, static_cast<std::uint32_t>(StreamPurpose::generic) << 28} {}

RandomStream RandomStream::split(std::uint64_t path, std::uint32_t period,
                                 StreamPurpose purpose) const noexcept {
    // Counter layout: [draw index, period, path lo, (purpose << 28) | path hi].
    // Paths are limited to 2^60, far beyond any ensemble.
    PhiloxCounter base{0, period, static_cast<std::uint32_t>(path),
                       (static_cast<std::uint32_t>(purpose) << 28) |
                           (static_cast<std::uint32_t>(path >> 32) & 0x0FFFFFFFu)};
    return RandomStream(seed_, key_, base);
}

std::uint64_t RandomStream::next_u64() noexcept {
    if (buffered_ < 2) {
        PhiloxCounter ctr = base_;
        ctr[0] = draw_++;
        buffer_ = philox4x32_10(ctr, key_);
        buffered_ = 4;
    }
    const int i = 4 - buffered_;
    buffered_ -= 2;
    return (static_cast<std::uint64_t>(buffer_[i]) << 32) | buffer_[i + 1];
}

double RandomStream::uniform() noexcept {
    const std::uint64_t bits = next_u64() >> 11;
    return (static_cast<double>(bits) + 0.5) * 0x1.0p-53;
}

}  // namespace conflearn
