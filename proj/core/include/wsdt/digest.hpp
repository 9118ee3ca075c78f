#pragma once

#include <cstdint>
#include <cstring>
#include <functional>
#include <span>
#include <string>

namespace wsdt {

/// 128-bit non-cryptographic digest (MurmurHash3 x64/128 finalization scheme).
struct Digest128 {
    std::uint64_t hi = 0;
    std::uint64_t lo = 0;

    bool operator==(const Digest128&) const = default;

    std::string hex() const {
        static const char* digits = "0123456789abcdef";
        std::string out(32, '0');
        for (int i = 0; i < 16; ++i) {
            const std::uint64_t w = i < 8 ? hi : lo;
            const int shift = 56 - 8 * (i % 8);
            const unsigned byte = static_cast<unsigned>((w >> shift) & 0xff);
            out[2 * i] = digits[byte >> 4];
            out[2 * i + 1] = digits[byte & 0xf];
        }
        return out;
    }
};

namespace detail {

inline std::uint64_t fmix64(std::uint64_t k) {
    k ^= k >> 33;
    k *= 0xff51afd7ed558ccdULL;
    k ^= k >> 33;
    k *= 0xc4ceb9fe1a85ec53ULL;
    k ^= k >> 33;
    return k;
}

inline std::uint64_t rotl64(std::uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

}  // namespace detail

inline Digest128 digest128(std::span<const std::byte> data, std::uint64_t seed = 0) {
    const std::uint64_t c1 = 0x87c37b91114253d5ULL;
    const std::uint64_t c2 = 0x4cf5ad432745937fULL;
    std::uint64_t h1 = seed, h2 = seed;

    const std::size_t n_blocks = data.size() / 16;
    for (std::size_t i = 0; i < n_blocks; ++i) {
        std::uint64_t k1, k2;
        std::memcpy(&k1, data.data() + i * 16, 8);
        std::memcpy(&k2, data.data() + i * 16 + 8, 8);
        k1 *= c1; k1 = detail::rotl64(k1, 31); k1 *= c2; h1 ^= k1;
        h1 = detail::rotl64(h1, 27); h1 += h2; h1 = h1 * 5 + 0x52dce729;
        k2 *= c2; k2 = detail::rotl64(k2, 33); k2 *= c1; h2 ^= k2;
        h2 = detail::rotl64(h2, 31); h2 += h1; h2 = h2 * 5 + 0x38495ab5;
    }

    std::uint64_t k1 = 0, k2 = 0;
    const std::size_t tail = n_blocks * 16;
    const std::size_t rem = data.size() - tail;
    for (std::size_t i = 0; i < rem; ++i) {
        const std::uint64_t b = static_cast<std::uint64_t>(std::to_integer<unsigned char>(data[tail + i]));
        if (i < 8) {
            k1 |= b << (8 * i);
        } else {
            k2 |= b << (8 * (i - 8));
        }
    }
    if (rem > 8) { k2 *= c2; k2 = detail::rotl64(k2, 33); k2 *= c1; h2 ^= k2; }
    if (rem > 0) { k1 *= c1; k1 = detail::rotl64(k1, 31); k1 *= c2; h1 ^= k1; }

    h1 ^= static_cast<std::uint64_t>(data.size());
    h2 ^= static_cast<std::uint64_t>(data.size());
    h1 += h2;
    h2 += h1;
    h1 = detail::fmix64(h1);
    h2 = detail::fmix64(h2);
    h1 += h2;
    h2 += h1;
    return Digest128{h1, h2};
}

inline Digest128 digest128(std::string_view text, std::uint64_t seed = 0) {
    return digest128(std::as_bytes(std::span<const char>(text.data(), text.size())), seed);
}

}  // namespace wsdt

template <>
struct std::hash<wsdt::Digest128> {
    std::size_t operator()(const wsdt::Digest128& d) const noexcept {
        return static_cast<std::size_t>(d.hi ^ (d.lo * 0x9e3779b97f4a7c15ULL));
    }
};
