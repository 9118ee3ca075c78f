#pragma once

#include <bit>
#include <cstdint>
#include <cstddef>
#include <span>
#include <vector>

#include "wsdt/error.hpp"

namespace wsdt {

/// Fixed-length bitvector backed by 64-bit words. Unused bits of the last
/// word are kept zero, so whole-word operations (popcount, AND) need no
/// per-call masking.
class BitVector {
  public:
    BitVector() = default;

    explicit BitVector(std::size_t n_bits, bool fill = false) : n_bits_(n_bits) {
        words_.assign(word_count(n_bits), fill ? ~std::uint64_t{0} : 0);
        mask_tail();
    }

    static BitVector ones(std::size_t n_bits) { return BitVector(n_bits, true); }

    std::size_t size() const noexcept { return n_bits_; }
    bool empty_domain() const noexcept { return n_bits_ == 0; }

    void set(std::size_t i, bool value = true) {
        if (value) {
            words_[i >> 6] |= std::uint64_t{1} << (i & 63);
        } else {
            words_[i >> 6] &= ~(std::uint64_t{1} << (i & 63));
        }
    }

    bool test(std::size_t i) const { return (words_[i >> 6] >> (i & 63)) & 1u; }

    std::size_t popcount() const noexcept {
        std::size_t total = 0;
        for (std::uint64_t w : words_) total += static_cast<std::size_t>(std::popcount(w));
        return total;
    }

    bool any() const noexcept {
        for (std::uint64_t w : words_)
            if (w) return true;
        return false;
    }

    bool none() const noexcept { return !any(); }

    BitVector and_with(const BitVector& other) const {
        check_length(other);
        BitVector out(n_bits_);
        for (std::size_t k = 0; k < words_.size(); ++k) out.words_[k] = words_[k] & other.words_[k];
        return out;
    }

    BitVector and_not(const BitVector& other) const {
        check_length(other);
        BitVector out(n_bits_);
        for (std::size_t k = 0; k < words_.size(); ++k) out.words_[k] = words_[k] & ~other.words_[k];
        return out;
    }

    BitVector or_with(const BitVector& other) const {
        check_length(other);
        BitVector out(n_bits_);
        for (std::size_t k = 0; k < words_.size(); ++k) out.words_[k] = words_[k] | other.words_[k];
        return out;
    }

    BitVector complement() const {
        BitVector out(n_bits_);
        for (std::size_t k = 0; k < words_.size(); ++k) out.words_[k] = ~words_[k];
        out.mask_tail();
        return out;
    }

    std::size_t and_popcount(const BitVector& other) const {
        check_length(other);
        std::size_t total = 0;
        for (std::size_t k = 0; k < words_.size(); ++k)
            total += static_cast<std::size_t>(std::popcount(words_[k] & other.words_[k]));
        return total;
    }

    std::size_t and_not_popcount(const BitVector& other) const {
        check_length(other);
        std::size_t total = 0;
        for (std::size_t k = 0; k < words_.size(); ++k)
            total += static_cast<std::size_t>(std::popcount(words_[k] & ~other.words_[k]));
        return total;
    }

    /// Calls fn(index) for every set bit in ascending order.
    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t k = 0; k < words_.size(); ++k) {
            std::uint64_t w = words_[k];
            while (w) {
                const int bit = std::countr_zero(w);
                fn(k * 64 + static_cast<std::size_t>(bit));
                w &= w - 1;
            }
        }
    }

    std::span<const std::uint64_t> words() const noexcept { return words_; }

    bool operator==(const BitVector& other) const noexcept {
        return n_bits_ == other.n_bits_ && words_ == other.words_;
    }

  private:
    static std::size_t word_count(std::size_t n_bits) { return (n_bits + 63) / 64; }

    void mask_tail() {
        const std::size_t rem = n_bits_ & 63;
        if (rem != 0 && !words_.empty()) words_.back() &= (std::uint64_t{1} << rem) - 1;
    }

    void check_length(const BitVector& other) const {
        if (n_bits_ != other.n_bits_)
            raise(ErrorCode::LengthMismatch, "bitvector lengths differ (" + std::to_string(n_bits_) +
                                                 " vs " + std::to_string(other.n_bits_) + ")");
    }

    std::vector<std::uint64_t> words_;
    std::size_t n_bits_ = 0;
};

}  // namespace wsdt
