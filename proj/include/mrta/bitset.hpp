#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <vector>

namespace mrta {

/// Fixed-size bitset over assignment indices, sized at runtime.
class DynamicBitset {
public:
    DynamicBitset() = default;
    explicit DynamicBitset(std::size_t n, bool fill = false)
        : size_(n), words_((n + 63) / 64, fill ? ~0ULL : 0ULL) {
        trim();
    }

    std::size_t size() const { return size_; }

    bool test(std::size_t i) const {
        return (words_[i >> 6] >> (i & 63)) & 1ULL;
    }
    void set(std::size_t i) { words_[i >> 6] |= 1ULL << (i & 63); }
    void reset(std::size_t i) { words_[i >> 6] &= ~(1ULL << (i & 63)); }

    std::size_t count() const {
        std::size_t c = 0;
        for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
        return c;
    }

    bool any() const {
        for (auto w : words_)
            if (w) return true;
        return false;
    }

    bool none() const { return !any(); }

    DynamicBitset& operator&=(const DynamicBitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= o.words_[i];
        return *this;
    }

    DynamicBitset& operator|=(const DynamicBitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= o.words_[i];
        return *this;
    }

    /// Clears every bit that is set in o.
    DynamicBitset& subtract(const DynamicBitset& o) {
        for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~o.words_[i];
        return *this;
    }

    friend DynamicBitset operator&(DynamicBitset a, const DynamicBitset& b) {
        a &= b;
        return a;
    }

    std::size_t count_and(const DynamicBitset& o) const {
        std::size_t c = 0;
        for (std::size_t i = 0; i < words_.size(); ++i)
            c += static_cast<std::size_t>(std::popcount(words_[i] & o.words_[i]));
        return c;
    }

    bool operator==(const DynamicBitset& o) const {
        return size_ == o.size_ && words_ == o.words_;
    }

    /// Calls fn(index) for every set bit, in ascending order.
    template <typename Fn>
    void for_each_set(Fn&& fn) const {
        for (std::size_t wi = 0; wi < words_.size(); ++wi) {
            std::uint64_t w = words_[wi];
            while (w) {
                const int b = std::countr_zero(w);
                fn(wi * 64 + static_cast<std::size_t>(b));
                w &= w - 1;
            }
        }
    }

private:
    void trim() {
        if (size_ & 63) words_.back() &= (1ULL << (size_ & 63)) - 1;
    }

    std::size_t size_ = 0;
    std::vector<std::uint64_t> words_;
};

}  // namespace mrta
