#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <type_traits>
#include <vector>

namespace cdarl {

/// Append-only byte buffer used to serialize state for fingerprinting.
class ByteSink {
public:
    template <typename T>
        requires std::is_trivially_copyable_v<T>
    void put(const T& v) {
        const auto* p = reinterpret_cast<const unsigned char*>(&v);
        bytes_.insert(bytes_.end(), p, p + sizeof(T));
    }

    template <typename T>
        requires std::is_trivially_copyable_v<T>
    void put_range(const std::vector<T>& vs) {
        put<std::uint64_t>(vs.size());
        for (const T& v : vs) put(v);
    }

    const std::vector<unsigned char>& bytes() const { return bytes_; }

    /// FNV-1a over the accumulated bytes.
    std::uint64_t hash() const {
        std::uint64_t h = 0xcbf29ce484222325ULL;
        for (unsigned char b : bytes_) {
            h ^= b;
            h *= 0x100000001b3ULL;
        }
        return h;
    }

private:
    std::vector<unsigned char> bytes_;
};

}  // namespace cdarl
