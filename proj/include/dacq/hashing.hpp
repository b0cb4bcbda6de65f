#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace dacq {

// splitmix64 finalizer. Fixed for all versions: sample membership and golden
// reports depend on it bit-for-bit.
inline std::uint64_t mix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Avalanche hash of a byte string, folded through mix64.
inline std::uint64_t hash_bytes(std::string_view bytes, std::uint64_t seed) {
    std::uint64_t h = mix64(seed ^ 0x517CC1B727220A95ull);
    for (unsigned char b : bytes) h = mix64(h ^ b);
    return mix64(h ^ (std::uint64_t)bytes.size());
}

// Canonical encoding of a value tuple: length-prefixed fields, so ("ab","c")
// and ("a","bc") hash differently.
inline std::string encode_tuple(const std::vector<std::string>& fields) {
    std::string out;
    for (const auto& f : fields) {
        out += std::to_string(f.size());
        out += ':';
        out += f;
    }
    return out;
}

// Top 53 bits as a double in [0, 1).
inline double unit_from_hash(std::uint64_t h) {
    return static_cast<double>(h >> 11) * 0x1.0p-53;
}

inline std::uint64_t hash_combine(std::uint64_t a, std::uint64_t b) {
    return mix64(a ^ mix64(b));
}

}  // namespace dacq
