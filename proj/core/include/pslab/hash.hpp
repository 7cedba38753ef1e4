#pragma once

#include <cstdint>
#include <string_view>

namespace pslab {

// Platform-stable FNV-1a, used for structural hashes that appear in trace
// output and as unordered-map keys during exploration.
class Fnv {
public:
    void feed(std::string_view s) {
        for (unsigned char c : s) feed_byte(c);
    }
    void feed(std::uint64_t v) {
        for (int i = 0; i < 8; ++i) feed_byte(static_cast<unsigned char>(v >> (8 * i)));
    }
    void feed_byte(unsigned char c) {
        h_ ^= c;
        h_ *= 1099511628211ull;
    }
    std::uint64_t value() const { return h_; }

private:
    std::uint64_t h_ = 1469598103934665603ull;
};

} // namespace pslab
