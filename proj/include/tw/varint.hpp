#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>

#include "tw/error.hpp"

namespace tw::varint {

/// Unsigned LEB128: 7 bits per byte, least significant group first, high
/// bit set on every byte but the last.
inline void encode(std::uint64_t value, std::string& out)
{
    while (value >= 0x80) {
        out.push_back(static_cast<char>((value & 0x7F) | 0x80));
        value >>= 7;
    }
    out.push_back(static_cast<char>(value));
}

/// Decodes one value at `pos` and advances it. Throws on truncated or
/// over-long input.
inline std::uint64_t decode(std::span<const char> bytes, std::size_t& pos)
{
    std::uint64_t value = 0;
    for (int shift = 0; shift < 64; shift += 7) {
        if (pos >= bytes.size()) {
            throw Error("truncated varint");
        }
        auto byte = static_cast<std::uint8_t>(bytes[pos++]);
        value |= static_cast<std::uint64_t>(byte & 0x7F) << shift;
        if ((byte & 0x80) == 0) {
            return value;
        }
    }
    throw Error("varint longer than 10 bytes");
}

}  // namespace tw::varint
