#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace katzldp {

/// Shortest decimal string that round-trips back to the same double.
/// Used for all CSV and manifest output so reruns are byte-identical.
std::string format_double(double v);

/// SplitMix64 finalizer; the building block of every seeded stream here.
std::uint64_t splitmix64(std::uint64_t x);

/// FNV-1a 64-bit over a byte range.
std::uint64_t fnv1a64(const void* data, std::size_t len);

/// FNV-1a 64-bit over a whole file. Throws std::runtime_error on IO failure.
std::uint64_t fnv1a64_file(const std::string& path);

/// Lower-case hex, zero-padded to 16 digits.
std::string to_hex(std::uint64_t v);

}  // namespace katzldp
