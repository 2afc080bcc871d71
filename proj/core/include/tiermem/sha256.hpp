#pragma once

#include <string>
#include <string_view>

namespace tiermem {

// SHA-256 of the input bytes, lowercase hex. Used for config digests.
std::string sha256_hex(std::string_view data);

}  // namespace tiermem
