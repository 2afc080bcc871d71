#pragma once

#include <filesystem>
#include <string>

#include "tiermem/memory.hpp"

namespace tiermem {

// Serialize to the versioned snapshot JSON document: UTF-8, keys in stable
// (lexicographic) order, arrays preserving tier order, embeddings as
// fixed-length number arrays. The output is byte-deterministic for equal
// snapshots, which the golden-file tests rely on.
std::string save_snapshot(const MemorySnapshot& memory);

// Inverse of save_snapshot. Rejects unknown future format versions
// (Errc::unsupported_version) and anything structurally invalid
// (Errc::corrupt_snapshot).
MemorySnapshot load_snapshot(const std::string& bytes);

void save_snapshot_file(const MemorySnapshot& memory, const std::filesystem::path& path);
MemorySnapshot load_snapshot_file(const std::filesystem::path& path);

}  // namespace tiermem
