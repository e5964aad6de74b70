#pragma once

#include <map>
#include <string>

#include "frachelm/grid.hpp"

namespace frachelm {

using Metadata = std::map<std::string, std::string>;

/// Binary layout (little endian): "FHF1", uint32 n0, n1, n2, float64 L,
/// then n0*n1*n2 interleaved (re, im) float64 pairs, z index fastest.
void write_field(const std::string& path, const ComplexField& field);
ComplexField read_field(const std::string& path);

/// Sidecar `key = value` text written next to a field file.
void write_metadata(const std::string& path, const Metadata& meta);
Metadata read_metadata(const std::string& path);

/// Writes to `path.tmp` then renames, so readers never see partial files.
void write_text_atomic(const std::string& path, const std::string& contents);

std::uint64_t fnv1a(const void* data, std::size_t size, std::uint64_t seed = 0xcbf29ce484222325ULL);
std::uint64_t file_digest(const std::string& path);
std::string hex_digest(std::uint64_t value);

}  // namespace frachelm
