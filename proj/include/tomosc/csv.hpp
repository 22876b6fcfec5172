#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <utility>
#include <vector>

#include "tomosc/phasespace.hpp"
#include "tomosc/states.hpp"
#include "tomosc/tomography.hpp"

namespace tomosc::io {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// Fixed 17-significant-digit decimal rendering (round-trips doubles).
std::string format_full(double v);

/// CSV bodies: '#'-prefixed metadata lines, a column-header row, then data.
/// UTF-8, LF line endings, deterministic byte-for-byte output.
std::string wavefunction_csv(const states::WaveFunctionGrid& psi, const Metadata& meta);
std::string wigner_csv(const phasespace::WignerGrid& w, const Metadata& meta);
std::string tomogram_csv(const tomography::TomogramSlice& slice, const Metadata& meta);

/// Write via a temporary file and rename, so readers never observe a partial file.
void atomic_write(const std::filesystem::path& path, const std::string& content);

/// FNV-1a 64-bit checksum.
std::uint64_t fnv1a64(const std::string& bytes);
std::uint64_t fnv1a64_file(const std::filesystem::path& path);

}  // namespace tomosc::io
