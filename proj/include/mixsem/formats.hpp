#pragma once

// Text formats: TNSR1 (any-rank tensor) and DMAT1 (square matrix).

#include <filesystem>
#include <iosfwd>
#include <string>

#include "mixsem/tensor.hpp"

namespace mixsem::io {

/// Shortest decimal that round-trips a double.
std::string format_double(double v);

void write_tensor(std::ostream& os, const RealTensor& t);
RealTensor read_tensor(std::istream& is);
void save_tensor(const std::filesystem::path& path, const RealTensor& t);
RealTensor load_tensor(const std::filesystem::path& path);

void write_dmat(std::ostream& os, const RealTensor& m);
RealTensor read_dmat(std::istream& is);
void save_dmat(const std::filesystem::path& path, const RealTensor& m);
RealTensor load_dmat(const std::filesystem::path& path);

/// Loads either format, choosing by the magic word on the first line.
RealTensor load_any(const std::filesystem::path& path);

}  // namespace mixsem::io
