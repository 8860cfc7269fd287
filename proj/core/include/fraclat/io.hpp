#pragma once

#include <filesystem>
#include <string>

#include "fraclat/lattice.hpp"
#include "fraclat/spectral.hpp"

namespace fraclat::io {

/// Writes `text` to a temporary file next to `path` and renames it into place.
void write_atomic(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

/// `path` with its extension replaced by ".json".
std::filesystem::path sidecar_path(const std::filesystem::path& path);

/// "x1,...,xd,value" rows for nonzero sites, %.17g.
std::string field_csv(const Field& u);
/// Field CSV plus the {d, L, boundary} sidecar.
void write_field(const std::filesystem::path& path, const Field& u);
/// Geometry from the sidecar.
Field read_field(const std::filesystem::path& path);
/// Geometry supplied by the caller; rows outside the box are rejected.
Field read_field(const std::filesystem::path& path, const LatticeGeometry& geom);
Field parse_field_csv(const std::string& text, const LatticeGeometry& geom);

std::string kernel_csv(const Kernel& K);
/// Kernel CSV plus the {alpha, d, R, M, tail_bound, doubling_error} sidecar.
void write_kernel(const std::filesystem::path& path, const Kernel& K);

std::string format_double(double v);

}  // namespace fraclat::io
