#ifndef ERGOLAB_SERIALIZATION_HPP
#define ERGOLAB_SERIALIZATION_HPP

#include "ergolab/algebra.hpp"

#include <filesystem>
#include <string>

namespace ergolab {

/// Document layout: {"dims": [...], "weights": [...], "blocks": [[[ [re,im],
/// ... ] row ] block ]}.  Doubles are emitted shortest-round-trip, so
/// serialize/parse is exact.
std::string element_to_json(const AlgebraElement& x, int indent = -1);
AlgebraElement element_from_json(const std::string& text);
AlgebraElement element_from_json_file(const std::filesystem::path& path);
void write_element_json_file(const std::filesystem::path& path, const AlgebraElement& x);

std::string algebra_to_json(const TracialAlgebra& algebra, int indent = -1);
AlgebraPtr algebra_from_json(const std::string& text);

/// Shortest round-trip decimal text for a double (CSV cell format).
std::string format_double(double v);

/// Write-temp-then-rename so readers never observe partial files.
void atomic_write_file(const std::filesystem::path& path, const std::string& contents);

}  // namespace ergolab

#endif  // ERGOLAB_SERIALIZATION_HPP
