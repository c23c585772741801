#pragma once

#include "ggdd/field.hpp"

#include <optional>
#include <string>

namespace ggdd {

// FLD1 layout: ASCII header (FLD1, kind=, dims=, h=, bc=, flags=, space=, extent=), blank line,
// little-endian binary64 payload, component-major, x fastest within a component.
void write_field(const std::string& path, const Field& f);
Field read_field(const std::string& path, std::optional<Rank> expected = std::nullopt);

}  // namespace ggdd
