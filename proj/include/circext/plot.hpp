#pragma once

#include <filesystem>
#include <string>

#include "circext/threshold.hpp"

namespace circext::plot {

/// Standalone SVG 1.1 line chart of lhs and rhs against eps with every
/// crossing marked. Throws DomainError on an empty or ragged curve.
std::string render_svg(const threshold::ThresholdCurve& curve);

/// render_svg written to `path`; IoError when the file cannot be written.
void emit_plot(const threshold::ThresholdCurve& curve, const std::filesystem::path& path);

}  // namespace circext::plot
