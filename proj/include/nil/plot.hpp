#pragma once

#include <stdexcept>
#include <string>

#include "nil/nil.hpp"

namespace nil {

struct DimensionError : std::runtime_error {
  explicit DimensionError(const std::string& what)
      : std::runtime_error(what) {}
};

// SVG visualization of a finished run over the certification box: the two
// sides and the accepted candidate sign-sampled on a 240x240 grid, sample
// points as dots, support vectors circled. A side whose variables are not
// all common has no direct 2-D membership test and gets no region layer
// (its projected sample dots still show). Requires exactly two common
// variables.
std::string plot_svg(const Problem& prob, const NilResult& r);

void write_plot_svg(const Problem& prob, const NilResult& r,
                    const std::string& path);

}  // namespace nil
