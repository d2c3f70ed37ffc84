#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "funceq/transfer_operator.hpp"

namespace funceq {

/// An equation loaded from a sectioned key-value file:
///
///   [equation]
///   N = 2
///   f1 = x/2
///   f2 = (x+1)/2
///   g1 = 0.4
///   g2 = 0.4
///   g = 1
///   f1.breakpoints = 0.5      # optional, comma separated, ascending
///   M = 4096                  # optional, even, >= 16
///   C_hint = 0.8              # optional contraction bound
///
/// Blank lines and lines starting with '#' are ignored. Every fi/gi for
/// i = 1..N must be present. Malformed input throws SpecFileError carrying
/// the 1-based line number.
struct LoadedSpec {
  EquationSpec equation;
  std::optional<double> c_hint;
};

LoadedSpec parse_spec_text(std::string_view text);
LoadedSpec load_spec_file(const std::string& path);

}  // namespace funceq
