#pragma once

#include <stdexcept>
#include <string>

namespace shrinkflow {

/// Requested shrinker geometry is not one of the supported round cases.
struct UnsupportedGeometryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Radial graph has non-positive radius somewhere (r = R + u <= 0).
struct DegenerateGraphError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// An estimate needs eigenvalues beyond the resolved cutoff.
struct InsufficientSpectrumError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Time stepper rejected a step repeatedly (excess kept increasing).
struct StiffnessError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Grid/mode-vector size mismatch between operands.
struct DimensionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

}  // namespace shrinkflow
