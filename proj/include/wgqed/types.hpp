#pragma once

#include <complex>

#include <Eigen/Dense>

namespace wgqed {

using Complex = std::complex<double>;

/// Complex 3-vector in real space. Used for waveguide fields at the
/// emitter location and for transition dipoles alike.
using PolarizationVector = Eigen::Vector3cd;

/// Complex 3x3 dyadic, e.g. a Green's tensor at r = r'.
using Tensor3 = Eigen::Matrix3cd;

using ComplexMatrix = Eigen::MatrixXcd;
using ComplexVector = Eigen::VectorXcd;

inline constexpr Complex kI{0.0, 1.0};

/// Waveguide propagation direction of a single photon.
enum class Direction { Forward, Backward };

/// Where an emitted photon ends up: one of the two guided modes or the
/// non-guided (loss) continuum.
enum class Channel { Forward = 0, Backward = 1, Loss = 2 };

inline constexpr int kNumChannels = 3;

} // namespace wgqed
