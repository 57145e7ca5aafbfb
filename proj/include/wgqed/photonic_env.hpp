#pragma once

#include <array>
#include <cstddef>
#include <vector>

#include "wgqed/emitter_model.hpp"
#include "wgqed/types.hpp"

namespace wgqed {

/// Single-mode waveguide seen from the emitter location. Defaults are the
/// simple units used throughout: a = omega = epsilon0 = hbar = 1, v_g = 0.1.
struct WaveguideEnv {
    PolarizationVector forward_field = PolarizationVector(1.0, 0.0, 0.0);
    double period = 1.0;
    double group_velocity = 0.1;
    double omega = 1.0;
    double epsilon0 = 1.0;
    double hbar = 1.0;

    /// The backward Bloch mode is the time reverse of the forward one.
    PolarizationVector backward_field() const { return forward_field.conjugate(); }

    PolarizationVector field(Direction direction) const
    {
        return direction == Direction::Forward ? forward_field : backward_field();
    }

    /// Density-of-states factor z = a omega / (2 |v_g|).
    double density_factor() const;

    /// N = 2 |v_g| epsilon0 / (i a omega).
    Complex normalization() const;

    void validate() const;
};

/// Non-guided contribution to the Green's tensor.
///
/// Loss tensors are rate-normalised: for a unit dipole, d . G_loss . d* = i s
/// means the loss channel alone empties the excited state at rate s. The
/// guided part, built from the mode fields, is amplitude-normalised and
/// decays populations at twice its sandwich value. The loss tensor therefore
/// enters the emitter self-energy with weight kLossSelfEnergyWeight.
struct LossModel {
    Tensor3 tensor = Tensor3::Zero();

    static LossModel none() { return {}; }
    /// G_loss = i * strength * identity: dipole-independent loss.
    static LossModel isotropic(double strength);

    /// Population decay rate the loss channel induces on a dipole.
    double decay_rate(const PolarizationVector& dipole) const;

    /// Throws NonPassiveLoss when some dipole would gain population.
    void validate() const;
};

inline constexpr double kLossSelfEnergyWeight = 0.5;

/// G(r, r, omega) = G_f + G_b + G_loss at the emitter location.
struct GreensDecomposition {
    Tensor3 forward;
    Tensor3 backward;
    Tensor3 loss;

    Tensor3 total() const { return forward + backward + loss; }

    /// Part of the tensor that enters the self-energy for one channel.
    Tensor3 self_energy(Channel channel) const;
    Tensor3 self_energy() const;
};

GreensDecomposition greens_decomposition(const WaveguideEnv& env, const LossModel& loss);

/// Dense four-index array A(x, y, n, m): x, y excited, n, m ground.
class CouplingArray {
public:
    CouplingArray() = default;
    CouplingArray(std::size_t excited, std::size_t ground)
        : excited_(excited), ground_(ground), data_(excited * excited * ground * ground)
    {
    }

    Complex& operator()(std::size_t x, std::size_t y, std::size_t n, std::size_t m)
    {
        return data_[index(x, y, n, m)];
    }
    const Complex& operator()(std::size_t x, std::size_t y, std::size_t n, std::size_t m) const
    {
        return data_[index(x, y, n, m)];
    }

    std::size_t num_excited() const noexcept { return excited_; }
    std::size_t num_ground() const noexcept { return ground_; }

private:
    std::size_t index(std::size_t x, std::size_t y, std::size_t n, std::size_t m) const
    {
        return ((x * excited_ + y) * ground_ + n) * ground_ + m;
    }

    std::size_t excited_ = 0;
    std::size_t ground_ = 0;
    std::vector<Complex> data_;
};

/// Everything the solvers need, assembled once per (model, environment,
/// loss, E_int). Sandwiches are evaluated exactly as d_{nx} . G* . d*_{my}
/// (left dipole unconjugated, right dipole conjugated).
struct CouplingBundle {
    CouplingArray W;
    ComplexMatrix Gamma;
    CouplingArray V;
    /// V built from one channel's part of the Green's tensor.
    std::array<CouplingArray, kNumChannels> V_channel;
    Eigen::MatrixXd Delta;
    ComplexMatrix X;
    ComplexMatrix L;
    Complex N;
    double z = 0.0;
    double epsilon0 = 1.0;
    double hbar = 1.0;
};

/// W(x, y, n, m) = -d_{nx} . G* . d*_{my} / epsilon0 for an arbitrary tensor.
CouplingArray decay_coefficients(const EmitterModel& model, const Tensor3& green, double epsilon0);

/// V(x, y, n, m) = W(x, y, n, m) - conj(W(y, x, m, n)).
CouplingArray emission_coefficients(const CouplingArray& w);

CouplingBundle coupling_bundle(const EmitterModel& model, const WaveguideEnv& env,
                               const LossModel& loss, double interaction_energy);

/// Scattering response X^T + L^T / z + i epsilon0 Delta / z.
///
/// The Green's-function sandwiches produce Gamma, X and L with the excited
/// indices in the order (emitting state, absorbing state); the resolvent of
/// the scattering series needs the opposite order, hence the transposes.
ComplexMatrix response_matrix(const CouplingBundle& bundle);

/// The same response built from the self-energy: N (Gamma^T - Delta).
ComplexMatrix response_matrix_from_self_energy(const CouplingBundle& bundle);

} // namespace wgqed
