#include "wgqed/photonic_env.hpp"

#include <cmath>
#include <string>

#include "wgqed/error.hpp"

namespace wgqed {

double WaveguideEnv::density_factor() const
{
    return period * omega / (2.0 * std::abs(group_velocity));
}

Complex WaveguideEnv::normalization() const
{
    return 2.0 * std::abs(group_velocity) * epsilon0 / (kI * period * omega);
}

void WaveguideEnv::validate() const
{
    auto require = [](bool ok, const char* what) {
        if (!ok)
            throw Error(ErrorCode::InvalidEnvironment, what);
    };
    require(std::isfinite(period) && period > 0.0, "waveguide period must be positive");
    require(std::isfinite(group_velocity) && group_velocity != 0.0,
            "group velocity must be finite and non-zero");
    require(std::isfinite(omega) && omega > 0.0, "omega must be positive");
    require(std::isfinite(epsilon0) && epsilon0 > 0.0, "epsilon0 must be positive");
    require(std::isfinite(hbar) && hbar > 0.0, "hbar must be positive");
    for (int i = 0; i < 3; ++i) {
        require(std::isfinite(forward_field[i].real()) && std::isfinite(forward_field[i].imag()),
                "forward field has a non-finite component");
    }
}

LossModel LossModel::isotropic(double strength)
{
    if (!std::isfinite(strength) || strength < 0.0)
        throw Error(ErrorCode::NonPassiveLoss, "isotropic loss strength must be >= 0");
    LossModel loss;
    loss.tensor = kI * strength * Tensor3::Identity();
    return loss;
}

namespace {

// Hermitian form whose expectation value on conj(d) is the channel decay rate.
Eigen::Matrix3cd rate_form(const Tensor3& self_energy)
{
    return (-kI * (self_energy - self_energy.adjoint())).transpose();
}

} // namespace

double LossModel::decay_rate(const PolarizationVector& dipole) const
{
    const PolarizationVector dc = dipole.conjugate();
    return (dc.adjoint() * rate_form(kLossSelfEnergyWeight * tensor) * dc).value().real();
}

void LossModel::validate() const
{
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            if (!std::isfinite(tensor(i, j).real()) || !std::isfinite(tensor(i, j).imag()))
                throw Error(ErrorCode::NonFiniteEntry, "loss tensor has a non-finite entry");
        }
    }
    const Eigen::SelfAdjointEigenSolver<Eigen::Matrix3cd> solver(
        rate_form(kLossSelfEnergyWeight * tensor), Eigen::EigenvaluesOnly);
    const double scale = std::max(1.0, tensor.cwiseAbs().maxCoeff());
    if (solver.eigenvalues().minCoeff() < -1e-12 * scale) {
        throw Error(ErrorCode::NonPassiveLoss,
                    "loss tensor amplifies some dipole (min rate " +
                        std::to_string(solver.eigenvalues().minCoeff()) + ")");
    }
}

Tensor3 GreensDecomposition::self_energy(Channel channel) const
{
    switch (channel) {
    case Channel::Forward: return forward;
    case Channel::Backward: return backward;
    case Channel::Loss: return kLossSelfEnergyWeight * loss;
    }
    return Tensor3::Zero();
}

Tensor3 GreensDecomposition::self_energy() const
{
    return forward + backward + kLossSelfEnergyWeight * loss;
}

GreensDecomposition greens_decomposition(const WaveguideEnv& env, const LossModel& loss)
{
    env.validate();
    loss.validate();
    const Complex prefactor =
        kI * env.period * env.omega / (4.0 * std::abs(env.group_velocity));
    const PolarizationVector ef = env.forward_field;
    const PolarizationVector eb = env.backward_field();

    GreensDecomposition g;
    g.forward = prefactor * (ef * ef.adjoint());
    g.backward = prefactor * (eb * eb.adjoint());
    g.loss = loss.tensor;
    return g;
}

CouplingArray decay_coefficients(const EmitterModel& model, const Tensor3& green, double epsilon0)
{
    const std::size_t ne = model.num_excited();
    const std::size_t ng = model.num_ground();
    const Tensor3 gc = green.conjugate();

    // gd[m][y] = G* . d*_{my}
    std::vector<std::vector<PolarizationVector>> gd(ng, std::vector<PolarizationVector>(ne));
    for (std::size_t m = 0; m < ng; ++m) {
        for (std::size_t y = 0; y < ne; ++y)
            gd[m][y] = gc * model.dipole(m, y).conjugate();
    }

    CouplingArray w(ne, ng);
    for (std::size_t x = 0; x < ne; ++x) {
        for (std::size_t y = 0; y < ne; ++y) {
            for (std::size_t n = 0; n < ng; ++n) {
                for (std::size_t m = 0; m < ng; ++m) {
                    const Complex sandwich = (model.dipole(n, x).transpose() * gd[m][y]).value();
                    w(x, y, n, m) = -sandwich / epsilon0;
                }
            }
        }
    }
    return w;
}

CouplingArray emission_coefficients(const CouplingArray& w)
{
    const std::size_t ne = w.num_excited();
    const std::size_t ng = w.num_ground();
    CouplingArray v(ne, ng);
    for (std::size_t x = 0; x < ne; ++x) {
        for (std::size_t y = 0; y < ne; ++y) {
            for (std::size_t n = 0; n < ng; ++n) {
                for (std::size_t m = 0; m < ng; ++m)
                    v(x, y, n, m) = w(x, y, n, m) - std::conj(w(y, x, m, n));
            }
        }
    }
    return v;
}

CouplingBundle coupling_bundle(const EmitterModel& model, const WaveguideEnv& env,
                               const LossModel& loss, double interaction_energy)
{
    validate(model);
    const GreensDecomposition green = greens_decomposition(env, loss);

    const std::size_t ne = model.num_excited();
    const std::size_t ng = model.num_ground();
    const auto nei = static_cast<Eigen::Index>(ne);

    CouplingBundle b;
    b.epsilon0 = env.epsilon0;
    b.hbar = env.hbar;
    b.z = env.density_factor();
    b.N = env.normalization();

    b.W = decay_coefficients(model, green.self_energy(), env.epsilon0);
    b.V = emission_coefficients(b.W);
    for (int c = 0; c < kNumChannels; ++c) {
        const auto channel = static_cast<Channel>(c);
        b.V_channel[static_cast<std::size_t>(c)] =
            emission_coefficients(decay_coefficients(model, green.self_energy(channel), env.epsilon0));
    }

    b.Gamma = ComplexMatrix::Zero(nei, nei);
    for (std::size_t x = 0; x < ne; ++x) {
        for (std::size_t y = 0; y < ne; ++y) {
            Complex sum = 0.0;
            for (std::size_t n = 0; n < ng; ++n)
                sum += b.W(x, y, n, n);
            b.Gamma(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = sum;
        }
    }

    b.Delta = Eigen::MatrixXd::Zero(nei, nei);
    for (Eigen::Index m = 0; m < nei; ++m)
        b.Delta(m, m) = model.excited_energies[static_cast<std::size_t>(m)] - interaction_energy;

    const PolarizationVector ef = env.forward_field;
    const PolarizationVector eb = env.backward_field();
    const Tensor3 guided = ef.conjugate() * ef.transpose() + eb.conjugate() * eb.transpose();
    const Tensor3 loss_conj = green.self_energy(Channel::Loss).conjugate();

    b.X = ComplexMatrix::Zero(nei, nei);
    b.L = ComplexMatrix::Zero(nei, nei);
    for (std::size_t x = 0; x < ne; ++x) {
        for (std::size_t y = 0; y < ne; ++y) {
            Complex xs = 0.0;
            Complex ls = 0.0;
            for (std::size_t n = 0; n < ng; ++n) {
                const PolarizationVector& dx = model.dipole(n, x);
                const PolarizationVector dyc = model.dipole(n, y).conjugate();
                xs += 0.5 * (dx.transpose() * guided * dyc).value();
                ls += kI * (dx.transpose() * loss_conj * dyc).value();
            }
            b.X(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = xs;
            b.L(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y)) = ls;
        }
    }
    return b;
}

ComplexMatrix response_matrix(const CouplingBundle& bundle)
{
    return bundle.X.transpose() + bundle.L.transpose() / bundle.z +
           kI * bundle.epsilon0 * bundle.Delta.cast<Complex>() / bundle.z;
}

ComplexMatrix response_matrix_from_self_energy(const CouplingBundle& bundle)
{
    return bundle.N * (bundle.Gamma.transpose() - bundle.Delta.cast<Complex>());
}

} // namespace wgqed
