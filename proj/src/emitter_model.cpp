#include "wgqed/emitter_model.hpp"

#include <cmath>
#include <string>

#include "wgqed/error.hpp"

namespace wgqed {

namespace {

bool finite(const PolarizationVector& v)
{
    for (int i = 0; i < 3; ++i) {
        if (!std::isfinite(v[i].real()) || !std::isfinite(v[i].imag()))
            return false;
    }
    return true;
}

} // namespace

void validate(const EmitterModel& model)
{
    if (model.ground_energies.empty())
        throw Error(ErrorCode::EmptyManifold, "emitter has no ground states");
    if (model.excited_energies.empty())
        throw Error(ErrorCode::EmptyManifold, "emitter has no excited states");

    if (model.dipoles.size() != model.num_ground()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "dipole matrix has " + std::to_string(model.dipoles.size()) +
                        " rows but " + std::to_string(model.num_ground()) +
                        " ground states are declared");
    }
    for (std::size_t n = 0; n < model.dipoles.size(); ++n) {
        if (model.dipoles[n].size() != model.num_excited()) {
            throw Error(ErrorCode::DimensionMismatch,
                        "dipole row " + std::to_string(n) + " has " +
                            std::to_string(model.dipoles[n].size()) + " entries but " +
                            std::to_string(model.num_excited()) +
                            " excited states are declared");
        }
    }

    for (double e : model.ground_energies) {
        if (!std::isfinite(e))
            throw Error(ErrorCode::NonFiniteEntry, "ground energy is not finite");
    }
    for (double e : model.excited_energies) {
        if (!std::isfinite(e))
            throw Error(ErrorCode::NonFiniteEntry, "excited energy is not finite");
    }
    for (std::size_t n = 0; n < model.num_ground(); ++n) {
        for (std::size_t m = 0; m < model.num_excited(); ++m) {
            if (!finite(model.dipoles[n][m])) {
                throw Error(ErrorCode::NonFiniteEntry,
                            "dipole d[" + std::to_string(n) + "][" + std::to_string(m) +
                                "] has a non-finite component");
            }
        }
    }
}

PolarizationVector effective_dipole(const EmitterModel& model, std::size_t ground_index,
                                    const ExcitedSuperposition& state)
{
    if (ground_index >= model.num_ground())
        throw Error(ErrorCode::IndexOutOfRange, "ground index " + std::to_string(ground_index));
    if (static_cast<std::size_t>(state.amplitudes.size()) != model.num_excited()) {
        throw Error(ErrorCode::DimensionMismatch,
                    "superposition length does not match the excited manifold");
    }

    PolarizationVector d = PolarizationVector::Zero();
    for (std::size_t m = 0; m < model.num_excited(); ++m)
        d += state.amplitudes[static_cast<Eigen::Index>(m)] * model.dipole(ground_index, m);
    return d;
}

bool is_unitary(const ComplexMatrix& u, double tolerance)
{
    if (u.rows() != u.cols())
        return false;
    const ComplexMatrix residual = u * u.adjoint() - ComplexMatrix::Identity(u.rows(), u.cols());
    return residual.cwiseAbs().maxCoeff() <= tolerance;
}

EmitterModel rotate_excited_basis(const EmitterModel& model, const ComplexMatrix& u)
{
    validate(model);
    const auto count = static_cast<Eigen::Index>(model.num_excited());
    if (u.rows() != count || u.cols() != count)
        throw Error(ErrorCode::DimensionMismatch, "rotation must be |excited| x |excited|");
    if (!is_unitary(u))
        throw Error(ErrorCode::NonUnitaryMatrix, "U U^dagger differs from identity by more than 1e-10");

    // The rotation only commutes with H0 when the manifold is degenerate.
    const double reference = model.excited_energies.front();
    for (double e : model.excited_energies) {
        if (std::abs(e - reference) > 1e-12 * std::max(1.0, std::abs(reference))) {
            throw Error(ErrorCode::NonDegenerateExcitedManifold,
                        "excited energies differ; basis rotation would not commute with H0");
        }
    }

    EmitterModel rotated = model;
    for (std::size_t n = 0; n < model.num_ground(); ++n) {
        for (Eigen::Index a = 0; a < count; ++a) {
            PolarizationVector d = PolarizationVector::Zero();
            for (Eigen::Index m = 0; m < count; ++m)
                d += u(a, m) * model.dipole(n, static_cast<std::size_t>(m));
            rotated.dipoles[n][static_cast<std::size_t>(a)] = d;
        }
    }
    return rotated;
}

} // namespace wgqed
