#pragma once

#include <cstddef>
#include <vector>

#include "wgqed/types.hpp"

namespace wgqed {

/// Non-cascaded emitter: every allowed transition joins a ground state to an
/// excited state. `dipoles[n][m]` is the transition dipole between ground n
/// and excited m; forbidden transitions are zero vectors.
struct EmitterModel {
    std::vector<double> ground_energies;
    std::vector<double> excited_energies;
    std::vector<std::vector<PolarizationVector>> dipoles;

    std::size_t num_ground() const noexcept { return ground_energies.size(); }
    std::size_t num_excited() const noexcept { return excited_energies.size(); }

    const PolarizationVector& dipole(std::size_t ground, std::size_t excited) const
    {
        return dipoles[ground][excited];
    }
};

/// Normalised excited-manifold state alpha|e1> + beta|e2> + ...
struct ExcitedSuperposition {
    ComplexVector amplitudes;

    double norm() const { return amplitudes.norm(); }
    /// Density matrix |psi><psi| restricted to the excited block.
    ComplexMatrix density() const { return amplitudes * amplitudes.adjoint(); }
};

/// Throws Error with DimensionMismatch, EmptyManifold or NonFiniteEntry
/// naming the first violated invariant.
void validate(const EmitterModel& model);

/// Dipole radiated by the decay of `state` into ground `ground_index`:
/// sum_m amplitude_m d_{n,m}.
PolarizationVector effective_dipole(const EmitterModel& model, std::size_t ground_index,
                                    const ExcitedSuperposition& state);

bool is_unitary(const ComplexMatrix& u, double tolerance = 1e-10);

/// Re-expresses a degenerate excited manifold in the basis |e_a> = sum_m U_am |e_m>.
/// Dipoles follow the same rotation, d_{n,a} = sum_m U_am d_{n,m}.
EmitterModel rotate_excited_basis(const EmitterModel& model, const ComplexMatrix& u);

} // namespace wgqed
