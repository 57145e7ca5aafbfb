#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "wgqed/emitter_model.hpp"
#include "wgqed/error.hpp"
#include "wgqed/grid.hpp"
#include "wgqed/photonic_env.hpp"

namespace wgqed {

/// Incident photon: travelling in `direction`, emitter starting in ground
/// `ground_index`, E_int = E_{g_r} + hbar * photon_frequency.
struct ScatterInput {
    Direction direction = Direction::Forward;
    std::size_t ground_index = 0;
    double photon_frequency = 1.0;
};

/// What to do when the response matrix is exactly singular (a dark excited
/// combination on resonance with no loss).
enum class SingularMode {
    Raise,
    /// Drop excited combinations whose total coupling is below 1e-12 and
    /// solve in the remaining space.
    DarkStateProjection,
};

enum class ResponseForm {
    /// X^T + L^T/z + i epsilon0 Delta/z.
    FieldOverlap,
    /// N (Gamma^T - Delta); algebraically identical, kept as a cross-check.
    SelfEnergy,
};

struct ScatterOptions {
    SingularMode singular_mode = SingularMode::Raise;
    ResponseForm form = ResponseForm::FieldOverlap;
};

struct ScatteringResult {
    /// Row 0 forward, row 1 backward; column k is the final ground state.
    ComplexMatrix amplitudes;
    /// 1 - sum |gamma|^2.
    double p_loss = 0.0;
    /// Loss probability evaluated from the loss block of the response,
    /// independent of the amplitudes.
    double p_loss_direct = 0.0;
    /// omega_k = omega_f + (E_{g_r} - E_{g_k}) / hbar.
    std::vector<double> output_frequencies;
    double condition_number = 1.0;
    bool ill_conditioned = false;
    /// Number of excited combinations removed by dark-state projection.
    std::size_t projected_dark_states = 0;

    Complex amplitude(Direction mode, std::size_t ground) const
    {
        return amplitudes(mode == Direction::Forward ? 0 : 1, static_cast<Eigen::Index>(ground));
    }
    double guided_probability() const { return amplitudes.cwiseAbs2().sum(); }
};

ScatteringResult scatter(const EmitterModel& model, const WaveguideEnv& env, const LossModel& loss,
                         const ScatterInput& input, const ScatterOptions& options = {});

struct TwoLevelAmplitudes {
    Complex t;
    Complex r;
    double p_loss = 0.0;
};

/// Closed-form single-transition result for a forward-incident photon;
/// `detuning` is E_e - E_int.
TwoLevelAmplitudes two_level_closed_form(const PolarizationVector& dipole, const WaveguideEnv& env,
                                         const LossModel& loss, double detuning);

/// E_f = (cos theta, i sin theta, 0).
PolarizationVector polarization_from_angle(double theta);

struct SweepPoint {
    double theta = 0.0;
    std::optional<ScatteringResult> result;
    std::optional<ErrorCode> error;
    std::string message;
};

/// One scatter() per theta with E_f = (cos theta, i sin theta, 0). Errors are
/// recorded per point; the output order follows theta_grid regardless of
/// `threads`.
std::vector<SweepPoint> polarization_sweep(const EmitterModel& model, const WaveguideEnv& env_template,
                                           const LossModel& loss, const ScatterInput& input,
                                           const std::vector<double>& theta_grid,
                                           const ScatterOptions& options = {}, unsigned threads = 1);

} // namespace wgqed
