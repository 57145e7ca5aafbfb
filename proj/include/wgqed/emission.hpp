#pragma once

#include <cstddef>
#include <vector>

#include "wgqed/emitter_model.hpp"
#include "wgqed/photonic_env.hpp"

namespace wgqed {

/// Reduced emitter state after tracing out the photons: the excited block
/// plus, for every ground state, the probability of having emitted into
/// each channel. Ground-manifold coherences are not tracked.
struct EmitterDensityMatrix {
    ComplexMatrix excited;
    /// Rows: ground state n. Columns: Channel::Forward, Backward, Loss.
    Eigen::MatrixXd ground_mode_probs;

    double excited_population() const { return excited.trace().real(); }
    double trace() const { return excited_population() + ground_mode_probs.sum(); }
    double channel_probability(Channel channel) const
    {
        return ground_mode_probs.col(static_cast<Eigen::Index>(channel)).sum();
    }
};

struct IntegratorSettings {
    /// <= 0 selects 20 / (slowest non-zero decay rate).
    double t_max = 0.0;
    double rtol = 1e-9;
    double atol = 1e-12;
    std::size_t output_points = 201;
    double residual_threshold = 1e-6;
};

struct ChannelTotals {
    double forward = 0.0;
    double backward = 0.0;
    double loss = 0.0;
    double residual_excited = 0.0;
};

struct EmissionTrajectory {
    std::vector<double> times;
    std::vector<EmitterDensityMatrix> states;
    ChannelTotals final_totals;
    /// Residual excited population fell below the configured threshold.
    bool settled = false;
};

/// Instantaneous photon emission rate into each channel for an excited block.
struct ChannelRates {
    double forward = 0.0;
    double backward = 0.0;
    double loss = 0.0;

    double total() const { return forward + backward + loss; }
    double guided_fraction() const { return (forward + backward) / total(); }
};

ChannelRates channel_rates(const CouplingBundle& bundle, const ComplexMatrix& excited);

/// Population decay rates of the excited manifold: eigenvalues of the
/// Hermitian decay generator, ascending.
Eigen::VectorXd decay_rates(const CouplingBundle& bundle);

/// Default horizon used when IntegratorSettings::t_max <= 0.
double default_t_max(const CouplingBundle& bundle);

EmissionTrajectory evolve(const EmitterModel& model, const WaveguideEnv& env, const LossModel& loss,
                          const ComplexMatrix& initial_excited, const IntegratorSettings& settings = {});

EmissionTrajectory evolve(const EmitterModel& model, const WaveguideEnv& env, const LossModel& loss,
                          const ExcitedSuperposition& initial, const IntegratorSettings& settings = {});

ChannelTotals directional_totals(const EmissionTrajectory& trajectory);

/// Total-variation distance between the (forward, backward, loss) outcome
/// distributions of two runs.
double outcome_distance(const EmissionTrajectory& a, const EmissionTrajectory& b);

} // namespace wgqed
