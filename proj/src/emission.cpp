#include "wgqed/emission.hpp"

#include <cmath>
#include <string>

#include <boost/numeric/odeint.hpp>

#include "wgqed/error.hpp"
#include "wgqed/grid.hpp"

namespace wgqed {

namespace {

using State = std::vector<double>;

// Right-hand side of the emission master equation on the packed state
// [Re/Im of the excited block (column-major) | ground_mode_probs].
class EmissionGenerator {
public:
    EmissionGenerator(const CouplingBundle& bundle, const std::vector<double>& excited_energies)
        : ne_(bundle.Gamma.rows()), ng_(static_cast<Eigen::Index>(bundle.V.num_ground()))
    {
        const Complex ih = kI / bundle.hbar;
        ComplexMatrix h0 = ComplexMatrix::Zero(ne_, ne_);
        for (Eigen::Index m = 0; m < ne_; ++m)
            h0(m, m) = excited_energies[static_cast<std::size_t>(m)];
        // d rho/dt = B rho + rho B^dagger on the excited block.
        generator_ = ih * (bundle.Gamma.transpose() - h0);

        for (int c = 0; c < kNumChannels; ++c) {
            const CouplingArray& v = bundle.V_channel[static_cast<std::size_t>(c)];
            for (Eigen::Index n = 0; n < ng_; ++n) {
                ComplexMatrix feed(ne_, ne_);
                for (Eigen::Index x = 0; x < ne_; ++x) {
                    for (Eigen::Index y = 0; y < ne_; ++y) {
                        feed(x, y) = -ih * v(static_cast<std::size_t>(x), static_cast<std::size_t>(y),
                                             static_cast<std::size_t>(n), static_cast<std::size_t>(n));
                    }
                }
                feeds_.push_back(std::move(feed));
            }
        }
    }

    std::size_t state_size() const { return static_cast<std::size_t>(2 * ne_ * ne_ + kNumChannels * ng_); }

    State pack(const ComplexMatrix& excited) const
    {
        State s(state_size(), 0.0);
        for (Eigen::Index j = 0; j < ne_; ++j) {
            for (Eigen::Index i = 0; i < ne_; ++i) {
                const auto k = static_cast<std::size_t>(2 * (j * ne_ + i));
                s[k] = excited(i, j).real();
                s[k + 1] = excited(i, j).imag();
            }
        }
        return s;
    }

    EmitterDensityMatrix unpack(const State& s) const
    {
        EmitterDensityMatrix out;
        out.excited = excited_block(s);
        out.ground_mode_probs = Eigen::MatrixXd::Zero(ng_, kNumChannels);
        const auto offset = static_cast<std::size_t>(2 * ne_ * ne_);
        for (int c = 0; c < kNumChannels; ++c) {
            for (Eigen::Index n = 0; n < ng_; ++n)
                out.ground_mode_probs(n, c) = s[offset + static_cast<std::size_t>(c * ng_ + n)];
        }
        return out;
    }

    void operator()(const State& s, State& ds, double /*t*/) const
    {
        const ComplexMatrix rho = excited_block(s);
        const ComplexMatrix br = generator_ * rho;
        const ComplexMatrix drho = br + br.adjoint();
        for (Eigen::Index j = 0; j < ne_; ++j) {
            for (Eigen::Index i = 0; i < ne_; ++i) {
                const auto k = static_cast<std::size_t>(2 * (j * ne_ + i));
                ds[k] = drho(i, j).real();
                ds[k + 1] = drho(i, j).imag();
            }
        }
        const auto offset = static_cast<std::size_t>(2 * ne_ * ne_);
        for (std::size_t f = 0; f < feeds_.size(); ++f)
            ds[offset + f] = feeds_[f].cwiseProduct(rho).sum().real();
    }

private:
    ComplexMatrix excited_block(const State& s) const
    {
        ComplexMatrix rho(ne_, ne_);
        for (Eigen::Index j = 0; j < ne_; ++j) {
            for (Eigen::Index i = 0; i < ne_; ++i) {
                const auto k = static_cast<std::size_t>(2 * (j * ne_ + i));
                rho(i, j) = Complex(s[k], s[k + 1]);
            }
        }
        return rho;
    }

    Eigen::Index ne_;
    Eigen::Index ng_;
    ComplexMatrix generator_;
    // Indexed [channel * num_ground + n].
    std::vector<ComplexMatrix> feeds_;
};

double channel_rate(const CouplingArray& v, const ComplexMatrix& excited, double hbar)
{
    Complex rate = 0.0;
    for (std::size_t n = 0; n < v.num_ground(); ++n) {
        for (std::size_t x = 0; x < v.num_excited(); ++x) {
            for (std::size_t y = 0; y < v.num_excited(); ++y) {
                rate += -kI / hbar * v(x, y, n, n) *
                        excited(static_cast<Eigen::Index>(x), static_cast<Eigen::Index>(y));
            }
        }
    }
    return rate.real();
}

void check_initial(const ComplexMatrix& rho, std::size_t ne)
{
    const auto n = static_cast<Eigen::Index>(ne);
    if (rho.rows() != n || rho.cols() != n)
        throw Error(ErrorCode::DimensionMismatch, "initial excited block must be |excited| x |excited|");
    if (!rho.allFinite())
        throw Error(ErrorCode::NonFiniteEntry, "initial excited block has non-finite entries");
    if ((rho - rho.adjoint()).cwiseAbs().maxCoeff() > 1e-12)
        throw Error(ErrorCode::InvalidArgument, "initial excited block is not Hermitian");
    if (std::abs(rho.trace().real() - 1.0) > 1e-10)
        throw Error(ErrorCode::InvalidArgument, "initial excited block is not normalised");
}

} // namespace

ChannelRates channel_rates(const CouplingBundle& bundle, const ComplexMatrix& excited)
{
    ChannelRates rates;
    rates.forward = channel_rate(bundle.V_channel[0], excited, bundle.hbar);
    rates.backward = channel_rate(bundle.V_channel[1], excited, bundle.hbar);
    rates.loss = channel_rate(bundle.V_channel[2], excited, bundle.hbar);
    return rates;
}

Eigen::VectorXd decay_rates(const CouplingBundle& bundle)
{
    const ComplexMatrix a = bundle.Gamma.transpose();
    const ComplexMatrix generator = (-kI / bundle.hbar) * (a - a.adjoint());
    const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(generator, Eigen::EigenvaluesOnly);
    return eig.eigenvalues();
}

double default_t_max(const CouplingBundle& bundle)
{
    const Eigen::VectorXd rates = decay_rates(bundle);
    const double largest = rates.cwiseAbs().maxCoeff();
    const double floor = 1e-12 * std::max(1.0, largest);
    double slowest = 0.0;
    for (Eigen::Index i = 0; i < rates.size(); ++i) {
        if (rates[i] > floor && (slowest == 0.0 || rates[i] < slowest))
            slowest = rates[i];
    }
    return slowest > 0.0 ? 20.0 / slowest : 1.0;
}

EmissionTrajectory evolve(const EmitterModel& model, const WaveguideEnv& env, const LossModel& loss,
                          const ComplexMatrix& initial_excited, const IntegratorSettings& settings)
{
    validate(model);
    check_initial(initial_excited, model.num_excited());
    if (settings.output_points < 2)
        throw Error(ErrorCode::InvalidArgument, "at least two output points are required");
    if (!(settings.rtol > 0.0) || !(settings.atol > 0.0))
        throw Error(ErrorCode::InvalidArgument, "integrator tolerances must be positive");

    // Delta plays no role in the emission dynamics; anchor E_int on the first excited level.
    const CouplingBundle bundle =
        coupling_bundle(model, env, loss, model.excited_energies.front());
    const double t_max = settings.t_max > 0.0 ? settings.t_max : default_t_max(bundle);
    if (!std::isfinite(t_max))
        throw Error(ErrorCode::InvalidArgument, "t_max is not finite");

    const EmissionGenerator generator(bundle, model.excited_energies);
    State state = generator.pack(initial_excited);

    EmissionTrajectory trajectory;
    trajectory.times = linspace(0.0, t_max, settings.output_points);
    trajectory.states.reserve(trajectory.times.size());

    namespace odeint = boost::numeric::odeint;
    using Stepper = odeint::runge_kutta_dopri5<State>;
    auto observer = [&](const State& s, double) { trajectory.states.push_back(generator.unpack(s)); };
    try {
        odeint::integrate_times(odeint::make_dense_output(settings.atol, settings.rtol, Stepper()),
                                std::cref(generator), state, trajectory.times.begin(),
                                trajectory.times.end(), t_max / 1000.0, observer);
    } catch (const odeint::odeint_error& e) {
        throw Error(ErrorCode::ToleranceNotMet, std::string("integrator gave up: ") + e.what());
    }

    const double drift_limit = 10.0 * std::max(settings.rtol, settings.atol);
    for (std::size_t i = 0; i < trajectory.states.size(); ++i) {
        const double drift = std::abs(trajectory.states[i].trace() - 1.0);
        if (!(drift <= drift_limit)) {
            throw Error(ErrorCode::NonPhysicalState,
                        "trace drifted by " + std::to_string(drift) + " at t = " +
                            std::to_string(trajectory.times[i]));
        }
    }

    const EmitterDensityMatrix& last = trajectory.states.back();
    trajectory.final_totals.forward = last.channel_probability(Channel::Forward);
    trajectory.final_totals.backward = last.channel_probability(Channel::Backward);
    trajectory.final_totals.loss = last.channel_probability(Channel::Loss);
    trajectory.final_totals.residual_excited = last.excited_population();
    trajectory.settled = trajectory.final_totals.residual_excited < settings.residual_threshold;
    return trajectory;
}

EmissionTrajectory evolve(const EmitterModel& model, const WaveguideEnv& env, const LossModel& loss,
                          const ExcitedSuperposition& initial, const IntegratorSettings& settings)
{
    if (std::abs(initial.norm() - 1.0) > 1e-12)
        throw Error(ErrorCode::InvalidArgument, "initial superposition is not normalised");
    return evolve(model, env, loss, initial.density(), settings);
}

ChannelTotals directional_totals(const EmissionTrajectory& trajectory)
{
    if (trajectory.states.empty())
        throw Error(ErrorCode::InvalidArgument, "empty trajectory");
    return trajectory.final_totals;
}

double outcome_distance(const EmissionTrajectory& a, const EmissionTrajectory& b)
{
    const ChannelTotals ta = directional_totals(a);
    const ChannelTotals tb = directional_totals(b);
    return 0.5 * (std::abs(ta.forward - tb.forward) + std::abs(ta.backward - tb.backward) +
                  std::abs(ta.loss - tb.loss));
}

} // namespace wgqed
