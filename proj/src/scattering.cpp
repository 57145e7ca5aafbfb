#include "wgqed/scattering.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <thread>

namespace wgqed {

namespace {

constexpr double kSingularRcond = 1e-14;
constexpr double kIllConditioned = 1e12;
constexpr double kDarkCoupling = 1e-12;

// Hermitian part of the coupling block (response without detuning).
ComplexMatrix coupling_block(const CouplingBundle& bundle)
{
    const ComplexMatrix k = bundle.X.transpose() + bundle.L.transpose() / bundle.z;
    return 0.5 * (k + k.adjoint());
}

// The LU condition estimate misses exact zero pivots, so take the pivot
// ratio into account as well.
double reciprocal_condition(const Eigen::PartialPivLU<ComplexMatrix>& lu)
{
    const Eigen::VectorXd pivots = lu.matrixLU().diagonal().cwiseAbs();
    const double largest = pivots.maxCoeff();
    const double ratio = largest > 0.0 ? pivots.minCoeff() / largest : 0.0;
    return std::min(lu.rcond(), ratio);
}

std::string describe(const ComplexVector& v)
{
    std::ostringstream out;
    out.precision(6);
    out << '(';
    for (Eigen::Index i = 0; i < v.size(); ++i) {
        if (i)
            out << ", ";
        out << v[i].real() << (v[i].imag() < 0 ? "-" : "+") << std::abs(v[i].imag()) << "i";
    }
    out << ')';
    return out.str();
}

} // namespace

ScatteringResult scatter(const EmitterModel& model, const WaveguideEnv& env, const LossModel& loss,
                         const ScatterInput& input, const ScatterOptions& options)
{
    validate(model);
    if (input.ground_index >= model.num_ground()) {
        throw Error(ErrorCode::IndexOutOfRange,
                    "input ground index " + std::to_string(input.ground_index));
    }
    if (!std::isfinite(input.photon_frequency))
        throw Error(ErrorCode::InvalidArgument, "photon frequency is not finite");

    const std::size_t ne = model.num_excited();
    const std::size_t ng = model.num_ground();
    const auto nei = static_cast<Eigen::Index>(ne);
    const std::size_t r = input.ground_index;

    const double e_int = model.ground_energies[r] + env.hbar * input.photon_frequency;
    const CouplingBundle bundle = coupling_bundle(model, env, loss, e_int);
    const ComplexMatrix response = options.form == ResponseForm::FieldOverlap
                                       ? response_matrix(bundle)
                                       : response_matrix_from_self_energy(bundle);

    // Absorption bookend d*_{r:} . E_in.
    const PolarizationVector e_in = env.field(input.direction);
    ComplexVector drive(nei);
    for (std::size_t y = 0; y < ne; ++y)
        drive[static_cast<Eigen::Index>(y)] = model.dipole(r, y).dot(e_in);

    ScatteringResult result;
    ComplexVector excitation = ComplexVector::Zero(nei);

    if (options.singular_mode == SingularMode::DarkStateProjection) {
        const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(coupling_block(bundle));
        const double threshold = kDarkCoupling * std::max(1.0, eig.eigenvalues().cwiseAbs().maxCoeff());
        std::vector<Eigen::Index> bright;
        for (Eigen::Index i = 0; i < nei; ++i) {
            if (eig.eigenvalues()[i] > threshold)
                bright.push_back(i);
        }
        result.projected_dark_states = ne - bright.size();
        if (!bright.empty()) {
            ComplexMatrix basis(nei, static_cast<Eigen::Index>(bright.size()));
            for (std::size_t j = 0; j < bright.size(); ++j)
                basis.col(static_cast<Eigen::Index>(j)) = eig.eigenvectors().col(bright[j]);
            const ComplexMatrix reduced = basis.adjoint() * response * basis;
            const Eigen::PartialPivLU<ComplexMatrix> lu(reduced);
            const double rcond = reciprocal_condition(lu);
            if (!(rcond > kSingularRcond) && !drive.isZero(0.0))
                throw Error(ErrorCode::SingularResponseMatrix, "projected response is still singular");
            result.condition_number = 1.0 / rcond;
            excitation = basis * lu.solve(basis.adjoint() * drive);
        }
    } else if (!drive.isZero(0.0)) {
        const Eigen::PartialPivLU<ComplexMatrix> lu(response);
        const double rcond = reciprocal_condition(lu);
        if (!(rcond > kSingularRcond)) {
            const Eigen::SelfAdjointEigenSolver<ComplexMatrix> eig(coupling_block(bundle));
            throw Error(ErrorCode::SingularResponseMatrix,
                        "excited combination " + describe(eig.eigenvectors().col(0)) +
                            " decouples from every channel on resonance");
        }
        result.condition_number = 1.0 / rcond;
        excitation = lu.solve(drive);
    }
    result.ill_conditioned = result.condition_number > kIllConditioned;

    result.amplitudes = ComplexMatrix::Zero(2, static_cast<Eigen::Index>(ng));
    for (int mode = 0; mode < 2; ++mode) {
        const Direction out_dir = mode == 0 ? Direction::Forward : Direction::Backward;
        const PolarizationVector e_out = env.field(out_dir);
        for (std::size_t k = 0; k < ng; ++k) {
            // Emission bookend E_m* . d_{k:}.
            Complex scattered = 0.0;
            for (std::size_t x = 0; x < ne; ++x)
                scattered += e_out.dot(model.dipole(k, x)) * excitation[static_cast<Eigen::Index>(x)];
            const Complex unscattered = (out_dir == input.direction && k == r) ? 1.0 : 0.0;
            result.amplitudes(mode, static_cast<Eigen::Index>(k)) = unscattered - scattered;
        }
    }

    result.p_loss = 1.0 - result.guided_probability();
    const ComplexMatrix lt = bundle.L.transpose() / bundle.z;
    const ComplexMatrix loss_block = 0.5 * (lt + lt.adjoint());
    result.p_loss_direct = 2.0 * (excitation.adjoint() * loss_block * excitation).value().real();

    result.output_frequencies.resize(ng);
    for (std::size_t k = 0; k < ng; ++k) {
        result.output_frequencies[k] =
            input.photon_frequency + (model.ground_energies[r] - model.ground_energies[k]) / env.hbar;
    }
    return result;
}

TwoLevelAmplitudes two_level_closed_form(const PolarizationVector& dipole, const WaveguideEnv& env,
                                         const LossModel& loss, double detuning)
{
    env.validate();
    loss.validate();
    const PolarizationVector ef = env.forward_field;
    const PolarizationVector eb = env.backward_field();

    const Complex emit_forward = ef.dot(dipole);  // E_f* . d
    const Complex emit_backward = eb.dot(dipole); // E_b* . d
    const Complex absorb = dipole.dot(ef);        // d* . E_f

    const Complex guided = kI * env.period * env.omega / (4.0 * std::abs(env.group_velocity)) *
                           (std::norm(emit_forward) + std::norm(emit_backward));
    const Tensor3 loss_conj = (kLossSelfEnergyWeight * loss.tensor).conjugate();
    const Complex lossy = (dipole.transpose() * loss_conj * dipole.conjugate()).value();
    const Complex gamma = (guided - lossy) / env.epsilon0;

    const Complex denominator = env.normalization() * (gamma - detuning);
    if (std::abs(denominator) == 0.0 || !std::isfinite(std::abs(denominator)))
        throw Error(ErrorCode::SingularDenominator, "two-level denominator N(Gamma - Delta) vanishes");

    TwoLevelAmplitudes out;
    out.t = 1.0 - emit_forward * absorb / denominator;
    out.r = -emit_backward * absorb / denominator;
    out.p_loss = 1.0 - std::norm(out.t) - std::norm(out.r);
    return out;
}

PolarizationVector polarization_from_angle(double theta)
{
    return PolarizationVector(std::cos(theta), kI * std::sin(theta), 0.0);
}

std::vector<SweepPoint> polarization_sweep(const EmitterModel& model, const WaveguideEnv& env_template,
                                           const LossModel& loss, const ScatterInput& input,
                                           const std::vector<double>& theta_grid,
                                           const ScatterOptions& options, unsigned threads)
{
    for (double theta : theta_grid) {
        if (!std::isfinite(theta) || theta < 0.0 || theta > M_PI)
            throw Error(ErrorCode::InvalidArgument, "theta grid must be finite and within [0, pi]");
    }

    std::vector<SweepPoint> points(theta_grid.size());
    auto evaluate = [&](std::size_t i) {
        SweepPoint& p = points[i];
        p.theta = theta_grid[i];
        WaveguideEnv env = env_template;
        env.forward_field = polarization_from_angle(p.theta);
        try {
            p.result = scatter(model, env, loss, input, options);
        } catch (const Error& e) {
            p.error = e.code();
            p.message = e.what();
        }
    };

    const unsigned workers =
        std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(theta_grid.size())));
    if (workers == 1) {
        for (std::size_t i = 0; i < points.size(); ++i)
            evaluate(i);
        return points;
    }

    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned w = 0; w < workers; ++w) {
        pool.emplace_back([&, w] {
            for (std::size_t i = w; i < points.size(); i += workers)
                evaluate(i);
        });
    }
    pool.clear();
    return points;
}

} // namespace wgqed
