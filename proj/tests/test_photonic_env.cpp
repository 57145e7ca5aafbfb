#include "doctest.h"

#include <cmath>

#include "test_support.hpp"
#include "wgqed/emission.hpp"
#include "wgqed/error.hpp"
#include "wgqed/photonic_env.hpp"

using namespace wgqed;
using namespace wgqed::testing;

namespace {

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

} // namespace

TEST_CASE("environment scalars in simple units")
{
    const WaveguideEnv env;
    CHECK(env.density_factor() == doctest::Approx(5.0).epsilon(1e-15));
    const Complex n = env.normalization();
    CHECK(std::abs(n - Complex(0.0, -0.2)) < 1e-15);
    CHECK((env.backward_field() - env.forward_field.conjugate()).norm() == 0.0);
}

TEST_CASE("environment validation")
{
    WaveguideEnv env;
    env.group_velocity = 0.0;
    CHECK_THROWS_AS(env.validate(), Error);
    env = WaveguideEnv{};
    env.forward_field = vec(std::nan(""), 0);
    CHECK_THROWS_AS(env.validate(), Error);
}

TEST_CASE("Green's tensor decomposition")
{
    SUBCASE("matched linear field")
    {
        const GreensDecomposition g = greens_decomposition(WaveguideEnv{}, LossModel::none());
        CHECK(std::abs(g.total()(0, 0) - Complex(0.0, 5.0)) < 1e-15);
        CHECK(std::abs(g.forward(0, 0) - Complex(0.0, 2.5)) < 1e-15);
        CHECK(std::abs(g.backward(0, 0) - Complex(0.0, 2.5)) < 1e-15);
        CHECK(max_abs(g.loss) == 0.0);
    }

    SUBCASE("zero field and isotropic loss")
    {
        const GreensDecomposition g =
            greens_decomposition(env_with(vec(0, 0)), LossModel::isotropic(0.2));
        CHECK(max_abs(g.forward + g.backward) == 0.0);
        CHECK(max_abs(g.loss - Complex(0.0, 0.2) * Tensor3::Identity()) < 1e-15);
    }

    SUBCASE("backward part is the conjugate of the forward part")
    {
        Random rng(21);
        for (int trial = 0; trial < 50; ++trial) {
            const GreensDecomposition g =
                greens_decomposition(env_with(rng.unit_field()), LossModel::none());
            CHECK(max_abs(g.backward + g.forward.conjugate()) < 1e-14);
            CHECK(max_abs(g.forward + g.forward.adjoint()) < 1e-14);
        }
    }
}

TEST_CASE("loss model")
{
    const PolarizationVector d = vec(1, Complex(0, 1)) / std::sqrt(2.0);
    CHECK(LossModel::isotropic(0.2).decay_rate(d) == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(LossModel::none().decay_rate(d) == 0.0);
    CHECK_NOTHROW(LossModel::isotropic(0.003).validate());

    LossModel gain;
    gain.tensor = Complex(0.0, -0.1) * Tensor3::Identity();
    try {
        gain.validate();
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NonPassiveLoss);
    }
}

TEST_CASE("coupling bundle invariants on random models")
{
    Random rng(22);
    for (int trial = 0; trial < 200; ++trial) {
        const EmitterModel m = rng.model(3, 3);
        const LossModel loss = LossModel::isotropic(rng.uniform(0.0, 0.5));
        const double e_int = rng.uniform(0.5, 1.5);
        const CouplingBundle b = coupling_bundle(m, env_with(rng.unit_field()), loss, e_int);
        const std::size_t ne = m.num_excited();
        const std::size_t ng = m.num_ground();

        for (std::size_t x = 0; x < ne; ++x) {
            for (std::size_t y = 0; y < ne; ++y) {
                Complex sum = 0.0;
                for (std::size_t n = 0; n < ng; ++n)
                    sum += b.W(x, y, n, n);
                const auto xi = static_cast<Eigen::Index>(x);
                const auto yi = static_cast<Eigen::Index>(y);
                CHECK(std::abs(b.Gamma(xi, yi) - sum) < 1e-13);
                for (std::size_t n = 0; n < ng; ++n) {
                    for (std::size_t k = 0; k < ng; ++k) {
                        const Complex expected = b.W(x, y, n, k) - std::conj(b.W(y, x, k, n));
                        CHECK(std::abs(b.V(x, y, n, k) - expected) < 1e-13);
                        Complex channels = 0.0;
                        for (const CouplingArray& vc : b.V_channel)
                            channels += vc(x, y, n, k);
                        CHECK(std::abs(b.V(x, y, n, k) - channels) < 1e-12);
                    }
                }
                const double delta = x == y ? m.excited_energies[x] - e_int : 0.0;
                CHECK(b.Delta(xi, yi) == delta);
            }
        }

        // Self-energy and field-overlap blocks describe the same coupling.
        const ComplexMatrix from_overlaps = kI * (b.z * b.X + b.L) / b.epsilon0;
        CHECK(max_abs(b.Gamma - from_overlaps) < 1e-12 * std::max(1.0, max_abs(b.Gamma)));
        CHECK(max_abs(response_matrix(b) - response_matrix_from_self_energy(b)) < 1e-12);
    }
}

TEST_CASE("paradox field couples the V system with a 4:1 ratio")
{
    const CouplingBundle b = coupling_bundle(v_system(), env_with(paradox_field()), LossModel::none(), 1.0);
    CHECK(std::abs(b.Gamma(0, 0) - Complex(0.0, 4.0)) < 1e-14);
    CHECK(std::abs(b.Gamma(1, 1) - Complex(0.0, 1.0)) < 1e-14);
    CHECK(std::abs(b.Gamma(0, 1)) < 1e-14);
    CHECK(std::abs(b.Gamma(1, 0)) < 1e-14);
    const Eigen::VectorXd rates = decay_rates(b);
    CHECK(rates(0) == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(rates(1) == doctest::Approx(8.0).epsilon(1e-14));
}

TEST_CASE("zero dipoles give vanishing coupling arrays")
{
    const EmitterModel m{{0.0, 0.1}, {1.0, 1.2}, {{vec(0, 0), vec(0, 0)}, {vec(0, 0), vec(0, 0)}}};
    const CouplingBundle b = coupling_bundle(m, WaveguideEnv{}, LossModel::isotropic(0.2), 1.0);
    CHECK(max_abs(b.Gamma) == 0.0);
    CHECK(max_abs(b.X) == 0.0);
    CHECK(max_abs(b.L) == 0.0);
    for (std::size_t x = 0; x < 2; ++x)
        for (std::size_t y = 0; y < 2; ++y)
            for (std::size_t n = 0; n < 2; ++n)
                for (std::size_t k = 0; k < 2; ++k)
                    CHECK(b.V(x, y, n, k) == Complex(0.0));
}

TEST_CASE("matched linear dipole decays at rate 10 split evenly between directions")
{
    const EmitterModel m = two_level(vec(1, 0));
    const CouplingBundle b = coupling_bundle(m, WaveguideEnv{}, LossModel::none(), 1.0);
    CHECK(decay_rates(b)(0) == doctest::Approx(10.0).epsilon(1e-14));
    const ChannelRates r = channel_rates(b, ComplexMatrix::Identity(1, 1));
    CHECK(r.forward == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r.backward == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(r.loss == doctest::Approx(0.0));

    const CouplingBundle lossy = coupling_bundle(m, WaveguideEnv{}, LossModel::isotropic(0.2), 1.0);
    const ChannelRates rl = channel_rates(lossy, ComplexMatrix::Identity(1, 1));
    CHECK(rl.loss == doctest::Approx(0.2).epsilon(1e-14));
    CHECK(rl.guided_fraction() == doctest::Approx(10.0 / 10.2).epsilon(1e-14));
}

TEST_CASE("linear fields couple forward and backward symmetrically")
{
    Random rng(23);
    for (int trial = 0; trial < 50; ++trial) {
        PolarizationVector e(rng.uniform(), rng.uniform(), rng.uniform());
        e /= e.norm();
        const EmitterModel m = rng.model(2, 3);
        const CouplingBundle b = coupling_bundle(m, env_with(e), LossModel::none(), 1.0);
        const ComplexMatrix rho = rng.density(static_cast<Eigen::Index>(m.num_excited()));
        const ChannelRates r = channel_rates(b, rho);
        CHECK(r.forward == doctest::Approx(r.backward).epsilon(1e-12));
    }
}

TEST_CASE("shifting every energy together leaves the coupling unchanged")
{
    Random rng(24);
    for (int trial = 0; trial < 50; ++trial) {
        const EmitterModel m = rng.model(2, 3);
        EmitterModel shifted = m;
        const double shift = rng.uniform(-2.0, 2.0);
        for (double& e : shifted.ground_energies)
            e += shift;
        for (double& e : shifted.excited_energies)
            e += shift;
        const WaveguideEnv env = env_with(rng.unit_field());
        const LossModel loss = LossModel::isotropic(0.1);
        const CouplingBundle a = coupling_bundle(m, env, loss, 1.0);
        const CouplingBundle b = coupling_bundle(shifted, env, loss, 1.0 + shift);
        CHECK(max_abs(a.Gamma - b.Gamma) < 1e-14);
        CHECK((a.Delta - b.Delta).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("decay generator is positive semidefinite for passive loss")
{
    Random rng(25);
    for (int trial = 0; trial < 200; ++trial) {
        const EmitterModel m = rng.model(3, 4);
        const CouplingBundle b = coupling_bundle(m, env_with(rng.unit_field()),
                                                 LossModel::isotropic(rng.uniform(0.0, 1.0)), 1.0);
        CHECK(decay_rates(b).minCoeff() > -1e-12);
    }
}
