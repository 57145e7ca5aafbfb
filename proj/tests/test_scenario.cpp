#include "doctest.h"

#include <cmath>
#include <string>

#include "test_support.hpp"
#include "wgqed/scenario.hpp"

using namespace wgqed;
using namespace wgqed::testing;

namespace {

constexpr double kPi = 3.14159265358979323846;

ErrorCode parse_error(const std::string& text, std::string* message = nullptr)
{
    try {
        parse_config(text);
    } catch (const Error& e) {
        if (message)
            *message = e.what();
        return e.code();
    }
    FAIL("config was accepted: " << text);
    return ErrorCode::InvalidArgument;
}

std::size_t column(const ResultTable& t, const std::string& name)
{
    for (std::size_t i = 0; i < t.columns.size(); ++i)
        if (t.columns[i] == name)
            return i;
    FAIL("missing column " << name);
    return 0;
}

const std::vector<double>* row_at_theta(const ResultTable& t, double theta, double loss = -1.0)
{
    const std::size_t tc = column(t, "theta");
    for (const auto& row : t.rows) {
        if (row[tc] != theta)
            continue;
        if (loss >= 0.0 && row[column(t, "loss")] != loss)
            continue;
        return &row;
    }
    return nullptr;
}

} // namespace

TEST_CASE("presets")
{
    const ScenarioConfig ixi = preset("ixi-scan");
    CHECK(ixi.emitter.dipole(0, 0) == vec(1, 0));
    CHECK(ixi.emitter.dipole(1, 1) == vec(1, 0));
    CHECK(ixi.emitter.dipole(0, 1) == vec(0, Complex(0, 1)));
    CHECK(ixi.input.ground_index == 0);
    CHECK(ixi.sweep->steps == 401);

    const ScenarioConfig paradox = preset("paradox-emission");
    REQUIRE(paradox.loss.size() == 1);
    CHECK(paradox.loss[0].model.tensor.isZero(0.0));
    CHECK(paradox.task() == Task::Emission);

    const ScenarioConfig iso = preset("isotropic-scan");
    REQUIRE(iso.loss.size() == 2);
    CHECK(*iso.loss[0].isotropic == 0.2);
    CHECK(*iso.loss[1].isotropic == 0.003);
    CHECK(iso.sweep->start == 0.0);
    CHECK(iso.sweep->stop == kPi);

    try {
        preset("nonsense");
        FAIL("expected an error");
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::UnknownPreset);
        CHECK(exit_code_for(e.code()) == 1);
    }
}

TEST_CASE("serialization round trip")
{
    SUBCASE("presets")
    {
        for (const std::string& name : preset_names()) {
            const std::string text = serialize_config(preset(name));
            CHECK(serialize_config(parse_config(text)) == text);
        }
    }

    SUBCASE("random custom scenarios")
    {
        Random rng(51);
        for (int trial = 0; trial < 50; ++trial) {
            ScenarioConfig c = preset("custom");
            c.emitter = rng.model(3, 3);
            c.waveguide.forward_field = rng.unit_field();
            c.waveguide.group_velocity = rng.uniform(0.05, 0.5);
            c.loss = {LossLevel::strength(rng.uniform(0.0, 0.5)), LossLevel::strength(rng.uniform(0.0, 0.5))};
            c.input.ground_index = rng.index(0, c.emitter.num_ground() - 1);
            c.input.photon_frequency = rng.uniform(0.5, 1.5);
            if (trial % 2) {
                c.sweep = SweepSpec{"theta", 0.2, rng.uniform(0.3, 3.0), 7};
            } else {
                ComplexVector psi(static_cast<Eigen::Index>(c.emitter.num_excited()));
                for (Eigen::Index k = 0; k < psi.size(); ++k)
                    psi[k] = rng.complex();
                c.initial_state = psi / psi.norm();
                c.integrator.t_max = rng.uniform(0.1, 2.0);
            }
            const std::string text = serialize_config(c);
            const ScenarioConfig back = parse_config(text);
            CHECK(serialize_config(back) == text);
            CHECK(back.emitter.dipole(0, 0) == c.emitter.dipole(0, 0));
        }
    }

    SUBCASE("shorthand input is normalised")
    {
        const std::string text = R"({
            "scenario": "custom",
            "emitter": {"ground_energies": [0], "excited_energies": [1],
                        "dipoles": [[[1, 0, [0, 0]]]]},
            "loss": 0.2,
            "initial_state": [[0, 3]]
        })";
        const ScenarioConfig c = parse_config(text);
        CHECK(*c.loss[0].isotropic == 0.2);
        CHECK((*c.initial_state)[0] == Complex(0, 1));
        const std::string canonical = serialize_config(c);
        CHECK(canonical.find("\"isotropic\": 0.2") != std::string::npos);
        CHECK(serialize_config(parse_config(canonical)) == canonical);
    }

    SUBCASE("loss tensors")
    {
        ScenarioConfig c = preset("custom");
        Tensor3 t = Tensor3::Zero();
        t(0, 0) = Complex(0.0, 0.3);
        t(1, 1) = Complex(0.0, 0.1);
        t(0, 1) = Complex(0.0, 0.05);
        t(1, 0) = Complex(0.0, 0.05);
        c.loss = {LossLevel::tensor(t)};
        const ScenarioConfig back = parse_config(serialize_config(c));
        CHECK(back.loss[0].model.tensor == t);
        CHECK_FALSE(back.loss[0].isotropic);
    }
}

TEST_CASE("config errors name the offending field")
{
    std::string msg;
    CHECK(parse_error(R"({"scenario": "ixi-scan", "sweep": {"steps": 1}})", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("sweep.steps") != std::string::npos);

    CHECK(parse_error(R"({"scenario": "ixi-scan", "colour": 3})", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("colour") != std::string::npos);

    CHECK(parse_error(R"({"scenario": "ixi-scan", "input": {"ground_index": 2}})", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("input.ground_index") != std::string::npos);

    CHECK(parse_error(R"({"scenario": "two-level", "emitter": {}})", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("emitter") != std::string::npos);

    CHECK(parse_error(R"({"scenario": "custom"})", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("emitter") != std::string::npos);

    CHECK(parse_error(R"({"scenario": "two-level", "output": {"format": "xml"}})", &msg) == ErrorCode::ConfigError);
    CHECK(msg.find("output.format") != std::string::npos);

    CHECK(parse_error(R"({"scenario": "two-level", "loss": {"isotropic": -1}})", &msg) == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"scenario": "two-level", "initial_state": [1, 1]})") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"scenario": "ixi-scan", "sweep": {"stop": 4}})") == ErrorCode::ConfigError);
    CHECK(parse_error(R"({"scenario": "nonsense"})") == ErrorCode::UnknownPreset);
    CHECK(parse_error("{not json") == ErrorCode::ConfigError);
}

TEST_CASE("exit codes")
{
    CHECK(exit_code_for(ErrorCode::ConfigError) == 1);
    CHECK(exit_code_for(ErrorCode::DimensionMismatch) == 1);
    CHECK(exit_code_for(ErrorCode::SingularResponseMatrix) == 2);
    CHECK(exit_code_for(ErrorCode::ToleranceNotMet) == 2);
    CHECK(exit_code_for(ErrorCode::NonPhysicalState) == 2);
}

TEST_CASE("paradox-emission table")
{
    const ResultTable t = run_scenario(preset("paradox-emission"));
    CHECK(t.columns == std::vector<std::string>{"t", "pop_e1", "pop_e2", "p_forward", "p_backward", "p_loss", "trace"});
    REQUIRE(t.rows.size() == 201);
    CHECK(t.rows[0][1] == doctest::Approx(0.2).epsilon(1e-15));
    CHECK(t.rows[0][2] == doctest::Approx(0.8).epsilon(1e-15));
    CHECK(t.failures.empty());
}

TEST_CASE("isotropic-scan table")
{
    const ResultTable both = run_scenario(preset("isotropic-scan"));
    CHECK(both.columns == std::vector<std::string>{"loss", "theta", "re_t", "im_t", "re_r", "im_r", "p_loss"});
    CHECK(both.rows.size() == 802);
    for (double loss : {0.2, 0.003}) {
        for (double theta : {kPi / 4, 3 * kPi / 4}) {
            const auto* row = row_at_theta(both, theta, loss);
            REQUIRE(row);
            CHECK(std::abs((*row)[column(both, "re_r")]) < 1e-10);
            CHECK(std::abs((*row)[column(both, "im_r")]) < 1e-10);
        }
    }

    ScenarioConfig single = preset("isotropic-scan");
    single.loss = {LossLevel::strength(0.2)};
    const ResultTable one = run_scenario(single);
    CHECK(one.columns == std::vector<std::string>{"theta", "re_t", "im_t", "re_r", "im_r", "p_loss"});
    CHECK(one.rows.size() == 401);
}

TEST_CASE("lossless isotropic-scan flags the linear points")
{
    ScenarioConfig c = preset("isotropic-scan");
    c.loss = {LossLevel::strength(0.0)};
    c.sweep->steps = 5;
    const ResultTable t = run_scenario(c);
    CHECK(t.failures.size() == 3);
    CHECK(std::isnan(t.rows[0][1]));
    CHECK(t.rows[1][1] == doctest::Approx(-1.0));

    c.dark_state_projection = true;
    const ResultTable projected = run_scenario(c);
    CHECK(projected.failures.empty());
    CHECK(std::abs(projected.rows[0][column(projected, "re_r")]) == doctest::Approx(1.0));
}

TEST_CASE("ixi-scan table")
{
    const ResultTable t = run_scenario(preset("ixi-scan"));
    CHECK(t.columns == std::vector<std::string>{"theta", "re_f_g1", "im_f_g1", "re_f_g2", "im_f_g2", "re_b_g1",
                                                "im_b_g1", "re_b_g2", "im_b_g2", "p_loss"});
    const auto* row = row_at_theta(t, kPi / 4);
    REQUIRE(row);
    auto mag = [&](const std::string& amp) {
        return std::hypot((*row)[column(t, "re_" + amp)], (*row)[column(t, "im_" + amp)]);
    };
    CHECK(mag("f_g2") == doctest::Approx(1.0 / 1.04).epsilon(1e-12));
    CHECK(mag("b_g1") < 1e-10);
    CHECK(mag("b_g2") < 1e-10);
}

TEST_CASE("runs are deterministic and independent of the worker count")
{
    for (const std::string& name : preset_names()) {
        ScenarioConfig c = preset(name);
        if (c.sweep)
            c.sweep->steps = 41;
        const std::string a = format_csv(run_scenario(c, 1));
        const std::string b = format_csv(run_scenario(c, 1));
        const std::string p = format_csv(run_scenario(c, 3));
        CHECK(a == b);
        CHECK(a == p);
        const ResultTable t = run_scenario(c);
        CHECK(format_json(t, c) == format_json(run_scenario(c), c));
    }
}

TEST_CASE("csv uses 17 significant digits")
{
    ResultTable t;
    t.columns = {"x", "y"};
    t.rows = {{0.1, 1.0 / 3.0}};
    CHECK(format_csv(t) == "x,y\n0.10000000000000001,0.33333333333333331\n");
}
