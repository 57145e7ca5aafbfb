#include "wgqed/scenario.hpp"

#include <cmath>
#include <cstdio>
#include <initializer_list>
#include <limits>

#include "json.hpp"

namespace wgqed {

namespace {

using Json = nlohmann::ordered_json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void config_error(const std::string& field, const std::string& message)
{
    throw Error(ErrorCode::ConfigError, field + ": " + message);
}

void check_keys(const Json& obj, const std::string& field, std::initializer_list<std::string_view> allowed)
{
    if (!obj.is_object())
        config_error(field, "expected an object");
    for (const auto& item : obj.items()) {
        bool known = false;
        for (std::string_view k : allowed)
            known = known || item.key() == k;
        if (!known)
            config_error(field + "." + item.key(), "unknown field");
    }
}

double get_number(const Json& j, const std::string& field)
{
    if (!j.is_number())
        config_error(field, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v))
        config_error(field, "must be finite");
    return v;
}

std::size_t get_count(const Json& j, const std::string& field)
{
    if (!j.is_number_integer() || j.get<long long>() < 0)
        config_error(field, "expected a non-negative integer");
    return j.get<std::size_t>();
}

bool get_bool(const Json& j, const std::string& field)
{
    if (!j.is_boolean())
        config_error(field, "expected true or false");
    return j.get<bool>();
}

std::string get_string(const Json& j, const std::string& field)
{
    if (!j.is_string())
        config_error(field, "expected a string");
    return j.get<std::string>();
}

Complex get_complex(const Json& j, const std::string& field)
{
    if (j.is_number())
        return {get_number(j, field), 0.0};
    if (!j.is_array() || j.size() != 2)
        config_error(field, "expected a complex number [re, im]");
    return {get_number(j[0], field + "[0]"), get_number(j[1], field + "[1]")};
}

std::vector<double> get_reals(const Json& j, const std::string& field)
{
    if (!j.is_array())
        config_error(field, "expected an array of numbers");
    std::vector<double> out;
    for (std::size_t i = 0; i < j.size(); ++i)
        out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

PolarizationVector get_vector(const Json& j, const std::string& field)
{
    if (!j.is_array() || j.size() != 3)
        config_error(field, "expected three complex components");
    PolarizationVector v;
    for (int i = 0; i < 3; ++i)
        v[i] = get_complex(j[static_cast<std::size_t>(i)], field + "[" + std::to_string(i) + "]");
    return v;
}

Json complex_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json vector_json(const PolarizationVector& v)
{
    Json out = Json::array();
    for (int i = 0; i < 3; ++i)
        out.push_back(complex_json(v[i]));
    return out;
}

EmitterModel parse_emitter(const Json& j)
{
    check_keys(j, "emitter", {"ground_energies", "excited_energies", "dipoles"});
    for (const char* key : {"ground_energies", "excited_energies", "dipoles"}) {
        if (!j.contains(key))
            config_error(std::string("emitter.") + key, "missing");
    }
    EmitterModel m;
    m.ground_energies = get_reals(j["ground_energies"], "emitter.ground_energies");
    m.excited_energies = get_reals(j["excited_energies"], "emitter.excited_energies");
    const Json& rows = j["dipoles"];
    if (!rows.is_array())
        config_error("emitter.dipoles", "expected one row of dipoles per ground state");
    for (std::size_t n = 0; n < rows.size(); ++n) {
        const std::string row_field = "emitter.dipoles[" + std::to_string(n) + "]";
        if (!rows[n].is_array())
            config_error(row_field, "expected one dipole per excited state");
        std::vector<PolarizationVector> row;
        for (std::size_t m2 = 0; m2 < rows[n].size(); ++m2)
            row.push_back(get_vector(rows[n][m2], row_field + "[" + std::to_string(m2) + "]"));
        m.dipoles.push_back(std::move(row));
    }
    return m;
}

Json emitter_json(const EmitterModel& m)
{
    Json dipoles = Json::array();
    for (const auto& row : m.dipoles) {
        Json r = Json::array();
        for (const auto& d : row)
            r.push_back(vector_json(d));
        dipoles.push_back(std::move(r));
    }
    Json out;
    out["ground_energies"] = m.ground_energies;
    out["excited_energies"] = m.excited_energies;
    out["dipoles"] = std::move(dipoles);
    return out;
}

void parse_waveguide(const Json& j, WaveguideEnv& env)
{
    check_keys(j, "waveguide", {"a", "v_g", "omega", "epsilon0", "hbar", "E_f"});
    if (j.contains("a"))
        env.period = get_number(j["a"], "waveguide.a");
    if (j.contains("v_g"))
        env.group_velocity = get_number(j["v_g"], "waveguide.v_g");
    if (j.contains("omega"))
        env.omega = get_number(j["omega"], "waveguide.omega");
    if (j.contains("epsilon0"))
        env.epsilon0 = get_number(j["epsilon0"], "waveguide.epsilon0");
    if (j.contains("hbar"))
        env.hbar = get_number(j["hbar"], "waveguide.hbar");
    if (j.contains("E_f"))
        env.forward_field = get_vector(j["E_f"], "waveguide.E_f");
}

Json waveguide_json(const WaveguideEnv& env)
{
    Json out;
    out["a"] = env.period;
    out["v_g"] = env.group_velocity;
    out["omega"] = env.omega;
    out["epsilon0"] = env.epsilon0;
    out["hbar"] = env.hbar;
    out["E_f"] = vector_json(env.forward_field);
    return out;
}

LossLevel parse_loss_level(const Json& j, const std::string& field)
{
    auto strength = [&](const Json& v, const std::string& f) {
        const double s = get_number(v, f);
        if (s < 0.0)
            config_error(f, "isotropic strength must be non-negative");
        return LossLevel::strength(s);
    };
    if (j.is_number())
        return strength(j, field);
    check_keys(j, field, {"isotropic", "tensor"});
    if (j.contains("isotropic") == j.contains("tensor"))
        config_error(field, "give exactly one of isotropic or tensor");
    if (j.contains("isotropic"))
        return strength(j["isotropic"], field + ".isotropic");
    const Json& t = j["tensor"];
    if (!t.is_array() || t.size() != 3)
        config_error(field + ".tensor", "expected a 3x3 complex matrix");
    Tensor3 tensor;
    for (int r = 0; r < 3; ++r) {
        const PolarizationVector row =
            get_vector(t[static_cast<std::size_t>(r)], field + ".tensor[" + std::to_string(r) + "]");
        tensor.row(r) = row.transpose();
    }
    return LossLevel::tensor(tensor);
}

std::vector<LossLevel> parse_loss(const Json& j)
{
    std::vector<LossLevel> levels;
    if (j.is_array()) {
        if (j.empty())
            config_error("loss", "at least one loss level is required");
        for (std::size_t i = 0; i < j.size(); ++i)
            levels.push_back(parse_loss_level(j[i], "loss[" + std::to_string(i) + "]"));
    } else {
        levels.push_back(parse_loss_level(j, "loss"));
    }
    return levels;
}

Json loss_level_json(const LossLevel& level)
{
    Json out;
    if (level.isotropic) {
        out["isotropic"] = *level.isotropic;
        return out;
    }
    Json rows = Json::array();
    for (int r = 0; r < 3; ++r)
        rows.push_back(vector_json(level.model.tensor.row(r).transpose()));
    out["tensor"] = std::move(rows);
    return out;
}

Json loss_json(const std::vector<LossLevel>& levels)
{
    if (levels.size() == 1)
        return loss_level_json(levels.front());
    Json out = Json::array();
    for (const LossLevel& level : levels)
        out.push_back(loss_level_json(level));
    return out;
}

Direction parse_direction(const Json& j, const std::string& field)
{
    const std::string s = get_string(j, field);
    if (s == "forward")
        return Direction::Forward;
    if (s == "backward")
        return Direction::Backward;
    config_error(field, "expected forward or backward, got '" + s + "'");
}

void parse_input(const Json& j, ScatterInput& in)
{
    check_keys(j, "input", {"direction", "ground_index", "photon_frequency"});
    if (j.contains("direction"))
        in.direction = parse_direction(j["direction"], "input.direction");
    if (j.contains("ground_index"))
        in.ground_index = get_count(j["ground_index"], "input.ground_index");
    if (j.contains("photon_frequency"))
        in.photon_frequency = get_number(j["photon_frequency"], "input.photon_frequency");
}

Json input_json(const ScatterInput& in)
{
    Json out;
    out["direction"] = in.direction == Direction::Forward ? "forward" : "backward";
    out["ground_index"] = in.ground_index;
    out["photon_frequency"] = in.photon_frequency;
    return out;
}

SweepSpec parse_sweep(const Json& j, SweepSpec sweep)
{
    check_keys(j, "sweep", {"parameter", "start", "stop", "steps"});
    if (j.contains("parameter"))
        sweep.parameter = get_string(j["parameter"], "sweep.parameter");
    if (j.contains("start"))
        sweep.start = get_number(j["start"], "sweep.start");
    if (j.contains("stop"))
        sweep.stop = get_number(j["stop"], "sweep.stop");
    if (j.contains("steps"))
        sweep.steps = get_count(j["steps"], "sweep.steps");
    return sweep;
}

Json sweep_json(const SweepSpec& s)
{
    Json out;
    out["parameter"] = s.parameter;
    out["start"] = s.start;
    out["stop"] = s.stop;
    out["steps"] = s.steps;
    return out;
}

void parse_integrator(const Json& j, IntegratorSettings& s)
{
    check_keys(j, "integrator", {"t_max", "rtol", "atol", "output_points", "residual_threshold"});
    if (j.contains("t_max"))
        s.t_max = get_number(j["t_max"], "integrator.t_max");
    if (j.contains("rtol"))
        s.rtol = get_number(j["rtol"], "integrator.rtol");
    if (j.contains("atol"))
        s.atol = get_number(j["atol"], "integrator.atol");
    if (j.contains("output_points"))
        s.output_points = get_count(j["output_points"], "integrator.output_points");
    if (j.contains("residual_threshold"))
        s.residual_threshold = get_number(j["residual_threshold"], "integrator.residual_threshold");
}

Json integrator_json(const IntegratorSettings& s)
{
    Json out;
    out["t_max"] = s.t_max;
    out["rtol"] = s.rtol;
    out["atol"] = s.atol;
    out["output_points"] = s.output_points;
    out["residual_threshold"] = s.residual_threshold;
    return out;
}

OutputFormat parse_format(const std::string& s, const std::string& field)
{
    if (s == "csv")
        return OutputFormat::Csv;
    if (s == "json")
        return OutputFormat::Json;
    config_error(field, "expected csv or json, got '" + s + "'");
}

void parse_output(const Json& j, OutputSpec& out)
{
    check_keys(j, "output", {"path", "format"});
    if (j.contains("path"))
        out.path = get_string(j["path"], "output.path");
    if (j.contains("format"))
        out.format = parse_format(get_string(j["format"], "output.format"), "output.format");
}

Json output_json(const OutputSpec& o)
{
    Json out;
    out["path"] = o.path;
    out["format"] = o.format == OutputFormat::Csv ? "csv" : "json";
    return out;
}

ComplexVector parse_state(const Json& j)
{
    if (!j.is_array() || j.empty())
        config_error("initial_state", "expected a non-empty array of complex amplitudes");
    ComplexVector v(static_cast<Eigen::Index>(j.size()));
    for (std::size_t i = 0; i < j.size(); ++i)
        v[static_cast<Eigen::Index>(i)] = get_complex(j[i], "initial_state[" + std::to_string(i) + "]");
    const double norm = v.norm();
    if (!(norm > 0.0))
        config_error("initial_state", "amplitudes are all zero");
    return std::abs(norm - 1.0) > 1e-12 ? ComplexVector(v / norm) : v;
}

EmitterModel v_system()
{
    return EmitterModel{{0.0},
                        {1.0, 1.0},
                        {{PolarizationVector(1.0, 0.0, 0.0), PolarizationVector(0.0, 1.0, 0.0)}}};
}

std::string describe_point(const std::optional<double>& loss, const std::optional<double>& theta)
{
    std::string out;
    char buf[64];
    if (loss) {
        std::snprintf(buf, sizeof buf, "loss=%.17g", *loss);
        out += buf;
    }
    if (theta) {
        std::snprintf(buf, sizeof buf, "%stheta=%.17g", out.empty() ? "" : " ", *theta);
        out += buf;
    }
    return out;
}

std::vector<std::string> amplitude_columns(std::size_t num_ground)
{
    if (num_ground == 1)
        return {"re_t", "im_t", "re_r", "im_r"};
    std::vector<std::string> cols;
    for (const char* mode : {"f", "b"}) {
        for (std::size_t k = 1; k <= num_ground; ++k) {
            const std::string suffix = std::string(mode) + "_g" + std::to_string(k);
            cols.push_back("re_" + suffix);
            cols.push_back("im_" + suffix);
        }
    }
    return cols;
}

void append_amplitudes(std::vector<double>& row, const ScatteringResult& res, const ScatterInput& in)
{
    const std::size_t ng = static_cast<std::size_t>(res.amplitudes.cols());
    if (ng == 1) {
        const Direction other = in.direction == Direction::Forward ? Direction::Backward : Direction::Forward;
        for (Direction d : {in.direction, other}) {
            row.push_back(res.amplitude(d, 0).real());
            row.push_back(res.amplitude(d, 0).imag());
        }
    } else {
        for (Direction d : {Direction::Forward, Direction::Backward}) {
            for (std::size_t k = 0; k < ng; ++k) {
                row.push_back(res.amplitude(d, k).real());
                row.push_back(res.amplitude(d, k).imag());
            }
        }
    }
    row.push_back(res.p_loss);
}

ResultTable run_scattering(const ScenarioConfig& config, unsigned threads)
{
    const bool label_loss = config.loss.size() > 1;
    const std::size_t ng = config.emitter.num_ground();
    ScatterOptions options;
    if (config.dark_state_projection)
        options.singular_mode = SingularMode::DarkStateProjection;

    ResultTable table;
    if (label_loss)
        table.columns.push_back("loss");
    if (config.sweep)
        table.columns.push_back("theta");
    for (const std::string& c : amplitude_columns(ng))
        table.columns.push_back(c);
    table.columns.push_back("p_loss");
    const std::size_t width = table.columns.size();
    const double nan = std::numeric_limits<double>::quiet_NaN();

    for (const LossLevel& level : config.loss) {
        const std::optional<double> loss_label = label_loss ? level.isotropic : std::nullopt;
        std::vector<double> prefix;
        if (label_loss)
            prefix.push_back(*level.isotropic);

        if (!config.sweep) {
            std::vector<double> row = prefix;
            try {
                append_amplitudes(row, scatter(config.emitter, config.waveguide, level.model, config.input, options),
                                  config.input);
            } catch (const Error& e) {
                if (exit_code_for(e.code()) != 2)
                    throw;
                table.failures.push_back({describe_point(loss_label, std::nullopt), e.code(), e.what()});
                row.resize(width, nan);
            }
            table.rows.push_back(std::move(row));
            continue;
        }

        const std::vector<double> grid = linspace(config.sweep->start, config.sweep->stop, config.sweep->steps);
        const std::vector<SweepPoint> points = polarization_sweep(config.emitter, config.waveguide, level.model,
                                                                  config.input, grid, options, threads);
        for (const SweepPoint& p : points) {
            std::vector<double> row = prefix;
            row.push_back(p.theta);
            if (p.result) {
                append_amplitudes(row, *p.result, config.input);
            } else {
                if (exit_code_for(*p.error) != 2)
                    throw Error(*p.error, p.message);
                table.failures.push_back({describe_point(loss_label, p.theta), *p.error, p.message});
                row.resize(width, nan);
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

ResultTable run_emission(const ScenarioConfig& config)
{
    const bool label_loss = config.loss.size() > 1;
    const std::size_t ne = config.emitter.num_excited();

    ResultTable table;
    if (label_loss)
        table.columns.push_back("loss");
    table.columns.push_back("t");
    for (std::size_t e = 1; e <= ne; ++e)
        table.columns.push_back("pop_e" + std::to_string(e));
    for (const char* c : {"p_forward", "p_backward", "p_loss", "trace"})
        table.columns.push_back(c);

    const ExcitedSuperposition initial{*config.initial_state};
    for (const LossLevel& level : config.loss) {
        EmissionTrajectory traj;
        try {
            traj = evolve(config.emitter, config.waveguide, level.model, initial, config.integrator);
        } catch (const Error& e) {
            if (!label_loss)
                throw;
            throw Error(e.code(), describe_point(level.isotropic, std::nullopt) + ": " + e.what());
        }
        for (std::size_t i = 0; i < traj.times.size(); ++i) {
            const EmitterDensityMatrix& s = traj.states[i];
            std::vector<double> row;
            if (label_loss)
                row.push_back(*level.isotropic);
            row.push_back(traj.times[i]);
            for (Eigen::Index e = 0; e < static_cast<Eigen::Index>(ne); ++e)
                row.push_back(s.excited(e, e).real());
            row.push_back(s.channel_probability(Channel::Forward));
            row.push_back(s.channel_probability(Channel::Backward));
            row.push_back(s.channel_probability(Channel::Loss));
            row.push_back(s.trace());
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

std::string format_number(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

} // namespace

const std::vector<std::string>& preset_names()
{
    static const std::vector<std::string> names{"paradox-emission", "isotropic-scan", "ixi-scan", "two-level",
                                                std::string(kCustomScenario)};
    return names;
}

LossLevel LossLevel::strength(double s) { return {s, LossModel::isotropic(s)}; }

LossLevel LossLevel::tensor(const Tensor3& t)
{
    LossLevel level;
    level.model.tensor = t;
    return level;
}

ScenarioConfig preset(std::string_view name)
{
    const Complex i(0.0, 1.0);
    ScenarioConfig c;
    c.scenario = std::string(name);

    if (name == "paradox-emission") {
        c.emitter = v_system();
        c.waveguide.forward_field = PolarizationVector(2.0, i, 0.0) / std::sqrt(5.0);
        c.loss = {LossLevel::strength(0.0)};
        ComplexVector psi(2);
        psi << i, 2.0;
        c.initial_state = psi / std::sqrt(5.0);
    } else if (name == "isotropic-scan") {
        c.emitter = v_system();
        c.loss = {LossLevel::strength(0.2), LossLevel::strength(0.003)};
        c.sweep = SweepSpec{};
    } else if (name == "ixi-scan") {
        const PolarizationVector x(1.0, 0.0, 0.0);
        const PolarizationVector y(0.0, i, 0.0);
        c.emitter = EmitterModel{{0.0, 0.0}, {1.0, 1.0}, {{x, y}, {y, x}}};
        c.loss = {LossLevel::strength(0.2)};
        c.sweep = SweepSpec{};
    } else if (name == "two-level") {
        c.emitter = EmitterModel{{0.0}, {1.0}, {{PolarizationVector(1.0, 0.0, 0.0)}}};
        c.loss = {LossLevel::strength(0.2)};
        c.initial_state = ComplexVector::Ones(1);
    } else if (name == kCustomScenario) {
        c.emitter = EmitterModel{{0.0}, {1.0}, {{PolarizationVector(1.0, 0.0, 0.0)}}};
    } else {
        throw Error(ErrorCode::UnknownPreset, "unknown preset '" + std::string(name) + "'");
    }
    return c;
}

ScenarioConfig parse_config(std::string_view text)
{
    Json j;
    try {
        j = Json::parse(text);
    } catch (const Json::parse_error& e) {
        throw Error(ErrorCode::ConfigError, std::string("not valid JSON: ") + e.what());
    }
    check_keys(j, "config",
               {"scenario", "emitter", "waveguide", "loss", "input", "sweep", "initial_state", "integrator",
                "dark_state_projection", "output"});

    const std::string name =
        j.contains("scenario") ? get_string(j["scenario"], "scenario") : std::string(kCustomScenario);
    ScenarioConfig c = preset(name);
    if (c.is_preset()) {
        if (j.contains("emitter"))
            config_error("emitter", "a preset supplies its own emitter; use scenario \"custom\" instead");
    } else {
        if (!j.contains("emitter"))
            config_error("emitter", "a custom scenario needs an emitter");
        c.emitter = parse_emitter(j["emitter"]);
    }

    if (j.contains("waveguide"))
        parse_waveguide(j["waveguide"], c.waveguide);
    if (j.contains("loss"))
        c.loss = parse_loss(j["loss"]);
    if (j.contains("input"))
        parse_input(j["input"], c.input);
    if (j.contains("sweep")) {
        if (j["sweep"].is_null())
            c.sweep.reset();
        else
            c.sweep = parse_sweep(j["sweep"], c.sweep.value_or(SweepSpec{}));
    }
    if (j.contains("initial_state")) {
        if (j["initial_state"].is_null())
            c.initial_state.reset();
        else
            c.initial_state = parse_state(j["initial_state"]);
    }
    if (j.contains("integrator"))
        parse_integrator(j["integrator"], c.integrator);
    if (j.contains("dark_state_projection"))
        c.dark_state_projection = get_bool(j["dark_state_projection"], "dark_state_projection");
    if (j.contains("output"))
        parse_output(j["output"], c.output);

    validate(c);
    return c;
}

std::string serialize_config(const ScenarioConfig& config)
{
    Json j;
    j["scenario"] = config.scenario;
    if (!config.is_preset())
        j["emitter"] = emitter_json(config.emitter);
    j["waveguide"] = waveguide_json(config.waveguide);
    j["loss"] = loss_json(config.loss);
    j["input"] = input_json(config.input);
    j["sweep"] = config.sweep ? sweep_json(*config.sweep) : Json(nullptr);
    if (config.initial_state) {
        Json state = Json::array();
        for (Eigen::Index k = 0; k < config.initial_state->size(); ++k)
            state.push_back(complex_json((*config.initial_state)[k]));
        j["initial_state"] = std::move(state);
    } else {
        j["initial_state"] = nullptr;
    }
    j["integrator"] = integrator_json(config.integrator);
    j["dark_state_projection"] = config.dark_state_projection;
    j["output"] = output_json(config.output);
    return j.dump(2) + "\n";
}

void validate(const ScenarioConfig& config)
{
    auto guard = [](const std::string& field, auto&& check) {
        try {
            check();
        } catch (const Error& e) {
            config_error(field, e.what());
        }
    };
    guard("emitter", [&] { validate(config.emitter); });
    guard("waveguide", [&] { config.waveguide.validate(); });
    if (config.loss.empty())
        config_error("loss", "at least one loss level is required");
    for (std::size_t i = 0; i < config.loss.size(); ++i) {
        const LossLevel& level = config.loss[i];
        const std::string field = "loss[" + std::to_string(i) + "]";
        if (level.isotropic && *level.isotropic < 0.0)
            config_error(field, "isotropic strength must be non-negative");
        guard(field, [&] { level.model.validate(); });
        if (config.loss.size() > 1 && !level.isotropic)
            config_error(field, "several loss levels must all be isotropic strengths");
    }

    if (config.input.ground_index >= config.emitter.num_ground())
        config_error("input.ground_index", "no ground state " + std::to_string(config.input.ground_index));
    if (!std::isfinite(config.input.photon_frequency))
        config_error("input.photon_frequency", "must be finite");

    if (config.sweep) {
        const SweepSpec& s = *config.sweep;
        if (s.parameter != "theta")
            config_error("sweep.parameter", "only theta can be swept");
        if (s.steps < 2)
            config_error("sweep.steps", "at least 2 points are required");
        if (!(s.start >= 0.0 && s.start <= kPi) || !(s.stop >= 0.0 && s.stop <= kPi))
            config_error("sweep", "theta range must lie within [0, pi]");
        if (!(s.start < s.stop))
            config_error("sweep", "start must be below stop");
    }

    if (config.initial_state) {
        if (config.sweep)
            config_error("initial_state", "an emission run cannot also sweep theta");
        if (static_cast<std::size_t>(config.initial_state->size()) != config.emitter.num_excited())
            config_error("initial_state", "needs one amplitude per excited state");
        if (std::abs(config.initial_state->norm() - 1.0) > 1e-12)
            config_error("initial_state", "must be normalised");
        const IntegratorSettings& s = config.integrator;
        if (!std::isfinite(s.t_max) || s.t_max < 0.0)
            config_error("integrator.t_max", "must be zero (automatic) or positive");
        if (!(s.rtol > 0.0) || !(s.atol > 0.0))
            config_error("integrator", "tolerances must be positive");
        if (s.output_points < 2)
            config_error("integrator.output_points", "at least 2 points are required");
    }
}

ResultTable run_scenario(const ScenarioConfig& config, unsigned threads)
{
    validate(config);
    return config.task() == Task::Emission ? run_emission(config) : run_scattering(config, threads);
}

std::string format_csv(const ResultTable& table)
{
    std::string out;
    for (std::size_t c = 0; c < table.columns.size(); ++c) {
        if (c)
            out += ',';
        out += table.columns[c];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t c = 0; c < row.size(); ++c) {
            if (c)
                out += ',';
            out += format_number(row[c]);
        }
        out += '\n';
    }
    return out;
}

std::string format_json(const ResultTable& table, const ScenarioConfig& config)
{
    Json j;
    j["scenario"] = config.scenario;
    j["columns"] = table.columns;
    Json rows = Json::array();
    for (const auto& row : table.rows) {
        Json r = Json::array();
        for (double v : row)
            r.push_back(std::isfinite(v) ? Json(v) : Json(nullptr));
        rows.push_back(std::move(r));
    }
    j["rows"] = std::move(rows);
    Json failures = Json::array();
    for (const PointFailure& f : table.failures) {
        Json item;
        item["point"] = f.where;
        item["error"] = std::string(to_string(f.code));
        item["message"] = f.message;
        failures.push_back(std::move(item));
    }
    j["failures"] = std::move(failures);
    return j.dump(2) + "\n";
}

int exit_code_for(ErrorCode code) noexcept
{
    switch (code) {
    case ErrorCode::SingularResponseMatrix:
    case ErrorCode::SingularDenominator:
    case ErrorCode::ToleranceNotMet:
    case ErrorCode::NonPhysicalState:
        return 2;
    default:
        return 1;
    }
}

} // namespace wgqed
