#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "wgqed/emission.hpp"
#include "wgqed/error.hpp"
#include "wgqed/scattering.hpp"

namespace wgqed {

inline constexpr std::string_view kCustomScenario = "custom";

/// Names accepted by preset(), in display order.
const std::vector<std::string>& preset_names();

/// One loss setting. Isotropic levels keep their strength so sweeps can label rows.
struct LossLevel {
    std::optional<double> isotropic;
    LossModel model;

    static LossLevel strength(double s);
    static LossLevel tensor(const Tensor3& t);
};

struct SweepSpec {
    std::string parameter = "theta";
    double start = 0.0;
    double stop = 3.14159265358979323846;
    std::size_t steps = 401;
};

enum class OutputFormat { Csv, Json };

struct OutputSpec {
    std::string path;
    OutputFormat format = OutputFormat::Csv;
};

enum class Task { Emission, Scattering };

struct ScenarioConfig {
    std::string scenario = std::string(kCustomScenario);
    EmitterModel emitter;
    WaveguideEnv waveguide;
    std::vector<LossLevel> loss{LossLevel::tensor(Tensor3::Zero())};
    ScatterInput input;
    std::optional<SweepSpec> sweep;
    /// Present for emission runs.
    std::optional<ComplexVector> initial_state;
    IntegratorSettings integrator;
    bool dark_state_projection = false;
    OutputSpec output;

    Task task() const { return initial_state ? Task::Emission : Task::Scattering; }
    bool is_preset() const { return scenario != kCustomScenario; }
};

/// Throws UnknownPreset for unrecognised names.
ScenarioConfig preset(std::string_view name);

/// Parses a JSON document. A preset name supplies the emitter and defaults
/// that the remaining fields override; a custom scenario must carry its own
/// emitter. Throws ConfigError naming the offending field.
ScenarioConfig parse_config(std::string_view text);

/// Canonical JSON form. Presets are written without their emitter so the
/// document parses back to the same configuration.
std::string serialize_config(const ScenarioConfig& config);

/// Checks cross-field invariants (indices, sweep size, initial state).
void validate(const ScenarioConfig& config);

struct PointFailure {
    std::string where;
    ErrorCode code;
    std::string message;
};

struct ResultTable {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
    std::vector<PointFailure> failures;
};

/// Evaluates the scenario. Sweep points that fail are kept as NaN rows and
/// listed in `failures`; other errors propagate.
ResultTable run_scenario(const ScenarioConfig& config, unsigned threads = 1);

std::string format_csv(const ResultTable& table);
std::string format_json(const ResultTable& table, const ScenarioConfig& config);

/// 0 success, 1 configuration problem, 2 numerical failure.
int exit_code_for(ErrorCode code) noexcept;

} // namespace wgqed
