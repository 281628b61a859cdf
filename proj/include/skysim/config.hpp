// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "skysim/mobility.hpp"
#include "skysim/power.hpp"
#include "skysim/rrc.hpp"
#include "skysim/scenario.hpp"
#include "skysim/sysim.hpp"

namespace skysim {

// Config file did not parse as JSON (CLI exit 2). Carries 1-based
// line/column of the offending byte.
class SpecParseError : public std::runtime_error {
  public:
    SpecParseError(const std::string& what, int line, int column)
        : std::runtime_error(what), line(line), column(column) {}
    int line;
    int column;
};

enum class ActionType { campaign, meas_demo, mobility };

enum class SweepVariable { aerial_ratio, power_classes, height_threshold };

struct PowerClassSetting {
    std::string label;
    PowerClass terrestrial;
    PowerClass aerial;
};

// Synthesized fly-by over the layout driving the multi-cell A4 engine:
// constant-velocity UE, deterministic per-tick RSRP (no shadowing), trace
// and report log emitted.
struct MeasDemoSpec {
    double ue_height_m = 200.0;
    double speed_kmh = 150.0;
    Vec2 path_start{-4000.0, 150.0};
    double heading_deg = 0.0;
    double duration_ms = 60000.0;
    double tick_ms = 40.0;
    MeasConfig meas;
};

struct MobilityCategory {
    std::string label;
    ScenarioKind scenario = ScenarioKind::uma_av;
    UeKind kind = UeKind::aerial;
    double height_m = 100.0;
    double speed_kmh = 60.0;
};

struct MobilitySpec {
    std::vector<MobilityCategory> categories;
    HandoverConfig handover;
    int n_seeds = 20;
    double duration_ms = 120000.0;
    double tick_ms = 100.0;
};

// Height-threshold sweep payload: the three reference trajectories
// (ascending, descending, level) replayed against each threshold.
struct HeightSweepSpec {
    double hysteresis_m = 5.0;
    double tick_ms = 200.0;
    double duration_ms = 60000.0;
};

struct CampaignSpec {
    int schema_version = 1;
    std::string name;
    ActionType type = ActionType::campaign;

    ScenarioConfig scenario;
    PowerControlConfig power;
    ThroughputParams throughput;
    ChannelOptions channel;

    SweepVariable sweep_variable = SweepVariable::aerial_ratio;
    std::vector<double> sweep_values;                  // ratios or thresholds
    std::vector<PowerClassSetting> power_settings;     // power_classes sweep
    HeightSweepSpec height_sweep;

    int n_drops = 10;
    int n_snapshots = 20;
    std::uint64_t master_seed = 1;
    std::string output_dir;

    MeasDemoSpec meas_demo;
    MobilitySpec mobility;

    void validate() const;
    std::vector<SweepSetting> sweep_settings() const;
};

// Parses and validates a spec (or a manifest, which embeds one under
// "campaign"). Throws SpecParseError on malformed JSON, ConfigError (with
// the field name) on invalid values.
CampaignSpec load_spec(const std::string& path);
CampaignSpec parse_spec(const std::string& text);

// Resolved-config echo used as the manifest body; parse_spec accepts it.
std::string spec_to_json(const CampaignSpec& spec);
std::string manifest_json(const CampaignSpec& spec);

// Loads a measurement config for `replay` (same strict validation).
MeasConfig load_meas_config(const std::string& path);
std::optional<HeightReportConfig> load_height_config(const std::string& path);

}  // namespace skysim
