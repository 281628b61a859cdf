// SPDX-License-Identifier: Apache-2.0

#include "skysim/presets.hpp"

namespace skysim {

namespace {

CampaignSpec base_uma_campaign() {
    CampaignSpec spec;
    spec.type = ActionType::campaign;
    spec.scenario = ScenarioConfig::preset(ScenarioKind::uma_av);
    spec.power.alpha = 0.8;
    spec.power.p0_nominal_dbm = -96.0;
    spec.power.p_cmax_dbm = 23.0;
    spec.n_drops = 10;
    spec.n_snapshots = 20;
    spec.master_seed = 42;
    return spec;
}

CampaignSpec fig1a() {
    CampaignSpec spec = base_uma_campaign();
    spec.name = "fig1a";
    spec.sweep_variable = SweepVariable::aerial_ratio;
    spec.sweep_values = {0.0, 0.0067, 0.071, 0.25, 0.5};
    return spec;
}

CampaignSpec fig1b() {
    CampaignSpec spec = base_uma_campaign();
    spec.name = "fig1b";
    spec.sweep_variable = SweepVariable::aerial_ratio;
    spec.sweep_values = {0.25};
    return spec;
}

CampaignSpec fig5() {
    CampaignSpec spec = base_uma_campaign();
    spec.name = "fig5";
    spec.scenario.aerial_ratio = 0.5;
    // Headroom above the usual 23 dBm keeps the open-loop settings visible
    // instead of saturating every aerial UE at the cap.
    spec.power.alpha = 1.0;
    spec.power.p0_nominal_dbm = -106.0;
    spec.power.p_cmax_dbm = 40.0;
    spec.n_drops = 12;
    spec.sweep_variable = SweepVariable::power_classes;
    spec.power_settings = {
        {"comb1_equal", {1.0, 0}, {1.0, 0}},
        {"comb2_reduced_aerial_alpha", {1.0, 0}, {0.7, 0}},
        {"comb3_raised_aerial_p0", {1.0, 0}, {1.0, 15}},
    };
    return spec;
}

CampaignSpec fig3() {
    CampaignSpec spec;
    spec.name = "fig3";
    spec.type = ActionType::meas_demo;
    spec.scenario = ScenarioConfig::preset(ScenarioKind::uma_av);
    // Reference-signal power per RB rather than total cell power, and a
    // wide vertical beam so the fly-by sees rising RSRP on approach.
    spec.scenario.enb_tx_power_dbm = 18.0;
    spec.scenario.antenna.vertical_hpbw_deg = 30.0;
    spec.meas_demo.ue_height_m = 200.0;
    spec.meas_demo.speed_kmh = 150.0;
    spec.meas_demo.path_start = {-4200.0, -900.0};
    spec.meas_demo.heading_deg = 17.0;
    spec.meas_demo.duration_ms = 80000.0;
    spec.meas_demo.tick_ms = 40.0;
    spec.meas_demo.meas.event = MeasEvent::a4;
    spec.meas_demo.meas.a4_threshold_dbm = -76.0;
    spec.meas_demo.meas.cell_count_x = 4;
    spec.meas_demo.meas.ttt_ms = 160.0;
    spec.meas_demo.meas.l3_filter_k = 4;
    return spec;
}

CampaignSpec fig4() {
    CampaignSpec spec;
    spec.name = "fig4";
    spec.type = ActionType::campaign;
    spec.scenario = ScenarioConfig::preset(ScenarioKind::uma_av);
    spec.sweep_variable = SweepVariable::height_threshold;
    spec.sweep_values = {100.0};
    spec.height_sweep.hysteresis_m = 5.0;
    return spec;
}

CampaignSpec mobility() {
    CampaignSpec spec;
    spec.name = "mobility";
    spec.type = ActionType::mobility;
    spec.mobility.n_seeds = 20;
    spec.mobility.duration_ms = 120000.0;
    spec.mobility.tick_ms = 100.0;
    spec.mobility.categories = {
        {"aerial_uma", ScenarioKind::uma_av, UeKind::aerial, 100.0, 60.0},
        {"terrestrial_uma", ScenarioKind::uma_av, UeKind::terrestrial_outdoor, 1.5, 30.0},
        {"aerial_rma", ScenarioKind::rma_av, UeKind::aerial, 100.0, 60.0},
    };
    return spec;
}

}  // namespace

std::vector<PresetInfo> preset_list() {
    return {
        {"fig1a", "uplink IoT vs aerial-UE ratio, UMa-AV 19 sites"},
        {"fig1b", "downlink geometry CDFs at 25% aerial ratio"},
        {"fig3", "multi-cell A4 reporting demo: 150 km/h fly-by at 200 m"},
        {"fig4", "height-threshold reporting demo (ascend/descend/level)"},
        {"fig5", "uplink throughput vs per-class pathloss compensation"},
        {"mobility", "handover/RLF rates: aerial vs terrestrial, UMa vs RMa"},
    };
}

bool is_preset(const std::string& name) {
    for (const PresetInfo& p : preset_list()) {
        if (p.name == name) return true;
    }
    return false;
}

CampaignSpec preset_spec(const std::string& name) {
    if (name == "fig1a") return fig1a();
    if (name == "fig1b") return fig1b();
    if (name == "fig3") return fig3();
    if (name == "fig4") return fig4();
    if (name == "fig5") return fig5();
    if (name == "mobility") return mobility();
    throw ConfigError("unknown preset '" + name + "'");
}

}  // namespace skysim
