// SPDX-License-Identifier: Apache-2.0

#include "skysim/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace skysim {

using Json = nlohmann::ordered_json;

namespace {

// Strict object reader: every recognised key is ticked off and finish()
// rejects leftovers, so typos surface as validation errors naming the field.
class Obj {
  public:
    Obj(const Json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_ + " must be an object");
    }

    bool has(const std::string& key) const { return j_.contains(key); }

    double num(const std::string& key, double fallback) {
        if (!take(key)) return fallback;
        return as_num(j_.at(key), field(key));
    }

    int integer(const std::string& key, int fallback) {
        if (!take(key)) return fallback;
        const Json& v = j_.at(key);
        if (!v.is_number_integer())
            throw ConfigError(field(key) + " must be an integer");
        return v.get<int>();
    }

    std::uint64_t u64(const std::string& key, std::uint64_t fallback) {
        if (!take(key)) return fallback;
        const Json& v = j_.at(key);
        if (!v.is_number_integer() || (v.is_number_integer() && v.get<long long>() < 0))
            throw ConfigError(field(key) + " must be a non-negative integer");
        return v.get<std::uint64_t>();
    }

    std::string str(const std::string& key, const std::string& fallback) {
        if (!take(key)) return fallback;
        const Json& v = j_.at(key);
        if (!v.is_string()) throw ConfigError(field(key) + " must be a string");
        return v.get<std::string>();
    }

    std::string require_str(const std::string& key) {
        if (!has(key)) throw ConfigError(field(key) + " is required");
        return str(key, "");
    }

    std::vector<double> num_array(const std::string& key) {
        if (!take(key)) return {};
        const Json& v = j_.at(key);
        if (!v.is_array()) throw ConfigError(field(key) + " must be an array");
        std::vector<double> out;
        for (const Json& e : v) out.push_back(as_num(e, field(key) + "[]"));
        return out;
    }

    std::optional<Obj> object(const std::string& key) {
        if (!take(key)) return std::nullopt;
        return Obj(j_.at(key), field(key));
    }

    const Json* array(const std::string& key) {
        if (!take(key)) return nullptr;
        const Json& v = j_.at(key);
        if (!v.is_array()) throw ConfigError(field(key) + " must be an array");
        return &v;
    }

    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it) {
            if (!seen_.count(it.key()))
                throw ConfigError("unknown field " + field(it.key()));
        }
    }

    std::string field(const std::string& key) const {
        return path_.empty() ? key : path_ + "." + key;
    }

  private:
    bool take(const std::string& key) {
        if (!j_.contains(key)) return false;
        seen_.insert(key);
        return true;
    }

    static double as_num(const Json& v, const std::string& where) {
        if (!v.is_number()) throw ConfigError(where + " must be a number");
        return v.get<double>();
    }

    const Json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

ScenarioConfig read_scenario(Obj& o) {
    const std::string kind = o.require_str("kind");
    ScenarioConfig cfg = ScenarioConfig::preset(scenario_kind_from_string(kind));
    cfg.inter_site_distance_m = o.num("inter_site_distance_m", cfg.inter_site_distance_m);
    cfg.enb_height_m = o.num("enb_height_m", cfg.enb_height_m);
    cfg.carrier_freq_ghz = o.num("carrier_freq_ghz", cfg.carrier_freq_ghz);
    cfg.bandwidth_rbs = o.integer("bandwidth_rbs", cfg.bandwidth_rbs);
    cfg.ues_per_cell = o.integer("ues_per_cell", cfg.ues_per_cell);
    cfg.aerial_ratio = o.num("aerial_ratio", cfg.aerial_ratio);
    if (auto range = o.num_array("aerial_height_range_m"); !range.empty()) {
        if (range.size() != 2)
            throw ConfigError(o.field("aerial_height_range_m") + " must be [min, max]");
        cfg.aerial_height_min_m = range[0];
        cfg.aerial_height_max_m = range[1];
    }
    cfg.n_sites = o.integer("n_sites", cfg.n_sites);
    cfg.sectors_per_site = o.integer("sectors_per_site", cfg.sectors_per_site);
    cfg.noise_figure_db = o.num("noise_figure_db", cfg.noise_figure_db);
    cfg.thermal_noise_density_dbm_hz =
        o.num("thermal_noise_density_dbm_hz", cfg.thermal_noise_density_dbm_hz);
    cfg.enb_tx_power_dbm = o.num("enb_tx_power_dbm", cfg.enb_tx_power_dbm);
    cfg.downtilt_deg = o.num("downtilt_deg", cfg.downtilt_deg);
    cfg.ue_antenna_gain_dbi = o.num("ue_antenna_gain_dbi", cfg.ue_antenna_gain_dbi);
    cfg.indoor_fraction = o.num("indoor_fraction", cfg.indoor_fraction);
    cfg.penetration_loss_db = o.num("penetration_loss_db", cfg.penetration_loss_db);
    cfg.activity_factor = o.num("activity_factor", cfg.activity_factor);
    cfg.shadow_sector_correlation =
        o.num("shadow_sector_correlation", cfg.shadow_sector_correlation);
    if (auto a = o.object("antenna"); a.has_value()) {
        cfg.antenna.horizontal_hpbw_deg =
            a->num("horizontal_hpbw_deg", cfg.antenna.horizontal_hpbw_deg);
        cfg.antenna.vertical_hpbw_deg =
            a->num("vertical_hpbw_deg", cfg.antenna.vertical_hpbw_deg);
        cfg.antenna.front_back_ratio_db =
            a->num("front_back_ratio_db", cfg.antenna.front_back_ratio_db);
        cfg.antenna.sidelobe_floor_db =
            a->num("sidelobe_floor_db", cfg.antenna.sidelobe_floor_db);
        cfg.antenna.max_gain_dbi = a->num("max_gain_dbi", cfg.antenna.max_gain_dbi);
        a->finish();
    }
    o.finish();
    return cfg;
}

PowerClass read_power_class(Obj& o, const PowerControlConfig& base) {
    PowerClass cls{base.alpha, base.p0_ue_specific_db};
    cls.alpha = o.num("alpha", cls.alpha);
    cls.p0_ue_specific_db = o.integer("p0_ue_specific_db", cls.p0_ue_specific_db);
    o.finish();
    return cls;
}

PowerControlConfig read_power(Obj& o) {
    PowerControlConfig pc;
    pc.p0_nominal_dbm = o.num("p0_nominal_dbm", pc.p0_nominal_dbm);
    pc.p0_ue_specific_db = o.integer("p0_ue_specific_db", pc.p0_ue_specific_db);
    pc.alpha = o.num("alpha", pc.alpha);
    pc.p_cmax_dbm = o.num("p_cmax_dbm", pc.p_cmax_dbm);
    pc.min_power_dbm = o.num("min_power_dbm", pc.min_power_dbm);
    pc.tpc_step_db = o.num("tpc_step_db", pc.tpc_step_db);
    if (auto classes = o.object("classes"); classes.has_value()) {
        if (auto t = classes->object("terrestrial"); t.has_value())
            pc.classes[UeKind::terrestrial_outdoor] = read_power_class(*t, pc);
        if (auto a = classes->object("aerial"); a.has_value())
            pc.classes[UeKind::aerial] = read_power_class(*a, pc);
        classes->finish();
    }
    o.finish();
    return pc;
}

MeasConfig read_meas(Obj& o) {
    MeasConfig m;
    m.event = meas_event_from_string(o.str("event", "A4"));
    m.a3_offset_db = o.num("a3_offset_db", m.a3_offset_db);
    m.a4_threshold_dbm = o.num("a4_threshold_dbm", m.a4_threshold_dbm);
    m.a5_threshold1_dbm = o.num("a5_threshold1_dbm", m.a5_threshold1_dbm);
    m.a5_threshold2_dbm = o.num("a5_threshold2_dbm", m.a5_threshold2_dbm);
    m.hysteresis_db = o.num("hysteresis_db", m.hysteresis_db);
    m.ttt_ms = o.num("ttt_ms", m.ttt_ms);
    m.cell_count_x = o.integer("cell_count_x", m.cell_count_x);
    m.l3_filter_k = o.integer("l3_filter_k", m.l3_filter_k);
    m.serving_cell_id = o.integer("serving_cell_id", m.serving_cell_id);
    return m;
}

HandoverConfig read_handover(Obj& o) {
    HandoverConfig h;
    h.a3_offset_db = o.num("a3_offset_db", h.a3_offset_db);
    h.ttt_ms = o.num("ttt_ms", h.ttt_ms);
    h.prep_delay_ms = o.num("prep_delay_ms", h.prep_delay_ms);
    h.exec_time_ms = o.num("exec_time_ms", h.exec_time_ms);
    h.qout_db = o.num("qout_db", h.qout_db);
    h.qin_db = o.num("qin_db", h.qin_db);
    h.t310_ms = o.num("t310_ms", h.t310_ms);
    h.l3_filter_k = o.integer("l3_filter_k", h.l3_filter_k);
    o.finish();
    return h;
}

UeKind ue_kind_from_string(const std::string& s, const std::string& where) {
    if (s == "aerial") return UeKind::aerial;
    if (s == "terrestrial" || s == "terrestrial_outdoor") return UeKind::terrestrial_outdoor;
    if (s == "terrestrial_indoor") return UeKind::terrestrial_indoor;
    throw ConfigError(where + ": unknown UE kind '" + s + "'");
}

CampaignSpec read_spec(const Json& root) {
    Obj top(root, "");

    CampaignSpec spec;
    if (!top.has("schema_version")) throw ConfigError("schema_version is required");
    spec.schema_version = top.integer("schema_version", 1);
    if (spec.schema_version != 1)
        throw ConfigError("schema_version " + std::to_string(spec.schema_version) +
                          " is not supported (expected 1)");
    spec.name = top.str("name", "campaign");

    const std::string type = top.str("type", "campaign");
    if (type == "campaign") {
        spec.type = ActionType::campaign;
    } else if (type == "meas_demo") {
        spec.type = ActionType::meas_demo;
    } else if (type == "mobility") {
        spec.type = ActionType::mobility;
    } else {
        throw ConfigError("type must be campaign, meas_demo or mobility");
    }

    if (auto s = top.object("scenario"); s.has_value()) {
        spec.scenario = read_scenario(*s);
    } else if (spec.type != ActionType::mobility) {
        throw ConfigError("scenario is required");
    }

    if (auto p = top.object("power_control"); p.has_value()) spec.power = read_power(*p);

    if (auto t = top.object("throughput"); t.has_value()) {
        spec.throughput.min_sinr_db = t->num("min_sinr_db", spec.throughput.min_sinr_db);
        spec.throughput.efficiency = t->num("efficiency", spec.throughput.efficiency);
        spec.throughput.max_bps_hz = t->num("max_bps_hz", spec.throughput.max_bps_hz);
        t->finish();
    }

    if (auto c = top.object("channel"); c.has_value()) {
        if (c->has("shadow_sigma_override_db"))
            spec.channel.shadow_sigma_override_db = c->num("shadow_sigma_override_db", 0.0);
        spec.channel.los_table_csv = c->str("los_table_csv", "");
        c->finish();
    }

    spec.n_drops = top.integer("n_drops", spec.n_drops);
    spec.n_snapshots = top.integer("n_snapshots", spec.n_snapshots);
    spec.master_seed = top.u64("master_seed", spec.master_seed);
    spec.output_dir = top.str("output_dir", "");

    if (spec.type == ActionType::campaign) {
        auto sweep = top.object("sweep");
        if (!sweep.has_value()) throw ConfigError("sweep is required for campaigns");
        const std::string var = sweep->require_str("variable");
        if (var == "aerial_ratio") {
            spec.sweep_variable = SweepVariable::aerial_ratio;
            spec.sweep_values = sweep->num_array("values");
            if (spec.sweep_values.empty())
                throw ConfigError("sweep.values must list at least one aerial ratio");
        } else if (var == "power_classes") {
            spec.sweep_variable = SweepVariable::power_classes;
            const Json* settings = sweep->array("settings");
            if (settings == nullptr || settings->empty())
                throw ConfigError("sweep.settings must list at least one class table");
            for (const Json& s : *settings) {
                Obj so(s, "sweep.settings[]");
                PowerClassSetting pcs;
                pcs.label = so.require_str("label");
                auto t = so.object("terrestrial");
                auto a = so.object("aerial");
                if (!t.has_value() || !a.has_value())
                    throw ConfigError(
                        "sweep.settings[] needs terrestrial and aerial class entries");
                pcs.terrestrial = read_power_class(*t, spec.power);
                pcs.aerial = read_power_class(*a, spec.power);
                so.finish();
                spec.power_settings.push_back(pcs);
            }
        } else if (var == "height_threshold") {
            spec.sweep_variable = SweepVariable::height_threshold;
            spec.sweep_values = sweep->num_array("values");
            if (spec.sweep_values.empty())
                throw ConfigError("sweep.values must list at least one height threshold");
            spec.height_sweep.hysteresis_m =
                sweep->num("hysteresis_m", spec.height_sweep.hysteresis_m);
            spec.height_sweep.tick_ms = sweep->num("tick_ms", spec.height_sweep.tick_ms);
            spec.height_sweep.duration_ms =
                sweep->num("duration_ms", spec.height_sweep.duration_ms);
        } else {
            throw ConfigError(
                "sweep.variable must be aerial_ratio, power_classes or height_threshold");
        }
        sweep->finish();
    }

    if (spec.type == ActionType::meas_demo) {
        auto d = top.object("demo");
        if (!d.has_value()) throw ConfigError("demo is required for meas_demo");
        spec.meas_demo.ue_height_m = d->num("ue_height_m", spec.meas_demo.ue_height_m);
        spec.meas_demo.speed_kmh = d->num("speed_kmh", spec.meas_demo.speed_kmh);
        if (auto p = d->num_array("path_start"); !p.empty()) {
            if (p.size() != 2) throw ConfigError("demo.path_start must be [x, y]");
            spec.meas_demo.path_start = {p[0], p[1]};
        }
        spec.meas_demo.heading_deg = d->num("heading_deg", spec.meas_demo.heading_deg);
        spec.meas_demo.duration_ms = d->num("duration_ms", spec.meas_demo.duration_ms);
        spec.meas_demo.tick_ms = d->num("tick_ms", spec.meas_demo.tick_ms);
        if (auto m = d->object("meas"); m.has_value()) {
            spec.meas_demo.meas = read_meas(*m);
            m->finish();
        }
        d->finish();
    }

    if (spec.type == ActionType::mobility) {
        auto mo = top.object("mobility");
        if (!mo.has_value()) throw ConfigError("mobility section is required");
        spec.mobility.n_seeds = mo->integer("n_seeds", spec.mobility.n_seeds);
        spec.mobility.duration_ms = mo->num("duration_ms", spec.mobility.duration_ms);
        spec.mobility.tick_ms = mo->num("tick_ms", spec.mobility.tick_ms);
        if (auto h = mo->object("handover"); h.has_value())
            spec.mobility.handover = read_handover(*h);
        const Json* cats = mo->array("categories");
        if (cats == nullptr || cats->empty())
            throw ConfigError("mobility.categories must list at least one category");
        for (const Json& c : *cats) {
            Obj co(c, "mobility.categories[]");
            MobilityCategory cat;
            cat.label = co.require_str("label");
            cat.scenario = scenario_kind_from_string(co.str("scenario", "UMa-AV"));
            cat.kind = ue_kind_from_string(co.str("kind", "aerial"),
                                           "mobility.categories[].kind");
            cat.height_m = co.num("height_m", cat.height_m);
            cat.speed_kmh = co.num("speed_kmh", cat.speed_kmh);
            co.finish();
            spec.mobility.categories.push_back(cat);
        }
        mo->finish();
    }

    top.finish();
    spec.validate();
    return spec;
}

}  // namespace

void CampaignSpec::validate() const {
    if (type == ActionType::campaign || type == ActionType::meas_demo) scenario.validate();
    power.validate();
    if (n_drops < 1) throw ConfigError("n_drops must be >= 1");
    if (n_snapshots < 1) throw ConfigError("n_snapshots must be >= 1");
    if (throughput.efficiency <= 0.0) throw ConfigError("throughput.efficiency must be > 0");
    if (throughput.max_bps_hz <= 0.0) throw ConfigError("throughput.max_bps_hz must be > 0");
    if (type == ActionType::campaign) {
        if (sweep_variable == SweepVariable::aerial_ratio) {
            for (double r : sweep_values) {
                if (r < 0.0 || r > 1.0)
                    throw ConfigError("sweep.values: aerial ratios must lie in [0, 1]");
            }
        }
        if (sweep_variable == SweepVariable::power_classes) {
            for (const auto& s : power_settings) {
                if (!is_valid_alpha(s.terrestrial.alpha) || !is_valid_alpha(s.aerial.alpha))
                    throw ConfigError("sweep.settings: alpha outside the allowed set");
                validate_p0_ue(s.terrestrial.p0_ue_specific_db);
                validate_p0_ue(s.aerial.p0_ue_specific_db);
            }
        }
        if (sweep_variable == SweepVariable::height_threshold) {
            for (double h : sweep_values) {
                if (h <= 0.0) throw ConfigError("sweep.values: height thresholds must be > 0");
            }
        }
    }
    if (type == ActionType::meas_demo) {
        meas_demo.meas.validate();
        if (meas_demo.tick_ms <= 0.0) throw ConfigError("demo.tick_ms must be > 0");
        if (meas_demo.duration_ms <= 0.0) throw ConfigError("demo.duration_ms must be > 0");
    }
    if (type == ActionType::mobility) {
        mobility.handover.validate();
        if (mobility.n_seeds < 1) throw ConfigError("mobility.n_seeds must be >= 1");
    }
}

std::vector<SweepSetting> CampaignSpec::sweep_settings() const {
    std::vector<SweepSetting> out;
    if (sweep_variable == SweepVariable::aerial_ratio) {
        for (double r : sweep_values) {
            SweepSetting s;
            std::ostringstream label;
            label << "ratio=" << r;
            s.label = label.str();
            s.aerial_ratio = r;
            out.push_back(s);
        }
    } else if (sweep_variable == SweepVariable::power_classes) {
        for (const PowerClassSetting& pcs : power_settings) {
            SweepSetting s;
            s.label = pcs.label;
            PowerControlConfig pc = power;
            pc.classes[UeKind::terrestrial_outdoor] = pcs.terrestrial;
            pc.classes[UeKind::aerial] = pcs.aerial;
            s.power = pc;
            out.push_back(s);
        }
    }
    return out;
}

namespace {

Json scenario_json(const ScenarioConfig& c) {
    Json j;
    j["kind"] = to_string(c.kind);
    j["inter_site_distance_m"] = c.inter_site_distance_m;
    j["enb_height_m"] = c.enb_height_m;
    j["carrier_freq_ghz"] = c.carrier_freq_ghz;
    j["bandwidth_rbs"] = c.bandwidth_rbs;
    j["ues_per_cell"] = c.ues_per_cell;
    j["aerial_ratio"] = c.aerial_ratio;
    j["aerial_height_range_m"] = {c.aerial_height_min_m, c.aerial_height_max_m};
    j["n_sites"] = c.n_sites;
    j["sectors_per_site"] = c.sectors_per_site;
    j["noise_figure_db"] = c.noise_figure_db;
    j["thermal_noise_density_dbm_hz"] = c.thermal_noise_density_dbm_hz;
    j["enb_tx_power_dbm"] = c.enb_tx_power_dbm;
    j["downtilt_deg"] = c.downtilt_deg;
    j["ue_antenna_gain_dbi"] = c.ue_antenna_gain_dbi;
    j["indoor_fraction"] = c.indoor_fraction;
    j["penetration_loss_db"] = c.penetration_loss_db;
    j["activity_factor"] = c.activity_factor;
    j["shadow_sector_correlation"] = c.shadow_sector_correlation;
    j["antenna"] = {{"horizontal_hpbw_deg", c.antenna.horizontal_hpbw_deg},
                    {"vertical_hpbw_deg", c.antenna.vertical_hpbw_deg},
                    {"front_back_ratio_db", c.antenna.front_back_ratio_db},
                    {"sidelobe_floor_db", c.antenna.sidelobe_floor_db},
                    {"max_gain_dbi", c.antenna.max_gain_dbi}};
    return j;
}

Json power_class_json(const PowerClass& c) {
    return Json{{"alpha", c.alpha}, {"p0_ue_specific_db", c.p0_ue_specific_db}};
}

Json power_json(const PowerControlConfig& p) {
    Json j;
    j["p0_nominal_dbm"] = p.p0_nominal_dbm;
    j["p0_ue_specific_db"] = p.p0_ue_specific_db;
    j["alpha"] = p.alpha;
    j["p_cmax_dbm"] = p.p_cmax_dbm;
    j["min_power_dbm"] = p.min_power_dbm;
    j["tpc_step_db"] = p.tpc_step_db;
    if (!p.classes.empty()) {
        Json classes;
        if (auto it = p.classes.find(UeKind::terrestrial_outdoor); it != p.classes.end())
            classes["terrestrial"] = power_class_json(it->second);
        if (auto it = p.classes.find(UeKind::aerial); it != p.classes.end())
            classes["aerial"] = power_class_json(it->second);
        j["classes"] = classes;
    }
    return j;
}

Json meas_json(const MeasConfig& m) {
    Json j;
    j["event"] = to_string(m.event);
    j["a3_offset_db"] = m.a3_offset_db;
    j["a4_threshold_dbm"] = m.a4_threshold_dbm;
    j["a5_threshold1_dbm"] = m.a5_threshold1_dbm;
    j["a5_threshold2_dbm"] = m.a5_threshold2_dbm;
    j["hysteresis_db"] = m.hysteresis_db;
    j["ttt_ms"] = m.ttt_ms;
    j["cell_count_x"] = m.cell_count_x;
    j["l3_filter_k"] = m.l3_filter_k;
    j["serving_cell_id"] = m.serving_cell_id;
    return j;
}

Json spec_json(const CampaignSpec& spec) {
    Json j;
    j["schema_version"] = spec.schema_version;
    j["name"] = spec.name;
    j["type"] = spec.type == ActionType::campaign    ? "campaign"
                : spec.type == ActionType::meas_demo ? "meas_demo"
                                                     : "mobility";
    if (spec.type != ActionType::mobility) j["scenario"] = scenario_json(spec.scenario);
    j["power_control"] = power_json(spec.power);
    j["throughput"] = {{"min_sinr_db", spec.throughput.min_sinr_db},
                       {"efficiency", spec.throughput.efficiency},
                       {"max_bps_hz", spec.throughput.max_bps_hz}};
    if (spec.channel.shadow_sigma_override_db.has_value() ||
        !spec.channel.los_table_csv.empty()) {
        Json c;
        if (spec.channel.shadow_sigma_override_db.has_value())
            c["shadow_sigma_override_db"] = *spec.channel.shadow_sigma_override_db;
        if (!spec.channel.los_table_csv.empty())
            c["los_table_csv"] = spec.channel.los_table_csv;
        j["channel"] = c;
    }
    j["n_drops"] = spec.n_drops;
    j["n_snapshots"] = spec.n_snapshots;
    j["master_seed"] = spec.master_seed;
    if (!spec.output_dir.empty()) j["output_dir"] = spec.output_dir;

    if (spec.type == ActionType::campaign) {
        Json sweep;
        switch (spec.sweep_variable) {
            case SweepVariable::aerial_ratio:
                sweep["variable"] = "aerial_ratio";
                sweep["values"] = spec.sweep_values;
                break;
            case SweepVariable::power_classes: {
                sweep["variable"] = "power_classes";
                Json settings = Json::array();
                for (const auto& s : spec.power_settings) {
                    settings.push_back({{"label", s.label},
                                        {"terrestrial", power_class_json(s.terrestrial)},
                                        {"aerial", power_class_json(s.aerial)}});
                }
                sweep["settings"] = settings;
                break;
            }
            case SweepVariable::height_threshold:
                sweep["variable"] = "height_threshold";
                sweep["values"] = spec.sweep_values;
                sweep["hysteresis_m"] = spec.height_sweep.hysteresis_m;
                sweep["tick_ms"] = spec.height_sweep.tick_ms;
                sweep["duration_ms"] = spec.height_sweep.duration_ms;
                break;
        }
        j["sweep"] = sweep;
    }
    if (spec.type == ActionType::meas_demo) {
        Json d;
        d["ue_height_m"] = spec.meas_demo.ue_height_m;
        d["speed_kmh"] = spec.meas_demo.speed_kmh;
        d["path_start"] = {spec.meas_demo.path_start.x, spec.meas_demo.path_start.y};
        d["heading_deg"] = spec.meas_demo.heading_deg;
        d["duration_ms"] = spec.meas_demo.duration_ms;
        d["tick_ms"] = spec.meas_demo.tick_ms;
        d["meas"] = meas_json(spec.meas_demo.meas);
        j["demo"] = d;
    }
    if (spec.type == ActionType::mobility) {
        Json mo;
        mo["n_seeds"] = spec.mobility.n_seeds;
        mo["duration_ms"] = spec.mobility.duration_ms;
        mo["tick_ms"] = spec.mobility.tick_ms;
        mo["handover"] = {{"a3_offset_db", spec.mobility.handover.a3_offset_db},
                          {"ttt_ms", spec.mobility.handover.ttt_ms},
                          {"prep_delay_ms", spec.mobility.handover.prep_delay_ms},
                          {"exec_time_ms", spec.mobility.handover.exec_time_ms},
                          {"qout_db", spec.mobility.handover.qout_db},
                          {"qin_db", spec.mobility.handover.qin_db},
                          {"t310_ms", spec.mobility.handover.t310_ms},
                          {"l3_filter_k", spec.mobility.handover.l3_filter_k}};
        Json cats = Json::array();
        for (const auto& c : spec.mobility.categories) {
            cats.push_back({{"label", c.label},
                            {"scenario", to_string(c.scenario)},
                            {"kind", c.kind == UeKind::aerial ? "aerial" : "terrestrial"},
                            {"height_m", c.height_m},
                            {"speed_kmh", c.speed_kmh}});
        }
        mo["categories"] = cats;
        j["mobility"] = mo;
    }
    return j;
}

[[noreturn]] void rethrow_parse_error(const nlohmann::json::parse_error& e,
                                      const std::string& text) {
    int line = 1;
    int column = 1;
    const std::size_t upto = std::min(e.byte > 0 ? e.byte - 1 : 0, text.size());
    for (std::size_t i = 0; i < upto; ++i) {
        if (text[i] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    throw SpecParseError(e.what(), line, column);
}

Json parse_json(const std::string& text) {
    try {
        return Json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        rethrow_parse_error(e, text);
    }
}

}  // namespace

CampaignSpec parse_spec(const std::string& text) {
    Json root = parse_json(text);
    if (!root.is_object()) throw ConfigError("spec root must be an object");
    // Manifests wrap the spec under "campaign" next to the version echo.
    if (root.contains("campaign")) {
        Json inner = root.at("campaign");
        return read_spec(inner);
    }
    return read_spec(root);
}

CampaignSpec load_spec(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open spec file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_spec(ss.str());
}

std::string spec_to_json(const CampaignSpec& spec) { return spec_json(spec).dump(2) + "\n"; }

std::string manifest_json(const CampaignSpec& spec) {
    Json m;
    m["schema_version"] = 1;
    m["skysim_version"] = kVersion;
    m["campaign"] = spec_json(spec);
    return m.dump(2) + "\n";
}

MeasConfig load_meas_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open measurement config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    Json root = parse_json(ss.str());
    Obj o(root, "");
    if (!o.has("schema_version")) throw ConfigError("schema_version is required");
    const int version = o.integer("schema_version", 1);
    if (version != 1) throw ConfigError("schema_version must be 1");
    MeasConfig m = read_meas(o);
    if (auto h = o.object("height_report"); h.has_value()) {
        h->num("height_threshold_m", 0.0);
        h->num("hysteresis_m", 0.0);
        h->finish();
    }
    o.finish();
    m.validate();
    return m;
}

std::optional<HeightReportConfig> load_height_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open measurement config '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    Json root = parse_json(ss.str());
    if (!root.is_object() || !root.contains("height_report")) return std::nullopt;
    Obj h(root.at("height_report"), "height_report");
    HeightReportConfig cfg;
    cfg.height_threshold_m = h.num("height_threshold_m", cfg.height_threshold_m);
    cfg.hysteresis_m = h.num("hysteresis_m", cfg.hysteresis_m);
    h.finish();
    cfg.validate();
    return cfg;
}

}  // namespace skysim
