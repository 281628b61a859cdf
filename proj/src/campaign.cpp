// SPDX-License-Identifier: Apache-2.0

#include "skysim/campaign.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>

#include "skysim/csv.hpp"
#include "skysim/parallel.hpp"

namespace skysim {

namespace {

std::string sanitize(const std::string& label) {
    std::string out;
    for (char ch : label) {
        out += (std::isalnum(static_cast<unsigned char>(ch)) || ch == '.' || ch == '-')
                   ? ch
                   : '_';
    }
    return out;
}

}  // namespace

ArtifactSet campaign_artifacts(const CampaignResult& result) {
    ArtifactSet files;

    std::string metrics = "setting,metric,kind,stat,value\n";
    for (const SettingResult& sr : result.settings) {
        // Collect the metric/kind grid present in this setting.
        std::map<std::string, std::set<std::string>> grid;
        for (const MetricSamples& drop : sr.per_drop) {
            for (const auto& [metric, kinds] : drop) {
                for (const auto& [kind, samples] : kinds) {
                    (void)samples;
                    grid[metric].insert(kind);
                }
            }
        }
        for (const auto& [metric, kinds] : grid) {
            for (const std::string& kind : kinds) {
                const MetricsCdf cdf = sr.merged(metric, kind);
                if (cdf.empty()) continue;
                const std::string prefix =
                    sr.label + "," + metric + "," + kind + ",";
                metrics += prefix + "p5," + csv_num(cdf.percentile(5.0)) + "\n";
                metrics += prefix + "p50," + csv_num(cdf.percentile(50.0)) + "\n";
                metrics += prefix + "p95," + csv_num(cdf.percentile(95.0)) + "\n";
                metrics += prefix + "mean," + csv_num(cdf.mean()) + "\n";
                metrics += prefix + "count," + csv_num(cdf.size()) + "\n";

                const std::string stem =
                    sanitize(sr.label) + "__" + metric + "__" + kind;
                std::string raw = "value\n";
                for (double v : cdf.samples()) raw += csv_num(v) + "\n";
                files["raw/" + stem + ".csv"] = raw;

                std::string plot = "value,cdf\n";
                const double n = static_cast<double>(cdf.size());
                for (std::size_t i = 0; i < cdf.size(); ++i) {
                    plot += csv_num(cdf.samples()[i]) + "," +
                            csv_num(static_cast<double>(i + 1) / n) + "\n";
                }
                files["plots/" + stem + ".csv"] = plot;
            }
        }
    }
    files["metrics.csv"] = metrics;
    return files;
}

std::vector<TraceTick> synthesize_a4_trace(const CampaignSpec& spec, MeasConfig& meas_out) {
    const MeasDemoSpec& demo = spec.meas_demo;
    const ScenarioConfig& cfg = spec.scenario;
    const auto cells = build_layout(cfg);
    // Physical fly-by over the real grid: no wraparound images.
    const Wraparound wrap;
    const auto model = make_channel_model(cfg, spec.channel);

    const double speed_mps = demo.speed_kmh / 3.6;
    const Vec2 dir{std::cos(deg_to_rad(demo.heading_deg)),
                   std::sin(deg_to_rad(demo.heading_deg))};
    const auto n_ticks = static_cast<long long>(demo.duration_ms / demo.tick_ms);

    // Deterministic RSRP: pathloss + antenna only. At the demo altitude the
    // LOS probability is 1 in UMa-AV, so no random draw is involved.
    auto rsrp_at = [&](const Cell& cell, Vec3 pos) {
        const Vec2 d = wrap.displacement(cell.site_position, pos.xy());
        const double d2d = d.norm();
        const double dh = pos.z - cell.antenna_height_m;
        const double d3d = std::max(std::sqrt(d2d * d2d + dh * dh), 1.0);
        const bool los = model->los_probability(pos.z, d2d) >= 0.5;
        const double pl = los ? model->pathloss_los_db(pos.z, d3d)
                              : model->pathloss_nlos_db(pos.z, d3d);
        const double g = antenna_gain_wrapped(cfg.antenna, cell, d, pos.z);
        return cell.tx_power_dbm - pl + g + cfg.ue_antenna_gain_dbi;
    };

    std::vector<TraceTick> trace;
    trace.reserve(static_cast<std::size_t>(n_ticks) + 1);
    for (long long tick = 0; tick <= n_ticks; ++tick) {
        const double t = static_cast<double>(tick) * demo.tick_ms;
        const Vec2 xy = demo.path_start + dir * (speed_mps * t / 1e3);
        const Vec3 pos{xy.x, xy.y, demo.ue_height_m};
        TraceTick tt;
        tt.t_ms = t;
        tt.height = HeightSample{demo.ue_height_m,
                                 {dir.x * speed_mps, dir.y * speed_mps, 0.0}};
        for (const Cell& cell : cells) {
            tt.rsrp_dbm[cell.cell_id] = rsrp_at(cell, pos);
        }
        trace.push_back(std::move(tt));
    }

    meas_out = demo.meas;
    if (meas_out.serving_cell_id < 0 && !trace.empty()) {
        const auto& first = trace.front().rsrp_dbm;
        meas_out.serving_cell_id =
            std::max_element(first.begin(), first.end(), [](const auto& a, const auto& b) {
                return a.second < b.second;
            })->first;
    }
    return trace;
}

std::vector<MobilityRunResult> run_mobility_campaign(const MobilitySpec& spec,
                                                     std::uint64_t master_seed, int jobs) {
    std::vector<MobilityRunResult> results(spec.categories.size());
    for (std::size_t c = 0; c < spec.categories.size(); ++c) {
        results[c].label = spec.categories[c].label;
        results[c].per_seed.resize(static_cast<std::size_t>(spec.n_seeds));
    }

    const std::size_t n_work =
        spec.categories.size() * static_cast<std::size_t>(spec.n_seeds);
    parallel_for(n_work, jobs, [&](std::size_t w) {
        const std::size_t cat_idx = w / static_cast<std::size_t>(spec.n_seeds);
        const int seed_idx = static_cast<int>(w % static_cast<std::size_t>(spec.n_seeds));
        const MobilityCategory& cat = spec.categories[cat_idx];

        ScenarioConfig cfg = ScenarioConfig::preset(cat.scenario);
        const auto model = make_channel_model(cfg);
        const auto cells = build_layout(cfg);

        const std::uint64_t run_seed =
            mix64(master_seed ^ mix64(static_cast<std::uint64_t>(seed_idx) + 0x5EED));
        Rng path_rng = Rng::derive(run_seed, std::uint64_t{0xF1});

        MobileUe ue;
        ue.ue_id = 0;
        ue.kind = cat.kind;
        ue.path = random_chord_path(cfg, cat.height_m, cat.speed_kmh / 3.6,
                                    spec.duration_ms, path_rng);

        const auto stats = simulate_mobility(cfg, *model, cells, {ue}, spec.handover,
                                             spec.duration_ms, spec.tick_ms, run_seed);
        results[cat_idx].per_seed[static_cast<std::size_t>(seed_idx)] = stats.front();
    });
    return results;
}

std::vector<HeightSweepRow> run_height_sweep(const HeightSweepSpec& spec,
                                             const std::vector<double>& thresholds) {
    std::vector<HeightSweepRow> rows;
    for (double th : thresholds) {
        HeightReportConfig cfg{th, spec.hysteresis_m};
        cfg.validate();
        const double span = std::max(4.0 * spec.hysteresis_m, 0.5 * th);
        const auto n_ticks =
            static_cast<long long>(spec.duration_ms / spec.tick_ms);

        auto run_profile = [&](auto height_fn) {
            HeightReportState state;
            int count = 0;
            for (long long i = 0; i <= n_ticks; ++i) {
                const double t = static_cast<double>(i) * spec.tick_ms;
                const double frac = static_cast<double>(i) / static_cast<double>(n_ticks);
                const double h = height_fn(frac);
                const double vz = 0.0;
                if (height_step(state, t, h, {0, 0, vz}, {}, cfg).has_value()) ++count;
            }
            return count;
        };

        HeightSweepRow row;
        row.threshold_m = th;
        row.ascending_reports =
            run_profile([&](double f) { return std::max(th - span + 2.0 * span * f, 0.0); });
        row.descending_reports =
            run_profile([&](double f) { return std::max(th + span - 2.0 * span * f, 0.0); });
        row.level_reports = run_profile(
            [&](double) { return std::max(th - span, 0.0); });
        rows.push_back(row);
    }
    return rows;
}

namespace {

ArtifactSet meas_demo_artifacts(const CampaignSpec& spec) {
    MeasConfig meas;
    const auto trace = synthesize_a4_trace(spec, meas);
    const auto reports = replay_trace(trace, meas);
    ArtifactSet files;
    files["trace.csv"] = trace_csv(trace);
    files["reports.csv"] = report_log_csv(reports);
    return files;
}

ArtifactSet mobility_artifacts(const CampaignSpec& spec, int jobs) {
    const auto results = run_mobility_campaign(spec.mobility, spec.master_seed, jobs);
    std::string csv =
        "category,seed,attempts,handovers,failures,rlf,ping_pongs,outage_ms\n";
    std::string summary = "category,mean_failures_per_min,mean_rlf_per_min,"
                          "mean_hof_rlf_per_min,mean_outage_ms\n";
    const double minutes = spec.mobility.duration_ms / 60000.0;
    for (const MobilityRunResult& r : results) {
        double fail_sum = 0.0;
        double rlf_sum = 0.0;
        double outage_sum = 0.0;
        for (std::size_t s = 0; s < r.per_seed.size(); ++s) {
            const MobilityStats& st = r.per_seed[s];
            csv += r.label + "," + csv_num(s) + "," + csv_num(st.handover_attempts) + "," +
                   csv_num(st.handovers) + "," + csv_num(st.handover_failures) + "," +
                   csv_num(st.radio_link_failures) + "," + csv_num(st.ping_pongs) + "," +
                   csv_num(st.time_in_outage_ms) + "\n";
            fail_sum += st.handover_failures;
            rlf_sum += st.radio_link_failures;
            outage_sum += st.time_in_outage_ms;
        }
        const double n = static_cast<double>(r.per_seed.size());
        summary += r.label + "," + csv_num(fail_sum / n / minutes) + "," +
                   csv_num(rlf_sum / n / minutes) + "," +
                   csv_num((fail_sum + rlf_sum) / n / minutes) + "," +
                   csv_num(outage_sum / n) + "\n";
    }
    ArtifactSet files;
    files["mobility.csv"] = csv;
    files["mobility_summary.csv"] = summary;
    return files;
}

ArtifactSet height_sweep_artifacts(const CampaignSpec& spec) {
    const auto rows = run_height_sweep(spec.height_sweep, spec.sweep_values);
    std::string csv = "threshold_m,ascending_reports,descending_reports,level_reports\n";
    for (const HeightSweepRow& r : rows) {
        csv += csv_num(r.threshold_m) + "," + csv_num(r.ascending_reports) + "," +
               csv_num(r.descending_reports) + "," + csv_num(r.level_reports) + "\n";
    }
    ArtifactSet files;
    files["height_reports.csv"] = csv;
    return files;
}

}  // namespace

ArtifactSet run_action(const CampaignSpec& spec_in, const RunOptions& opts) {
    CampaignSpec spec = spec_in;
    if (opts.seed_override.has_value()) spec.master_seed = *opts.seed_override;
    spec.validate();

    ArtifactSet files;
    switch (spec.type) {
        case ActionType::campaign: {
            if (spec.sweep_variable == SweepVariable::height_threshold) {
                files = height_sweep_artifacts(spec);
                break;
            }
            const CampaignResult result =
                run_campaign(spec.scenario, spec.power, spec.sweep_settings(), spec.n_drops,
                             spec.n_snapshots, spec.master_seed, opts.jobs, spec.throughput,
                             spec.channel);
            files = campaign_artifacts(result);
            break;
        }
        case ActionType::meas_demo: files = meas_demo_artifacts(spec); break;
        case ActionType::mobility: files = mobility_artifacts(spec, opts.jobs); break;
    }
    files["manifest.json"] = manifest_json(spec);
    return files;
}

void write_artifacts(const std::string& out_dir, const ArtifactSet& files) {
    namespace fs = std::filesystem;
    for (const auto& [rel, content] : files) {
        const fs::path path = fs::path(out_dir) / rel;
        fs::create_directories(path.parent_path());
        std::ofstream out(path, std::ios::binary);
        if (!out) throw ConfigError("cannot write output file '" + path.string() + "'");
        out << content;
    }
}

}  // namespace skysim
