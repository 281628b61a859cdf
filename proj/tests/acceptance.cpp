// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Campaign-level criteria run the shipped presets end to end.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "skysim/campaign.hpp"
#include "skysim/presets.hpp"
#include "skysim/uas.hpp"
#include "support/meas_oracle.hpp"

using namespace skysim;

namespace {

int g_failures = 0;

void report(int criterion, bool pass, const std::string& what, const std::string& detail) {
    std::printf("[%s] %2d. %s — %s\n", pass ? "PASS" : "FAIL", criterion, what.c_str(),
                detail.c_str());
    if (!pass) ++g_failures;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

// One-sided sign test: P(X >= wins) for X ~ Binomial(n, 1/2).
double sign_test_p(int wins, int n) {
    double p = 0.0;
    for (int k = wins; k <= n; ++k) {
        double logc = 0.0;
        for (int i = 0; i < k; ++i) logc += std::log2(double(n - i)) - std::log2(double(i + 1));
        p += std::exp2(logc - n);
    }
    return p;
}

double drop_p5(const SettingResult& sr, int drop, const char* metric, const char* kind) {
    const auto& ms = sr.per_drop[static_cast<std::size_t>(drop)];
    return MetricsCdf(ms.at(metric).at(kind)).percentile(5.0);
}

// ---- criteria 1 + 2: IoT and geometry trends over the fig1a campaign ----

void criteria_iot_and_geometry() {
    const auto t0 = std::chrono::steady_clock::now();
    const CampaignSpec spec = preset_spec("fig1a");
    RunOptions opts;
    opts.jobs = 2;
    const CampaignResult result =
        run_campaign(spec.scenario, spec.power, spec.sweep_settings(), spec.n_drops,
                     spec.n_snapshots, spec.master_seed, opts.jobs, spec.throughput,
                     spec.channel);
    const double elapsed =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    std::vector<double> means;
    for (const SettingResult& sr : result.settings) {
        means.push_back(sr.merged("ul_iot", "terrestrial_cells").mean());
    }
    bool monotone = true;
    for (std::size_t i = 1; i < means.size(); ++i) {
        if (means[i] < means[i - 1] - 1e-12) monotone = false;
    }
    const double gap = means.back() - means.front();
    std::string detail = "mean terrestrial-cell IoT dB:";
    for (double m : means) detail += " " + fmt(m);
    detail += "; gap " + fmt(gap) + " dB; " + fmt(elapsed) + " s";
    report(1, monotone && gap >= 1.0 && elapsed < 300.0,
           "uplink IoT rises with the aerial-UE ratio", detail);

    // Criterion 2 reads the 25% sweep point of the same campaign.
    const SettingResult* at25 = nullptr;
    for (const SettingResult& sr : result.settings) {
        if (sr.label == "ratio=0.25") at25 = &sr;
    }
    const double p5_aerial = at25->merged("dl_geometry", "aerial_above50m").percentile(5.0);
    const double p5_terr = at25->merged("dl_geometry", "terrestrial").percentile(5.0);
    report(2, p5_aerial <= p5_terr - 2.0,
           "aerial 5th-percentile geometry trails terrestrial by >= 2 dB",
           "aerial(>=50m) p5 " + fmt(p5_aerial) + " dB vs terrestrial p5 " + fmt(p5_terr) +
               " dB");
}

// ---- criterion 3: multi-cell A4 fly-by replay ----

void criterion_fig3_replay() {
    const CampaignSpec spec = preset_spec("fig3");
    MeasConfig meas;
    const auto trace = synthesize_a4_trace(spec, meas);

    // Independent scan: per neighbour cell, when does the filtered RSRP
    // first hold above the threshold for TTT (join time)?
    std::map<int, double> filt;
    std::map<int, double> met;
    std::map<int, double> join;
    for (const TraceTick& tick : trace) {
        for (const auto& [cell, v] : tick.rsrp_dbm) {
            filt[cell] = filt.count(cell) ? l3_filter(filt[cell], v, meas.l3_filter_k) : v;
            if (cell == meas.serving_cell_id || join.count(cell)) continue;
            if (filt[cell] > meas.a4_threshold_dbm) {
                if (!met.count(cell)) met[cell] = tick.t_ms;
                if (tick.t_ms - met[cell] >= meas.ttt_ms) join[cell] = tick.t_ms;
            } else {
                met.erase(cell);
            }
        }
    }
    std::vector<double> joins;
    for (const auto& [cell, t] : join) joins.push_back(t);
    std::sort(joins.begin(), joins.end());

    const auto reports = replay_trace(trace, meas);
    bool ok = joins.size() >= 5;
    std::string detail;
    if (!ok) {
        detail = "only " + std::to_string(joins.size()) + " cells qualify";
    } else {
        const double t4 = joins[3];
        const double t5 = joins[4];
        const bool distinct = std::set<double>(joins.begin(), joins.begin() + 5).size() == 5;
        const bool one_report = reports.size() == 1;
        const bool timing =
            one_report && reports[0].t_ms >= t4 - 1e-9 && reports[0].t_ms - t4 <= 40.0;
        const bool four_cells = one_report && reports[0].cells.size() == 4;
        ok = distinct && one_report && timing && four_cells && t5 > t4;
        detail = std::to_string(reports.size()) + " report(s)";
        if (one_report) {
            detail += " at t=" + fmt(reports[0].t_ms / 1000.0) + " s, 4th TTT completion " +
                      fmt(t4 / 1000.0) + " s, 5th qualifies " + fmt(t5 / 1000.0) + " s";
        }
    }
    report(3, ok, "one A4/X=4 report at the 4th cell's TTT completion, none after", detail);
}

// ---- criterion 4: per-class pathloss compensation lever ----

void criterion_power_lever() {
    const CampaignSpec spec = preset_spec("fig5");
    const CampaignResult result =
        run_campaign(spec.scenario, spec.power, spec.sweep_settings(), spec.n_drops,
                     spec.n_snapshots, spec.master_seed, 2, spec.throughput, spec.channel);

    const SettingResult& equal = result.settings[0];
    const SettingResult& reduced = result.settings[1];
    const SettingResult& raised = result.settings[2];

    int improve_wins = 0;
    int improve_n = 0;
    int degrade_wins = 0;
    int degrade_n = 0;
    for (int d = 0; d < spec.n_drops; ++d) {
        const double base = drop_p5(equal, d, "ul_throughput", "terrestrial");
        const double better = drop_p5(reduced, d, "ul_throughput", "terrestrial");
        const double worse = drop_p5(raised, d, "ul_throughput", "terrestrial");
        if (better != base) {
            ++improve_n;
            if (better > base) ++improve_wins;
        }
        if (worse != base) {
            ++degrade_n;
            if (worse < base) ++degrade_wins;
        }
    }
    const double p_improve = improve_n > 0 ? sign_test_p(improve_wins, improve_n) : 1.0;
    const double p_degrade = degrade_n > 0 ? sign_test_p(degrade_wins, degrade_n) : 1.0;

    const double p5_equal = equal.merged("ul_throughput", "terrestrial").percentile(5.0);
    const double p5_reduced = reduced.merged("ul_throughput", "terrestrial").percentile(5.0);
    const double p5_raised = raised.merged("ul_throughput", "terrestrial").percentile(5.0);
    const double mean_equal = equal.merged("ul_throughput", "terrestrial").mean();
    const double mean_reduced = reduced.merged("ul_throughput", "terrestrial").mean();

    // Magnitudes recorded, not asserted.
    std::printf("      p5 terrestrial throughput bps/Hz: equal %s, reduced-alpha %s "
                "(%+.0f%%), raised-P0 %s; mean %+.0f%%\n",
                fmt(p5_equal).c_str(), fmt(p5_reduced).c_str(),
                p5_equal > 0 ? (p5_reduced / p5_equal - 1.0) * 100.0 : 0.0,
                fmt(p5_raised).c_str(),
                mean_equal > 0 ? (mean_reduced / mean_equal - 1.0) * 100.0 : 0.0);

    report(4, p_improve < 0.05 && p_degrade < 0.05,
           "lower aerial alpha lifts terrestrial p5 throughput; raised aerial P0 sinks it",
           "improve " + std::to_string(improve_wins) + "/" + std::to_string(improve_n) +
               " drops (p=" + fmt(p_improve) + "), degrade " + std::to_string(degrade_wins) +
               "/" + std::to_string(degrade_n) + " (p=" + fmt(p_degrade) + ")");
}

// ---- criterion 5: P0 UE-specific range gate ----

void criterion_p0_gate() {
    bool ok = true;
    try {
        ok = ok && validate_p0_ue(-16) == P0Range::extended;
        ok = ok && validate_p0_ue(15) == P0Range::extended;
        ok = ok && validate_p0_ue(-8) == P0Range::legacy_compatible;
        ok = ok && validate_p0_ue(7) == P0Range::legacy_compatible;
        ok = ok && validate_p0_ue(-9) == P0Range::extended;
        ok = ok && validate_p0_ue(8) == P0Range::extended;
    } catch (const ConfigError&) {
        ok = false;
    }
    int rejections = 0;
    for (int v : {-17, 16, -100, 100}) {
        try {
            validate_p0_ue(v);
        } catch (const ConfigError&) {
            ++rejections;
        }
    }
    ok = ok && rejections == 4;

    // Same gate at the config surface.
    bool config_rejects = false;
    try {
        parse_spec(R"({"schema_version":1,"scenario":{"kind":"UMa-AV"},
                       "power_control":{"p0_ue_specific_db":16},
                       "sweep":{"variable":"aerial_ratio","values":[0]}})");
    } catch (const ConfigError&) {
        config_rejects = true;
    }
    report(5, ok && config_rejects, "P0 UE-specific range gate [-16, +15]",
           "endpoints accepted, -17/+16 rejected, outside [-8,+7] flagged extended");
}

// ---- criterion 6: oracle equivalence on randomized traces ----

void criterion_oracle_equivalence() {
    Rng rng(0xACCE97);
    int mismatches = 0;
    const int n_traces = 1000;
    for (int iteration = 0; iteration < n_traces; ++iteration) {
        MeasConfig cfg;
        cfg.event = static_cast<MeasEvent>(rng.uniform_int(3));
        cfg.cell_count_x = 1 + static_cast<int>(rng.uniform_int(4));
        cfg.ttt_ms = 40.0 * static_cast<double>(rng.uniform_int(6));
        cfg.hysteresis_db = rng.uniform(0.0, 2.0);
        cfg.a3_offset_db = rng.uniform(-2.0, 4.0);
        cfg.a4_threshold_dbm = rng.uniform(-85.0, -70.0);
        cfg.a5_threshold1_dbm = rng.uniform(-80.0, -65.0);
        cfg.a5_threshold2_dbm = rng.uniform(-85.0, -70.0);
        cfg.l3_filter_k = static_cast<int>(rng.uniform_int(3)) * 4;
        cfg.serving_cell_id = 0;

        const int n_cells = 2 + static_cast<int>(rng.uniform_int(7));
        const int n_ticks = 20 + static_cast<int>(rng.uniform_int(181));
        std::vector<double> level(static_cast<std::size_t>(n_cells));
        for (auto& v : level) v = rng.uniform(-95.0, -65.0);

        std::vector<oracle::Tick> trace;
        for (int i = 0; i < n_ticks; ++i) {
            oracle::Tick tick{i * 40.0, {}};
            for (int c = 0; c < n_cells; ++c) {
                level[static_cast<std::size_t>(c)] += rng.uniform(-3.0, 3.0);
                if (rng.uniform() < 0.95) tick.rsrp_dbm[c] = level[static_cast<std::size_t>(c)];
            }
            if (tick.rsrp_dbm.empty()) tick.rsrp_dbm[0] = level[0];
            trace.push_back(tick);
        }

        MeasState state;
        std::vector<double> engine_times;
        for (const auto& tick : trace) {
            if (auto r = meas_step(state, tick.t_ms, tick.rsrp_dbm, cfg))
                engine_times.push_back(r->t_ms);
        }
        if (engine_times != oracle::report_times(trace, cfg)) ++mismatches;
    }
    report(6, mismatches == 0, "event engine matches the brute-force oracle exactly",
           std::to_string(n_traces) + " randomized traces, " + std::to_string(mismatches) +
               " mismatch(es)");
}

// ---- criterion 7: height-reporting contract ----

void criterion_height_reporting() {
    HeightReportConfig cfg{100.0, 5.0};

    auto profile_reports = [&](double h0, double h1) {
        HeightReportState state;
        int count = 0;
        for (int i = 0; i <= 300; ++i) {
            const double h = h0 + (h1 - h0) * i / 300.0;
            if (height_step(state, i * 200.0, h, {0, 0, (h1 - h0) / 60.0}, {}, cfg))
                ++count;
        }
        return count;
    };
    const int asc = profile_reports(50.0, 150.0);
    const int desc = profile_reports(150.0, 50.0);
    const int level = profile_reports(80.0, 80.0);

    Rng rng(7777);
    int bad_jitter_seeds = 0;
    const int n_seeds = 10000;
    for (int seed = 0; seed < n_seeds; ++seed) {
        HeightReportState state;
        int count = 0;
        for (int i = 0; i <= 120; ++i) {
            const double base = 80.0 + 40.0 * i / 120.0;
            const double h = base + rng.uniform(-4.9, 4.9);
            if (height_step(state, i * 100.0, h, {0, 0, 0.33}, {}, cfg)) ++count;
        }
        if (count != 1) ++bad_jitter_seeds;
    }
    report(7, asc == 1 && desc == 1 && level == 0 && bad_jitter_seeds == 0,
           "height reports: {ascend, descend, level} = {1, 1, 0}, jitter-safe",
           "got {" + std::to_string(asc) + ", " + std::to_string(desc) + ", " +
               std::to_string(level) + "}, duplicate-free over " + std::to_string(n_seeds) +
               " jitter seeds (" + std::to_string(bad_jitter_seeds) + " bad)");
}

// ---- criterion 8: mobility trends ----

void criterion_mobility_trends() {
    const CampaignSpec spec = preset_spec("mobility");
    const auto results = run_mobility_campaign(spec.mobility, spec.master_seed, 2);

    auto rate = [&](const std::string& label) {
        for (const MobilityRunResult& r : results) {
            if (r.label != label) continue;
            double sum = 0.0;
            for (const MobilityStats& s : r.per_seed)
                sum += s.handover_failures + s.radio_link_failures;
            return sum / static_cast<double>(r.per_seed.size());
        }
        return -1.0;
    };
    const double aerial_uma = rate("aerial_uma");
    const double terrestrial_uma = rate("terrestrial_uma");
    const double aerial_rma = rate("aerial_rma");
    report(8, aerial_uma >= terrestrial_uma && aerial_rma <= aerial_uma,
           "aerial mobility worse than terrestrial in UMa; RMa kinder than UMa",
           "mean HOF+RLF per run: aerial UMa " + fmt(aerial_uma) + ", terrestrial UMa " +
               fmt(terrestrial_uma) + ", aerial RMa " + fmt(aerial_rma) + " (" +
               std::to_string(spec.mobility.n_seeds) + " seeds each)");
}

// ---- criterion 9: byte-identical determinism ----

void criterion_determinism() {
    CampaignSpec spec = preset_spec("fig1a");
    spec.scenario.n_sites = 7;
    spec.n_drops = 3;
    spec.n_snapshots = 4;
    spec.sweep_values = {0.0, 0.25};

    RunOptions one;
    one.jobs = 1;
    RunOptions many;
    many.jobs = 4;
    const ArtifactSet a = run_action(spec, one);
    const ArtifactSet b = run_action(spec, many);

    bool jobs_identical = a.size() == b.size();
    for (const auto& [name, content] : a) {
        jobs_identical = jobs_identical && b.count(name) && b.at(name) == content;
    }

    const CampaignSpec respec = parse_spec(a.at("manifest.json"));
    const ArtifactSet c = run_action(respec, many);
    bool manifest_identical = a.size() == c.size();
    for (const auto& [name, content] : a) {
        manifest_identical = manifest_identical && c.count(name) && c.at(name) == content;
    }

    // Same through the installed binary, on disk.
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "skysim_acceptance";
    fs::remove_all(dir);
    fs::create_directories(dir);
    std::ofstream(dir / "spec.json") << spec_to_json(spec);
    const std::string bin = SKYSIM_BIN;
    const std::string base_cmd = "'" + bin + "' run '" + (dir / "spec.json").string() + "'";
    bool cli_identical = false;
    if (std::system((base_cmd + " --jobs 1 --out '" + (dir / "o1").string() +
                     "' > /dev/null 2>&1") .c_str()) == 0 &&
        std::system((base_cmd + " --jobs 3 --out '" + (dir / "o2").string() +
                     "' > /dev/null 2>&1").c_str()) == 0) {
        cli_identical = true;
        for (const auto& entry : fs::recursive_directory_iterator(dir / "o1")) {
            if (!entry.is_regular_file()) continue;
            const auto rel = fs::relative(entry.path(), dir / "o1");
            std::ifstream f1(entry.path());
            std::ifstream f2(dir / "o2" / rel);
            std::stringstream s1, s2;
            s1 << f1.rdbuf();
            s2 << f2.rdbuf();
            cli_identical = cli_identical && f2.good() && s1.str() == s2.str();
        }
    }
    fs::remove_all(dir);

    report(9, jobs_identical && manifest_identical && cli_identical,
           "campaigns reproduce byte-identically from their manifest, any --jobs",
           std::string("jobs ") + (jobs_identical ? "ok" : "DIFFER") + ", manifest re-run " +
               (manifest_identical ? "ok" : "DIFFER") + ", CLI on disk " +
               (cli_identical ? "ok" : "DIFFER"));
}

// ---- criterion 10: protocol safety + identification truth table ----

void criterion_protocol_safety() {
    bool truth_table = identify_aerial(true, true) && !identify_aerial(true, false) &&
                       !identify_aerial(false, true) && !identify_aerial(false, false);

    Rng rng(0x5AFE);
    int violations = 0;
    int reports_seen = 0;
    const int n_sessions = 10000;
    for (int s = 0; s < n_sessions; ++s) {
        UeContext ue;
        ue.subscription_aerial_authorized = rng.bernoulli(0.5);
        ue.radio_capability_aerial = rng.bernoulli(0.5);
        FlightPathSession session(ue, rng.bernoulli(0.5));
        const int actions = 1 + static_cast<int>(rng.uniform_int(16));
        for (int a = 0; a < actions; ++a) {
            switch (rng.uniform_int(3)) {
                case 0: {
                    const bool avail = rng.bernoulli(0.5);
                    std::optional<FlightPath> path;
                    if (avail) {
                        FlightPath fp;
                        fp.waypoints = {{{0, 0, 50}, 0.0}, {{100, 0, 60}, 1000.0}};
                        path = fp;
                    }
                    session.connect(avail, path);
                    break;
                }
                case 1: session.disconnect(); break;
                case 2:
                    if (session.connected()) (void)session.request_flight_path();
                    break;
            }
        }
        int outstanding = 0;
        for (const auto& msg : session.log()) {
            if (msg.kind == FlightPathMessageKind::request) ++outstanding;
            if (msg.kind == FlightPathMessageKind::report ||
                msg.kind == FlightPathMessageKind::no_info) {
                if (msg.kind == FlightPathMessageKind::report) ++reports_seen;
                if (outstanding <= 0) ++violations;
                --outstanding;
            }
        }
    }
    report(10, truth_table && violations == 0 && reports_seen > 0,
           "no Report without a Request; AND identification policy exact",
           std::to_string(n_sessions) + " fuzzed sessions, " + std::to_string(reports_seen) +
               " reports, " + std::to_string(violations) + " violation(s)");
}

}  // namespace

int main() {
    std::printf("skysim acceptance suite\n");
    criteria_iot_and_geometry();
    criterion_fig3_replay();
    criterion_power_lever();
    criterion_p0_gate();
    criterion_oracle_equivalence();
    criterion_height_reporting();
    criterion_mobility_trends();
    criterion_determinism();
    criterion_protocol_safety();
    if (g_failures == 0) {
        std::printf("all 10 criteria passed\n");
        return 0;
    }
    std::printf("%d criterion(s) failed\n", g_failures);
    return 1;
}
