// SPDX-License-Identifier: Apache-2.0

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "skysim/campaign.hpp"
#include "skysim/presets.hpp"

using namespace skysim;

namespace {

std::string small_campaign_json() {
    return R"({
  "schema_version": 1,
  "name": "tiny",
  "scenario": {"kind": "UMa-AV", "n_sites": 1, "ues_per_cell": 4},
  "power_control": {"alpha": 0.8, "p0_nominal_dbm": -96},
  "sweep": {"variable": "aerial_ratio", "values": [0, 0.5]},
  "n_drops": 2,
  "n_snapshots": 2,
  "master_seed": 5
})";
}

}  // namespace

TEST_CASE("spec parsing: malformed JSON reports line and column") {
    try {
        parse_spec("{\n  \"schema_version\": 1,\n  \"oops\n}");
        FAIL("expected SpecParseError");
    } catch (const SpecParseError& e) {
        CHECK(e.line == 3);
        CHECK(e.column > 1);
    }
}

TEST_CASE("spec parsing: schema_version is required and checked") {
    CHECK_THROWS_WITH_AS(parse_spec("{}"), "schema_version is required", ConfigError);
    CHECK_THROWS_AS(parse_spec(R"({"schema_version": 2, "scenario": {"kind": "UMa-AV"},
                                   "sweep": {"variable": "aerial_ratio", "values": [0]}})"),
                    ConfigError);
}

TEST_CASE("spec parsing: validation errors name the offending field") {
    const std::string bad_ratio = R"({
      "schema_version": 1,
      "scenario": {"kind": "UMa-AV", "aerial_ratio": 1.4},
      "sweep": {"variable": "aerial_ratio", "values": [0]}
    })";
    CHECK_THROWS_WITH_AS(parse_spec(bad_ratio), "aerial_ratio must lie in [0, 1]",
                         ConfigError);

    const std::string unknown = R"({
      "schema_version": 1,
      "scenario": {"kind": "UMa-AV", "enb_heigth_m": 30},
      "sweep": {"variable": "aerial_ratio", "values": [0]}
    })";
    CHECK_THROWS_WITH_AS(parse_spec(unknown), "unknown field scenario.enb_heigth_m",
                         ConfigError);

    const std::string bad_kind = R"({
      "schema_version": 1,
      "scenario": {"kind": "UMa"},
      "sweep": {"variable": "aerial_ratio", "values": [0]}
    })";
    CHECK_THROWS_AS(parse_spec(bad_kind), ConfigError);
}

TEST_CASE("spec parsing: scenario presets fill defaults, overrides stick") {
    const auto spec = parse_spec(small_campaign_json());
    CHECK(spec.scenario.inter_site_distance_m == 500.0);
    CHECK(spec.scenario.enb_height_m == 25.0);
    CHECK(spec.scenario.n_sites == 1);
    CHECK(spec.scenario.ues_per_cell == 4);
    CHECK(spec.power.alpha == 0.8);
    CHECK(spec.n_drops == 2);
}

TEST_CASE("spec round trip: emitted JSON parses back to the same spec") {
    const auto spec = parse_spec(small_campaign_json());
    const auto again = parse_spec(spec_to_json(spec));
    CHECK(spec_to_json(again) == spec_to_json(spec));

    // Manifests embed the spec and parse the same way.
    const auto from_manifest = parse_spec(manifest_json(spec));
    CHECK(spec_to_json(from_manifest) == spec_to_json(spec));
}

TEST_CASE("presets: all built-ins validate and round trip") {
    for (const auto& info : preset_list()) {
        const auto spec = preset_spec(info.name);
        CHECK(spec.name == info.name);
        const auto again = parse_spec(spec_to_json(spec));
        CHECK(spec_to_json(again) == spec_to_json(spec));
    }
    CHECK(is_preset("fig1a"));
    CHECK_FALSE(is_preset("fig99"));
    CHECK_THROWS_AS(preset_spec("fig99"), ConfigError);
}

TEST_CASE("shipped preset files match the built-ins") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::path(__FILE__).parent_path().parent_path() / "presets";
    REQUIRE(fs::exists(dir));
    for (const auto& info : preset_list()) {
        const fs::path file = dir / (info.name + ".json");
        REQUIRE_MESSAGE(fs::exists(file), file.string());
        std::ifstream in(file);
        std::ostringstream ss;
        ss << in.rdbuf();
        CHECK(ss.str() == spec_to_json(preset_spec(info.name)));
    }
}

TEST_CASE("trace parsing: grouping, headers, field counts") {
    std::istringstream in(
        "t_ms,cell_id,rsrp_dbm\n"
        "0,1,-80\n"
        "0,2,-85\n"
        "0,200,3,4,0.5\n"
        "40,1,-79\n");
    const auto ticks = parse_trace(in);
    REQUIRE(ticks.size() == 2);
    CHECK(ticks[0].rsrp_dbm.size() == 2);
    REQUIRE(ticks[0].height.has_value());
    CHECK(ticks[0].height->height_m == 200.0);
    CHECK(ticks[0].height->velocity_mps.z == 0.5);
    CHECK(ticks[1].rsrp_dbm.at(1) == -79.0);
}

TEST_CASE("trace parsing: non-monotone time and bad rows are trace errors") {
    std::istringstream backwards("0,1,-80\n40,1,-79\n20,1,-78\n");
    CHECK_THROWS_AS(parse_trace(backwards), TraceError);

    std::istringstream short_row("0,1\n");
    CHECK_THROWS_AS(parse_trace(short_row), TraceError);

    std::istringstream junk("0,1,-80\nbanana,1,-80\n");
    CHECK_THROWS_AS(parse_trace(junk), TraceError);
}

TEST_CASE("trace serialisation round trips through the parser") {
    std::vector<TraceTick> trace;
    TraceTick t0{0.0, {{1, -80.5}, {2, -91.25}}, HeightSample{150.0, {1.0, 2.0, -0.5}}};
    TraceTick t1{40.0, {{1, -79.125}}, {}};
    trace.push_back(t0);
    trace.push_back(t1);
    std::istringstream in(trace_csv(trace));
    const auto parsed = parse_trace(in);
    REQUIRE(parsed.size() == 2);
    CHECK(parsed[0].rsrp_dbm.at(2) == -91.25);
    CHECK(parsed[0].height->height_m == 150.0);
    CHECK(parsed[1].rsrp_dbm.at(1) == -79.125);
}

TEST_CASE("replay: empty trace produces an empty log") {
    MeasConfig cfg;
    const auto rows = replay_trace({}, cfg);
    CHECK(rows.empty());
    CHECK(report_log_csv(rows) ==
          "t_ms,kind,cells,height_m,x_m,y_m,h_speed_mps,v_speed_mps\n");
}

TEST_CASE("replay: identical input gives identical output bytes") {
    std::vector<TraceTick> trace;
    for (int i = 0; i < 50; ++i) {
        TraceTick tick{i * 40.0, {}, {}};
        tick.rsrp_dbm[0] = -70.0;
        tick.rsrp_dbm[1] = -90.0 + i * 0.5;
        tick.rsrp_dbm[2] = -95.0 + i * 0.7;
        trace.push_back(tick);
    }
    MeasConfig cfg;
    cfg.event = MeasEvent::a4;
    cfg.a4_threshold_dbm = -76.0;
    cfg.cell_count_x = 2;
    cfg.ttt_ms = 160.0;
    cfg.serving_cell_id = 0;
    const std::string a = report_log_csv(replay_trace(trace, cfg));
    const std::string b = report_log_csv(replay_trace(trace, cfg));
    CHECK(a == b);
    CHECK(a.find("multi_cell") != std::string::npos);
}

TEST_CASE("campaign artifacts: deterministic across jobs and manifest re-runs") {
    const auto spec = parse_spec(small_campaign_json());

    RunOptions one;
    one.jobs = 1;
    RunOptions four;
    four.jobs = 4;
    const ArtifactSet a = run_action(spec, one);
    const ArtifactSet b = run_action(spec, four);
    REQUIRE(a.size() == b.size());
    for (const auto& [name, content] : a) {
        REQUIRE(b.count(name) == 1);
        CHECK_MESSAGE(content == b.at(name), name);
    }

    // Re-run from the emitted manifest: byte-identical metric files.
    const auto respec = parse_spec(a.at("manifest.json"));
    const ArtifactSet c = run_action(respec, one);
    for (const auto& [name, content] : a) {
        REQUIRE(c.count(name) == 1);
        CHECK_MESSAGE(content == c.at(name), name);
    }
}

TEST_CASE("campaign artifacts: expected file set and CSV shape") {
    const auto spec = parse_spec(small_campaign_json());
    const ArtifactSet files = run_action(spec, RunOptions{});
    REQUIRE(files.count("metrics.csv") == 1);
    REQUIRE(files.count("manifest.json") == 1);
    bool has_raw = false;
    bool has_plot = false;
    for (const auto& [name, content] : files) {
        (void)content;
        if (name.rfind("raw/", 0) == 0) has_raw = true;
        if (name.rfind("plots/", 0) == 0) has_plot = true;
    }
    CHECK(has_raw);
    CHECK(has_plot);
    const std::string& metrics = files.at("metrics.csv");
    CHECK(metrics.rfind("setting,metric,kind,stat,value\n", 0) == 0);
    CHECK(metrics.find("ratio=0,ul_iot,all_cells,mean,") != std::string::npos);
    CHECK(metrics.find("ratio=0.5,dl_geometry,aerial,p5,") != std::string::npos);
}

TEST_CASE("write_artifacts places files under the output directory") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "skysim_test_out";
    fs::remove_all(dir);
    write_artifacts(dir.string(), {{"a/b.csv", "x\n"}, {"top.txt", "y\n"}});
    std::ifstream in(dir / "a" / "b.csv");
    std::string content;
    std::getline(in, content);
    CHECK(content == "x");
    fs::remove_all(dir);
}

TEST_CASE("meas config loading: values, height section, strictness") {
    namespace fs = std::filesystem;
    const fs::path path = fs::temp_directory_path() / "meascfg_test.json";
    {
        std::ofstream out(path);
        out << R"({"schema_version": 1, "event": "A4", "a4_threshold_dbm": -76,
                   "cell_count_x": 4, "ttt_ms": 160, "serving_cell_id": 3,
                   "height_report": {"height_threshold_m": 100, "hysteresis_m": 5}})";
    }
    const MeasConfig m = load_meas_config(path.string());
    CHECK(m.event == MeasEvent::a4);
    CHECK(m.a4_threshold_dbm == -76.0);
    CHECK(m.cell_count_x == 4);
    CHECK(m.serving_cell_id == 3);
    const auto h = load_height_config(path.string());
    REQUIRE(h.has_value());
    CHECK(h->height_threshold_m == 100.0);
    fs::remove(path);
}

namespace {

int run_cli(const std::string& args) {
    const int status = std::system(("'" SKYSIM_BIN "' " + args + " > /dev/null 2>&1").c_str());
    return WEXITSTATUS(status);
}

}  // namespace

TEST_CASE("binary: exit codes and output atomicity") {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "skysim_cli_test";
    fs::remove_all(dir);
    fs::create_directories(dir);

    // Malformed JSON: exit 2, nothing written.
    std::ofstream(dir / "broken.json") << "{ not json";
    CHECK(run_cli("run '" + (dir / "broken.json").string() + "' --out '" +
                  (dir / "out_a").string() + "'") == 2);
    CHECK_FALSE(fs::exists(dir / "out_a"));

    // Validation failure: exit 3, nothing written.
    std::ofstream(dir / "invalid.json") << R"({"schema_version": 1,
        "scenario": {"kind": "UMa-AV", "aerial_ratio": 2.0},
        "sweep": {"variable": "aerial_ratio", "values": [0]}})";
    CHECK(run_cli("run '" + (dir / "invalid.json").string() + "' --out '" +
                  (dir / "out_b").string() + "'") == 3);
    CHECK_FALSE(fs::exists(dir / "out_b"));

    // Non-monotone trace: exit 4.
    std::ofstream(dir / "trace.csv") << "0,1,-80\n40,1,-79\n20,1,-78\n";
    std::ofstream(dir / "meas.json") << R"({"schema_version": 1, "event": "A4",
        "a4_threshold_dbm": -76, "serving_cell_id": 0})";
    CHECK(run_cli("replay '" + (dir / "trace.csv").string() + "' '" +
                  (dir / "meas.json").string() + "'") == 4);

    // Empty trace: exit 0 with an empty (header-only) log.
    std::ofstream(dir / "empty.csv") << "";
    CHECK(run_cli("replay '" + (dir / "empty.csv").string() + "' '" +
                  (dir / "meas.json").string() + "' --out '" + (dir / "log.csv").string() +
                  "'") == 0);
    std::ifstream log(dir / "log.csv");
    std::string line;
    std::getline(log, line);
    CHECK(line == "t_ms,kind,cells,height_m,x_m,y_m,h_speed_mps,v_speed_mps");
    const bool has_more_rows = static_cast<bool>(std::getline(log, line)) && !line.empty();
    CHECK_FALSE(has_more_rows);

    // SKYSIM_OUT environment override.
    std::ofstream(dir / "tiny.json") << small_campaign_json();
    const int status = std::system(("SKYSIM_OUT='" + (dir / "env_out").string() + "' '" +
                                    std::string(SKYSIM_BIN) + "' run '" +
                                    (dir / "tiny.json").string() + "' > /dev/null 2>&1")
                                       .c_str());
    CHECK(WEXITSTATUS(status) == 0);
    CHECK(fs::exists(dir / "env_out" / "metrics.csv"));

    fs::remove_all(dir);
}

TEST_CASE("power-class sweep spec parses into paired settings") {
    const std::string text = R"({
      "schema_version": 1,
      "name": "classes",
      "scenario": {"kind": "UMa-AV", "n_sites": 1, "aerial_ratio": 0.5},
      "power_control": {"alpha": 1.0, "p0_nominal_dbm": -106, "p_cmax_dbm": 40},
      "sweep": {"variable": "power_classes", "settings": [
        {"label": "equal", "terrestrial": {"alpha": 1.0}, "aerial": {"alpha": 1.0}},
        {"label": "split", "terrestrial": {"alpha": 1.0}, "aerial": {"alpha": 0.7}}
      ]},
      "n_drops": 1, "n_snapshots": 1, "master_seed": 9
    })";
    const auto spec = parse_spec(text);
    const auto settings = spec.sweep_settings();
    REQUIRE(settings.size() == 2);
    CHECK(settings[0].label == "equal");
    REQUIRE(settings[1].power.has_value());
    CHECK(settings[1].power->classes.at(UeKind::aerial).alpha == 0.7);
    CHECK(settings[1].power->classes.at(UeKind::terrestrial_outdoor).alpha == 1.0);
}
