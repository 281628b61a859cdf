// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "skysim/config.hpp"
#include "skysim/trace.hpp"

namespace skysim {

struct RunOptions {
    std::string output_dir;  // overrides the spec's output_dir
    int jobs = 1;
    std::optional<std::uint64_t> seed_override;
};

// File set produced by an action, keyed by path relative to the output
// directory. Everything is rendered in memory before anything touches disk.
using ArtifactSet = std::map<std::string, std::string>;

struct MobilityRunResult {
    std::string label;
    std::vector<MobilityStats> per_seed;
};

struct HeightSweepRow {
    double threshold_m = 0.0;
    int ascending_reports = 0;
    int descending_reports = 0;
    int level_reports = 0;
};

// Sweep-campaign metric files (metrics.csv, raw/*, plots/*).
ArtifactSet campaign_artifacts(const CampaignResult& result);

// Deterministic fly-by trace for the multi-cell A4 demo. The serving cell
// (strongest at the first tick) is written into meas_out and excluded from
// triggering.
std::vector<TraceTick> synthesize_a4_trace(const CampaignSpec& spec, MeasConfig& meas_out);

std::vector<MobilityRunResult> run_mobility_campaign(const MobilitySpec& spec,
                                                     std::uint64_t master_seed, int jobs);

std::vector<HeightSweepRow> run_height_sweep(const HeightSweepSpec& spec,
                                             const std::vector<double>& thresholds);

// Executes any action type and returns its artifact set (including the
// manifest). Pure apart from reading an optional LOS table; nothing is
// written to disk.
ArtifactSet run_action(const CampaignSpec& spec, const RunOptions& opts);

// Writes an artifact set under out_dir, creating directories as needed.
void write_artifacts(const std::string& out_dir, const ArtifactSet& files);

}  // namespace skysim
