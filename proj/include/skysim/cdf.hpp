// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstddef>
#include <numeric>
#include <stdexcept>
#include <vector>

namespace skysim {

// Empirical distribution over a sample set. Samples are kept sorted;
// percentiles interpolate linearly between order statistics, so
// percentile(0) is the minimum and percentile(100) the maximum.
class MetricsCdf {
  public:
    MetricsCdf() = default;

    explicit MetricsCdf(std::vector<double> samples) : samples_(std::move(samples)) {
        std::sort(samples_.begin(), samples_.end());
    }

    void add(double v) {
        samples_.insert(std::upper_bound(samples_.begin(), samples_.end(), v), v);
    }

    bool empty() const { return samples_.empty(); }
    std::size_t size() const { return samples_.size(); }
    const std::vector<double>& samples() const& { return samples_; }
    // Calling on a temporary moves the samples out instead of leaking a
    // reference into a dead object.
    std::vector<double> samples() && { return std::move(samples_); }

    double percentile(double p) const {
        if (samples_.empty()) throw std::out_of_range("percentile of empty sample set");
        if (p <= 0.0) return samples_.front();
        if (p >= 100.0) return samples_.back();
        const double rank = p / 100.0 * static_cast<double>(samples_.size() - 1);
        const auto lo = static_cast<std::size_t>(rank);
        const double frac = rank - static_cast<double>(lo);
        if (lo + 1 >= samples_.size()) return samples_.back();
        return samples_[lo] * (1.0 - frac) + samples_[lo + 1] * frac;
    }

    double mean() const {
        if (samples_.empty()) throw std::out_of_range("mean of empty sample set");
        return std::accumulate(samples_.begin(), samples_.end(), 0.0) /
               static_cast<double>(samples_.size());
    }

    double min() const { return percentile(0.0); }
    double max() const { return percentile(100.0); }

  private:
    std::vector<double> samples_;
};

}  // namespace skysim
