// wbanemu - body-area channel emulator and adaptive network simulator
// Copyright (C) 2026 The wbanemu authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace wban {

/// Stability threshold commonly applied to the channel variation factor.
inline constexpr double kStableCvf = 0.15;

struct LagCorrelation {
    double lag = 0.0; ///< seconds
    double r = 0.0;
};

struct CoherenceTime {
    double seconds = 0.0;
    /// True when the correlation never dropped below the threshold.
    bool censored = false;
};

struct CdfPoint {
    double value = 0.0;
    double fraction = 0.0;
};

struct StabilityReport {
    double sample_interval = 0.0;
    double threshold = 0.7;
    CoherenceTime coherence;
    bool constant_input = false;
    std::vector<LagCorrelation> autocorr;
    double cvf_window = 0.1;
    std::vector<double> cvf_series;
    std::vector<CdfPoint> cvf_cdf;
};

/// Centered running mean over round(window / dt) samples; the window shrinks
/// at the edges.
std::vector<double> moving_average(std::span<const double> x, double sample_interval, double window);

/// Biased (divide by N) autocorrelation of the mean-removed series for lags
/// 0..floor(max_lag / dt). Error{undefined_correlation} for constant input.
std::vector<LagCorrelation> autocorrelation(std::span<const double> x, double sample_interval, double max_lag);

/// Largest lag L with r(tau) >= threshold for every tau <= L.
CoherenceTime coherence_time(std::span<const LagCorrelation> autocorr, double threshold = 0.7);

/// sqrt(var(h) / mean(h^2)) over consecutive non-overlapping windows of
/// linear channel magnitudes. A trailing partial window is ignored.
std::vector<double> cvf(std::span<const double> h, double sample_interval, double window = 0.1);

/// CVF of a path-loss series in dB, converting each sample to 10^(-PL/20).
std::vector<double> cvf_from_path_loss(std::span<const double> pl_db, double sample_interval, double window = 0.1);

std::vector<CdfPoint> cvf_cdf(std::span<const double> cvf_series);

/// Fraction of CVF windows strictly below `limit`.
double fraction_below(std::span<const double> cvf_series, double limit);

/// Full stability analysis of a dB-valued series. The quantity picks the sign
/// used to turn dB into a linear magnitude for the CVF.
enum class DbQuantity { path_loss, received_power };
StabilityReport analyze_stability(std::span<const double> db_series, double sample_interval, DbQuantity quantity,
                                  double max_lag = 0.5, double threshold = 0.7, double cvf_window = 0.1);

std::string stability_to_json(const StabilityReport &report);
std::string autocorr_to_csv(const StabilityReport &report);
std::string cdf_to_csv(const StabilityReport &report);

} // namespace wban
