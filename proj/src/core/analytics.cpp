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

#include "wban/analytics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <json.hpp>

#include "text_io.hpp"
#include "wban/error.hpp"

namespace wban {

namespace {

std::size_t window_samples(double sample_interval, double window) {
    if (!(sample_interval > 0.0))
        throw Error(ErrorKind::domain, "sample interval must be positive");
    if (window < sample_interval * (1.0 - 1e-9))
        throw Error(ErrorKind::domain, "window shorter than the sample interval");
    return std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(window / sample_interval)));
}

} // namespace

std::vector<double> moving_average(std::span<const double> x, double sample_interval, double window) {
    if (x.empty())
        throw Error(ErrorKind::insufficient_data, "moving average of an empty series");
    const std::size_t w = window_samples(sample_interval, window);
    const std::size_t back = w / 2;
    const std::size_t ahead = (w - 1) / 2;

    std::vector<double> prefix(x.size() + 1, 0.0);
    for (std::size_t k = 0; k < x.size(); ++k)
        prefix[k + 1] = prefix[k] + x[k];

    std::vector<double> out(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        const std::size_t lo = k >= back ? k - back : 0;
        const std::size_t hi = std::min(x.size() - 1, k + ahead);
        out[k] = (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1);
    }
    return out;
}

std::vector<LagCorrelation> autocorrelation(std::span<const double> x, double sample_interval, double max_lag) {
    if (!(sample_interval > 0.0) || max_lag < 0.0)
        throw Error(ErrorKind::domain, "invalid autocorrelation parameters");
    const auto lags = static_cast<std::size_t>(std::floor(max_lag / sample_interval + 1e-9));
    if (x.size() < 2 || x.size() < 2 * lags)
        throw Error(ErrorKind::insufficient_data, "series shorter than twice the maximum lag");

    const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
    std::vector<double> c(x.size());
    std::transform(x.begin(), x.end(), c.begin(), [mean](double v) { return v - mean; });
    const double energy = std::inner_product(c.begin(), c.end(), c.begin(), 0.0);
    const double scale = std::max(std::abs(mean), 1.0);
    if (!(energy > 1e-24 * scale * scale * static_cast<double>(x.size())))
        throw Error(ErrorKind::undefined_correlation, "autocorrelation of a constant series");

    std::vector<LagCorrelation> out;
    out.reserve(lags + 1);
    for (std::size_t tau = 0; tau <= lags; ++tau) {
        double acc = 0.0;
        for (std::size_t k = 0; k + tau < c.size(); ++k)
            acc += c[k] * c[k + tau];
        out.push_back({static_cast<double>(tau) * sample_interval, tau == 0 ? 1.0 : acc / energy});
    }
    return out;
}

CoherenceTime coherence_time(std::span<const LagCorrelation> autocorr, double threshold) {
    if (autocorr.empty())
        throw Error(ErrorKind::insufficient_data, "empty autocorrelation");
    if (autocorr.front().r < threshold)
        return {0.0, false};
    for (std::size_t k = 1; k < autocorr.size(); ++k)
        if (autocorr[k].r < threshold)
            return {autocorr[k - 1].lag, false};
    return {autocorr.back().lag, true};
}

std::vector<double> cvf(std::span<const double> h, double sample_interval, double window) {
    const std::size_t m = window_samples(sample_interval, window);
    if (m < 2)
        throw Error(ErrorKind::domain, "CVF window must hold at least two samples");
    std::vector<double> out;
    for (std::size_t start = 0; start + m <= h.size(); start += m) {
        const std::span<const double> w = h.subspan(start, m);
        const double mean = std::accumulate(w.begin(), w.end(), 0.0) / static_cast<double>(m);
        double mean_sq = 0.0;
        double var = 0.0;
        for (double v : w) {
            mean_sq += v * v;
            var += (v - mean) * (v - mean);
        }
        mean_sq /= static_cast<double>(m);
        var /= static_cast<double>(m);
        if (!(mean_sq > 0.0))
            throw Error(ErrorKind::domain, "CVF undefined for an all-zero window");
        // The rounded mean would leave a tiny residue on a flat window.
        const auto [lo, hi] = std::minmax_element(w.begin(), w.end());
        out.push_back(*lo == *hi ? 0.0 : std::sqrt(var / mean_sq));
    }
    return out;
}

std::vector<double> cvf_from_path_loss(std::span<const double> pl_db, double sample_interval, double window) {
    std::vector<double> h(pl_db.size());
    std::transform(pl_db.begin(), pl_db.end(), h.begin(), [](double pl) { return std::pow(10.0, -pl / 20.0); });
    return cvf(h, sample_interval, window);
}

std::vector<CdfPoint> cvf_cdf(std::span<const double> cvf_series) {
    std::vector<double> sorted(cvf_series.begin(), cvf_series.end());
    std::sort(sorted.begin(), sorted.end());
    std::vector<CdfPoint> out;
    const auto n = static_cast<double>(sorted.size());
    for (std::size_t k = 0; k < sorted.size(); ++k) {
        if (k + 1 < sorted.size() && sorted[k + 1] == sorted[k])
            continue;
        out.push_back({sorted[k], static_cast<double>(k + 1) / n});
    }
    return out;
}

double fraction_below(std::span<const double> cvf_series, double limit) {
    if (cvf_series.empty())
        return 0.0;
    const auto n = std::count_if(cvf_series.begin(), cvf_series.end(), [limit](double v) { return v < limit; });
    return static_cast<double>(n) / static_cast<double>(cvf_series.size());
}

StabilityReport analyze_stability(std::span<const double> db_series, double sample_interval, DbQuantity quantity,
                                  double max_lag, double threshold, double cvf_window) {
    StabilityReport rep;
    rep.sample_interval = sample_interval;
    rep.threshold = threshold;
    rep.cvf_window = cvf_window;
    try {
        rep.autocorr = autocorrelation(db_series, sample_interval, max_lag);
        rep.coherence = coherence_time(rep.autocorr, threshold);
    } catch (const Error &e) {
        if (e.kind() != ErrorKind::undefined_correlation)
            throw;
        // A constant channel is perfectly coherent over every lag.
        rep.constant_input = true;
        const auto lags = static_cast<std::size_t>(std::floor(max_lag / sample_interval + 1e-9));
        for (std::size_t k = 0; k <= lags; ++k)
            rep.autocorr.push_back({static_cast<double>(k) * sample_interval, 1.0});
        rep.coherence = {rep.autocorr.back().lag, true};
    }
    const double sign = quantity == DbQuantity::path_loss ? -1.0 : 1.0;
    std::vector<double> h(db_series.size());
    std::transform(db_series.begin(), db_series.end(), h.begin(),
                   [sign](double v) { return std::pow(10.0, sign * v / 20.0); });
    rep.cvf_series = cvf(h, sample_interval, cvf_window);
    if (!rep.cvf_series.empty())
        rep.cvf_cdf = cvf_cdf(rep.cvf_series);
    return rep;
}

std::string stability_to_json(const StabilityReport &report) {
    nlohmann::ordered_json j;
    j["sample_interval_s"] = report.sample_interval;
    j["threshold"] = report.threshold;
    j["coherence_time_s"] = report.coherence.seconds;
    j["coherence_censored"] = report.coherence.censored;
    j["constant_input"] = report.constant_input;
    auto &ac = j["autocorr"] = nlohmann::ordered_json::array();
    for (const LagCorrelation &p : report.autocorr)
        ac.push_back({p.lag, p.r});
    j["cvf_window_s"] = report.cvf_window;
    j["cvf"] = report.cvf_series;
    j["cvf_fraction_below_0_15"] = fraction_below(report.cvf_series, kStableCvf);
    auto &cdf = j["cvf_cdf"] = nlohmann::ordered_json::array();
    for (const CdfPoint &p : report.cvf_cdf)
        cdf.push_back({p.value, p.fraction});
    return j.dump(2) + "\n";
}

std::string autocorr_to_csv(const StabilityReport &report) {
    std::string out = "lag_s,r\n";
    for (const LagCorrelation &p : report.autocorr)
        out += detail::fixed(p.lag) + "," + detail::fixed(p.r) + "\n";
    return out;
}

std::string cdf_to_csv(const StabilityReport &report) {
    std::string out = "cvf,fraction\n";
    for (const CdfPoint &p : report.cvf_cdf)
        out += detail::fixed(p.value) + "," + detail::fixed(p.fraction) + "\n";
    return out;
}

} // namespace wban
