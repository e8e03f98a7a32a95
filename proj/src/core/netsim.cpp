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


#include "wban/netsim.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <deque>
#include <limits>

#include <json.hpp>

#include "text_io.hpp"
#include "wban/error.hpp"

namespace wban {

namespace {

constexpr double kTimeEps = 1e-9;
constexpr double kInf = std::numeric_limits<double>::infinity();

using json = nlohmann::ordered_json;

json nullable(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

double mean_or_nan(double sum, std::size_t n) {
    return n == 0 ? std::numeric_limits<double>::quiet_NaN() : sum / static_cast<double>(n);
}

void require_level(const RadioConfig &radio, double dbm, const char *what) {
    if (!radio.has_level(dbm))
        throw Error(ErrorKind::config, std::string(what) + " " + detail::shortest(dbm) +
                                           " dBm is not a radio power level");
}

void require_coverage(const BiosignalTrace *s, double duration, const char *what) {
    if (s == nullptr)
        throw Error(ErrorKind::config, std::string("policy needs an ") + what + " stream");
    if (s->samples.empty() || s->duration() + kTimeEps < duration)
        throw Error(ErrorKind::config, std::string(what) + " stream is shorter than the simulated duration");
}

class Simulation {
  public:
    Simulation(const SimInputs &in, const PolicyConfig &policy, const RadioConfig &radio, const AppConfig &app,
               double duration)
        : trace_(*in.trace), in_(in), sm_(policy.drop_threshold) {
        rep_.link_id = trace_.link_id;
        rep_.policy = policy;
        rep_.radio = radio;
        rep_.app = app;
        rep_.duration = duration;
        n_packets_ = static_cast<std::size_t>(std::ceil(duration / app.packet_interval - kTimeEps));
        rep_.packets.reserve(n_packets_);
        rep_.states.push_back({0.0, sm_.state()});
    }

    SimReport run() {
        switch (rep_.policy.kind) {
        case PolicyKind::fixed: run_fixed(); break;
        case PolicyKind::emg: run_emg(); break;
        case PolicyKind::hr: run_hr(); break;
        case PolicyKind::imu: run_imu(); break;
        }
        return std::move(rep_);
    }

  private:
    double gen_time(std::size_t j) const { return static_cast<double>(j) * rep_.app.packet_interval; }

    double pl_at(double t) const {
        const auto f = static_cast<std::size_t>(std::floor(t / trace_.frame_time + kTimeEps));
        return trace_.samples[std::min(f, trace_.samples.size() - 1)];
    }

    PacketRecord &new_packet(std::size_t j) {
        PacketRecord &p = rep_.packets.emplace_back();
        p.seq = j;
        p.generated_at = gen_time(j);
        return p;
    }

    bool transmit(PacketRecord &p, double t, double power) {
        const double pl = pl_at(t);
        const double r = rssi(power, pl);
        p.transmitted_at.push_back(t);
        p.tx_power.push_back(power);
        p.path_loss.push_back(pl);
        p.rssi.push_back(r);
        p.delivered = is_delivered(r, rep_.radio.sensitivity_dbm);
        return p.delivered;
    }

    void event(double t, NetEvent e) {
        sm_.handle(e);
        if (rep_.states.back().state != sm_.state())
            rep_.states.push_back({t, sm_.state()});
    }

    void run_fixed() {
        for (std::size_t j = 0; j < n_packets_; ++j)
            transmit(new_packet(j), gen_time(j), rep_.policy.power_dbm);
    }

    void run_emg() {
        const BiosignalTrace &emg = *in_.emg;
        EmgTpc::Config cfg = rep_.policy.emg;
        cfg.sample_interval = emg.sample_interval;
        EmgTpc tpc(cfg);
        std::size_t k = 0;
        for (std::size_t j = 0; j < n_packets_; ++j) {
            const double g = gen_time(j);
            // A sample is usable once its window position has elapsed.
            while (k < emg.samples.size() && static_cast<double>(k + 1) * emg.sample_interval <= g + kTimeEps) {
                if (auto cmd = tpc.push(emg.samples[k])) {
                    rep_.commands.push_back(*cmd);
                    event(cmd->time, cmd->power_dbm == cfg.p_high ? NetEvent::emg_active : NetEvent::emg_idle);
                }
                ++k;
            }
            transmit(new_packet(j), g, tpc.power());
        }
    }

    void run_hr() {
        const BiosignalTrace &ecg = *in_.ecg;
        HeartRateEstimator::Config ecfg;
        ecfg.sample_interval = ecg.sample_interval;
        HeartRateEstimator est(ecfg);
        HrTpc tpc(rep_.policy.hr);
        std::size_t k = 0;
        for (std::size_t j = 0; j < n_packets_; ++j) {
            const double g = gen_time(j);
            while (k < ecg.samples.size() && ecg.time_at(k) <= g + kTimeEps) {
                const HeartRateSample hr = est.push(ecg.samples[k]);
                if (auto cmd = tpc.push(ecg.time_at(k), hr)) {
                    rep_.commands.push_back(*cmd);
                    event(cmd->time, cmd->power_dbm == rep_.policy.hr.p_high ? NetEvent::hr_above : NetEvent::hr_below);
                }
                ++k;
            }
            transmit(new_packet(j), g, tpc.power());
        }
    }

    void run_imu() {
        const BiosignalTrace &imu = *in_.imu;
        const double power = rep_.policy.power_dbm;
        ImuScheduler sched(rep_.policy.imu);
        std::deque<double> pending;
        std::vector<std::size_t> queue;
        std::size_t k = 0;
        std::size_t j = 0;

        auto flush = [&](double t) {
            if (queue.empty())
                return;
            bool ok = false;
            for (std::size_t idx : queue)
                ok = transmit(rep_.packets[idx], t, power);
            queue.clear();
            if (sm_.base_state() != NetworkState::imu_scheduled)
                return;
            // Coalesced packets share one channel state, so a burst counts once.
            event(t, ok ? NetEvent::packet_delivered : NetEvent::multi_packet_drop);
            if (sm_.base_state() == NetworkState::imu_calibration) {
                sched.recalibrate();
                pending.clear();
            }
        };

        const double end = rep_.duration;
        for (;;) {
            const double ti = k < imu.samples.size() && imu.time_at(k) < end - kTimeEps ? imu.time_at(k) : kInf;
            const double g = j < n_packets_ ? gen_time(j) : kInf;
            const double s = !pending.empty() && pending.front() < end - kTimeEps ? pending.front() : kInf;
            const double t = std::min({ti, g, s});
            if (t == kInf)
                break;
            if (ti <= t + kTimeEps) {
                if (sched.needs_rss())
                    sched.push_rss(ti, rssi(power, pl_at(ti)));
                const ImuScheduler::Output out = sched.push_imu(ti, imu.samples[k]);
                ++k;
                for (NetEvent e : out.events) {
                    event(ti, e);
                    if (e == NetEvent::imu_periodicity_lost) {
                        pending.clear();
                        flush(ti);
                    }
                }
                for (const RadioCommand &c : out.commands) {
                    rep_.commands.push_back(c);
                    pending.push_back(c.time);
                }
            } else if (g <= t + kTimeEps) {
                PacketRecord &p = new_packet(j);
                if (sched.phase() == ImuScheduler::Phase::scheduled || !pending.empty())
                    queue.push_back(j);
                else
                    transmit(p, g, power);
                ++j;
            } else {
                pending.pop_front();
                flush(s);
            }
        }
        rep_.alpha = sched.alpha();
    }

    const PathLossTrace &trace_;
    const SimInputs &in_;
    NetworkStateMachine sm_;
    SimReport rep_;
    std::size_t n_packets_ = 0;
};

} // namespace

// ---------------------------------------------------------------- radio

bool RadioConfig::has_level(double dbm) const {
    return std::find(power_levels.begin(), power_levels.end(), dbm) != power_levels.end();
}

double RadioConfig::power_mw(double dbm) const {
    const auto it = energy_mw.find(dbm);
    if (it == energy_mw.end())
        throw Error(ErrorKind::config, "no energy entry for " + detail::shortest(dbm) + " dBm");
    return it->second;
}

void RadioConfig::validate() const {
    if (power_levels.empty())
        throw Error(ErrorKind::config, "radio has no power levels");
    for (double level : power_levels)
        if (!(power_mw(level) > 0.0))
            throw Error(ErrorKind::config, "radio power draw must be positive");
    if (!(airtime > 0.0))
        throw Error(ErrorKind::config, "packet airtime must be positive");
    if (!std::isfinite(sensitivity_dbm))
        throw Error(ErrorKind::config, "receiver sensitivity must be finite");
}

const char *to_string(PolicyKind kind) noexcept {
    switch (kind) {
    case PolicyKind::fixed: return "fixed";
    case PolicyKind::imu: return "imu";
    case PolicyKind::emg: return "emg";
    case PolicyKind::hr: return "hr";
    }
    return "unknown";
}

PolicyKind parse_policy(std::string_view name) {
    for (PolicyKind k : {PolicyKind::fixed, PolicyKind::imu, PolicyKind::emg, PolicyKind::hr})
        if (name == to_string(k))
            return k;
    throw Error(ErrorKind::config, "unknown policy '" + std::string(name) + "'");
}

// ---------------------------------------------------------------- report

std::size_t SimReport::delivered() const {
    return static_cast<std::size_t>(
        std::count_if(packets.begin(), packets.end(), [](const PacketRecord &p) { return p.delivered; }));
}

double SimReport::pdr() const {
    return packets.empty() ? 0.0 : static_cast<double>(delivered()) / static_cast<double>(packets.size());
}

double SimReport::mean_rss_dbm() const {
    double sum = 0.0;
    std::size_t n = 0;
    for (const PacketRecord &p : packets)
        for (double r : p.rssi) {
            sum += r;
            ++n;
        }
    return mean_or_nan(sum, n);
}

SimReport run_scenario(const SimInputs &inputs, const PolicyConfig &policy, const RadioConfig &radio,
                       const AppConfig &app, double duration, const std::vector<LabeledInterval> &labels) {
    if (inputs.trace == nullptr || inputs.trace->samples.empty())
        throw Error(ErrorKind::config, "simulation needs a path-loss trace");
    if (!(duration > 0.0))
        throw Error(ErrorKind::config, "simulated duration must be positive");
    if (duration > inputs.trace->duration() + kTimeEps)
        throw Error(ErrorKind::config, "path-loss trace covers " + detail::shortest(inputs.trace->duration()) +
                                           " s, shorter than the requested " + detail::shortest(duration) + " s");
    if (!(app.packet_interval > 0.0))
        throw Error(ErrorKind::config, "packet interval must be positive");
    radio.validate();
    switch (policy.kind) {
    case PolicyKind::fixed: require_level(radio, policy.power_dbm, "power"); break;
    case PolicyKind::imu:
        require_level(radio, policy.power_dbm, "power");
        require_coverage(inputs.imu, duration, "IMU");
        break;
    case PolicyKind::emg:
        require_level(radio, policy.emg.p_low, "EMG low power");
        require_level(radio, policy.emg.p_high, "EMG high power");
        require_coverage(inputs.emg, duration, "EMG");
        break;
    case PolicyKind::hr:
        require_level(radio, policy.hr.p_low, "HR low power");
        require_level(radio, policy.hr.p_high, "HR high power");
        require_coverage(inputs.ecg, duration, "ECG");
        break;
    }

    SimReport rep = Simulation(inputs, policy, radio, app, duration).run();
    for (const LabeledInterval &li : labels) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const PacketRecord &p : rep.packets)
            for (std::size_t a = 0; a < p.rssi.size(); ++a)
                if (li.span.contains(p.transmitted_at[a])) {
                    sum += p.rssi[a];
                    ++n;
                }
        rep.intervals.push_back({li.label, li.span, n, mean_or_nan(sum, n)});
    }
    return rep;
}

ReportSummary summarize(const SimReport &report, std::string label) {
    ReportSummary s;
    s.label = label.empty() ? std::string(to_string(report.policy.kind)) : std::move(label);
    s.policy = to_string(report.policy.kind);
    s.power_dbm = report.policy.power_dbm;
    s.generated = report.generated();
    s.delivered = report.delivered();
    s.pdr = report.pdr();
    s.radio = report.radio;
    double sum = 0.0;
    for (const PacketRecord &p : report.packets)
        for (double level : p.tx_power) {
            sum += report.radio.power_mw(level);
            ++s.transmitted;
        }
    s.mean_level_mw = s.transmitted == 0 ? 0.0 : sum / static_cast<double>(s.transmitted);
    return s;
}

EnergySummary energy_report(const ReportSummary &s, RetransmissionModel model) {
    if (s.generated == 0)
        throw Error(ErrorKind::insufficient_data, "report has no packets");
    EnergySummary e;
    e.mean_level_mw = s.mean_level_mw;
    const auto generated = static_cast<double>(s.generated);
    if (model == RetransmissionModel::none) {
        e.attempts_per_packet = static_cast<double>(s.transmitted) / generated;
    } else {
        e.attempts_per_packet = 1.0 + (1.0 - s.pdr);
    }
    e.power_per_packet_mw = e.attempts_per_packet * e.mean_level_mw;
    e.total_mj = generated * e.power_per_packet_mw * s.radio.airtime;
    return e;
}

namespace {

json radio_to_json(const RadioConfig &r) {
    json j;
    j["power_levels_dbm"] = r.power_levels;
    j["sensitivity_dbm"] = r.sensitivity_dbm;
    json table = json::array();
    for (const auto &[dbm, mw] : r.energy_mw)
        table.push_back({dbm, mw});
    j["energy_mw"] = table;
    j["airtime_s"] = r.airtime;
    return j;
}

RadioConfig radio_from_json(const json &j) {
    RadioConfig r;
    r.power_levels = j.at("power_levels_dbm").get<std::vector<double>>();
    r.sensitivity_dbm = j.at("sensitivity_dbm").get<double>();
    r.energy_mw.clear();
    for (const json &row : j.at("energy_mw"))
        r.energy_mw[row.at(0).get<double>()] = row.at(1).get<double>();
    r.airtime = j.at("airtime_s").get<double>();
    return r;
}

} // namespace

std::string report_to_json(const SimReport &report) {
    const ReportSummary s = summarize(report);
    const EnergySummary plain = energy_report(s, RetransmissionModel::none);
    const EnergySummary retry = energy_report(s, RetransmissionModel::one_retry);

    json j;
    j["link_id"] = report.link_id;
    json policy;
    policy["kind"] = s.policy;
    switch (report.policy.kind) {
    case PolicyKind::fixed:
    case PolicyKind::imu: policy["power_dbm"] = report.policy.power_dbm; break;
    case PolicyKind::emg:
        policy["threshold_uv"] = report.policy.emg.threshold_uv;
        policy["p_low_dbm"] = report.policy.emg.p_low;
        policy["p_high_dbm"] = report.policy.emg.p_high;
        break;
    case PolicyKind::hr:
        policy["threshold_bpm"] = report.policy.hr.threshold_bpm;
        policy["p_low_dbm"] = report.policy.hr.p_low;
        policy["p_high_dbm"] = report.policy.hr.p_high;
        policy["cadence_s"] = report.policy.hr.cadence;
        break;
    }
    if (report.alpha)
        policy["alpha"] = *report.alpha;
    j["policy"] = policy;
    j["radio"] = radio_to_json(report.radio);
    j["packet_interval_s"] = report.app.packet_interval;
    j["duration_s"] = report.duration;

    json sum;
    sum["generated"] = s.generated;
    sum["delivered"] = s.delivered;
    sum["dropped"] = s.generated - s.delivered;
    sum["transmitted"] = s.transmitted;
    sum["pdr"] = s.pdr;
    sum["mean_rss_dbm"] = nullable(report.mean_rss_dbm());
    sum["mean_level_mw"] = s.mean_level_mw;
    sum["energy_mj"] = plain.total_mj;
    sum["attempts_per_packet_one_retry"] = retry.attempts_per_packet;
    sum["power_per_packet_one_retry_mw"] = retry.power_per_packet_mw;
    sum["energy_one_retry_mj"] = retry.total_mj;
    j["summary"] = sum;

    json intervals = json::array();
    for (const IntervalRss &iv : report.intervals)
        intervals.push_back({{"label", iv.label},
                             {"start_s", iv.span.start},
                             {"end_s", iv.span.end},
                             {"attempts", iv.attempts},
                             {"mean_rss_dbm", nullable(iv.mean_rss_dbm)}});
    j["intervals"] = intervals;

    json states = json::array();
    for (const StateChange &c : report.states)
        states.push_back({{"t_s", c.time}, {"state", to_string(c.state)}});
    j["states"] = states;
    j["commands"] = report.commands.size();
    return j.dump(2) + "\n";
}

std::string packets_to_csv(const SimReport &report) {
    std::string out = "seq,gen_t,tx_t,power_dbm,pl_db,rssi_dbm,delivered\n";
    for (const PacketRecord &p : report.packets) {
        const std::string head = std::to_string(p.seq) + "," + detail::fixed(p.generated_at) + ",";
        if (p.transmitted_at.empty()) {
            out += head + ",,,,0\n";
            continue;
        }
        for (std::size_t a = 0; a < p.transmitted_at.size(); ++a) {
            const bool ok = is_delivered(p.rssi[a], report.radio.sensitivity_dbm);
            out += head + detail::fixed(p.transmitted_at[a]) + "," + detail::fixed(p.tx_power[a]) + "," +
                   detail::fixed(p.path_loss[a]) + "," + detail::fixed(p.rssi[a]) + "," + (ok ? "1" : "0") + "\n";
        }
    }
    return out;
}

ReportSummary summary_from_json(std::string_view json_text, std::string label) {
    json j;
    try {
        j = json::parse(json_text);
    } catch (const json::parse_error &e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, json_text.size());
        const auto line = 1 + static_cast<std::size_t>(std::count(json_text.begin(), json_text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ParseError(line, "malformed report JSON");
    }
    try {
        ReportSummary s;
        const json &pol = j.at("policy");
        const json &sum = j.at("summary");
        s.policy = pol.at("kind").get<std::string>();
        s.power_dbm = pol.value("power_dbm", 0.0);
        s.generated = sum.at("generated").get<std::size_t>();
        s.delivered = sum.at("delivered").get<std::size_t>();
        s.pdr = sum.at("pdr").get<double>();
        s.transmitted = sum.at("transmitted").get<std::size_t>();
        s.mean_level_mw = sum.at("mean_level_mw").get<double>();
        s.radio = radio_from_json(j.at("radio"));
        s.label = !label.empty() ? std::move(label) : j.value("label", s.policy);
        return s;
    } catch (const json::exception &e) {
        throw Error(ErrorKind::parse, std::string("report JSON: ") + e.what());
    }
}

ReportSummary load_summary(const std::filesystem::path &path) {
    return summary_from_json(detail::read_text_file(path), path.stem().string());
}

std::vector<ComparisonRow> compare_reports(const std::vector<ReportSummary> &reports) {
    if (reports.size() < 2)
        throw Error(ErrorKind::comparison, "need at least two reports to compare");
    const ReportSummary &base = reports.front();
    const EnergySummary base_plain = energy_report(base, RetransmissionModel::none);
    const EnergySummary base_retry = energy_report(base, RetransmissionModel::one_retry);
    std::vector<ComparisonRow> rows;
    for (std::size_t i = 1; i < reports.size(); ++i) {
        const ReportSummary &c = reports[i];
        if (!(c.radio == base.radio))
            throw Error(ErrorKind::comparison, "report '" + c.label + "' uses a different radio configuration than '" +
                                                   base.label + "'");
        const EnergySummary plain = energy_report(c, RetransmissionModel::none);
        const EnergySummary retry = energy_report(c, RetransmissionModel::one_retry);
        ComparisonRow r;
        r.baseline = base.label;
        r.candidate = c.label;
        r.pdr_baseline = base.pdr;
        r.pdr_candidate = c.pdr;
        r.pdr_delta_pp = 100.0 * (c.pdr - base.pdr);
        r.power_baseline_mw = base_plain.power_per_packet_mw;
        r.power_candidate_mw = plain.power_per_packet_mw;
        r.power_delta_pct = 100.0 * (plain.power_per_packet_mw / base_plain.power_per_packet_mw - 1.0);
        r.power_baseline_retry_mw = base_retry.power_per_packet_mw;
        r.power_candidate_retry_mw = retry.power_per_packet_mw;
        r.power_delta_retry_pct = 100.0 * (retry.power_per_packet_mw / base_retry.power_per_packet_mw - 1.0);
        rows.push_back(r);
    }
    return rows;
}

std::string comparison_to_text(const std::vector<ComparisonRow> &rows) {
    std::string out;
    char buf[512];
    std::snprintf(buf, sizeof buf, "%-20s %-20s %8s %8s %9s %10s %10s %9s %10s %10s %9s\n", "baseline", "candidate",
                  "pdr_b", "pdr_c", "d_pdr_pp", "mw_b", "mw_c", "d_mw_%", "retry_b", "retry_c", "d_retry_%");
    out += buf;
    for (const ComparisonRow &r : rows) {
        std::snprintf(buf, sizeof buf, "%-20s %-20s %8.4f %8.4f %+9.2f %10.3f %10.3f %+9.2f %10.3f %10.3f %+9.2f\n",
                      r.baseline.c_str(), r.candidate.c_str(), r.pdr_baseline, r.pdr_candidate, r.pdr_delta_pp,
                      r.power_baseline_mw, r.power_candidate_mw, r.power_delta_pct, r.power_baseline_retry_mw,
                      r.power_candidate_retry_mw, r.power_delta_retry_pct);
        out += buf;
    }
    return out;
}

std::string comparison_to_csv(const std::vector<ComparisonRow> &rows) {
    std::string out = "baseline,candidate,pdr_baseline,pdr_candidate,pdr_delta_pp,power_baseline_mw,"
                      "power_candidate_mw,power_delta_pct,power_baseline_retry_mw,power_candidate_retry_mw,"
                      "power_delta_retry_pct\n";
    for (const ComparisonRow &r : rows) {
        out += r.baseline + "," + r.candidate;
        for (double v : {r.pdr_baseline, r.pdr_candidate, r.pdr_delta_pp, r.power_baseline_mw, r.power_candidate_mw,
                         r.power_delta_pct, r.power_baseline_retry_mw, r.power_candidate_retry_mw,
                         r.power_delta_retry_pct})
            out += "," + detail::fixed(v);
        out += "\n";
    }
    return out;
}

} // namespace wban
