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


#include "wban/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include <json.hpp>

#include "text_io.hpp"
#include "wban/error.hpp"

namespace wban {

namespace {

using json = nlohmann::json;
namespace fs = std::filesystem;

Error config_error(const std::string &msg) { return Error(ErrorKind::config, msg); }

/// Strict view of one JSON object: every key must be consumed.
class Obj {
  public:
    Obj(const json &j, std::string where) : j_(j), where_(std::move(where)) {
        if (!j_.is_object())
            throw config_error("'" + label() + "' must be an object");
    }

    const json *get(const std::string &key) {
        seen_.insert(key);
        const auto it = j_.find(key);
        return it == j_.end() || it->is_null() ? nullptr : &*it;
    }

    double num(const std::string &key, double def) {
        const json *p = get(key);
        if (p == nullptr)
            return def;
        if (!p->is_number())
            throw config_error("'" + path(key) + "' must be a number");
        return p->get<double>();
    }

    std::string str(const std::string &key, const std::string &def) {
        const json *p = get(key);
        if (p == nullptr)
            return def;
        if (!p->is_string())
            throw config_error("'" + path(key) + "' must be a string");
        return p->get<std::string>();
    }

    bool flag(const std::string &key, bool def) {
        const json *p = get(key);
        if (p == nullptr)
            return def;
        if (!p->is_boolean())
            throw config_error("'" + path(key) + "' must be true or false");
        return p->get<bool>();
    }

    std::vector<double> numbers(const std::string &key, std::vector<double> def) {
        const json *p = get(key);
        if (p == nullptr)
            return def;
        return as_numbers(*p, path(key));
    }

    Vec3 vec3(const std::string &key, const Vec3 &def) {
        const json *p = get(key);
        if (p == nullptr)
            return def;
        const std::vector<double> v = as_numbers(*p, path(key));
        if (v.size() != 3)
            throw config_error("'" + path(key) + "' must hold three numbers");
        return {v[0], v[1], v[2]};
    }

    std::optional<Obj> sub(const std::string &key) {
        const json *p = get(key);
        if (p == nullptr)
            return std::nullopt;
        return Obj(*p, path(key));
    }

    void done() const {
        for (const auto &item : j_.items())
            if (seen_.count(item.key()) == 0)
                throw config_error("unknown configuration key '" + path(item.key()) + "'");
    }

    const json &raw() const { return j_; }

    std::string path(const std::string &key) const { return where_.empty() ? key : where_ + "." + key; }
    std::string label() const { return where_.empty() ? "<root>" : where_; }

    static std::vector<double> as_numbers(const json &j, const std::string &where) {
        if (!j.is_array())
            throw config_error("'" + where + "' must be an array of numbers");
        std::vector<double> out;
        for (const json &v : j) {
            if (!v.is_number())
                throw config_error("'" + where + "' must be an array of numbers");
            out.push_back(v.get<double>());
        }
        return out;
    }

  private:
    const json &j_;
    std::string where_;
    std::set<std::string> seen_;
};

fs::path resolve(const fs::path &base, const std::string &p) {
    const fs::path path(p);
    return path.is_absolute() ? path : base / path;
}

fs::path existing(const fs::path &base, const std::string &p) {
    fs::path full = resolve(base, p);
    if (!fs::exists(full))
        throw Error(ErrorKind::io, "file not found: " + full.string());
    return full;
}

void apply_override(json &doc, const std::string &key, const std::string &value) {
    if (key.empty())
        throw config_error("empty override key");
    json *node = &doc;
    std::size_t start = 0;
    for (;;) {
        const std::size_t dot = key.find('.', start);
        const std::string part = key.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
        if (part.empty())
            throw config_error("malformed override key '" + key + "'");
        if (!node->is_object()) {
            if (!node->is_null())
                throw config_error("override '" + key + "' descends into a non-object");
            *node = json::object();
        }
        node = &(*node)[part];
        if (dot == std::string::npos)
            break;
        start = dot + 1;
    }
    try {
        *node = json::parse(value);
    } catch (const json::parse_error &) {
        *node = value;
    }
}

NodePlacement placement(Obj &o, const NodePlacement &def) {
    NodePlacement p;
    p.joint = o.str("joint", def.joint);
    p.offset = o.vec3("offset_m", def.offset);
    o.done();
    return p;
}

std::vector<Interval> intervals(const json *p, const std::string &where) {
    std::vector<Interval> out;
    if (p == nullptr)
        return out;
    if (!p->is_array())
        throw config_error("'" + where + "' must be an array of [start, end] pairs");
    for (const json &row : *p) {
        const std::vector<double> v = Obj::as_numbers(row, where);
        if (v.size() != 2 || !(v[1] > v[0]))
            throw config_error("'" + where + "' entries must be [start, end] with end > start");
        out.push_back({v[0], v[1]});
    }
    return out;
}

void check_level(const RadioConfig &radio, double level, const std::string &what) {
    if (!radio.has_level(level))
        throw config_error("'" + what + "' = " + detail::shortest(level) + " dBm is not among the radio power levels");
}

Scenario decode(const json &doc, const fs::path &base) {
    Scenario s;
    Obj root(doc, "");
    if (const json *p = root.get("seed")) {
        if (!p->is_number_integer() || p->get<std::int64_t>() < 0)
            throw config_error("'seed' must be a non-negative integer");
        s.seed = p->get<std::uint64_t>();
    }

    if (auto m = root.sub("motion")) {
        const std::string bvh = m->str("bvh", "");
        if (!bvh.empty())
            s.bvh = existing(base, bvh);
        s.unit_scale = m->num("unit_scale", s.unit_scale);
        s.subject_height = m->num("subject_height_m", s.subject_height);
        m->done();
        if (!(s.unit_scale > 0.0) || s.subject_height < 0.0)
            throw config_error("motion scale and height must be positive");
    }
    if (auto t = root.sub("torso")) {
        s.torso.radius = t->num("radius_m", s.torso.radius);
        s.torso.neck_joint = t->str("neck_joint", s.torso.neck_joint);
        if (const json *h = t->get("hip_joints")) {
            if (!h->is_array() || h->empty())
                throw config_error("'torso.hip_joints' must be a nonempty array of joint names");
            s.torso.hip_joints.clear();
            for (const json &name : *h) {
                if (!name.is_string())
                    throw config_error("'torso.hip_joints' must be a nonempty array of joint names");
                s.torso.hip_joints.push_back(name.get<std::string>());
            }
        }
        t->done();
        if (!(s.torso.radius > 0.0))
            throw config_error("'torso.radius_m' must be positive");
    }
    if (auto l = root.sub("link")) {
        s.link_id = l->str("id", s.link_id);
        if (auto tx = l->sub("tx"))
            s.tx = placement(*tx, s.tx);
        if (auto rx = l->sub("rx"))
            s.rx = placement(*rx, s.rx);
        l->done();
    }
    if (auto sh = root.sub("shadowing")) {
        s.sigma_db = sh->num("sigma_db", s.sigma_db);
        sh->done();
        if (s.sigma_db < 0.0)
            throw config_error("'shadowing.sigma_db' must be non-negative");
    }
    if (auto r = root.sub("radio")) {
        s.radio.power_levels = r->numbers("power_levels_dbm", s.radio.power_levels);
        s.radio.sensitivity_dbm = r->num("sensitivity_dbm", s.radio.sensitivity_dbm);
        s.radio.airtime = r->num("airtime_s", s.radio.airtime);
        if (auto e = r->sub("energy_mw")) {
            s.radio.energy_mw.clear();
            for (const auto &item : e->raw().items()) {
                const double dbm = detail::parse_number(item.key(), 0);
                s.radio.energy_mw[dbm] = e->num(item.key(), 0.0);
            }
            e->done();
        }
        r->done();
    }
    s.radio.validate();
    if (auto a = root.sub("app")) {
        s.app.packet_interval = a->num("packet_interval_s", s.app.packet_interval);
        a->done();
        if (!(s.app.packet_interval > 0.0))
            throw config_error("'app.packet_interval_s' must be positive");
    }
    if (auto p = root.sub("policy")) {
        s.policy.kind = parse_policy(p->str("kind", to_string(s.policy.kind)));
        s.policy.power_dbm = p->num("power_dbm", s.policy.power_dbm);
        const double k = p->num("drop_threshold", static_cast<double>(s.policy.drop_threshold));
        if (!(k >= 1.0) || k != std::floor(k))
            throw config_error("'policy.drop_threshold' must be a positive integer");
        s.policy.drop_threshold = static_cast<std::size_t>(k);
        if (auto e = p->sub("emg")) {
            s.policy.emg.threshold_uv = e->num("threshold_uv", s.policy.emg.threshold_uv);
            s.policy.emg.p_low = e->num("p_low_dbm", s.policy.emg.p_low);
            s.policy.emg.p_high = e->num("p_high_dbm", s.policy.emg.p_high);
            s.policy.emg.deduplicate = e->flag("deduplicate", s.policy.emg.deduplicate);
            e->done();
        }
        if (auto h = p->sub("hr")) {
            s.policy.hr.threshold_bpm = h->num("threshold_bpm", s.policy.hr.threshold_bpm);
            s.policy.hr.p_low = h->num("p_low_dbm", s.policy.hr.p_low);
            s.policy.hr.p_high = h->num("p_high_dbm", s.policy.hr.p_high);
            s.policy.hr.cadence = h->num("cadence_s", s.policy.hr.cadence);
            s.policy.hr.deduplicate = h->flag("deduplicate", s.policy.hr.deduplicate);
            h->done();
        }
        p->done();
    }
    check_level(s.radio, s.policy.power_dbm, "policy.power_dbm");
    check_level(s.radio, s.policy.emg.p_low, "policy.emg.p_low_dbm");
    check_level(s.radio, s.policy.emg.p_high, "policy.emg.p_high_dbm");
    check_level(s.radio, s.policy.hr.p_low, "policy.hr.p_low_dbm");
    check_level(s.radio, s.policy.hr.p_high, "policy.hr.p_high_dbm");

    if (auto a = root.sub("analysis")) {
        s.analysis.max_lag = a->num("max_lag_s", s.analysis.max_lag);
        s.analysis.threshold = a->num("threshold", s.analysis.threshold);
        s.analysis.cvf_window = a->num("cvf_window_s", s.analysis.cvf_window);
        a->done();
    }
    if (auto sig = root.sub("signals")) {
        if (auto e = sig->sub("emg")) {
            s.emg.rest_amplitude_uv = e->num("rest_uv", s.emg.rest_amplitude_uv);
            s.emg.burst_amplitude_uv = e->num("burst_uv", s.emg.burst_amplitude_uv);
            s.emg.bursts = intervals(e->get("bursts"), e->path("bursts"));
            const std::string csv = e->str("csv", "");
            if (!csv.empty())
                s.emg_csv = existing(base, csv);
            e->done();
        }
        if (auto c = sig->sub("ecg")) {
            if (const json *prof = c->get("profile")) {
                if (!prof->is_array() || prof->empty())
                    throw config_error("'signals.ecg.profile' must be an array of [start_s, bpm] pairs");
                s.ecg.profile.clear();
                for (const json &row : *prof) {
                    const std::vector<double> v = Obj::as_numbers(row, "signals.ecg.profile");
                    if (v.size() != 2)
                        throw config_error("'signals.ecg.profile' entries must be [start_s, bpm]");
                    s.ecg.profile.push_back({v[0], v[1]});
                }
            }
            const std::string csv = c->str("csv", "");
            if (!csv.empty())
                s.ecg_csv = existing(base, csv);
            c->done();
        }
        sig->done();
    }
    if (const json *p = root.get("labels")) {
        if (!p->is_array())
            throw config_error("'labels' must be an array");
        for (const json &row : *p) {
            Obj o(row, "labels[]");
            LabeledInterval li;
            li.label = o.str("label", "");
            li.span = {o.num("start_s", 0.0), o.num("end_s", 0.0)};
            o.done();
            if (li.label.empty() || !(li.span.end > li.span.start))
                throw config_error("each label needs a name and end_s > start_s");
            s.labels.push_back(li);
        }
    }
    s.duration = root.num("duration_s", s.duration);
    if (s.duration < 0.0)
        throw config_error("'duration_s' must be non-negative");
    const std::string trace = root.str("trace_csv", "");
    if (!trace.empty())
        s.trace_csv = existing(base, trace);
    if (auto o = root.sub("output")) {
        s.output_dir = resolve(base, o->str("dir", s.output_dir.string()));
        o->done();
    } else {
        s.output_dir = resolve(base, s.output_dir.string());
    }
    root.done();
    return s;
}

} // namespace

Scenario parse_scenario(std::string_view json_text, const fs::path &base_dir, const Overrides &overrides) {
    json doc;
    try {
        doc = json::parse(json_text.begin(), json_text.end(), nullptr, true, true);
    } catch (const json::parse_error &e) {
        const std::size_t upto = std::min<std::size_t>(e.byte, json_text.size());
        const auto line =
            1 + static_cast<std::size_t>(std::count(json_text.begin(), json_text.begin() + static_cast<std::ptrdiff_t>(upto), '\n'));
        throw ParseError(line, "malformed scenario JSON");
    }
    for (const auto &[key, value] : overrides)
        apply_override(doc, key, value);
    return decode(doc, base_dir);
}

Scenario load_scenario(const fs::path &file, const Overrides &overrides) {
    const std::string text = detail::read_text_file(file);
    return parse_scenario(text, file.parent_path().empty() ? fs::path(".") : file.parent_path(), overrides);
}

Emulation emulate(const Scenario &s) {
    if (!s.bvh)
        throw config_error("scenario has no motion.bvh clip to emulate");
    Emulation e;
    e.clip = load_bvh(*s.bvh, s.unit_scale);
    if (s.subject_height > 0.0)
        e.clip = scale_to_height(e.clip, s.subject_height);
    const ShadowingModel shadow(s.sigma_db, s.seed);
    e.trace = path_loss_trace(e.clip, s.tx, s.rx, s.torso, shadow, s.link_id);
    const std::vector<Vec3> path = node_trajectory(e.clip, s.tx);
    e.imu = synth_imu(path, e.clip.frame_time, dominant_axis(path));
    return e;
}

StabilityReport analyze_csv(std::string_view csv_text, const AnalysisConfig &cfg) {
    const detail::CsvTable table = detail::parse_csv(csv_text);
    const auto &h = table.header;
    if (std::find(h.begin(), h.end(), "pl_db") != h.end()) {
        const PathLossTrace trace = parse_trace_csv(csv_text);
        return analyze_stability(trace.samples, trace.frame_time, DbQuantity::path_loss, cfg.max_lag, cfg.threshold,
                                 cfg.cvf_window);
    }
    if (h.size() != 2 || h[0] != "t_s" || h[1] != "value")
        throw ParseError(1, "expected a path-loss trace or a 't_s,value' series");
    std::vector<double> t;
    std::vector<double> v;
    for (const detail::CsvRow &row : table.rows) {
        t.push_back(detail::parse_number(row.fields[0], row.line));
        v.push_back(detail::parse_number(row.fields[1], row.line));
    }
    if (table.rows.size() < 2)
        throw Error(ErrorKind::insufficient_data, "series needs at least two samples");
    const double dt = (t.back() - t.front()) / static_cast<double>(t.size() - 1);
    if (!(dt > 0.0))
        throw Error(ErrorKind::structural, "series timestamps must increase");
    for (std::size_t k = 1; k < t.size(); ++k)
        if (std::abs(t[k] - t[k - 1] - dt) > 1e-3 * dt + 1e-6)
            throw ParseError(table.rows[k].line, "non-uniform sample spacing");
    return analyze_stability(v, detail::snap_interval(dt), DbQuantity::received_power, cfg.max_lag, cfg.threshold, cfg.cvf_window);
}

SimReport simulate(const Scenario &s, std::optional<double> power_dbm) {
    PolicyConfig policy = s.policy;
    if (power_dbm) {
        if (!s.radio.has_level(*power_dbm))
            throw config_error("sweep level " + detail::shortest(*power_dbm) + " dBm is not a radio power level");
        policy.power_dbm = *power_dbm;
    }

    PathLossTrace trace;
    BiosignalTrace imu;
    if (s.trace_csv)
        trace = read_trace_csv(*s.trace_csv, s.link_id);
    if (!s.trace_csv || policy.kind == PolicyKind::imu) {
        Emulation e = emulate(s);
        if (!s.trace_csv)
            trace = std::move(e.trace);
        imu = std::move(e.imu);
    }
    const double duration = s.duration > 0.0 ? s.duration : trace.duration();

    SimInputs in;
    in.trace = &trace;
    if (policy.kind == PolicyKind::imu)
        in.imu = &imu;

    BiosignalTrace emg;
    if (policy.kind == PolicyKind::emg) {
        if (s.emg_csv) {
            emg = read_signal_csv(*s.emg_csv, SignalKind::emg);
        } else {
            EmgSynthConfig cfg = s.emg;
            cfg.duration = duration;
            cfg.seed = s.seed;
            emg = synth_emg(cfg);
        }
        in.emg = &emg;
    }
    BiosignalTrace ecg;
    if (policy.kind == PolicyKind::hr) {
        if (s.ecg_csv) {
            ecg = read_signal_csv(*s.ecg_csv, SignalKind::ecg);
        } else {
            EcgSynthConfig cfg = s.ecg;
            cfg.duration = duration;
            ecg = synth_ecg(cfg);
        }
        in.ecg = &ecg;
    }

    std::vector<LabeledInterval> labels = s.labels;
    if (labels.empty() && policy.kind == PolicyKind::emg && !s.emg_csv)
        for (const Interval &b : s.emg.bursts)
            labels.push_back({"burst", b});
    return run_scenario(in, policy, s.radio, s.app, duration, labels);
}

} // namespace wban
