// SPDX-License-Identifier: Apache-2.0
//
// rissc: RIS-assisted semantic transmission simulator
// Copyright (C) 2026 The rissc Authors
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

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <fstream>
#include <functional>
#include <sstream>

#include "rissc/harness.hpp"

namespace rissc {

ConfigError::ConfigError(const std::string& message, int line)
    : std::runtime_error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line)
{
}

std::string_view to_string(ChannelMode mode)
{
    switch (mode) {
    case ChannelMode::ideal:
        return "ideal";
    case ChannelMode::blocked:
        return "blocked";
    case ChannelMode::mixed50:
        return "mixed50";
    }
    return "?";
}

namespace {

std::string_view trim(std::string_view s)
{
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front())))
        s.remove_prefix(1);
    while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back())))
        s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split(std::string_view s, char sep)
{
    std::vector<std::string_view> out;
    size_t start = 0;
    while (true) {
        const size_t pos = s.find(sep, start);
        out.push_back(trim(s.substr(start, pos - start)));
        if (pos == std::string_view::npos)
            break;
        start = pos + 1;
    }
    return out;
}

template <typename T>
T parse_number(std::string_view s)
{
    s = trim(s);
    T value{};
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
        throw std::invalid_argument("cannot parse '" + std::string(s) + "' as a number");
    return value;
}

double parse_real(std::string_view s)
{
    // from_chars for double is available in libstdc++ 11.
    return parse_number<double>(s);
}

bool parse_bool(std::string_view s)
{
    std::string v(trim(s));
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char c) { return std::tolower(c); });
    if (v == "true" || v == "1" || v == "yes" || v == "on")
        return true;
    if (v == "false" || v == "0" || v == "no" || v == "off")
        return false;
    throw std::invalid_argument("expected a boolean, got '" + v + "'");
}

Vec3 parse_vec3(std::string_view s)
{
    const auto parts = split(s, ',');
    if (parts.size() != 3)
        throw std::invalid_argument("expected three comma-separated coordinates");
    return {parse_real(parts[0]), parse_real(parts[1]), parse_real(parts[2])};
}

std::string fmt_real(double v)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

std::string fmt_vec3(const Vec3& v)
{
    return fmt_real(v.x) + ", " + fmt_real(v.y) + ", " + fmt_real(v.z);
}

std::string fmt_schedule(const std::vector<RewardRange>& ranges)
{
    std::string out;
    for (const auto& r : ranges) {
        if (!out.empty())
            out += ",";
        out += std::string(to_string(r.kind)) + ":" + std::to_string(r.begin) + "-" + std::to_string(r.end);
    }
    return out;
}

ChannelMode parse_channel_mode(std::string_view s)
{
    s = trim(s);
    if (s == "ideal")
        return ChannelMode::ideal;
    if (s == "blocked")
        return ChannelMode::blocked;
    if (s == "mixed50")
        return ChannelMode::mixed50;
    throw std::invalid_argument("channel_mode must be ideal, blocked or mixed50");
}

// Raw reward strings are resolved once n_intervals is known.
struct ParseState {
    ExperimentSpec spec;
    std::optional<std::string> reward_all;
    std::vector<std::optional<std::string>> reward_user{std::nullopt, std::nullopt};
};

struct Field {
    std::string key;
    std::function<void(ParseState&, std::string_view)> set;
    std::function<std::string(const ExperimentSpec&)> get;
};

#define RISSC_INT(KEY, EXPR)                                                                    \
    Field{KEY, [](ParseState& p, std::string_view v) { p.spec.EXPR = parse_number<int>(v); }, \
          [](const ExperimentSpec& s) { return std::to_string(s.EXPR); }}
#define RISSC_REAL(KEY, EXPR)                                                                \
    Field{KEY, [](ParseState& p, std::string_view v) { p.spec.EXPR = parse_real(v); },      \
          [](const ExperimentSpec& s) { return fmt_real(s.EXPR); }}
#define RISSC_BOOL(KEY, EXPR)                                                                \
    Field{KEY, [](ParseState& p, std::string_view v) { p.spec.EXPR = parse_bool(v); },      \
          [](const ExperimentSpec& s) { return std::string(s.EXPR ? "true" : "false"); }}
#define RISSC_VEC3(KEY, EXPR)                                                                \
    Field{KEY, [](ParseState& p, std::string_view v) { p.spec.EXPR = parse_vec3(v); },      \
          [](const ExperimentSpec& s) { return fmt_vec3(s.EXPR); }}

const std::vector<Field>& fields()
{
    static const std::vector<Field> table{
        RISSC_INT("scenario.n_bs_antennas", scenario.n_bs_antennas),
        RISSC_INT("scenario.n_ut_antennas", scenario.n_ut_antennas),
        RISSC_INT("scenario.n_users", scenario.n_users),
        RISSC_INT("scenario.n_ris", scenario.n_ris),
        RISSC_INT("scenario.ris_rows", scenario.ris_rows),
        RISSC_INT("scenario.ris_cols", scenario.ris_cols),
        RISSC_INT("scenario.n_taps", scenario.n_taps),
        RISSC_INT("scenario.n_subcarriers", scenario.n_subcarriers),
        RISSC_INT("scenario.cp_length", scenario.cp_length),
        RISSC_REAL("scenario.snr_db", scenario.snr_db),
        RISSC_REAL("scenario.los_nlos_power_ratio", scenario.los_nlos_power_ratio),
        Field{"scenario.tap_power",
              [](ParseState& p, std::string_view v) {
                  p.spec.scenario.tap_power.clear();
                  for (auto part : split(v, ','))
                      p.spec.scenario.tap_power.push_back(parse_real(part));
              },
              [](const ExperimentSpec& s) {
                  std::string out;
                  for (double t : s.scenario.tap_power)
                      out += (out.empty() ? "" : ", ") + fmt_real(t);
                  return out;
              }},
        RISSC_VEC3("scenario.bs_position", scenario.bs_position),
        Field{"scenario.ris_positions",
              [](ParseState& p, std::string_view v) {
                  p.spec.scenario.ris_positions.clear();
                  for (auto part : split(v, ';'))
                      if (!part.empty())
                          p.spec.scenario.ris_positions.push_back(parse_vec3(part));
              },
              [](const ExperimentSpec& s) {
                  std::string out;
                  for (const auto& r : s.scenario.ris_positions)
                      out += (out.empty() ? "" : "; ") + fmt_vec3(r);
                  return out;
              }},
        RISSC_VEC3("scenario.area_min", scenario.area_min),
        RISSC_VEC3("scenario.area_max", scenario.area_max),
        RISSC_REAL("scenario.blockage_probability", scenario.blockage_probability),
        RISSC_REAL("scenario.carrier_wavelength", scenario.carrier_wavelength),
        RISSC_REAL("scenario.ris_path_gain_db", scenario.ris_path_gain_db),
        Field{"scenario.seed",
              [](ParseState& p, std::string_view v) { p.spec.scenario.seed = parse_number<std::uint64_t>(v); },
              [](const ExperimentSpec& s) { return std::to_string(s.scenario.seed); }},
        RISSC_INT("schedule.warmup_intervals", scenario.schedule.warmup_intervals),
        RISSC_INT("schedule.images_per_interval", scenario.schedule.images_per_interval),
        RISSC_INT("schedule.known_images_online", scenario.schedule.known_images_online),
        RISSC_INT("experiment.n_intervals", n_intervals),
        RISSC_INT("experiment.n_seeds", n_seeds),
        Field{"experiment.channel_mode",
              [](ParseState& p, std::string_view v) {
                  if (trim(v) == "none")
                      p.spec.channel_mode.reset();
                  else
                      p.spec.channel_mode = parse_channel_mode(v);
              },
              [](const ExperimentSpec& s) {
                  return s.channel_mode ? std::string(to_string(*s.channel_mode)) : std::string("none");
              }},
        Field{"experiment.ris_count",
              [](ParseState& p, std::string_view v) {
                  if (trim(v) == "none")
                      p.spec.ris_count_override.reset();
                  else
                      p.spec.ris_count_override = parse_number<int>(v);
              },
              [](const ExperimentSpec& s) {
                  return s.ris_count_override ? std::to_string(*s.ris_count_override) : std::string("none");
              }},
        RISSC_BOOL("experiment.penalty", penalty_enabled),
        RISSC_BOOL("experiment.frozen_channel", frozen_channel),
        RISSC_BOOL("experiment.training", training),
        Field{"experiment.output", [](ParseState& p, std::string_view v) { p.spec.output = std::string(trim(v)); },
              [](const ExperimentSpec& s) { return s.output; }},
        Field{"experiment.reward", [](ParseState& p, std::string_view v) { p.reward_all = std::string(v); },
              [](const ExperimentSpec& s) { return fmt_schedule(s.reward_schedule.at(0)); }},
        Field{"experiment.reward_user0",
              [](ParseState& p, std::string_view v) { p.reward_user[0] = std::string(v); },
              [](const ExperimentSpec& s) { return fmt_schedule(s.reward_schedule.at(0)); }},
        Field{"experiment.reward_user1",
              [](ParseState& p, std::string_view v) {
                  if (trim(v) == "none")
                      p.reward_user[1].reset();
                  else
                      p.reward_user[1] = std::string(v);
              },
              [](const ExperimentSpec& s) {
                  return s.reward_schedule.size() > 1 ? fmt_schedule(s.reward_schedule[1]) : std::string("none");
              }},
        RISSC_REAL("agents.learning_rate", agents.learning_rate),
        RISSC_INT("agents.batch_size", agents.batch_size),
        RISSC_INT("agents.replay_capacity", agents.replay_capacity),
        RISSC_INT("agents.updates_per_epoch", agents.updates_per_epoch),
        RISSC_REAL("agents.reward_scale", agents.reward_scale),
        RISSC_REAL("agents.epsilon_start", agents.epsilon_start),
        RISSC_REAL("agents.epsilon_end", agents.epsilon_end),
        RISSC_REAL("agents.baseline_rate", agents.baseline_rate),
    };
    return table;
}

#undef RISSC_INT
#undef RISSC_REAL
#undef RISSC_BOOL
#undef RISSC_VEC3

void resolve_rewards(ParseState& st)
{
    ExperimentSpec& spec = st.spec;
    const int users = std::max(spec.scenario.n_users, 1);
    if (users > 2)
        throw ConfigError("scenario.n_users: at most two users are supported");
    if (spec.n_intervals < 1)
        throw ConfigError("experiment.n_intervals: must be >= 1");
    spec.reward_schedule.clear();
    for (int u = 0; u < users; ++u) {
        std::string text = "ACC";
        if (st.reward_user[u])
            text = *st.reward_user[u];
        else if (st.reward_all)
            text = *st.reward_all;
        const std::string key = st.reward_user[u] ? "experiment.reward_user" + std::to_string(u) : "experiment.reward";
        try {
            spec.reward_schedule.push_back(parse_reward_schedule(text, spec.n_intervals));
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key + ": " + e.what());
        }
    }
    if (users < 2 && st.reward_user[1])
        throw ConfigError("experiment.reward_user1: scenario has a single user");
}

} // namespace

std::vector<RewardRange> parse_reward_schedule(std::string_view text, int n_intervals)
{
    std::vector<RewardRange> out;
    text = trim(text);
    if (text.find(':') == std::string_view::npos) {
        out.push_back({parse_reward_kind(text), 0, n_intervals});
        return out;
    }
    for (auto item : split(text, ',')) {
        const auto colon = item.find(':');
        const auto dash = item.find('-', colon);
        if (colon == std::string_view::npos || dash == std::string_view::npos)
            throw std::invalid_argument("malformed schedule entry '" + std::string(item) + "'");
        RewardRange r;
        r.kind = parse_reward_kind(trim(item.substr(0, colon)));
        r.begin = parse_number<int>(item.substr(colon + 1, dash - colon - 1));
        r.end = parse_number<int>(item.substr(dash + 1));
        out.push_back(r);
    }
    std::sort(out.begin(), out.end(), [](const RewardRange& a, const RewardRange& b) { return a.begin < b.begin; });
    int expect = 0;
    for (const auto& r : out) {
        if (r.begin != expect)
            throw std::invalid_argument("schedule leaves a gap or overlap at interval " + std::to_string(expect));
        if (r.end <= r.begin)
            throw std::invalid_argument("schedule range must be nonempty");
        expect = r.end;
    }
    if (expect != n_intervals)
        throw std::invalid_argument("schedule must end at n_intervals = " + std::to_string(n_intervals));
    return out;
}

ScenarioConfig ExperimentSpec::effective_scenario() const
{
    ScenarioConfig cfg = scenario;
    if (ris_count_override)
        cfg.n_ris = *ris_count_override;
    if (channel_mode) {
        switch (*channel_mode) {
        case ChannelMode::ideal:
            cfg.blockage_probability = 0.0;
            break;
        case ChannelMode::blocked:
            cfg.blockage_probability = 1.0;
            break;
        case ChannelMode::mixed50:
            cfg.blockage_probability = 0.5;
            break;
        }
    }
    return cfg;
}

RewardSpec ExperimentSpec::rewards_at(int interval) const
{
    RewardSpec r;
    r.penalty_enabled = penalty_enabled;
    for (const auto& user : reward_schedule) {
        RewardKind kind = user.back().kind;
        for (const auto& range : user)
            if (interval >= range.begin && interval < range.end)
                kind = range.kind;
        r.kinds.push_back(kind);
    }
    return r;
}

void ExperimentSpec::validate() const
{
    if (ris_count_override && (*ris_count_override < 0 || *ris_count_override > 2))
        throw ConfigError("experiment.ris_count: must be 0, 1 or 2");
    if (n_intervals < 1)
        throw ConfigError("experiment.n_intervals: must be >= 1");
    if (n_seeds < 1)
        throw ConfigError("experiment.n_seeds: must be >= 1");
    if (output.empty())
        throw ConfigError("experiment.output: must not be empty");
    try {
        effective_scenario().validate();
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("scenario.") + e.what());
    }
    if (static_cast<int>(reward_schedule.size()) != scenario.n_users)
        throw ConfigError("experiment.reward: one schedule per user required");
    if (agents.learning_rate < 0.0)
        throw ConfigError("agents.learning_rate: must be >= 0");
    if (agents.batch_size < 1)
        throw ConfigError("agents.batch_size: must be >= 1");
    if (agents.replay_capacity < agents.batch_size)
        throw ConfigError("agents.replay_capacity: must hold at least one batch");
    if (agents.updates_per_epoch < 0)
        throw ConfigError("agents.updates_per_epoch: must be >= 0");
    for (double e : {agents.epsilon_start, agents.epsilon_end})
        if (e < 0.0 || e > 1.0)
            throw ConfigError("agents.epsilon_start/epsilon_end: must lie in [0, 1]");
}

std::string ExperimentSpec::describe() const
{
    std::string out;
    for (const auto& f : fields()) {
        if (f.key == "experiment.reward" || (f.key == "experiment.reward_user1" && reward_schedule.size() < 2))
            continue;
        out += f.key + " = " + f.get(*this) + "\n";
    }
    return out;
}

ExperimentSpec parse_config(std::string_view text)
{
    ParseState st;
    int line_no = 0;
    size_t pos = 0;
    while (pos <= text.size()) {
        const size_t eol = text.find('\n', pos);
        std::string_view line = text.substr(pos, eol == std::string_view::npos ? std::string_view::npos : eol - pos);
        pos = eol == std::string_view::npos ? text.size() + 1 : eol + 1;
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string_view::npos)
            line = line.substr(0, hash);
        line = trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw ConfigError("expected 'key = value'", line_no);
        const std::string key(trim(line.substr(0, eq)));
        const std::string_view value = trim(line.substr(eq + 1));
        const auto& table = fields();
        const auto it = std::find_if(table.begin(), table.end(), [&](const Field& f) { return f.key == key; });
        if (it == table.end())
            throw ConfigError("unknown key '" + key + "'", line_no);
        if (value.empty())
            throw ConfigError(key + ": missing value", line_no);
        try {
            it->set(st, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError(key + ": " + e.what(), line_no);
        }
    }
    resolve_rewards(st);
    st.spec.validate();
    return st.spec;
}

ExperimentSpec load_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

} // namespace rissc
