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

#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "rissc/harness.hpp"

using namespace rissc;

namespace {

std::string slurp(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

// Small world that still exercises every stage of an interval.
ExperimentSpec quick_spec(const std::string& extra = {})
{
    return parse_config("scenario.n_subcarriers = 64\n"
                        "schedule.images_per_interval = 2\n"
                        "schedule.warmup_intervals = 4\n"
                        "experiment.n_intervals = 12\n" +
                        extra);
}

} // namespace

TEST_CASE("config parsing")
{
    const ExperimentSpec d = parse_config("");
    const ScenarioConfig s;
    CHECK(d.scenario.n_ris == s.n_ris);
    CHECK(d.scenario.snr_db == s.snr_db);
    CHECK(d.n_intervals == 500);
    CHECK(d.reward_schedule.size() == 1);
    CHECK(d.reward_schedule[0][0].kind == RewardKind::acc);

    const auto one = parse_config("# comment\nscenario.snr_db = 10  # trailing\n");
    CHECK(one.scenario.snr_db == 10.0);
    CHECK(one.scenario.n_ris == s.n_ris);

    try {
        parse_config("scenario.n_riss = 3\n");
        FAIL("misspelled key accepted");
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("scenario.n_riss") != std::string::npos);
        CHECK(e.line() == 1);
    }
    try {
        parse_config("\n\nscenario.snr_db = loud\n");
        FAIL("bad value accepted");
    } catch (const ConfigError& e) {
        CHECK(e.line() == 3);
    }
    CHECK_THROWS_AS(parse_config("scenario.snr_db 3\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("experiment.reward_user1 = MSE\n"), ConfigError);
    CHECK_THROWS_AS(load_config("/nonexistent/rissc.cfg"), ConfigError);

    const auto round = parse_config(quick_spec("experiment.channel_mode = mixed50\n").describe());
    CHECK(round.describe() == quick_spec("experiment.channel_mode = mixed50\n").describe());
}

TEST_CASE("reward schedules")
{
    const auto all = parse_reward_schedule("MSE", 100);
    REQUIRE(all.size() == 1);
    CHECK(all[0].begin == 0);
    CHECK(all[0].end == 100);
    const auto two = parse_reward_schedule("ACC:0-500,MSE:500-800", 800);
    REQUIRE(two.size() == 2);
    CHECK(two[1].kind == RewardKind::mse);
    CHECK_THROWS_AS(parse_reward_schedule("ACC:0-400,MSE:500-800", 800), std::invalid_argument);
    CHECK_THROWS_AS(parse_reward_schedule("ACC:0-600,MSE:500-800", 800), std::invalid_argument);
    CHECK_THROWS_AS(parse_reward_schedule("ACC:0-500", 800), std::invalid_argument);
    CHECK_THROWS_AS(parse_reward_schedule("ACC:5", 800), std::invalid_argument);

    const auto spec = parse_config("scenario.n_users = 2\nexperiment.n_intervals = 800\n"
                                   "experiment.reward_user0 = ACC:0-500,MSE:500-800\n"
                                   "experiment.reward_user1 = MSE\n");
    CHECK(spec.rewards_at(499).kinds == std::vector<RewardKind>{RewardKind::acc, RewardKind::mse});
    CHECK(spec.rewards_at(500).kinds == std::vector<RewardKind>{RewardKind::mse, RewardKind::mse});
}

TEST_CASE("rows per seed and csv format")
{
    auto spec = quick_spec("experiment.n_intervals = 4\n");
    const auto rows = run_seed(spec, 0);
    CHECK(rows.size() == 4);
    for (int i = 0; i < 4; ++i)
        CHECK(rows[i].interval == i);
    const auto csv = format_row(rows[0]);
    CHECK(std::count(csv.begin(), csv.end(), ',') == 9);
    CHECK(csv.rfind(std::to_string(world_seed(spec, 0)) + ",0,0,ACC,", 0) == 0);
    CHECK(kCsvHeader == "seed,interval,user,reward_kind,blocked,acc,mse,reward,sum_rate,rows_used");

    auto two = quick_spec("scenario.n_users = 2\nexperiment.n_intervals = 3\n");
    CHECK(run_seed(two, 1).size() == 6);
}

TEST_CASE("rows used follow the penalty switch")
{
    auto spec = quick_spec();
    const int all_rows = spec.scenario.total_rows();
    for (const auto& r : run_seed(spec, 0))
        CHECK(r.rows_used == all_rows);
    spec = quick_spec("experiment.penalty = true\n");
    for (const auto& r : run_seed(spec, 0)) {
        CHECK(r.rows_used >= 0);
        CHECK(r.rows_used <= all_rows);
    }
    spec = quick_spec("experiment.ris_count = 0\n");
    for (const auto& r : run_seed(spec, 0))
        CHECK(r.rows_used == 0);
}

TEST_CASE("repeated experiments are byte-identical")
{
    const auto dir = std::filesystem::temp_directory_path() / "rissc_harness_test";
    std::filesystem::create_directories(dir);
    auto spec = quick_spec("experiment.n_seeds = 2\n");
    run_experiment(spec, (dir / "a.csv").string());
    run_experiment(spec, (dir / "b.csv").string());
    const auto a = slurp(dir / "a.csv");
    CHECK(a == slurp(dir / "b.csv"));
    CHECK(a.rfind(std::string(kCsvHeader) + "\n", 0) == 0);
    CHECK(std::count(a.begin(), a.end(), '\n') == 1 + 2 * 12);
    std::filesystem::remove_all(dir);
}

TEST_CASE("mixed channel mode blocks about half the intervals")
{
    auto spec = parse_config("scenario.n_subcarriers = 64\n"
                             "schedule.images_per_interval = 1\n"
                             "experiment.ris_count = 0\n"
                             "experiment.training = false\n"
                             "experiment.channel_mode = mixed50\n"
                             "experiment.n_intervals = 1000\n");
    int blocked = 0;
    for (const auto& r : run_seed(spec, 0))
        blocked += r.blocked;
    CHECK(blocked >= 450);
    CHECK(blocked <= 550);

    spec.channel_mode = ChannelMode::ideal;
    spec.n_intervals = 50;
    spec.reward_schedule = {parse_reward_schedule("ACC", 50)};
    for (const auto& r : run_seed(spec, 0))
        CHECK_FALSE(r.blocked);
}

TEST_CASE("exhaustive oracle")
{
    ScenarioConfig cfg;
    cfg.n_ris = 1;
    cfg.ris_rows = 2;
    cfg.ris_positions = {{5.0, -2.0, 5.0}};
    cfg.n_subcarriers = 64;
    cfg.blockage_probability = 1.0;

    auto zero = ChannelRealization::zeros(2, 2, 1, cfg.elements_per_ris(), cfg.n_taps, 1);
    for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
            zero.direct(0, i, j)[0] = i == j ? 1.0 : 0.0;
    const auto flat = exhaustive_oracle(zero, cfg);
    CHECK(flat.phases == std::vector<int>{0, 0});
    CHECK(flat.evaluated == 64 * 64);

    const auto links = frozen_channel_draw(cfg, 3);
    const auto best = exhaustive_oracle(links, cfg);
    CHECK(best.value == doctest::Approx(evaluate_sum_rate(links, cfg, best.phases)));
    RandomStream rng(4);
    for (int t = 0; t < 100; ++t) {
        const std::vector<int> probe{rng.uniform_int(kPhaseLevels), rng.uniform_int(kPhaseLevels)};
        CHECK(evaluate_sum_rate(links, cfg, probe) <= best.value);
    }
    CHECK(frozen_channel_draw(cfg, 3).users[0].direct == links.users[0].direct);
    CHECK(links.users[0].blocked);

    cfg.ris_rows = 3;
    CHECK_THROWS_AS(exhaustive_oracle(frozen_channel_draw(cfg, 3), cfg), std::invalid_argument);
}
