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

#include <fstream>
#include <iterator>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "rissc/rl_agents.hpp"

namespace rissc {

namespace {

constexpr const char* kManifestHeader = "rissc-agents 1";

template <typename Set>
auto roles(Set& agents)
{
    using Agent = std::conditional_t<std::is_const_v<Set>, const QAgent, QAgent>;
    std::vector<std::pair<std::string, Agent*>> out;
    for (int s = 0; s < agents.n_ris; ++s)
        for (int r = 0; r < agents.n_rows; ++r)
            out.emplace_back("phase.s" + std::to_string(s) + ".r" + std::to_string(r),
                             &agents.phase[static_cast<size_t>(s * agents.n_rows + r)]);
    for (int u = 0; u < agents.n_users; ++u) {
        out.emplace_back("stream.u" + std::to_string(u) + ".background", &agents.stream_agent(u, kBackground));
        out.emplace_back("stream.u" + std::to_string(u) + ".object", &agents.stream_agent(u, kObject));
    }
    for (int s = 0; s < agents.n_ris; ++s)
        out.emplace_back("usage.s" + std::to_string(s), &agents.usage[static_cast<size_t>(s)]);
    return out;
}

std::vector<std::uint8_t> read_bytes(const std::filesystem::path& p)
{
    std::ifstream in(p, std::ios::binary);
    if (!in)
        throw std::runtime_error("cannot open checkpoint file '" + p.string() + "'");
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

void save_agent_set(const AgentSet& agents, const std::filesystem::path& dir)
{
    std::filesystem::create_directories(dir);
    std::ofstream manifest(dir / "manifest.txt");
    if (!manifest)
        throw std::runtime_error("cannot write checkpoint manifest in '" + dir.string() + "'");
    manifest << kManifestHeader << "\n";
    for (const auto& [role, agent] : roles(agents)) {
        const std::string file = role + ".net";
        const auto bytes = save_network(agent->net);
        std::ofstream out(dir / file, std::ios::binary);
        out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw std::runtime_error("cannot write checkpoint file '" + (dir / file).string() + "'");
        manifest << role << " " << file << "\n";
    }
    if (!manifest)
        throw std::runtime_error("cannot write checkpoint manifest in '" + dir.string() + "'");
}

void load_agent_set(AgentSet& agents, const std::filesystem::path& dir)
{
    std::ifstream manifest(dir / "manifest.txt");
    if (!manifest)
        throw std::runtime_error("cannot open checkpoint manifest in '" + dir.string() + "'");
    std::string line;
    if (!std::getline(manifest, line) || line != kManifestHeader)
        throw std::invalid_argument("checkpoint manifest has an unknown header");
    std::vector<std::pair<std::string, std::string>> listed;
    while (std::getline(manifest, line)) {
        if (line.empty())
            continue;
        std::istringstream fields(line);
        std::string role, file;
        if (!(fields >> role >> file))
            throw std::invalid_argument("malformed checkpoint manifest line '" + line + "'");
        listed.emplace_back(role, file);
    }
    const auto expected = roles(agents);
    if (listed.size() != expected.size())
        throw std::invalid_argument("checkpoint lists " + std::to_string(listed.size()) + " agents, expected " +
                                    std::to_string(expected.size()));
    // Parse everything before touching the set so a bad file leaves it intact.
    std::vector<DenseNetwork> nets;
    for (size_t i = 0; i < expected.size(); ++i) {
        if (listed[i].first != expected[i].first)
            throw std::invalid_argument("checkpoint role '" + listed[i].first + "' where '" + expected[i].first +
                                        "' was expected");
        DenseNetwork net = load_network(read_bytes(dir / listed[i].second));
        const DenseNetwork& have = expected[i].second->net;
        bool same = net.layers.size() == have.layers.size();
        for (size_t l = 0; same && l < net.layers.size(); ++l)
            same = net.layers[l].weight.rows() == have.layers[l].weight.rows() &&
                   net.layers[l].weight.cols() == have.layers[l].weight.cols() &&
                   net.layers[l].activation == have.layers[l].activation;
        if (!same)
            throw std::invalid_argument("checkpoint network for '" + listed[i].first + "' has a different shape");
        nets.push_back(std::move(net));
    }
    for (size_t i = 0; i < expected.size(); ++i) {
        expected[i].second->net = std::move(nets[i]);
        expected[i].second->optimizer = AdamState{};
    }
}

} // namespace rissc
