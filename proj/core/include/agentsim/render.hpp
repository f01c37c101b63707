#pragma once

#include <string>
#include <vector>

#include "agentsim/agent.hpp"
#include "agentsim/scenario.hpp"

namespace agentsim {

// Static top-down SVG snapshot of the scene: roads, obstacles, attractors,
// stop lines colored by their phase at `time`, and every agent drawn as its
// shape. Deterministic bytes for identical inputs.
std::string render_svg(const Scenario& scenario, const std::vector<AgentState>& agents,
                       double time);

}  // namespace agentsim
