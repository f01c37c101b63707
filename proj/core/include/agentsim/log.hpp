#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "agentsim/agent.hpp"

namespace agentsim {

struct LogRow {
    int frame = 0;
    std::uint32_t agent_id = 0;
    AgentKind kind = AgentKind::pedestrian;
    Vec2 position;
    Vec2 velocity;
};

// One row per agent per logged frame, serialized as
// `frame,agent_id,kind,x,y,vx,vy` with round-trip float formatting, so equal
// logs have equal bytes.
struct TrajectoryLog {
    std::vector<LogRow> rows;
    int frame_count = 0;

    void append_frame(int frame, const std::vector<AgentState>& agents);
    std::string to_csv() const;
    void write_csv_file(const std::string& path) const;
    std::uint64_t checksum() const;  // FNV-1a over the CSV bytes
};

// Shortest decimal representation that parses back to the same double.
std::string format_double_roundtrip(double v);

}  // namespace agentsim
