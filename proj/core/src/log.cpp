#include "agentsim/log.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>

#include "agentsim/error.hpp"
#include "agentsim/hash.hpp"

namespace agentsim {

std::string format_double_roundtrip(double v) {
    char buf[64];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

void TrajectoryLog::append_frame(int frame, const std::vector<AgentState>& agents) {
    rows.reserve(rows.size() + agents.size());
    for (const AgentState& a : agents) rows.push_back({frame, a.id, a.kind, a.position, a.velocity});
    ++frame_count;
}

std::string TrajectoryLog::to_csv() const {
    std::string out = "frame,agent_id,kind,x,y,vx,vy\n";
    for (const LogRow& r : rows) {
        out += std::to_string(r.frame);
        out += ',';
        out += std::to_string(r.agent_id);
        out += ',';
        out += to_string(r.kind);
        out += ',';
        out += format_double_roundtrip(r.position.x);
        out += ',';
        out += format_double_roundtrip(r.position.y);
        out += ',';
        out += format_double_roundtrip(r.velocity.x);
        out += ',';
        out += format_double_roundtrip(r.velocity.y);
        out += '\n';
    }
    return out;
}

void TrajectoryLog::write_csv_file(const std::string& path) const {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ValidationError("cannot open output file '" + path + "'");
    out << to_csv();
}

std::uint64_t TrajectoryLog::checksum() const { return fnv1a64(to_csv()); }

}  // namespace agentsim
