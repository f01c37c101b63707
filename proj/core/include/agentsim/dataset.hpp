#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "agentsim/vec2.hpp"

namespace agentsim {

enum class AgentKind : std::uint8_t { pedestrian, car, bicycle, tricycle, other };
inline constexpr int kKindCount = 5;

std::string_view to_string(AgentKind kind);
AgentKind parse_kind(std::string_view text);  // throws ParseError on unknown names

struct TrajectorySample {
    int frame = 0;
    Vec2 position;
};

// One recorded agent: a time series of positions at (possibly gapped)
// integer frame indices.
struct RawTrajectory {
    int agent_id = 0;
    AgentKind kind = AgentKind::pedestrian;
    std::vector<TrajectorySample> samples;
};

// One dataset sample: position, finite-difference velocity and the control
// direction reconstructed from the recorded trajectory.
struct EstimatedState {
    Vec2 position;
    Vec2 velocity;
    Vec2 control_direction;  // unit or zero
    AgentKind kind = AgentKind::pedestrian;
    int source_agent_id = 0;
    int source_frame = 0;
};

// Control-direction estimation policy. fixed: the agent only ever moves one
// way in the recorded scenario, so a single direction is supplied up front.
// displacement: recomputed from the delta-frame displacement window.
struct DirectionMode {
    enum class Kind { fixed, displacement } kind = Kind::displacement;
    Vec2 fixed_direction;  // used by Kind::fixed

    static DirectionMode fixed(Vec2 d) { return {Kind::fixed, d}; }
    static DirectionMode displacement() { return {Kind::displacement, {}}; }
};

// Parses CSV with header `agent_id,frame,x,y[,kind]`. Rows are grouped by
// agent id (ascending) and sorted by frame. A missing kind column defaults
// every row to pedestrian.
std::vector<RawTrajectory> load_trajectories(std::istream& source);
std::vector<RawTrajectory> load_trajectories_file(const std::string& path);

// Finite-difference state estimation. Consecutive samples whose frame
// indices differ by more than one are never differenced across. `delta` is
// the control-direction window in frames.
std::vector<EstimatedState> estimate_states(const RawTrajectory& traj, double dt, int delta,
                                            const DirectionMode& mode);

// Dataset states bucketed by kind and speed-magnitude group
// l = floor(|v*| / bin_width), half-open bins. Immutable once built; the
// solver shares one instance across all workers.
class GroupedDataset {
public:
    GroupedDataset() = default;
    GroupedDataset(std::vector<EstimatedState> states, double bin_width);

    const std::vector<EstimatedState>& states() const { return states_; }
    double bin_width() const { return bin_width_; }

    bool has_kind(AgentKind kind) const;
    std::size_t kind_count(AgentKind kind) const;
    int group_of_speed(double speed) const;
    // smallest and largest populated group index of the kind
    std::pair<int, int> group_bounds(AgentKind kind) const;
    // group index -> number of states, for histograms
    std::vector<std::pair<int, std::size_t>> group_sizes(AgentKind kind) const;

    // Indices of every state of `kind` whose group lies in [l-z, l+z],
    // ascending group then ascending state index. Throws ValidationError
    // when the kind is absent.
    std::span<const std::uint32_t> candidate_indices(AgentKind kind, int l, int z) const;
    // Entire kind, in the same canonical order as candidate_indices.
    std::span<const std::uint32_t> kind_indices(AgentKind kind) const;

    // Convenience copy of the selected states, for tests and tooling.
    std::vector<EstimatedState> candidate_states(AgentKind kind, int l, int z) const;

    // Upper bound on any velocity the adaptation step can produce from this
    // dataset: max over states of |v*| * (1 + |unit(v*) - cd*|).
    double max_adapted_speed() const;

private:
    struct KindGroups {
        std::vector<int> group_ids;           // ascending
        std::vector<std::uint32_t> offsets;   // size group_ids.size()+1, into flat
        std::vector<std::uint32_t> flat;      // state indices, grouped
    };

    std::vector<EstimatedState> states_;
    double bin_width_ = 0.5;
    std::array<KindGroups, kKindCount> kinds_;
};

GroupedDataset group_by_speed(std::vector<EstimatedState> states, double bin_width);

// Deterministic synthetic dataset, mainly a fixture generator for tests and
// the benchmark harness. Speeds cover [speed_min, speed_max] stratified per
// kind; control directions coincide with the velocity directions.
struct SynthSpec {
    std::vector<AgentKind> kinds = {AgentKind::pedestrian};
    double speed_min = 0.0;
    double speed_max = 2.0;
    int count_per_kind = 100;
    std::uint64_t seed = 0;
};
std::vector<EstimatedState> synthesize_dataset(const SynthSpec& spec);

}  // namespace agentsim
