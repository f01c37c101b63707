#include "agentsim/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <map>
#include <random>
#include <sstream>

#include "agentsim/error.hpp"

namespace agentsim {

namespace {

constexpr std::array<std::string_view, kKindCount> kKindNames = {
    "pedestrian", "car", "bicycle", "tricycle", "other"};

std::string_view trim(std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t' || s.front() == '\r')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
}

std::vector<std::string_view> split_csv(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        if (comma == std::string_view::npos) {
            fields.push_back(trim(line.substr(start)));
            break;
        }
        fields.push_back(trim(line.substr(start, comma - start)));
        start = comma + 1;
    }
    return fields;
}

long parse_long(std::string_view field, int line_no, const char* what) {
    long value = 0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                         std::string(field) + "'");
    return value;
}

double parse_double(std::string_view field, int line_no, const char* what) {
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
    if (ec != std::errc{} || ptr != field.data() + field.size() || !std::isfinite(value))
        throw ParseError("line " + std::to_string(line_no) + ": bad " + what + " '" +
                         std::string(field) + "'");
    return value;
}

}  // namespace

std::string_view to_string(AgentKind kind) { return kKindNames[static_cast<std::size_t>(kind)]; }

AgentKind parse_kind(std::string_view text) {
    for (int k = 0; k < kKindCount; ++k)
        if (text == kKindNames[k]) return static_cast<AgentKind>(k);
    throw ParseError("unknown agent kind '" + std::string(text) + "'");
}

std::vector<RawTrajectory> load_trajectories(std::istream& source) {
    std::string line;
    if (!std::getline(source, line)) throw ValidationError("trajectory file is empty");

    const auto header = split_csv(line);
    const bool has_kind = header.size() == 5 && header[4] == "kind";
    if (!(header.size() == 4 || has_kind) || header[0] != "agent_id" || header[1] != "frame" ||
        header[2] != "x" || header[3] != "y")
        throw ParseError("line 1: expected header agent_id,frame,x,y[,kind]");

    struct Partial {
        AgentKind kind = AgentKind::pedestrian;
        bool kind_set = false;
        std::vector<TrajectorySample> samples;
    };
    std::map<int, Partial> by_agent;

    int line_no = 1;
    while (std::getline(source, line)) {
        ++line_no;
        if (trim(line).empty()) continue;
        const auto fields = split_csv(line);
        if (fields.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " +
                             std::to_string(header.size()) + " fields, got " +
                             std::to_string(fields.size()));
        const long id = parse_long(fields[0], line_no, "agent_id");
        const long frame = parse_long(fields[1], line_no, "frame");
        const double x = parse_double(fields[2], line_no, "x");
        const double y = parse_double(fields[3], line_no, "y");

        Partial& p = by_agent[static_cast<int>(id)];
        if (has_kind) {
            AgentKind kind;
            try {
                kind = parse_kind(fields[4]);
            } catch (const ParseError&) {
                throw ParseError("line " + std::to_string(line_no) + ": unknown kind '" +
                                 std::string(fields[4]) + "'");
            }
            if (p.kind_set && kind != p.kind)
                throw ValidationError("line " + std::to_string(line_no) + ": agent " +
                                      std::to_string(id) + " changes kind mid-file");
            p.kind = kind;
            p.kind_set = true;
        }
        p.samples.push_back({static_cast<int>(frame), {x, y}});
    }

    std::vector<RawTrajectory> result;
    result.reserve(by_agent.size());
    for (auto& [id, partial] : by_agent) {
        std::stable_sort(partial.samples.begin(), partial.samples.end(),
                         [](const TrajectorySample& a, const TrajectorySample& b) {
                             return a.frame < b.frame;
                         });
        for (std::size_t i = 1; i < partial.samples.size(); ++i)
            if (partial.samples[i].frame == partial.samples[i - 1].frame)
                throw ValidationError("agent " + std::to_string(id) + ": duplicate frame " +
                                      std::to_string(partial.samples[i].frame));
        result.push_back({id, partial.kind, std::move(partial.samples)});
    }
    return result;
}

std::vector<RawTrajectory> load_trajectories_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open trajectory file '" + path + "'");
    try {
        return load_trajectories(in);
    } catch (const Error& e) {
        throw ParseError(path + ": " + e.what());
    }
}

std::vector<EstimatedState> estimate_states(const RawTrajectory& traj, double dt, int delta,
                                            const DirectionMode& mode) {
    if (!(dt > 0.0)) throw ValidationError("estimate_states: dt must be > 0");
    if (delta < 1) throw ValidationError("estimate_states: delta must be >= 1");

    const auto& s = traj.samples;
    const std::size_t n = s.size();
    std::vector<EstimatedState> out;
    if (n < 2) return out;

    // Control direction per sample index. Displacement mode recomputes the
    // window direction every `delta` samples and holds it in between; the
    // leading samples inherit the first computable value. Stationary windows
    // carry the previous direction forward.
    std::vector<Vec2> cd(n);
    if (mode.kind == DirectionMode::Kind::fixed) {
        const Vec2 d = unit_vector(mode.fixed_direction);
        std::fill(cd.begin(), cd.end(), d);
    } else if (n < static_cast<std::size_t>(delta) + 1) {
        // Too short for a full window: fall back to last minus first.
        const Vec2 d = unit_vector(s.back().position - s.front().position);
        std::fill(cd.begin(), cd.end(), d);
    } else {
        Vec2 current{0.0, 0.0};
        bool have_first = false;
        std::size_t first_window_end = 0;
        for (std::size_t k = delta; k < n; k += delta) {
            const Vec2 disp = s[k].position - s[k - delta].position;
            if (norm(disp) >= kEps) {
                current = unit_vector(disp);
            }  // else: stationary window, keep previous (zero if none)
            if (!have_first) {
                have_first = true;
                first_window_end = k;
                for (std::size_t j = 0; j <= k; ++j) cd[j] = current;
            }
            const std::size_t until = std::min(k + static_cast<std::size_t>(delta), n - 1);
            for (std::size_t j = std::max(k, first_window_end); j <= until; ++j) cd[j] = current;
        }
    }

    out.reserve(n - 1);
    for (std::size_t k = 1; k < n; ++k) {
        if (s[k].frame - s[k - 1].frame != 1) continue;  // never difference across a gap
        EstimatedState st;
        st.position = s[k].position;
        st.velocity = (s[k].position - s[k - 1].position) / dt;
        st.control_direction = cd[k];
        st.kind = traj.kind;
        st.source_agent_id = traj.agent_id;
        st.source_frame = s[k].frame;
        out.push_back(st);
    }
    return out;
}

GroupedDataset::GroupedDataset(std::vector<EstimatedState> states, double bin_width)
    : states_(std::move(states)), bin_width_(bin_width) {
    if (!(bin_width_ > 0.0)) throw ValidationError("group_by_speed: bin_width must be > 0");
    if (states_.empty())
        throw ValidationError("group_by_speed: dataset is empty; the solver needs candidates");

    std::array<std::map<int, std::vector<std::uint32_t>>, kKindCount> buckets;
    for (std::uint32_t i = 0; i < states_.size(); ++i) {
        const auto& st = states_[i];
        const int l = group_of_speed(norm(st.velocity));
        buckets[static_cast<std::size_t>(st.kind)][l].push_back(i);
    }
    for (int k = 0; k < kKindCount; ++k) {
        KindGroups& kg = kinds_[k];
        kg.offsets.push_back(0);
        for (auto& [group, idx] : buckets[k]) {
            kg.group_ids.push_back(group);
            kg.flat.insert(kg.flat.end(), idx.begin(), idx.end());
            kg.offsets.push_back(static_cast<std::uint32_t>(kg.flat.size()));
        }
    }
}

bool GroupedDataset::has_kind(AgentKind kind) const {
    return !kinds_[static_cast<std::size_t>(kind)].flat.empty();
}

std::size_t GroupedDataset::kind_count(AgentKind kind) const {
    return kinds_[static_cast<std::size_t>(kind)].flat.size();
}

int GroupedDataset::group_of_speed(double speed) const {
    return static_cast<int>(std::floor(speed / bin_width_));
}

std::pair<int, int> GroupedDataset::group_bounds(AgentKind kind) const {
    if (!has_kind(kind))
        throw ValidationError(std::string("dataset has no states of kind '") +
                              std::string(to_string(kind)) + "'");
    const KindGroups& kg = kinds_[static_cast<std::size_t>(kind)];
    return {kg.group_ids.front(), kg.group_ids.back()};
}

std::vector<std::pair<int, std::size_t>> GroupedDataset::group_sizes(AgentKind kind) const {
    const KindGroups& kg = kinds_[static_cast<std::size_t>(kind)];
    std::vector<std::pair<int, std::size_t>> out;
    for (std::size_t g = 0; g < kg.group_ids.size(); ++g)
        out.emplace_back(kg.group_ids[g], kg.offsets[g + 1] - kg.offsets[g]);
    return out;
}

std::span<const std::uint32_t> GroupedDataset::candidate_indices(AgentKind kind, int l,
                                                                 int z) const {
    if (!has_kind(kind))
        throw ValidationError(std::string("dataset has no states of kind '") +
                              std::string(to_string(kind)) + "'");
    if (z < 0) throw ValidationError("candidate_indices: z must be >= 0");
    const KindGroups& kg = kinds_[static_cast<std::size_t>(kind)];
    const long long lo = static_cast<long long>(l) - z;
    const long long hi = static_cast<long long>(l) + z;
    const auto first = std::lower_bound(kg.group_ids.begin(), kg.group_ids.end(), lo);
    const auto last = std::upper_bound(kg.group_ids.begin(), kg.group_ids.end(), hi);
    const std::size_t a = static_cast<std::size_t>(first - kg.group_ids.begin());
    const std::size_t b = static_cast<std::size_t>(last - kg.group_ids.begin());
    return {kg.flat.data() + kg.offsets[a], kg.flat.data() + kg.offsets[b]};
}

std::span<const std::uint32_t> GroupedDataset::kind_indices(AgentKind kind) const {
    if (!has_kind(kind))
        throw ValidationError(std::string("dataset has no states of kind '") +
                              std::string(to_string(kind)) + "'");
    const KindGroups& kg = kinds_[static_cast<std::size_t>(kind)];
    return {kg.flat.data(), kg.flat.size()};
}

std::vector<EstimatedState> GroupedDataset::candidate_states(AgentKind kind, int l, int z) const {
    std::vector<EstimatedState> out;
    for (const std::uint32_t i : candidate_indices(kind, l, z)) out.push_back(states_[i]);
    return out;
}

double GroupedDataset::max_adapted_speed() const {
    double bound = 0.0;
    for (const auto& st : states_) {
        const double speed = norm(st.velocity);
        const double mismatch = norm(unit_vector(st.velocity) - st.control_direction);
        bound = std::max(bound, speed * (1.0 + mismatch));
    }
    return bound;
}

GroupedDataset group_by_speed(std::vector<EstimatedState> states, double bin_width) {
    return GroupedDataset(std::move(states), bin_width);
}

std::vector<EstimatedState> synthesize_dataset(const SynthSpec& spec) {
    if (spec.count_per_kind < 1) throw ValidationError("synthesize_dataset: count must be >= 1");
    if (spec.kinds.empty()) throw ValidationError("synthesize_dataset: no kinds requested");
    if (!(spec.speed_max > spec.speed_min) || spec.speed_min < 0.0)
        throw ValidationError("synthesize_dataset: empty speed range");

    std::mt19937_64 rng(spec.seed);
    std::uniform_real_distribution<double> u01(0.0, 1.0);
    std::vector<EstimatedState> out;
    out.reserve(spec.kinds.size() * static_cast<std::size_t>(spec.count_per_kind));
    int source_id = 0;
    for (const AgentKind kind : spec.kinds) {
        for (int i = 0; i < spec.count_per_kind; ++i) {
            // Stratified speeds guarantee the range is covered for any count.
            const double frac = (static_cast<double>(i) + u01(rng)) / spec.count_per_kind;
            const double speed = spec.speed_min + (spec.speed_max - spec.speed_min) * frac;
            const double angle = 2.0 * M_PI * u01(rng);
            const Vec2 dir{std::cos(angle), std::sin(angle)};
            EstimatedState st;
            st.position = {u01(rng) * 10.0, u01(rng) * 10.0};
            st.velocity = dir * speed;
            st.control_direction = unit_vector(st.velocity);
            st.kind = kind;
            st.source_agent_id = source_id;
            st.source_frame = i;
            out.push_back(st);
        }
        ++source_id;
    }
    return out;
}

}  // namespace agentsim
