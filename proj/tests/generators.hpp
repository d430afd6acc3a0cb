#pragma once

// Seeded generators for property-style tests.

#include <cmath>
#include <random>
#include <vector>

#include "oracle/naive_metrics.hpp"
#include "pedflow/ntxy.hpp"

namespace gen {

using Rng = std::mt19937_64;

inline double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

inline int uniform_int(Rng& rng, int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); }

/// Frame intervals that are exact in binary and in short decimal text.
inline double random_theta(Rng& rng) {
    static constexpr double choices[] = {0.04, 0.1, 0.2, 0.25, 0.5, 1.0, 2.0};
    return choices[uniform_int(rng, 0, 6)];
}

/// Random walk with a drift so that omega > 0, starting at time t0.
inline pedflow::Trajectory random_trajectory(Rng& rng, pedflow::PedestrianId id, int points, double theta,
                                             double t0 = 0.0) {
    pedflow::Trajectory tr{id, {}};
    pedflow::Vec2 p{uniform(rng, -50, 50), uniform(rng, -50, 50)};
    const pedflow::Vec2 drift{uniform(rng, -1.0, 1.0), uniform(rng, 0.2, 2.0)};
    for (int i = 0; i < points; ++i) {
        tr.points.push_back({t0 + theta * i, p});
        p += drift + pedflow::Vec2{uniform(rng, -0.8, 0.8), uniform(rng, -0.8, 0.8)};
    }
    return tr;
}

inline std::vector<oracle::Sample> to_samples(const pedflow::Trajectory& tr) {
    std::vector<oracle::Sample> s;
    for (const auto& p : tr.points) s.push_back({p.time, p.position.x, p.position.y});
    return s;
}

/// Value with at most 6 fractional digits, so that it survives the text format.
inline double decimal6(Rng& rng, double lo, double hi) {
    return std::round(uniform(rng, lo, hi) * 1e6) / 1e6;
}

/// Valid dataset whose coordinates are representable in the NTXY text format.
/// Trajectory 1 always has at least two points so the frame interval is recoverable.
inline pedflow::NtxyDataset random_dataset(Rng& rng) {
    pedflow::NtxyDataset ds;
    ds.frame_interval = random_theta(rng);
    const int pedestrians = uniform_int(rng, 1, 8);
    for (int k = 1; k <= pedestrians; ++k) {
        const auto id = static_cast<pedflow::PedestrianId>(k * uniform_int(rng, 1, 3) + k);
        if (ds.trajectories.count(id)) continue;
        const int n = uniform_int(rng, ds.trajectories.empty() ? 2 : 1, 20);
        const int start_frame = uniform_int(rng, 0, 200);
        pedflow::Trajectory tr{id, {}};
        for (int i = 0; i < n; ++i) {
            const double t = static_cast<double>(start_frame + i) * ds.frame_interval;
            tr.points.push_back({std::round(t * 1e9) / 1e9, {decimal6(rng, -500, 500), decimal6(rng, -500, 500)}});
        }
        ds.trajectories.emplace(id, std::move(tr));
    }
    return ds;
}

}  // namespace gen
