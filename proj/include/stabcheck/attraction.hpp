#pragma once

// Numerical sanity check that trajectories of a sampled field approach a
// target set. Advisory only: a finite-horizon integration proves nothing
// about asymptotic stability, and no verdict depends on it.

#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "stabcheck/error.hpp"

namespace stabcheck {

template <std::size_t N>
using State = std::array<double, N>;

/// Returns the field at a point, or nullopt where the chart does not cover it.
template <std::size_t N>
using Sampler = std::function<std::optional<State<N>>(const State<N>&)>;

template <std::size_t N>
struct TargetSet {
    std::function<double(const State<N>&)> distance;  ///< distance to A
    double region_radius = 1.0;                        ///< trajectories farther than this have left U
};

enum class Attraction { Converged, Diverged, Inconclusive };

inline const char* to_string(Attraction a) {
    switch (a) {
        case Attraction::Converged: return "converged";
        case Attraction::Diverged: return "diverged";
        default: return "inconclusive";
    }
}

template <std::size_t N>
struct TrajectoryResult {
    State<N> initial{};
    State<N> final{};
    double initial_distance = 0.0;
    double final_distance = 0.0;
    double time = 0.0;  ///< integration time actually reached
    Attraction verdict = Attraction::Inconclusive;
};

template <std::size_t N>
struct AttractionReport {
    std::vector<TrajectoryResult<N>> trajectories;
    double horizon = 0.0;
    double step = 0.0;
    Attraction verdict = Attraction::Inconclusive;
};

/// Converged: final distance < 1e-3 x initial distance. Diverged: the
/// distance exceeded the region radius at some step.
template <std::size_t N>
AttractionReport<N> verify_attraction(const Sampler<N>& field, const TargetSet<N>& target,
                                      const std::vector<State<N>>& starts, double horizon, double step) {
    if (!(step > 0) || !(horizon > 0)) throw PreconditionError("verify_attraction: horizon and step must be positive");

    auto eval = [&](const State<N>& s) {
        auto v = field(s);
        if (!v) throw ChartError("verify_attraction: field undefined along the trajectory; it left the chart");
        return *v;
    };
    auto axpy = [](const State<N>& x, double h, const State<N>& k) {
        State<N> r;
        for (std::size_t i = 0; i < N; ++i) r[i] = x[i] + h * k[i];
        return r;
    };

    AttractionReport<N> report;
    report.horizon = horizon;
    report.step = step;
    const auto steps = static_cast<std::size_t>(std::llround(horizon / step));

    bool all_converged = !starts.empty();
    bool any_diverged = false;
    for (const auto& start : starts) {
        TrajectoryResult<N> t;
        t.initial = start;
        t.initial_distance = target.distance(start);
        State<N> x = start;
        for (std::size_t n = 0; n < steps; ++n) {
            const State<N> k1 = eval(x);
            const State<N> k2 = eval(axpy(x, step / 2, k1));
            const State<N> k3 = eval(axpy(x, step / 2, k2));
            const State<N> k4 = eval(axpy(x, step, k3));
            for (std::size_t i = 0; i < N; ++i) x[i] += step / 6.0 * (k1[i] + 2 * k2[i] + 2 * k3[i] + k4[i]);
            t.time = static_cast<double>(n + 1) * step;
            if (target.distance(x) > target.region_radius) {
                t.verdict = Attraction::Diverged;
                break;
            }
        }
        t.final = x;
        t.final_distance = target.distance(x);
        if (t.verdict != Attraction::Diverged) {
            const bool shrunk = t.final_distance < 1e-3 * t.initial_distance ||
                                (t.initial_distance == 0.0 && t.final_distance == 0.0);
            t.verdict = shrunk ? Attraction::Converged : Attraction::Inconclusive;
        }
        all_converged = all_converged && t.verdict == Attraction::Converged;
        any_diverged = any_diverged || t.verdict == Attraction::Diverged;
        report.trajectories.push_back(t);
    }
    report.verdict = any_diverged ? Attraction::Diverged
                                  : (all_converged ? Attraction::Converged : Attraction::Inconclusive);
    return report;
}

}  // namespace stabcheck
