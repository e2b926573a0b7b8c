// boundary.hpp: Extendibility boundary of the isotropic family: grid sweeps
// and bisection.

#pragma once

#include "symext/constructions.hpp"
#include "symext/extend.hpp"

#include <future>
#include <optional>
#include <vector>

namespace symext {

struct SweepRow {
    double F = 0.0;
    Verdict verdict = Verdict::Inconclusive;
    double psd_residual = 0.0;
    double swap_residual = 0.0;
    double pt_residual = 0.0;
    int iterations = 0;
};

struct SweepResult {
    std::vector<SweepRow> rows;             // ordered by F
    std::optional<double> boundary;         // midpoint of last Feasible / first InfeasibleNumerical
};

struct SweepOptions {
    double tol = 1e-7;
    int max_iter = 20000;
    bool parallel = false;
};

/// Midpoint between the largest Feasible F and the smallest InfeasibleNumerical
/// F above it. Inconclusive rows do not move either end.
inline std::optional<double> boundary_estimate(const std::vector<SweepRow>& rows) {
    std::optional<double> last_feasible;
    for (const auto& r : rows)
        if (r.verdict == Verdict::Feasible) last_feasible = r.F;
    if (!last_feasible) return std::nullopt;
    for (const auto& r : rows)
        if (r.verdict == Verdict::InfeasibleNumerical && r.F > *last_feasible) return 0.5 * (*last_feasible + r.F);
    return std::nullopt;
}

inline SweepResult sweep_isotropic(Index d, double f_min, double f_max_grid, int steps, const SweepOptions& opt = {}) {
    detail::require_local_dim(d, 2, 4, "sweep_isotropic");
    if (steps < 1) throw std::invalid_argument("sweep_isotropic: steps must be at least 1");
    if (!(f_min >= 0.0 && f_max_grid <= 1.0 && f_min <= f_max_grid))
        throw std::invalid_argument("sweep_isotropic: need 0 <= f-min <= f-max <= 1");

    std::vector<double> grid(static_cast<std::size_t>(steps));
    for (int i = 0; i < steps; ++i)
        grid[static_cast<std::size_t>(i)] = steps == 1 ? f_min : f_min + (f_max_grid - f_min) * i / (steps - 1);

    auto run_point = [&](double f) {
        const auto cert = solve_extension({isotropic(d, f), opt.tol, opt.max_iter});
        return SweepRow{f, cert.verdict, cert.psd_residual, cert.swap_residual, cert.pt_residual, cert.iterations};
    };

    SweepResult out;
    out.rows.reserve(grid.size());
    if (opt.parallel) {
        std::vector<std::future<SweepRow>> jobs;
        jobs.reserve(grid.size());
        for (double f : grid) jobs.push_back(std::async(std::launch::async, run_point, f));
        for (auto& j : jobs) out.rows.push_back(j.get());
    } else {
        for (double f : grid) out.rows.push_back(run_point(f));
    }
    if (steps > 1) out.boundary = boundary_estimate(out.rows);
    return out;
}

/// Bisection on F over isotropic(d, F) with solve_extension as the membership
/// oracle; anything other than Feasible counts as outside.
inline double max_extendible_fidelity(Index d, double tol = 1e-7, double resolution = 1e-3, int max_iter = 20000) {
    detail::require_local_dim(d, 2, 5, "max_extendible_fidelity");
    double lo = 1.0 / static_cast<double>(d); // separable below this
    double hi = 1.0;
    while (hi - lo > resolution) {
        const double mid = 0.5 * (lo + hi);
        if (solve_extension({isotropic(d, mid), tol, max_iter}).verdict == Verdict::Feasible)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace symext
