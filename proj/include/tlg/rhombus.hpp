#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <vector>

#include "tlg/rng.hpp"
#include "tlg/she.hpp"  // NoiseConvention

namespace tlg {

// ---------------------------------------------------------------------------
// The (alpha, n)-rhombus grid and the natural two-sided Brownian motion on
// it.  Lattice vertices sit at t_j = j n^{-1/2-alpha}, x_k = k/n with
// j == k (mod 2); one rhombus has a vertex at the origin.

struct RhombusGrid {
    int n = 64;
    double alpha = 0.0;
    double t_window = 1.0;  // diagnostics window [-T, T] x [-X, X]
    double x_window = 1.0;

    double dt() const { return std::pow(static_cast<double>(n), -0.5 - alpha); }
    double dx() const { return 1.0 / static_cast<double>(n); }
    /// Bridge-midpoint noise variance (t_{j+2} - t_j)/4 = dt/2 in the
    /// derived convention; the sqrt2 variant inflates it by sqrt(2).
    double noise_variance(NoiseConvention conv) const {
        return conv == NoiseConvention::derived ? 0.5 * dt() : dt() / std::sqrt(2.0);
    }
};

struct GridField {
    RhombusGrid grid;
    int j_max = 0;  // rows -j_max..j_max
    int k_max = 0;  // cols -k_max..k_max
    std::vector<double> values;
    std::vector<int> row_limit;  // per column |j| <= row_limit is filled

    double at(int j, int k) const {
        return values[static_cast<std::size_t>(j + j_max) * (2 * k_max + 1) + (k + k_max)];
    }
    double& cell(int j, int k) {
        return values[static_cast<std::size_t>(j + j_max) * (2 * k_max + 1) + (k + k_max)];
    }
    bool on_lattice(int j, int k) const { return ((j - k) % 2) == 0; }
    bool filled(int j, int k) const {
        return std::abs(k) <= k_max && std::abs(j) <= row_limit[static_cast<std::size_t>(k + k_max)] &&
               on_lattice(j, k);
    }

    // Refined in-rhombus bridge values, keyed by the rhombus base (j, k):
    // the bridge over [t_j, t_{j+2}] pinned to zero at both ends, sampled at
    // interior points i/(2r) of the span (midpoint included).
    int refine_points = 0;
    std::map<std::pair<int, int>, std::vector<double>> bridge_values;
};

/**
 * Steps 0-2 of the construction: a two-sided Brownian motion runs along the
 * spine (the time-path zigzagging through columns 0 and 1), and every other
 * vertex is filled by the midpoint recursion
 *   X(t_{j+1}, x_{k+1}) = (X(t_j, x_k) + X(t_{j+2}, x_k))/2 + E,
 * with E a bridge midpoint of variance dt/2.  Vertices on the row t = 0 are
 * pinned to the spine value at time zero (zero).  Positive- and
 * negative-time noises come from independent streams.
 */
inline GridField sample_grid_nbm(const RhombusGrid& grid, std::uint64_t seed,
                                 NoiseConvention conv = NoiseConvention::derived,
                                 int refine_points = 0, bool retain_refinement_in_window = true) {
    GridField f;
    f.grid = grid;
    f.refine_points = refine_points;
    f.k_max = static_cast<int>(std::ceil(grid.x_window / grid.dx())) + 2;
    const int j_window = static_cast<int>(std::ceil(grid.t_window / grid.dt())) + 2;
    f.j_max = j_window + f.k_max;
    f.values.assign(static_cast<std::size_t>(2 * f.j_max + 1) * (2 * f.k_max + 1), 0.0);
    f.row_limit.assign(static_cast<std::size_t>(2 * f.k_max + 1), 0);

    const double sd_spine = std::sqrt(grid.dt());
    const double sd_noise = std::sqrt(grid.noise_variance(conv));

    // Step 0: the spine through columns {0, 1}: vertex (j, j mod 2) carries
    // B(t_j), B a two-sided Brownian motion with independent halves.
    std::vector<double> spine(static_cast<std::size_t>(2 * f.j_max + 1), 0.0);
    auto spine_at = [&](int j) -> double& { return spine[static_cast<std::size_t>(j + f.j_max)]; };
    {
        Rng pos = derive_stream(seed, "nbm-spine-pos");
        Rng neg = derive_stream(seed, "nbm-spine-neg");
        spine_at(0) = 0.0;
        for (int j = 1; j <= f.j_max; ++j) spine_at(j) = spine_at(j - 1) + sd_spine * pos.normal();
        for (int j = -1; j >= -f.j_max; --j) spine_at(j) = spine_at(j + 1) + sd_spine * neg.normal();
    }
    for (int j = -f.j_max; j <= f.j_max; ++j) {
        const int k = ((j % 2) + 2) % 2;  // column 0 on even rows, 1 on odd
        f.cell(j, k) = spine_at(j);
    }
    f.row_limit[static_cast<std::size_t>(0 + f.k_max)] = f.j_max;
    f.row_limit[static_cast<std::size_t>(1 + f.k_max)] = f.j_max;

    auto refine_span = [&](int j_base, int k_base, double midpoint, Rng& rng) {
        if (refine_points <= 0) return;
        if (retain_refinement_in_window &&
            (std::abs(j_base) > j_window || std::abs(k_base) > f.k_max))
            return;
        // Bridge pinned to 0 at t_jbase and t_{jbase+2} with the given
        // midpoint value; each half is a conditional Brownian bridge.
        const int r = refine_points;
        std::vector<double> vals;
        vals.reserve(static_cast<std::size_t>(2 * r - 1));
        const double half = grid.dt();
        for (int half_idx = 0; half_idx < 2; ++half_idx) {
            const double v0 = (half_idx == 0) ? 0.0 : midpoint;
            const double v1 = (half_idx == 0) ? midpoint : 0.0;
            for (int i = 1; i < r; ++i) {
                const double u = static_cast<double>(i) / r;
                const double mean = (1.0 - u) * v0 + u * v1;
                const double var = u * (1.0 - u) * half;
                vals.push_back(mean + std::sqrt(var) * rng.normal());
            }
            if (half_idx == 0) vals.push_back(midpoint);
        }
        f.bridge_values[{j_base, k_base}] = std::move(vals);
    };

    // Steps 1-2: fill columns outward.  Filling is column-sequential and
    // row-ordered, so the draw sequence is reproducible for a fixed seed.
    auto fill_from = [&](int parent_col, int child_col, Rng& rng_pos, Rng& rng_neg) {
        const int parent_limit = f.row_limit[static_cast<std::size_t>(parent_col + f.k_max)];
        const int child_limit = parent_limit - 1;
        for (int j = -parent_limit; j + 2 <= parent_limit; ++j) {
            if (!f.on_lattice(j, parent_col)) continue;
            const int jc = j + 1;
            double midpoint_noise = 0.0;
            if (jc == 0) {
                f.cell(jc, child_col) = 0.0;  // row t = 0 pinned to the spine value at 0
            } else {
                Rng& rng = jc > 0 ? rng_pos : rng_neg;
                midpoint_noise = sd_noise * rng.normal();
                f.cell(jc, child_col) =
                    0.5 * (f.at(j, parent_col) + f.at(j + 2, parent_col)) + midpoint_noise;
            }
            if (jc != 0) {
                Rng& rng = jc > 0 ? rng_pos : rng_neg;
                refine_span(j, parent_col, midpoint_noise, rng);
            }
        }
        f.row_limit[static_cast<std::size_t>(child_col + f.k_max)] = child_limit;
    };

    {
        Rng rp = derive_stream(seed, "nbm-right-pos");
        Rng rn = derive_stream(seed, "nbm-right-neg");
        for (int k = 1; k < f.k_max; ++k) fill_from(k, k + 1, rp, rn);
    }
    {
        Rng lp = derive_stream(seed, "nbm-left-pos");
        Rng ln = derive_stream(seed, "nbm-left-neg");
        for (int k = 0; k > -f.k_max; --k) fill_from(k, k - 1, lp, ln);
    }
    return f;
}

// ---------------------------------------------------------------------------
// Interpolated evaluators: linear along the rhombus sides, zero on the
// x-axis, then linear in t between the nearest defined points at the same x.
// The plain evaluator interpolates vertex values only; with
// `use_refinement` it also adds the retained in-rhombus bridge values
// (snapped to the refinement grid), which is the Y process whose distance
// to the vertex-only version vanishes as the mesh refines.

class RhombusInterpolator {
public:
    explicit RhombusInterpolator(const GridField& f, bool use_refinement = false)
        : f_(f), refine_(use_refinement && f.refine_points > 0) {}

    double operator()(double t, double x) const {
        const double a = t / f_.grid.dt();  // row coordinate
        const double b = x / f_.grid.dx();  // column coordinate
        if (std::fabs(b) > f_.k_max - 2 ||
            std::fabs(a) + (std::fabs(b)) > f_.j_max - 2)
            throw std::runtime_error("rhombus interpolation outside the window");
        if (t == 0.0) return 0.0;
        const int k = static_cast<int>(std::floor(b));
        const double xi = b - k;
        if (xi < 1e-12 && f_.on_lattice(static_cast<int>(std::floor(a)), k)) {
            // Fall through to the generic band logic; exact lattice hits are
            // handled by the crossing at row floor(a) below.
        }
        struct Crossing {
            double row;
            double value;
        };
        std::vector<Crossing> crossings;
        crossings.push_back({0.0, 0.0});  // x-axis pinned to zero
        const long center = static_cast<long>(std::floor(a));
        for (long j = center - 3; j <= center + 3; ++j) {
            // Ascending side (j,k)-(j+1,k+1): at column offset xi it sits at
            // row j + xi.
            if (((j - k) % 2 + 2) % 2 == 0 && f_.filled(static_cast<int>(j), k) &&
                f_.filled(static_cast<int>(j) + 1, k + 1)) {
                double value = (1.0 - xi) * f_.at(static_cast<int>(j), k) +
                               xi * f_.at(static_cast<int>(j) + 1, k + 1);
                if (refine_) value += side_correction(static_cast<int>(j), k, true, xi);
                crossings.push_back({static_cast<double>(j) + xi, value});
            }
            // Descending side (j+1,k)-(j,k+1): row j + 1 - xi.
            if (((j + 1 - k) % 2 + 2) % 2 == 0 && f_.filled(static_cast<int>(j) + 1, k) &&
                f_.filled(static_cast<int>(j), k + 1)) {
                double value = (1.0 - xi) * f_.at(static_cast<int>(j) + 1, k) +
                               xi * f_.at(static_cast<int>(j), k + 1);
                if (refine_) value += side_correction(static_cast<int>(j), k, false, xi);
                crossings.push_back({static_cast<double>(j) + 1.0 - xi, value});
            }
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& u, const Crossing& v) { return u.row < v.row; });
        const Crossing* lo = nullptr;
        const Crossing* hi = nullptr;
        for (const auto& c : crossings) {
            if (c.row <= a + 1e-12) lo = &c;
            if (c.row >= a - 1e-12) {
                hi = &c;
                break;
            }
        }
        if (!lo || !hi) throw std::runtime_error("rhombus interpolation: bracketing failed");
        if (hi->row - lo->row < 1e-12) return lo->value;
        const double w = (a - lo->row) / (hi->row - lo->row);
        return (1.0 - w) * lo->value + w * hi->value;
    }

private:
    // Bridge correction on a side: retained bridge value minus the chord
    // through the midpoint noise, snapped to the refinement grid.  Sides of
    // the spine and of the pinned t = 0 row carry no record and stay linear.
    double side_correction(int j, int kc, bool ascending, double xi) const {
        int base_j, base_k;
        bool half0;
        double u;
        if (ascending) {
            u = xi;
            if (kc >= 1) {
                base_j = j;
                base_k = kc;
                half0 = true;
            } else if (kc <= -1) {
                base_j = j - 1;
                base_k = kc + 1;
                half0 = false;
            } else {
                return 0.0;
            }
        } else {
            u = 1.0 - xi;
            if (kc >= 1) {
                base_j = j - 1;
                base_k = kc;
                half0 = false;
            } else if (kc + 1 <= 0) {
                base_j = j;
                base_k = kc + 1;
                half0 = true;
            } else {
                return 0.0;
            }
        }
        auto it = f_.bridge_values.find({base_j, base_k});
        if (it == f_.bridge_values.end()) return 0.0;
        const auto& vals = it->second;
        const int r = f_.refine_points;
        const double mid = vals[static_cast<std::size_t>(r - 1)];
        int i = static_cast<int>(std::lround(u * r));
        i = std::max(0, std::min(r, i));
        double bridge;
        if (half0)
            bridge = (i == 0) ? 0.0 : vals[static_cast<std::size_t>(i - 1)];
        else
            bridge = (i == r) ? 0.0 : (i == 0 ? mid : vals[static_cast<std::size_t>(r - 1 + i)]);
        const double alpha =
            half0 ? static_cast<double>(i) / r : 1.0 - static_cast<double>(i) / r;
        return bridge - alpha * mid;
    }

    const GridField& f_;
    bool refine_;
};

// ---------------------------------------------------------------------------
// Diagnostics helpers.

/// Residuals X(t_{j+1},x_{k+1}) - (X(t_j,x_k)+X(t_{j+2},x_k))/2 collected
/// over every filled rhombus away from the pinned row; i.i.d. with variance
/// dt/2 by construction.
inline std::vector<double> recursion_residuals(const GridField& f) {
    std::vector<double> out;
    // Right-side children come from column k into k+1 (k >= 1); left-side
    // children from column k into k-1 (k <= 0).
    auto collect = [&](int parent_col, int child_col) {
        const int limit = f.row_limit[static_cast<std::size_t>(child_col + f.k_max)];
        for (int jc = -limit; jc <= limit; ++jc) {
            if (jc == 0 || !f.on_lattice(jc, child_col)) continue;
            if (!f.filled(jc - 1, parent_col) || !f.filled(jc + 1, parent_col)) continue;
            out.push_back(f.at(jc, child_col) -
                          0.5 * (f.at(jc - 1, parent_col) + f.at(jc + 1, parent_col)));
        }
    };
    for (int k = 1; k < f.k_max; ++k) collect(k, k + 1);
    for (int k = 0; k > -f.k_max; --k) collect(k, k - 1);
    return out;
}

/// Z_n(K)^2 ingredient: the largest |bridge| over refined in-rhombus points
/// for rhombi whose base vertex lies in [0,a] x [0,b] (t, x).
inline double zn_statistic(const GridField& f, double a, double b) {
    if (f.refine_points <= 0) throw std::runtime_error("zn_statistic: field lacks refinement");
    double zmax = 0.0;
    for (const auto& [base, vals] : f.bridge_values) {
        const double t = base.first * f.grid.dt();
        const double x = base.second * f.grid.dx();
        if (t < 0 || t > a || x < 0 || x > b) continue;
        for (double v : vals) zmax = std::max(zmax, std::fabs(v));
    }
    return zmax;
}

/// Second-moment bound for the bridge network Z_n(K), K = [0,a] x [0,b]:
/// at most a n^{1/2+alpha} b n bridges, each spanning 2 n^{-1/2-alpha} in
/// time.  From the exact per-bridge tail exp(-2 beta^2) the layer-cake
/// formula gives E max^2 <= ln(N+1) for N standard bridges, hence
///   E[Z_n(K)^2] <= 2 n^{-1/2-alpha} ln(a b n^{3/2+alpha} + 1).
/// A quarter-sized constant (1/2 in place of 2) circulates for this bound;
/// it drops the 2 of E X^2 = int 2 beta P(X > beta), and the statistic
/// empirically sits at about twice that version, so the derived constant is
/// the binding one (pass half_constant to inspect the smaller variant).
inline double zn_second_moment_bound(const RhombusGrid& grid, double a, double b,
                                     bool half_constant = false) {
    const double n = static_cast<double>(grid.n);
    const double log_term = std::log(a * b * std::pow(n, 1.5 + grid.alpha) + 1.0);
    const double scale = std::pow(n, -0.5 - grid.alpha);
    return (half_constant ? 0.5 : 2.0) * scale * log_term;
}

// ---------------------------------------------------------------------------
// Packaged limit diagnostics: per mesh size, Monte Carlo variances at probe
// points (target |t| when alpha = 0), the variance of spatial differences
// between consecutive probes (shrinking target for alpha > 0), the
// recursion-residual variance against dt/2, and the bridge-network second
// moment against its bound.

struct NbmDiagnostics {
    struct PerN {
        int n = 0;
        std::vector<double> probe_variance;
        std::vector<double> probe_stderr;
        std::vector<double> probe_target;  // |t| (the alpha = 0 limit)
        double spatial_diff_variance = 0.0;
        double residual_variance = 0.0;
        double residual_target = 0.0;
        double residual_stderr = 0.0;
        double zn_sq = 0.0;
        double zn_bound = 0.0;
    };
    double alpha = 0.0;
    std::vector<PerN> runs;
};

inline NbmDiagnostics limit_diagnostics(double alpha, const std::vector<int>& n_list,
                                        double t_window, double x_window,
                                        const std::vector<std::pair<double, double>>& probes,
                                        std::size_t reps, std::uint64_t seed,
                                        int zn_refine = 8) {
    NbmDiagnostics out;
    out.alpha = alpha;
    for (int n : n_list) {
        RhombusGrid grid{n, alpha, t_window, x_window};
        NbmDiagnostics::PerN run;
        run.n = n;
        std::vector<double> sums(probes.size(), 0.0), sumsq(probes.size(), 0.0);
        double diff_s = 0.0, diff_ss = 0.0;
        double res_s = 0.0, res_ss = 0.0;
        std::size_t res_m = 0;
        double zn_acc = 0.0;
        for (std::size_t r = 0; r < reps; ++r) {
            auto field =
                sample_grid_nbm(grid, seed + 1000003ULL * static_cast<std::uint64_t>(n) + r,
                                NoiseConvention::derived, zn_refine);
            RhombusInterpolator y(field);
            double prev_probe = 0.0;
            for (std::size_t i = 0; i < probes.size(); ++i) {
                const double v = y(probes[i].first, probes[i].second);
                sums[i] += v;
                sumsq[i] += v * v;
                if (i > 0) {
                    const double d = v - prev_probe;
                    diff_s += d;
                    diff_ss += d * d;
                }
                prev_probe = v;
            }
            if (r == 0) {
                auto res = recursion_residuals(field);
                for (double x : res) {
                    res_s += x;
                    res_ss += x * x;
                }
                res_m = res.size();
            }
            if (zn_refine > 0) {
                const double z = zn_statistic(field, t_window * 0.8, x_window * 0.8);
                zn_acc += z * z;
            }
        }
        for (std::size_t i = 0; i < probes.size(); ++i) {
            const double mean = sums[i] / static_cast<double>(reps);
            const double var = sumsq[i] / static_cast<double>(reps) - mean * mean;
            run.probe_variance.push_back(var);
            run.probe_stderr.push_back(var * std::sqrt(2.0 / (static_cast<double>(reps) - 1.0)));
            run.probe_target.push_back(std::fabs(probes[i].first));
        }
        if (probes.size() > 1) {
            const std::size_t m = reps * (probes.size() - 1);
            const double mean = diff_s / static_cast<double>(m);
            run.spatial_diff_variance = diff_ss / static_cast<double>(m) - mean * mean;
        }
        if (res_m > 1) {
            const double mean = res_s / static_cast<double>(res_m);
            run.residual_variance = res_ss / static_cast<double>(res_m) - mean * mean;
            run.residual_target = 0.5 * grid.dt();
            run.residual_stderr =
                run.residual_target * std::sqrt(2.0 / (static_cast<double>(res_m) - 1.0));
        }
        if (zn_refine > 0) {
            run.zn_sq = zn_acc / static_cast<double>(reps);
            run.zn_bound = zn_second_moment_bound(grid, t_window * 0.8, x_window * 0.8);
        }
        out.runs.push_back(run);
    }
    return out;
}

/// Sup over the retained window of |Ytilde - Y|: on each rhombus side the
/// difference equals the half-bridge noise, i.e. bridge value minus the
/// chord through the midpoint.
inline double sup_interp_gap(const GridField& f) {
    if (f.refine_points <= 0) throw std::runtime_error("sup_interp_gap: field lacks refinement");
    double gap = 0.0;
    const int r = f.refine_points;
    for (const auto& [base, vals] : f.bridge_values) {
        const double mid = vals[static_cast<std::size_t>(r - 1)];
        for (int half = 0; half < 2; ++half) {
            for (int i = 1; i < r; ++i) {
                const double u = static_cast<double>(i) / r;
                const double chord = (half == 0) ? u * mid : (1.0 - u) * mid;
                const std::size_t idx = static_cast<std::size_t>(half == 0 ? i - 1 : r - 1 + i);
                gap = std::max(gap, std::fabs(vals[idx] - chord));
            }
        }
    }
    return gap;
}

}  // namespace tlg
