#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <vector>

#include "tlg/rng.hpp"

namespace tlg {

// ---------------------------------------------------------------------------
// Simple random walk kernels and the modified local limit theorem.

/// P(S_k / sqrt(n) = x) for the simple random walk, exact (log-domain
/// binomial).  Zero off the parity lattice {(k + 2z)/sqrt(n)}.
inline double rw_pmf(int k, double x, int n) {
    if (k < 0) throw std::runtime_error("rw_pmf: negative step count");
    const double m_real = x * std::sqrt(static_cast<double>(n));
    const long m = std::lround(m_real);
    if (std::fabs(m_real - m) > 1e-9) return 0.0;
    if (((k + m) % 2 + 2) % 2 != 0) return 0.0;  // parity mismatch
    if (std::labs(m) > k) return 0.0;
    if (k == 0) return 1.0;
    const long up = (k + m) / 2;
    const double logp = std::lgamma(k + 1.0) - std::lgamma(up + 1.0) -
                        std::lgamma(k - up + 1.0) - k * std::log(2.0);
    return std::exp(logp);
}

/// Gaussian density rho_n^k(x) with variance k/n.
inline double rw_gauss(int k, double x, int n) {
    const double var = static_cast<double>(k) / static_cast<double>(n);
    return std::exp(-x * x / (2.0 * var)) / std::sqrt(2.0 * M_PI * var);
}

struct LltGap {
    double sup_gap = 0.0;  // sup_k sup_x |(sqrt(n)/2) p_n^k(x) - rho_n^k(x)|
    int arg_k = 0;
    double arg_x = 0.0;
    double bound = 0.0;  // C/pi * sqrt(n / beta^3) with the calibrated C
};

/**
 * Exact supremum of the local-limit gap over k in [beta, n] and lattice x
 * with |x| <= 10 sqrt(k/n).  Beyond ten standard deviations both terms are
 * below 1e-20, so the supremum cannot live there.
 */
inline LltGap llt_gap(int n, int beta, double calibrated_c = 1.0) {
    if (beta < 1 || beta > n) throw std::runtime_error("llt_gap: need 1 <= beta <= n");
    LltGap out;
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    for (int k = beta; k <= n; ++k) {
        const double sd = std::sqrt(static_cast<double>(k) / n);
        const long m_max = std::lround(std::ceil(10.0 * sd * sqrt_n));
        for (long m = -(std::min<long>(k, m_max)); m <= std::min<long>(k, m_max); ++m) {
            if (((k + m) % 2 + 2) % 2 != 0) continue;
            const double x = static_cast<double>(m) / sqrt_n;
            const double gap = std::fabs(0.5 * sqrt_n * rw_pmf(k, x, n) - rw_gauss(k, x, n));
            if (gap > out.sup_gap) {
                out.sup_gap = gap;
                out.arg_k = k;
                out.arg_x = x;
            }
        }
    }
    out.bound = calibrated_c / M_PI * std::sqrt(static_cast<double>(n) / std::pow(beta, 3.0));
    return out;
}

/// Calibrates the constant of the gap bound over small n (the theorem only
/// asserts existence of C; tests then assert stability for larger n).  The
/// scaled gap creeps toward its limit from below, so a small headroom keeps
/// the calibrated constant valid beyond the calibration range.
inline double llt_calibrate_constant(const std::vector<int>& ns, double headroom = 1.05) {
    double c = 0.0;
    for (int n : ns) {
        LltGap g = llt_gap(n, n);
        c = std::max(c, g.sup_gap * M_PI * std::sqrt(std::pow(n, 3.0) / n));
    }
    return c * headroom;
}

/// E f(S_floor(nt) / n^(1/2+alpha) + r): exact finite sum against the walk
/// pmf.  With alpha = 0 this approximates the heat semigroup applied to f.
inline double rw_heat(const std::function<double(double)>& f, int n, double t, double r,
                      double alpha = 0.0) {
    const int k = static_cast<int>(std::floor(n * t));
    const double denom = std::pow(static_cast<double>(n), 0.5 + alpha);
    if (k == 0) return f(r);
    double total = 0.0;
    for (long m = -k; m <= k; m += 2) {
        const long up = (k + m) / 2;
        const double logp = std::lgamma(k + 1.0) - std::lgamma(up + 1.0) -
                            std::lgamma(k - up + 1.0) - k * std::log(2.0);
        total += std::exp(logp) * f(static_cast<double>(m) / denom + r);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Euler scheme for the stochastic heat equation
//   dv = 1/2 v_xx dt + dW,  v(0,.) = 0, v(.,0) = 0,
// on the parity lattice t_j = j/n, x_k = k/sqrt(n).

enum class NoiseConvention {
    derived,  // Var(eta) = (n/4) * area(R_jk) = 1/(2 sqrt(n))
    sqrt2     // the derived variance times sqrt(2), kept for comparison
};

struct Field {
    int n = 0;
    int rows = 0;  // j = 0..rows
    int cols = 0;  // k = 0..cols
    double dt = 0.0;
    double dx = 0.0;
    std::vector<double> values;  // (rows+1) x (cols+1), parity cells meaningful
    std::vector<double> noise;   // eta_{jk} indexed like values (row j feeds row j+1)

    double& at(int j, int k) { return values[static_cast<std::size_t>(j) * (cols + 1) + k]; }
    double at(int j, int k) const {
        return values[static_cast<std::size_t>(j) * (cols + 1) + k];
    }
    double& eta(int j, int k) { return noise[static_cast<std::size_t>(j) * (cols + 1) + k]; }
    double eta(int j, int k) const {
        return noise[static_cast<std::size_t>(j) * (cols + 1) + k];
    }
    bool on_lattice(int j, int k) const {
        return j >= 0 && k >= 0 && j <= rows && k <= cols && ((j + k) % 2 == 0);
    }
};

/// alpha = 0 is the stochastic-heat-equation scaling; alpha > 0 weakens the
/// noise to n^{-1/2-alpha} scale (the flat-limit regime).
inline double euler_noise_variance(int n, NoiseConvention conv, double alpha = 0.0) {
    const double scale = std::pow(static_cast<double>(n), -0.5 - alpha);
    return conv == NoiseConvention::derived ? 0.5 * scale : scale / std::sqrt(2.0);
}

/**
 * Runs V^{j+1}_k = (V^j_{k+1} + V^j_{k-1})/2 + eta_jk with zero initial and
 * boundary data.  The computed width covers the full dependence cone of the
 * requested window [0,T] x [0,X], and the realized noises are retained so
 * the discrete mild oracle can reuse them.
 */
inline Field euler_she(int n, double horizon, double extent, Rng& rng,
                       NoiseConvention conv = NoiseConvention::derived, double alpha = 0.0) {
    Field f;
    f.n = n;
    f.dt = 1.0 / n;
    f.dx = 1.0 / std::sqrt(static_cast<double>(n));
    f.rows = static_cast<int>(std::ceil(horizon * n));
    const int window_cols = static_cast<int>(std::ceil(extent * std::sqrt(static_cast<double>(n))));
    f.cols = window_cols + f.rows + 5;  // dependence cone plus interpolation margin
    if (window_cols < 2) throw std::runtime_error("euler_she: domain too small");
    f.values.assign(static_cast<std::size_t>(f.rows + 1) * (f.cols + 1), 0.0);
    f.noise.assign(static_cast<std::size_t>(f.rows + 1) * (f.cols + 1), 0.0);
    const double sd = std::sqrt(euler_noise_variance(n, conv, alpha));
    for (int j = 0; j < f.rows; ++j) {
        for (int k = 1; k < f.cols; ++k) {
            if ((j + k) % 2 == 0) continue;  // eta lives on the opposite parity
            f.eta(j, k) = sd * rng.normal();
        }
        for (int k = 1; k < f.cols; ++k) {
            if ((j + 1 + k) % 2 != 0) continue;
            f.at(j + 1, k) = 0.5 * (f.at(j, k + 1) + f.at(j, k - 1)) + f.eta(j, k);
        }
    }
    return f;
}

/**
 * Discrete Green's-function sum over the retained noises:
 *   V^j_k = sum_{j'=1..j} sum_{k'>=1} (P(S_{j-j'} = k'-k) - P(S_{j-j'} = -k-k')) eta_{j'-1,k'} ,
 * an exact re-solution of the same recursion (matches euler_she to rounding).
 */
inline double mild_discrete_green(const Field& f, int j, int k) {
    if (j < 0 || k < 0 || j > f.rows || k > f.cols) throw std::runtime_error("index outside field");
    if (j == 0) return 0.0;
    double total = 0.0;
    for (int jp = 1; jp <= j; ++jp) {
        const int steps = j - jp;
        for (int kp = std::max(1, k - steps); kp <= std::min(f.cols, k + steps); ++kp) {
            if ((jp + kp) % 2 != (j + k) % 2) continue;
            const double p_diff = rw_pmf(steps, (kp - k) / std::sqrt(static_cast<double>(f.n)), f.n) -
                                  rw_pmf(steps, (-kp - k) / std::sqrt(static_cast<double>(f.n)), f.n);
            total += p_diff * f.eta(jp - 1, kp);
        }
    }
    return total;
}

/**
 * Continuum-kernel mild discretization on the same noise: the walk pmfs are
 * replaced by the image (reflection) heat kernel evaluated at the lower time
 * face of each rectangle.  The mean-square gap to the Euler field is the
 * quantity whose decay in n the convergence theorem controls.
 */
inline double mild_discrete_kernel(const Field& f, int j, int k) {
    if (j < 0 || k < 0 || j > f.rows || k > f.cols) throw std::runtime_error("index outside field");
    if (j == 0) return 0.0;
    const double sqrt_n = std::sqrt(static_cast<double>(f.n));
    const double tj = j * f.dt;
    const double xk = k * f.dx;
    double total = 0.0;
    for (int jp = 1; jp <= j; ++jp) {
        const double s = (jp - 1) * f.dt;  // lower face, never singular
        const double dtj = tj - s;
        const double norm = 1.0 / std::sqrt(2.0 * M_PI * dtj);
        for (int kp = 1; kp <= std::min(f.cols, k + (j - jp)); ++kp) {
            if ((jp + kp) % 2 != (j + k) % 2) continue;
            const double y = kp * f.dx;
            const double kernel =
                norm * (std::exp(-(xk - y) * (xk - y) / (2.0 * dtj)) -
                        std::exp(-(xk + y) * (xk + y) / (2.0 * dtj)));
            // eta = (sqrt(n)/2) W(R), so the rectangle mass is (2/sqrt(n)) eta.
            total += kernel * (2.0 / sqrt_n) * f.eta(jp - 1, kp);
        }
    }
    return total;
}

// ---------------------------------------------------------------------------
// Weak-noise variant: Var(eta) ~ n^{-(1/2+alpha)}, the field flattens to 0.

struct WeakNoiseRun {
    double sup_abs = 0.0;  // sup over the window of |Y|
};

inline WeakNoiseRun weak_noise_run(int n, double alpha, double a_rows, double b_cols, Rng& rng,
                                   NoiseConvention conv = NoiseConvention::derived) {
    const int rows = static_cast<int>(std::ceil(a_rows * n));
    const int window_cols = static_cast<int>(std::ceil(b_cols * std::sqrt(static_cast<double>(n))));
    const int cols = window_cols + rows + 1;
    const double variance = conv == NoiseConvention::derived
                                ? 0.5 * std::pow(static_cast<double>(n), -0.5 - alpha)
                                : std::pow(2.0, -0.5) * std::pow(static_cast<double>(n), -0.5 - alpha);
    const double sd = std::sqrt(variance);
    std::vector<double> prev(static_cast<std::size_t>(cols + 1), 0.0);
    std::vector<double> next(static_cast<std::size_t>(cols + 1), 0.0);
    WeakNoiseRun out;
    for (int j = 0; j < rows; ++j) {
        for (int k = 1; k < cols; ++k) {
            if ((j + 1 + k) % 2 != 0) continue;
            next[static_cast<std::size_t>(k)] =
                0.5 * (prev[static_cast<std::size_t>(k + 1)] + prev[static_cast<std::size_t>(k - 1)]) +
                sd * rng.normal();
            if (k <= window_cols)
                out.sup_abs = std::max(out.sup_abs, std::fabs(next[static_cast<std::size_t>(k)]));
        }
        std::swap(prev, next);
        for (int k = (j % 2 == 0) ? 0 : 1; k <= cols; k += 2) next[static_cast<std::size_t>(k)] = 0.0;
    }
    return out;
}

// ---------------------------------------------------------------------------
// Deterministic Euler scheme with odd-extended initial data.

struct DeterministicField {
    int n = 0;
    int rows = 0;
    int cols = 0;  // columns 0..cols; negative x handled by oddness
    std::vector<double> values;
    double at(int j, int k) const {
        if (k < 0) return -at(j, -k);
        return values[static_cast<std::size_t>(j) * (cols + 1) + k];
    }
    double& cell(int j, int k) { return values[static_cast<std::size_t>(j) * (cols + 1) + k]; }
};

/// W^{j+1}_k = (W^j_{k+1} + W^j_{k-1})/2 with W^0_k = g~(x_k) where g~ is
/// the odd extension of g; equals the walk expectation E g~(S_j/sqrt(n)+x_k).
inline DeterministicField deterministic_euler(const std::function<double(double)>& g, int n,
                                              double horizon, double extent) {
    DeterministicField f;
    f.n = n;
    f.rows = static_cast<int>(std::ceil(horizon * n));
    const int window_cols = static_cast<int>(std::ceil(extent * std::sqrt(static_cast<double>(n))));
    f.cols = window_cols + f.rows + 1;
    f.values.assign(static_cast<std::size_t>(f.rows + 1) * (f.cols + 1), 0.0);
    const double dx = 1.0 / std::sqrt(static_cast<double>(n));
    for (int k = 0; k <= f.cols; ++k) f.cell(0, k) = (k == 0) ? 0.0 : g(k * dx);
    for (int j = 0; j < f.rows; ++j)
        for (int k = 1; k <= f.cols; ++k) {
            const double left = (k - 1 == 0) ? 0.0 : f.at(j, k - 1);
            const double right = (k + 1 <= f.cols) ? f.at(j, k + 1) : 0.0;
            f.cell(j + 1, k) = 0.5 * (left + right);
        }
    // Row zero at the axis stays zero; the odd extension keeps W^j_0 = 0.
    return f;
}

/// Walk-expectation evaluation of the same scheme (algebraic identity).
inline double deterministic_euler_walk(const std::function<double(double)>& g, int n, int j, int k) {
    auto g_tilde = [&](double x) { return x >= 0 ? g(x) : -g(-x); };
    const double sqrt_n = std::sqrt(static_cast<double>(n));
    double total = 0.0;
    for (long m = -j; m <= j; m += 2) {
        const long up = (j + m) / 2;
        double logp = -j * std::log(2.0);
        if (j > 0)
            logp += std::lgamma(j + 1.0) - std::lgamma(up + 1.0) - std::lgamma(j - up + 1.0);
        total += std::exp(logp) * g_tilde(static_cast<double>(m) / sqrt_n + k / sqrt_n);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Interpolation of a parity-lattice field to the plane: linear along both
// rhombus diagonals, zero on the axes, then linear in x between the two
// nearest defined points at the same time.

class FieldInterpolator {
public:
    explicit FieldInterpolator(const Field& f) : f_(f) {}

    double operator()(double t, double x) const {
        const double a = t * f_.n;           // row coordinate
        const double b = x * std::sqrt(static_cast<double>(f_.n));  // column coordinate
        if (t < 0 || x < 0 || a > f_.rows || a + b > f_.cols - 4)
            throw std::runtime_error("interpolation query outside the computed domain");
        if (x == 0.0 || t == 0.0) return 0.0;
        int j = static_cast<int>(std::floor(a));
        if (j >= f_.rows) j = f_.rows - 1;
        const double theta = a - j;

        // Defined crossings of the constant-t line within the band [j, j+1]:
        // ascending rhombus sides (j,k)-(j+1,k+1) cross at column k + theta,
        // descending ones (j+1,k')-(j,k'+1) at k' + 1 - theta; the t-axis
        // contributes the pinned zero at column 0.
        struct Crossing {
            double col;
            double value;
        };
        std::vector<Crossing> crossings;
        crossings.push_back({0.0, 0.0});
        const long center = static_cast<long>(std::floor(b));
        for (long k = std::max<long>(0, center - 3); k <= center + 3; ++k) {
            if (k + 1 > f_.cols) continue;
            if (((k + j) % 2 + 2) % 2 == 0) {
                crossings.push_back({static_cast<double>(k) + theta,
                                     (1.0 - theta) * f_.at(j, static_cast<int>(k)) +
                                         theta * f_.at(j + 1, static_cast<int>(k) + 1)});
            }
            if (((k + j + 1) % 2 + 2) % 2 == 0) {
                crossings.push_back({static_cast<double>(k) + 1.0 - theta,
                                     (1.0 - theta) * f_.at(j, static_cast<int>(k) + 1) +
                                         theta * f_.at(j + 1, static_cast<int>(k))});
            }
        }
        std::sort(crossings.begin(), crossings.end(),
                  [](const Crossing& u, const Crossing& v) { return u.col < v.col; });
        const Crossing* lo = nullptr;
        const Crossing* hi = nullptr;
        for (const auto& c : crossings) {
            if (c.col <= b + 1e-12) lo = &c;
            if (c.col >= b - 1e-12) {
                hi = &c;
                break;
            }
        }
        if (!lo || !hi) throw std::runtime_error("interpolation: bracketing failed");
        if (hi->col - lo->col < 1e-12) return lo->value;
        const double w = (b - lo->col) / (hi->col - lo->col);
        return (1.0 - w) * lo->value + w * hi->value;
    }

private:
    const Field& f_;
};

}  // namespace tlg
