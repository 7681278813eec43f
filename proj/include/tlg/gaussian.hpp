#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "tlg/rng.hpp"

namespace tlg {

// ---------------------------------------------------------------------------
// Finite-dimensional Gaussian vectors: conditioning and sampling.

struct GaussianVector {
    std::vector<std::string> labels;
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;

    std::size_t size() const { return labels.size(); }
    int index_of(const std::string& label) const {
        for (std::size_t i = 0; i < labels.size(); ++i)
            if (labels[i] == label) return static_cast<int>(i);
        throw std::runtime_error("unknown label " + label);
    }
};

namespace detail {

inline void require_symmetric(const Eigen::MatrixXd& k, double tol = 1e-9) {
    const double scale = std::max(1.0, k.cwiseAbs().maxCoeff());
    if ((k - k.transpose()).cwiseAbs().maxCoeff() > tol * scale)
        throw std::runtime_error("covariance is not symmetric");
}

/// Pseudo-inverse through the symmetric eigendecomposition.
inline Eigen::MatrixXd sym_pinv(const Eigen::MatrixXd& k, double rel_tol = 1e-12) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
    const auto& vals = es.eigenvalues();
    const double cutoff = rel_tol * std::max(1.0, vals.cwiseAbs().maxCoeff());
    Eigen::VectorXd inv = Eigen::VectorXd::Zero(vals.size());
    for (int i = 0; i < vals.size(); ++i)
        if (std::fabs(vals[i]) > cutoff) inv[i] = 1.0 / vals[i];
    return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace detail

/**
 * Conditions on a subset of coordinates.  The conditional covariance is the
 * Schur complement and does not depend on the observed values; a singular
 * observed block is handled by pseudo-inverse (exactly-degenerate pinned
 * coordinates are fine, inconsistent observations are not detected).
 */
inline GaussianVector condition(const GaussianVector& gv,
                                const std::vector<std::pair<std::string, double>>& observed) {
    if (observed.empty()) return gv;
    detail::require_symmetric(gv.cov);
    std::vector<int> obs_idx, rest_idx;
    std::vector<bool> is_obs(gv.size(), false);
    Eigen::VectorXd x_obs(static_cast<int>(observed.size()));
    for (std::size_t i = 0; i < observed.size(); ++i) {
        int idx = gv.index_of(observed[i].first);
        if (is_obs[static_cast<std::size_t>(idx)])
            throw std::runtime_error("label observed twice: " + observed[i].first);
        is_obs[static_cast<std::size_t>(idx)] = true;
        obs_idx.push_back(idx);
        x_obs[static_cast<int>(i)] = observed[i].second;
    }
    for (std::size_t i = 0; i < gv.size(); ++i)
        if (!is_obs[i]) rest_idx.push_back(static_cast<int>(i));

    const int no = static_cast<int>(obs_idx.size()), nr = static_cast<int>(rest_idx.size());
    Eigen::MatrixXd k_oo(no, no), k_ro(nr, no), k_rr(nr, nr);
    Eigen::VectorXd mu_o(no), mu_r(nr);
    for (int i = 0; i < no; ++i) {
        mu_o[i] = gv.mean[obs_idx[static_cast<std::size_t>(i)]];
        for (int j = 0; j < no; ++j)
            k_oo(i, j) = gv.cov(obs_idx[static_cast<std::size_t>(i)], obs_idx[static_cast<std::size_t>(j)]);
    }
    for (int i = 0; i < nr; ++i) {
        mu_r[i] = gv.mean[rest_idx[static_cast<std::size_t>(i)]];
        for (int j = 0; j < no; ++j)
            k_ro(i, j) = gv.cov(rest_idx[static_cast<std::size_t>(i)], obs_idx[static_cast<std::size_t>(j)]);
        for (int j = 0; j < nr; ++j)
            k_rr(i, j) = gv.cov(rest_idx[static_cast<std::size_t>(i)], rest_idx[static_cast<std::size_t>(j)]);
    }
    Eigen::MatrixXd pinv = detail::sym_pinv(k_oo);
    GaussianVector out;
    for (int i : rest_idx) out.labels.push_back(gv.labels[static_cast<std::size_t>(i)]);
    out.mean = mu_r + k_ro * pinv * (x_obs - mu_o);
    out.cov = k_rr - k_ro * pinv * k_ro.transpose();
    out.cov = 0.5 * (out.cov + out.cov.transpose());
    return out;
}

/// Draws one sample.  Negative eigenvalues above -1e-9 (relative) are
/// clipped to zero; anything lower is an error.
inline Eigen::VectorXd sample(const GaussianVector& gv, Rng& rng, double clip_rel = 1e-9) {
    detail::require_symmetric(gv.cov);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gv.cov);
    const auto& vals = es.eigenvalues();
    const double scale = std::max(1.0, vals.cwiseAbs().maxCoeff());
    Eigen::VectorXd sd(vals.size());
    for (int i = 0; i < vals.size(); ++i) {
        if (vals[i] < -clip_rel * scale)
            throw std::runtime_error("covariance has a significantly negative eigenvalue");
        sd[i] = std::sqrt(std::max(0.0, vals[i]));
    }
    Eigen::VectorXd z(vals.size());
    for (int i = 0; i < vals.size(); ++i) z[i] = rng.normal();
    return gv.mean + es.eigenvectors() * (sd.asDiagonal() * z);
}

// ---------------------------------------------------------------------------
// Bridge covariances.

enum class BridgeFamily { brownian, glued, time_changed };

/**
 * Covariance of the zero-pinned bridge noise on [s, u]:
 * Brownian case (p^q - s)(u - p*q)/(u - s) with ^ = min, * = max; the glued
 * case substitutes V values for times (V nondecreasing).  Intervals below
 * 1e-12 degenerate to the zero bridge.
 */
inline double bridge_cov(BridgeFamily family, double s, double u, double p, double q,
                         const std::function<double(double)>& V = nullptr) {
    if (p < s || p > u || q < s || q > u)
        throw std::runtime_error("bridge_cov: evaluation point outside the interval");
    auto clock = [&](double t) {
        if (family == BridgeFamily::brownian) return t;
        if (!V) throw std::runtime_error("bridge_cov: missing clock function");
        return V(t);
    };
    const double vs = clock(s), vu = clock(u);
    if (vu - vs < 1e-12) return 0.0;
    const double vp = clock(std::min(p, q)), vq = clock(std::max(p, q));
    return (vp - vs) * (vu - vq) / (vu - vs);
}

/**
 * Covariance E(Z(tau1) Y(tau2)) of two Brownian motions on [s1, s2], equal
 * at the endpoints and conditionally independent given them:
 * s1 + (tau1 - s1)(tau2 - s1)/(s2 - s1).
 */
inline double bridge_pair_cov(double s1, double s2, double tau1, double tau2) {
    if (tau1 < s1 || tau1 > s2 || tau2 < s1 || tau2 > s2)
        throw std::runtime_error("bridge_pair_cov: point outside [s1, s2]");
    return s1 + (tau1 - s1) * (tau2 - s1) / (s2 - s1);
}

}  // namespace tlg
