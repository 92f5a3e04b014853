// Independent reference implementations used to cross-check the library.
// Everything here recomputes results from first principles (enumeration,
// quadrature, finite differences) without reusing the code paths under test.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <functional>
#include <limits>
#include <vector>

#include "robopinion/rng.hpp"
#include "robopinion/slam.hpp"

namespace oracles {

// ---------------------------------------------------------------------------
// Chi-square CDF by adaptive Simpson quadrature of the density, and the
// quantile by bisection on it.

inline double chi2_pdf(double x, int dof) {
    if (x <= 0.0) return 0.0;
    const double k2 = dof / 2.0;
    return std::exp((k2 - 1.0) * std::log(x) - x / 2.0 - k2 * std::log(2.0) - std::lgamma(k2));
}

inline double simpson(const std::function<double(double)>& f, double a, double b, int panels) {
    const double h = (b - a) / panels;
    double sum = f(a) + f(b);
    for (int i = 1; i < panels; ++i) {
        sum += f(a + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
    }
    return sum * h / 3.0;
}

inline double chi2_cdf_quadrature(double x, int dof) {
    if (x <= 0.0) return 0.0;
    // Substituting x = u^2 removes the dof = 1 endpoint singularity; the
    // integrand 2u * pdf(u^2) is smooth for every dof >= 1 (with the dof = 1
    // limit 2/sqrt(2*pi) at u = 0 spelled out).
    auto integrand = [dof](double u) {
        if (u == 0.0) return dof == 1 ? 2.0 / std::sqrt(2.0 * M_PI) : 0.0;
        return 2.0 * u * chi2_pdf(u * u, dof);
    };
    return simpson(integrand, 0.0, std::sqrt(x), 20000);
}

inline double chi2_quantile_quadrature(double alpha, int dof) {
    double lo = 0.0;
    double hi = 10.0 * dof + 100.0;
    for (int iter = 0; iter < 200; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (chi2_cdf_quadrature(mid, dof) < alpha) {
            lo = mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-9) break;
    }
    return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Random SLAM states for property tests.

inline robopinion::slam::SlamState random_state(robopinion::Rng& rng, int landmarks,
                                                double spread = 20.0) {
    using namespace robopinion::slam;
    const Eigen::Index dim = 3 + 2 * landmarks;
    Eigen::MatrixXd a(dim, dim);
    for (Eigen::Index i = 0; i < dim; ++i) {
        for (Eigen::Index j = 0; j < dim; ++j) {
            a(i, j) = rng.gauss() * 0.4;
        }
    }
    SlamState state;
    state.cov = a * a.transpose() + 0.05 * Eigen::MatrixXd::Identity(dim, dim);
    state.mean = Eigen::VectorXd(dim);
    state.mean(0) = rng.uniform(-spread, spread);
    state.mean(1) = rng.uniform(-spread, spread);
    state.mean(2) = rng.uniform(-M_PI, M_PI);
    for (int l = 0; l < landmarks; ++l) {
        state.mean(3 + 2 * l) = rng.uniform(-spread, spread);
        state.mean(3 + 2 * l + 1) = rng.uniform(-spread, spread);
        state.registry.push_back(l);
    }
    return state;
}

// ---------------------------------------------------------------------------
// Finite-difference Jacobian of a vector function of the state mean.

inline Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& f,
                                   const Eigen::VectorXd& x, double h = 1e-6) {
    const Eigen::VectorXd f0 = f(x);
    Eigen::MatrixXd jac(f0.size(), x.size());
    for (Eigen::Index j = 0; j < x.size(); ++j) {
        Eigen::VectorXd hi = x;
        Eigen::VectorXd lo = x;
        hi(j) += h;
        lo(j) -= h;
        jac.col(j) = (f(hi) - f(lo)) / (2.0 * h);
    }
    return jac;
}

// ---------------------------------------------------------------------------
// Exhaustive data-association oracles. These rebuild innovations and stacked
// covariances from the raw state (full dense Jacobians), independent of the
// block algebra inside the library.

struct DenseObs {
    Eigen::Vector2d zhat;
    Eigen::MatrixXd H;
};

inline DenseObs dense_observe(const robopinion::slam::SlamState& state, int slot) {
    DenseObs out;
    const double theta = state.mean(2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Eigen::Index col = 3 + 2 * slot;
    const double dx = state.mean(col) - state.mean(0);
    const double dy = state.mean(col + 1) - state.mean(1);
    out.zhat << c * dx + s * dy, -s * dx + c * dy;
    out.H = Eigen::MatrixXd::Zero(2, state.dim());
    out.H(0, 0) = -c;
    out.H(0, 1) = -s;
    out.H(0, 2) = out.zhat(1);
    out.H(1, 0) = s;
    out.H(1, 1) = -c;
    out.H(1, 2) = -out.zhat(0);
    out.H(0, col) = c;
    out.H(0, col + 1) = s;
    out.H(1, col) = -s;
    out.H(1, col + 1) = c;
    return out;
}

inline double dense_distance2(const robopinion::slam::SlamState& state,
                              const std::vector<robopinion::slam::Observation>& obs,
                              const std::vector<int>& pairing, const Eigen::Matrix2d& R) {
    std::vector<std::size_t> sel;
    for (std::size_t j = 0; j < pairing.size(); ++j) {
        if (pairing[j] >= 0) sel.push_back(j);
    }
    if (sel.empty()) return 0.0;
    const Eigen::Index rows = 2 * static_cast<Eigen::Index>(sel.size());
    Eigen::VectorXd nu(rows);
    Eigen::MatrixXd H(rows, state.dim());
    Eigen::MatrixXd Rblk = Eigen::MatrixXd::Zero(rows, rows);
    for (std::size_t k = 0; k < sel.size(); ++k) {
        const DenseObs d = dense_observe(state, pairing[sel[k]]);
        nu.segment<2>(2 * k) = obs[sel[k]].z - d.zhat;
        H.middleRows(2 * k, 2) = d.H;
        Rblk.block<2, 2>(2 * k, 2 * k) = R;
    }
    const Eigen::MatrixXd S = H * state.cov * H.transpose() + Rblk;
    return nu.dot(S.ldlt().solve(nu));
}

/// (count desc, joint D2 asc, lexicographic pairing with null treated as
/// +inf) — smaller compares better.
struct RankedHypothesis {
    std::vector<int> pairing;
    int count = -1;
    double d2 = 0.0;

    bool better_than(const RankedHypothesis& other) const {
        if (count != other.count) return count > other.count;
        if (d2 != other.d2) return d2 < other.d2;
        for (std::size_t i = 0; i < pairing.size(); ++i) {
            const unsigned a = pairing[i] < 0 ? std::numeric_limits<unsigned>::max()
                                              : static_cast<unsigned>(pairing[i]);
            const unsigned b = other.pairing[i] < 0 ? std::numeric_limits<unsigned>::max()
                                                    : static_cast<unsigned>(other.pairing[i]);
            if (a != b) return a < b;
        }
        return false;
    }
};

/// Every injective pairing vector, by plain enumeration; a hypothesis is
/// admissible when every prefix that adds a pairing passes its joint test.
inline robopinion::slam::Hypothesis jcbb_brute_force(
    const robopinion::slam::SlamState& state,
    const std::vector<robopinion::slam::Observation>& obs, const Eigen::Matrix2d& R,
    double alpha) {
    const int m = static_cast<int>(obs.size());
    const int slots = static_cast<int>(state.landmark_count());
    std::vector<double> thresholds(static_cast<std::size_t>(m) + 1, 0.0);
    for (int k = 1; k <= m; ++k) {
        thresholds[static_cast<std::size_t>(k)] = robopinion::slam::chi2_quantile(alpha, 2 * k);
    }

    RankedHypothesis best;
    best.pairing.assign(static_cast<std::size_t>(m), -1);
    best.count = -1;

    std::vector<int> pairing(static_cast<std::size_t>(m), -1);
    // Odometer over {-1, 0, .., slots-1}^m.
    std::function<void(int)> enumerate = [&](int i) {
        if (i == m) {
            // Injectivity.
            std::vector<bool> used(static_cast<std::size_t>(slots), false);
            for (int v : pairing) {
                if (v < 0) continue;
                if (used[static_cast<std::size_t>(v)]) return;
                used[static_cast<std::size_t>(v)] = true;
            }
            // Prefix-closed joint compatibility plus the final distance.
            int count = 0;
            double d2 = 0.0;
            for (int j = 0; j < m; ++j) {
                if (pairing[static_cast<std::size_t>(j)] < 0) continue;
                ++count;
                std::vector<int> prefix(pairing.begin(), pairing.begin() + j + 1);
                prefix.resize(static_cast<std::size_t>(m), -1);
                d2 = dense_distance2(state, obs, prefix, R);
                if (!(d2 < thresholds[static_cast<std::size_t>(count)])) return;
            }
            RankedHypothesis cand;
            cand.pairing = pairing;
            cand.count = count;
            cand.d2 = d2;
            if (best.count < 0 || cand.better_than(best)) best = cand;
            return;
        }
        for (int v = -1; v < slots; ++v) {
            pairing[static_cast<std::size_t>(i)] = v;
            enumerate(i + 1);
        }
        pairing[static_cast<std::size_t>(i)] = -1;
    };
    enumerate(0);

    robopinion::slam::Hypothesis hyp;
    hyp.pairing = best.count >= 0 ? best.pairing : pairing;
    return hyp;
}

/// Greedy per-observation argmin with used-slot removal, mirrored
/// independently of the library's implementation.
inline robopinion::slam::Hypothesis nn_brute_force(
    const robopinion::slam::SlamState& state,
    const std::vector<robopinion::slam::Observation>& obs, const Eigen::Matrix2d& R, double alpha,
    bool allow_reuse = false) {
    const double gate = robopinion::slam::chi2_quantile(alpha, 2);
    robopinion::slam::Hypothesis hyp;
    hyp.pairing.assign(obs.size(), -1);
    std::vector<bool> used(state.landmark_count(), false);
    for (std::size_t j = 0; j < obs.size(); ++j) {
        double best_d2 = gate;
        int best_slot = -1;
        for (std::size_t slot = 0; slot < state.landmark_count(); ++slot) {
            if (!allow_reuse && used[slot]) continue;
            std::vector<int> single(obs.size(), -1);
            single[j] = static_cast<int>(slot);
            const double d2 = dense_distance2(state, obs, single, R);
            if (d2 < best_d2) {
                best_d2 = d2;
                best_slot = static_cast<int>(slot);
            }
        }
        hyp.pairing[j] = best_slot;
        if (best_slot >= 0) used[static_cast<std::size_t>(best_slot)] = true;
    }
    return hyp;
}

/// Random association test instance: landmarks spread out, observations
/// made of perturbed landmark sightings plus clutter.
struct Instance {
    robopinion::slam::SlamState state;
    std::vector<robopinion::slam::Observation> observations;
    Eigen::Matrix2d R;
    double alpha = 0.99;
};

inline Instance random_instance(robopinion::Rng& rng, int max_landmarks, int max_observations) {
    using namespace robopinion::slam;
    Instance inst;
    const int landmarks = 1 + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_landmarks)));
    const int observations =
        static_cast<int>(rng.below(static_cast<std::uint64_t>(max_observations) + 1));
    inst.state = random_state(rng, landmarks, 12.0);
    const double sigma = 0.2 + rng.uniform01() * 0.6;
    inst.R = sigma * sigma * Eigen::Matrix2d::Identity();
    inst.alpha = rng.uniform01() < 0.5 ? 0.95 : 0.99;

    const double theta = inst.state.mean(2);
    Eigen::Matrix2d rot_t;
    rot_t << std::cos(theta), std::sin(theta), -std::sin(theta), std::cos(theta);
    for (int j = 0; j < observations; ++j) {
        Observation obs;
        if (rng.uniform01() < 0.75) {
            const int id = static_cast<int>(rng.below(static_cast<std::uint64_t>(landmarks)));
            const Eigen::Vector2d lm = inst.state.landmark(static_cast<std::size_t>(id));
            const Eigen::Vector2d delta = lm - inst.state.mean.head<2>();
            obs.z = rot_t * delta +
                    Eigen::Vector2d(rng.gauss(), rng.gauss()) * (sigma * (0.5 + rng.uniform01()));
            obs.true_id = id;
        } else {
            obs.z = Eigen::Vector2d(rng.uniform(-30.0, 30.0), rng.uniform(-30.0, 30.0));
            obs.true_id = -1;
        }
        inst.observations.push_back(obs);
    }
    return inst;
}

}  // namespace oracles
