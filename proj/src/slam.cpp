#include "robopinion/slam.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <map>

#include "robopinion/error.hpp"
#include "robopinion/io.hpp"
#include "robopinion/rng.hpp"

namespace robopinion::slam {

namespace {

void require_psd(const Eigen::MatrixXd& m, const std::string& name) {
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-9) {
        fail_validation(name + " must be symmetric");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    if (eig.eigenvalues().minCoeff() < -1e-9) {
        fail_validation(name + " must be positive semidefinite");
    }
}

Eigen::Matrix2d rotation(double theta) {
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    Eigen::Matrix2d rot;
    rot << c, -s, s, c;
    return rot;
}

void symmetrize(Eigen::MatrixXd& m) { m = 0.5 * (m + m.transpose()).eval(); }

// Square root factor A with A A' = m, valid for singular PSD matrices.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& m) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m);
    Eigen::VectorXd scaled = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    return eig.eigenvectors() * scaled.asDiagonal();
}

// The observation Jacobian only touches the pose block and one landmark
// block; carrying the two dense blocks keeps every innovation-covariance
// build O(1) in the state dimension.
struct ObsBlocks {
    std::size_t slot = 0;
    Eigen::Vector2d zhat;
    Eigen::Matrix<double, 2, 3> A;  // d zhat / d pose
    Eigen::Matrix2d B;              // d zhat / d landmark
};

ObsBlocks observe_blocks(const SlamState& state, std::size_t slot) {
    if (slot >= state.landmark_count()) {
        fail_validation("observe_model: slot " + std::to_string(slot) + " is not mapped");
    }
    const double theta = state.mean(2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const Eigen::Index col = 3 + 2 * static_cast<Eigen::Index>(slot);
    const double dx = state.mean(col) - state.mean(0);
    const double dy = state.mean(col + 1) - state.mean(1);

    ObsBlocks blocks;
    blocks.slot = slot;
    blocks.zhat = Eigen::Vector2d(c * dx + s * dy, -s * dx + c * dy);
    blocks.A << -c, -s, blocks.zhat(1), s, -c, -blocks.zhat(0);
    blocks.B << c, s, -s, c;
    return blocks;
}

// H_a P H_b' from the sparse structure of the two Jacobians.
Eigen::Matrix2d cross_innovation_cov(const SlamState& state, const ObsBlocks& a,
                                     const ObsBlocks& b) {
    const Eigen::Index ca = 3 + 2 * static_cast<Eigen::Index>(a.slot);
    const Eigen::Index cb = 3 + 2 * static_cast<Eigen::Index>(b.slot);
    const auto& P = state.cov;
    return a.A * (P.block<3, 3>(0, 0) * b.A.transpose() + P.block<3, 2>(0, cb) * b.B.transpose()) +
           a.B * (P.block<2, 3>(ca, 0) * b.A.transpose() +
                  P.block<2, 2>(ca, cb) * b.B.transpose());
}

// Joint Mahalanobis distance of the stacked innovation over the non-null
// entries of a (possibly partial) pairing.
double stacked_distance2(const SlamState& state, const std::vector<Observation>& observations,
                         const std::vector<ObsBlocks>& pred, const std::vector<int>& pairing,
                         const Eigen::Matrix2d& R) {
    std::vector<std::size_t> paired_obs;
    for (std::size_t j = 0; j < pairing.size(); ++j) {
        if (pairing[j] >= 0) paired_obs.push_back(j);
    }
    if (paired_obs.empty()) return 0.0;

    const Eigen::Index rows = 2 * static_cast<Eigen::Index>(paired_obs.size());
    Eigen::VectorXd nu(rows);
    Eigen::MatrixXd S(rows, rows);
    for (std::size_t j = 0; j < paired_obs.size(); ++j) {
        const auto& pj = pred[static_cast<std::size_t>(pairing[paired_obs[j]])];
        nu.segment<2>(2 * static_cast<Eigen::Index>(j)) = observations[paired_obs[j]].z - pj.zhat;
        for (std::size_t k = 0; k <= j; ++k) {
            const auto& pk = pred[static_cast<std::size_t>(pairing[paired_obs[k]])];
            Eigen::Matrix2d block = cross_innovation_cov(state, pj, pk);
            if (j == k) block += R;
            S.block<2, 2>(2 * static_cast<Eigen::Index>(j), 2 * static_cast<Eigen::Index>(k)) =
                block;
            S.block<2, 2>(2 * static_cast<Eigen::Index>(k), 2 * static_cast<Eigen::Index>(j)) =
                block.transpose();
        }
    }
    return mahalanobis2(nu, S);
}

}  // namespace

double wrap_angle(double theta) {
    double wrapped = std::remainder(theta, 2.0 * M_PI);
    if (wrapped <= -M_PI) wrapped += 2.0 * M_PI;
    return wrapped;
}

Eigen::Vector2d SlamState::landmark(std::size_t slot) const {
    if (slot >= landmark_count()) {
        fail_validation("landmark slot " + std::to_string(slot) + " is not mapped");
    }
    return mean.segment<2>(3 + 2 * static_cast<Eigen::Index>(slot));
}

SlamState make_state(const RobotPose& pose, const Eigen::Matrix3d& pose_cov) {
    require_psd(pose_cov, "pose covariance");
    SlamState state;
    state.mean = Eigen::Vector3d(pose.x, pose.y, wrap_angle(pose.theta));
    state.cov = pose_cov;
    return state;
}

void add_prior_landmark(SlamState& state, const Eigen::Vector2d& position,
                        const Eigen::Matrix2d& cov, int true_id) {
    require_psd(cov, "landmark prior covariance");
    const Eigen::Index d = state.dim();
    state.mean.conservativeResize(d + 2);
    state.mean.tail<2>() = position;
    state.cov.conservativeResize(d + 2, d + 2);
    state.cov.block(0, d, d, 2).setZero();
    state.cov.block(d, 0, 2, d).setZero();
    state.cov.block<2, 2>(d, d) = cov;
    state.registry.push_back(true_id);
}

void predict(SlamState& state, double d_forward, double d_turn, const Eigen::Matrix3d& Q) {
    require_psd(Q, "process noise Q");
    const double theta = state.mean(2);
    const double c = std::cos(theta);
    const double s = std::sin(theta);

    Eigen::Matrix3d F = Eigen::Matrix3d::Identity();
    F(0, 2) = -d_forward * s;
    F(1, 2) = d_forward * c;

    state.mean(0) += d_forward * c;
    state.mean(1) += d_forward * s;
    state.mean(2) = wrap_angle(theta + d_turn);

    const Eigen::Index d = state.dim();
    state.cov.topLeftCorner<3, 3>() =
        (F * state.cov.topLeftCorner<3, 3>() * F.transpose() + Q).eval();
    if (d > 3) {
        state.cov.block(0, 3, 3, d - 3) = (F * state.cov.block(0, 3, 3, d - 3)).eval();
        state.cov.block(3, 0, d - 3, 3) = state.cov.block(0, 3, 3, d - 3).transpose();
    }
    state.cov.topLeftCorner<3, 3>() =
        (0.5 * (state.cov.topLeftCorner<3, 3>() + state.cov.topLeftCorner<3, 3>().transpose()))
            .eval();
}

ObservePrediction observe_model(const SlamState& state, std::size_t slot) {
    const ObsBlocks blocks = observe_blocks(state, slot);
    ObservePrediction pred;
    pred.zhat = blocks.zhat;
    pred.H = Eigen::MatrixXd::Zero(2, state.dim());
    pred.H.block<2, 3>(0, 0) = blocks.A;
    pred.H.block<2, 2>(0, 3 + 2 * static_cast<Eigen::Index>(slot)) = blocks.B;
    return pred;
}

double mahalanobis2(const Eigen::VectorXd& nu, const Eigen::MatrixXd& S) {
    if (S.rows() != S.cols() || S.rows() != nu.size()) {
        fail_validation("mahalanobis2: dimension mismatch");
    }
    Eigen::LLT<Eigen::MatrixXd> llt(S);
    if (llt.info() != Eigen::Success) {
        fail_runtime("mahalanobis2: innovation covariance is not positive definite");
    }
    return nu.dot(llt.solve(nu));
}

double chi2_quantile(double alpha, int dof) {
    if (!(alpha > 0.0 && alpha < 1.0)) {
        fail_validation("chi2_quantile: alpha must lie in (0, 1)");
    }
    if (dof < 1) {
        fail_validation("chi2_quantile: dof must be >= 1");
    }
    const boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::quantile(dist, alpha);
}

int Hypothesis::pairings() const {
    return static_cast<int>(
        std::count_if(pairing.begin(), pairing.end(), [](int slot) { return slot >= 0; }));
}

Hypothesis nn_associate(const SlamState& state, const std::vector<Observation>& observations,
                        const Eigen::Matrix2d& R, double alpha, bool allow_reuse) {
    const std::size_t slots = state.landmark_count();
    std::vector<ObsBlocks> pred;
    pred.reserve(slots);
    for (std::size_t slot = 0; slot < slots; ++slot) {
        pred.push_back(observe_blocks(state, slot));
    }
    const double gate = chi2_quantile(alpha, 2);

    Hypothesis hyp;
    hyp.pairing.assign(observations.size(), -1);
    std::vector<bool> used(slots, false);
    for (std::size_t j = 0; j < observations.size(); ++j) {
        double best_d2 = gate;
        int best_slot = -1;
        for (std::size_t slot = 0; slot < slots; ++slot) {
            if (!allow_reuse && used[slot]) continue;
            const Eigen::Vector2d nu = observations[j].z - pred[slot].zhat;
            const Eigen::Matrix2d S = cross_innovation_cov(state, pred[slot], pred[slot]) + R;
            const double d2 = mahalanobis2(nu, S);
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

namespace {

struct JcbbSearch {
    const SlamState& state;
    const std::vector<Observation>& observations;
    const Eigen::Matrix2d& R;
    std::vector<ObsBlocks> pred;
    std::vector<double> thresholds;  // thresholds[k] = chi2(alpha, 2k)
    std::vector<int> current;
    std::vector<bool> used;
    std::vector<int> best;
    int best_count = -1;
    double best_d2 = 0.0;

    void dfs(std::size_t i, int count, double d2) {
        const std::size_t m = observations.size();
        if (i == m) {
            if (count > best_count || (count == best_count && d2 < best_d2)) {
                best = current;
                best_count = count;
                best_d2 = d2;
            }
            return;
        }
        // Cannot reach a hypothesis at least as good as the incumbent.
        if (count + static_cast<int>(m - i) < best_count) return;

        for (std::size_t slot = 0; slot < pred.size(); ++slot) {
            if (used[slot]) continue;
            current[i] = static_cast<int>(slot);
            const double cand_d2 = stacked_distance2(state, observations, pred, current, R);
            if (cand_d2 < thresholds[static_cast<std::size_t>(count) + 1]) {
                used[slot] = true;
                dfs(i + 1, count + 1, cand_d2);
                used[slot] = false;
            }
        }
        current[i] = -1;
        dfs(i + 1, count, d2);
    }
};

}  // namespace

Hypothesis jcbb(const SlamState& state, const std::vector<Observation>& observations,
                const Eigen::Matrix2d& R, double alpha, std::size_t max_observations) {
    if (observations.size() > max_observations) {
        fail_validation("jcbb: observation count " + std::to_string(observations.size()) +
                        " exceeds the configured bound " + std::to_string(max_observations));
    }
    JcbbSearch search{state, observations, R, {}, {}, {}, {}, {}};
    search.pred.reserve(state.landmark_count());
    for (std::size_t slot = 0; slot < state.landmark_count(); ++slot) {
        search.pred.push_back(observe_blocks(state, slot));
    }
    search.thresholds.resize(observations.size() + 1, 0.0);
    for (std::size_t k = 1; k <= observations.size(); ++k) {
        search.thresholds[k] = chi2_quantile(alpha, 2 * static_cast<int>(k));
    }
    search.current.assign(observations.size(), -1);
    search.used.assign(state.landmark_count(), false);
    search.dfs(0, 0, 0.0);

    Hypothesis hyp;
    hyp.pairing = search.best_count >= 0 ? search.best : search.current;
    return hyp;
}

double joint_distance2(const SlamState& state, const std::vector<Observation>& observations,
                       const Hypothesis& hypothesis, const Eigen::Matrix2d& R) {
    std::vector<ObsBlocks> pred;
    pred.reserve(state.landmark_count());
    for (std::size_t slot = 0; slot < state.landmark_count(); ++slot) {
        pred.push_back(observe_blocks(state, slot));
    }
    return stacked_distance2(state, observations, pred, hypothesis.pairing, R);
}

void augment_landmark(SlamState& state, const Observation& observation,
                      const Eigen::Matrix2d& R) {
    const double theta = state.mean(2);
    const Eigen::Matrix2d rot = rotation(theta);
    const Eigen::Vector2d world = state.mean.head<2>() + rot * observation.z;

    // Jacobians of the inverse observation g(pose, z).
    Eigen::Matrix<double, 2, 3> G_r;
    G_r << 1, 0, -std::sin(theta) * observation.z(0) - std::cos(theta) * observation.z(1),
           0, 1,  std::cos(theta) * observation.z(0) - std::sin(theta) * observation.z(1);
    const Eigen::Matrix2d& G_z = rot;

    const Eigen::Index d = state.dim();
    state.mean.conservativeResize(d + 2);
    state.mean.tail<2>() = world;

    const Eigen::MatrixXd cross = G_r * state.cov.topRows(3);  // 2 x d
    const Eigen::Matrix2d block = G_r * state.cov.topLeftCorner<3, 3>() * G_r.transpose() +
                                  G_z * R * G_z.transpose();
    state.cov.conservativeResize(d + 2, d + 2);
    state.cov.block(d, 0, 2, d) = cross;
    state.cov.block(0, d, d, 2) = cross.transpose();
    state.cov.block<2, 2>(d, d) = 0.5 * (block + block.transpose());
    state.registry.push_back(observation.true_id);
}

void ekf_update(SlamState& state, const Hypothesis& hypothesis,
                const std::vector<Observation>& observations, const Eigen::Matrix2d& R) {
    if (hypothesis.pairing.size() != observations.size()) {
        fail_validation("ekf_update: hypothesis size does not match observations");
    }
    std::vector<std::size_t> paired;
    std::vector<bool> used(state.landmark_count(), false);
    for (std::size_t j = 0; j < observations.size(); ++j) {
        const int slot = hypothesis.pairing[j];
        if (slot < 0) continue;
        if (static_cast<std::size_t>(slot) >= state.landmark_count()) {
            fail_validation("ekf_update: pairing uses unmapped slot " + std::to_string(slot));
        }
        if (used[static_cast<std::size_t>(slot)]) {
            fail_validation("ekf_update: hypothesis is not injective (slot " +
                            std::to_string(slot) + " reused)");
        }
        used[static_cast<std::size_t>(slot)] = true;
        paired.push_back(j);
    }

    if (!paired.empty()) {
        const Eigen::Index d = state.dim();
        const Eigen::Index rows = 2 * static_cast<Eigen::Index>(paired.size());
        std::vector<ObsBlocks> blocks;
        blocks.reserve(paired.size());
        Eigen::VectorXd nu(rows);
        for (std::size_t k = 0; k < paired.size(); ++k) {
            const std::size_t j = paired[k];
            blocks.push_back(
                observe_blocks(state, static_cast<std::size_t>(hypothesis.pairing[j])));
            nu.segment<2>(2 * static_cast<Eigen::Index>(k)) = observations[j].z - blocks[k].zhat;
        }

        // P H' column pair per pairing, using the Jacobian's sparsity.
        Eigen::MatrixXd PHt(d, rows);
        for (std::size_t k = 0; k < paired.size(); ++k) {
            const Eigen::Index col = 3 + 2 * static_cast<Eigen::Index>(blocks[k].slot);
            PHt.middleCols(2 * static_cast<Eigen::Index>(k), 2) =
                state.cov.middleCols(0, 3) * blocks[k].A.transpose() +
                state.cov.middleCols(col, 2) * blocks[k].B.transpose();
        }
        Eigen::MatrixXd S(rows, rows);
        for (std::size_t j = 0; j < paired.size(); ++j) {
            for (std::size_t k = 0; k < paired.size(); ++k) {
                const Eigen::Index col = 3 + 2 * static_cast<Eigen::Index>(blocks[j].slot);
                Eigen::Matrix2d block =
                    blocks[j].A * PHt.block<3, 2>(0, 2 * static_cast<Eigen::Index>(k)) +
                    blocks[j].B * PHt.block<2, 2>(col, 2 * static_cast<Eigen::Index>(k));
                if (j == k) block += R;
                S.block<2, 2>(2 * static_cast<Eigen::Index>(j),
                              2 * static_cast<Eigen::Index>(k)) = block;
            }
        }
        S = 0.5 * (S + S.transpose()).eval();
        Eigen::LLT<Eigen::MatrixXd> llt(S);
        if (llt.info() != Eigen::Success) {
            fail_runtime("ekf_update: singular innovation covariance");
        }
        state.mean += PHt * llt.solve(nu);
        state.mean(2) = wrap_angle(state.mean(2));
        state.cov -= PHt * llt.solve(PHt.transpose());
        symmetrize(state.cov);
    }

    for (std::size_t j = 0; j < observations.size(); ++j) {
        if (hypothesis.pairing[j] < 0) {
            augment_landmark(state, observations[j], R);
        }
    }
}

RunResult simulate_run(const landscape::GroundTruthMap& gt,
                       const std::vector<std::array<double, 2>>& observed_positions,
                       const SimParams& params, std::uint64_t seed, Associator associator) {
    if (observed_positions.size() != gt.landmarks.size()) {
        fail_validation("simulate_run: observed positions do not match the map");
    }
    if (params.sensor_range <= 0.0 || params.step_length <= 0.0 || params.laps < 1) {
        fail_validation("simulate_run: sensor range, step length and laps must be positive");
    }
    if (!(params.alpha_nn > 0.0 && params.alpha_nn < 1.0) ||
        !(params.alpha_joint > 0.0 && params.alpha_joint < 1.0)) {
        fail_validation("simulate_run: gating alphas must lie in (0, 1)");
    }
    if (params.r_true_scale < 0.0 || params.q_true_scale < 0.0 ||
        params.landmark_prior_sigma < 0.0) {
        fail_validation("simulate_run: noise scales must be >= 0");
    }

    // Numerical floor keeps innovation covariances invertible when R = 0.
    const Eigen::Matrix2d R_filter = params.R + 1e-12 * Eigen::Matrix2d::Identity();
    const Eigen::MatrixXd noise_r = psd_sqrt(params.r_true_scale * params.R);
    const Eigen::MatrixXd noise_q = psd_sqrt(params.q_true_scale * params.Q);

    Rng rng(seed);
    auto draw = [&rng](const Eigen::MatrixXd& factor) {
        Eigen::VectorXd g(factor.cols());
        for (Eigen::Index i = 0; i < g.size(); ++i) g(i) = rng.gauss();
        return Eigen::VectorXd(factor * g);
    };

    RunResult run;
    run.associator = associator;
    run.seed = seed;

    SlamState state = make_state(RobotPose{0.0, 0.0, 0.0}, Eigen::Matrix3d::Zero());
    if (params.landmark_prior_sigma > 0.0) {
        const Eigen::Matrix2d prior_cov = params.landmark_prior_sigma *
                                          params.landmark_prior_sigma *
                                          Eigen::Matrix2d::Identity();
        for (std::size_t k = 0; k < gt.landmarks.size(); ++k) {
            add_prior_landmark(state, Eigen::Vector2d(gt.landmarks[k].x, gt.landmarks[k].y),
                               prior_cov, static_cast<int>(k));
        }
    }

    RobotPose truth{0.0, 0.0, 0.0};
    const int side_steps =
        std::max(1, static_cast<int>(std::ceil(gt.side / params.step_length - 1e-9)));
    const double step = gt.side / side_steps;

    int step_no = 0;
    auto run_step = [&](double d_forward, double d_turn) {
        // True motion with (possibly scaled) process noise.
        const Eigen::VectorXd w = draw(noise_q);
        truth.x += d_forward * std::cos(truth.theta) + w(0);
        truth.y += d_forward * std::sin(truth.theta) + w(1);
        truth.theta = wrap_angle(truth.theta + d_turn + w(2));

        predict(state, d_forward, d_turn, params.Q);

        std::vector<Observation> observations;
        const Eigen::Matrix2d rot_true = rotation(truth.theta);
        for (std::size_t k = 0; k < observed_positions.size(); ++k) {
            const Eigen::Vector2d delta(observed_positions[k][0] - truth.x,
                                        observed_positions[k][1] - truth.y);
            if (delta.norm() > params.sensor_range) continue;
            Observation obs;
            obs.z = rot_true.transpose() * delta + draw(noise_r);
            obs.true_id = static_cast<int>(k);
            observations.push_back(obs);
        }

        const Hypothesis hyp =
            associator == Associator::nn
                ? nn_associate(state, observations, R_filter, params.alpha_nn)
                : jcbb(state, observations, R_filter, params.alpha_joint);

        int next_slot = static_cast<int>(state.landmark_count());
        for (std::size_t j = 0; j < observations.size(); ++j) {
            AssociationEvent event;
            event.step = step_no;
            event.obs = static_cast<int>(j);
            event.true_id = observations[j].true_id;
            event.slot = hyp.pairing[j];
            if (event.slot >= 0) {
                event.correct =
                    state.registry[static_cast<std::size_t>(event.slot)] == event.true_id;
            } else {
                const bool mapped = std::find(state.registry.begin(), state.registry.end(),
                                              event.true_id) != state.registry.end();
                event.correct = !mapped;
                event.augmented = true;
                event.augmented_slot = next_slot++;
            }
            run.history.push_back(event);
        }

        ekf_update(state, hyp, observations, R_filter);

        run.trail_true.push_back(truth);
        run.trail_estimated.push_back(state.pose());
        ++step_no;
    };

    for (int lap = 0; lap < params.laps; ++lap) {
        for (int side = 0; side < 4; ++side) {
            for (int i = 0; i < side_steps; ++i) {
                run_step(step, 0.0);
            }
            run_step(0.0, M_PI / 2.0);
        }
    }

    std::size_t correct_decisions = 0;
    std::size_t correct_paired = 0;
    std::size_t paired = 0;
    for (const AssociationEvent& event : run.history) {
        if (event.correct) ++correct_decisions;
        if (event.slot >= 0) {
            ++paired;
            if (event.correct) ++correct_paired;
        }
    }
    run.correct_rate = run.history.empty() ? 1.0
                                           : static_cast<double>(correct_decisions) /
                                                 static_cast<double>(run.history.size());
    run.paired_rate =
        paired == 0 ? 1.0 : static_cast<double>(correct_paired) / static_cast<double>(paired);
    run.final_state = std::move(state);
    return run;
}

std::string trail_csv(const RunResult& run) {
    std::string out = "step,true_x,true_y,true_theta,est_x,est_y,est_theta\n";
    for (std::size_t i = 0; i < run.trail_true.size(); ++i) {
        const RobotPose& t = run.trail_true[i];
        const RobotPose& e = run.trail_estimated[i];
        out += std::to_string(i) + "," + fmt_double(t.x) + "," + fmt_double(t.y) + "," +
               fmt_double(t.theta) + "," + fmt_double(e.x) + "," + fmt_double(e.y) + "," +
               fmt_double(e.theta) + "\n";
    }
    return out;
}

std::string associations_csv(const RunResult& run) {
    std::string out = "step,obs,slot,true_id,correct\n";
    for (const AssociationEvent& event : run.history) {
        out += std::to_string(event.step) + "," + std::to_string(event.obs) + "," +
               std::to_string(event.slot) + "," + std::to_string(event.true_id) + "," +
               (event.correct ? "1" : "0") + "\n";
    }
    return out;
}

std::vector<int> slot_majority_identity(const RunResult& run) {
    const std::size_t slots = run.final_state.landmark_count();
    std::vector<std::map<int, std::size_t>> votes(slots);
    for (std::size_t slot = 0; slot < slots; ++slot) {
        votes[slot][run.final_state.registry[slot]] = 1;  // imposed/augment identity
    }
    for (const AssociationEvent& event : run.history) {
        const int slot = event.augmented ? event.augmented_slot : event.slot;
        if (slot >= 0 && static_cast<std::size_t>(slot) < slots) {
            ++votes[static_cast<std::size_t>(slot)][event.true_id];
        }
    }
    std::vector<int> majority(slots, -1);
    for (std::size_t slot = 0; slot < slots; ++slot) {
        std::size_t best = 0;
        for (const auto& [id, n] : votes[slot]) {
            if (n > best) {  // map order breaks ties toward the smaller id
                best = n;
                majority[slot] = id;
            }
        }
    }
    return majority;
}

std::vector<std::array<double, 2>> estimated_map(const RunResult& run,
                                                 const landscape::GroundTruthMap& gt,
                                                 std::vector<int>* missing) {
    const std::vector<int> majority = slot_majority_identity(run);
    std::vector<std::map<int, std::size_t>> votes(run.final_state.landmark_count());
    for (const AssociationEvent& event : run.history) {
        const int slot = event.augmented ? event.augmented_slot : event.slot;
        if (slot >= 0 && static_cast<std::size_t>(slot) < votes.size()) {
            ++votes[static_cast<std::size_t>(slot)][event.true_id];
        }
    }

    std::vector<std::array<double, 2>> positions(gt.landmarks.size(),
                                                 {std::nan(""), std::nan("")});
    for (std::size_t k = 0; k < gt.landmarks.size(); ++k) {
        int best_slot = -1;
        std::size_t best_votes = 0;
        for (std::size_t slot = 0; slot < majority.size(); ++slot) {
            if (majority[slot] != static_cast<int>(k)) continue;
            std::size_t n = 1;  // the slot's own identity vote
            const auto it = votes[slot].find(static_cast<int>(k));
            if (it != votes[slot].end()) n += it->second;
            if (best_slot < 0 || n > best_votes) {
                best_slot = static_cast<int>(slot);
                best_votes = n;
            }
        }
        if (best_slot < 0) {
            if (missing) missing->push_back(gt.landmarks[k].index);
            continue;
        }
        const Eigen::Vector2d p = run.final_state.landmark(static_cast<std::size_t>(best_slot));
        positions[k] = {p(0), p(1)};
    }
    return positions;
}

}  // namespace robopinion::slam
