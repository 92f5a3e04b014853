#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "robopinion/landscape.hpp"

namespace robopinion::slam {

/// Angle wrapped into (-pi, pi].
double wrap_angle(double theta);

struct RobotPose {
    double x = 0.0;
    double y = 0.0;
    double theta = 0.0;
};

/// Stochastic map: joint Gaussian over robot pose and mapped landmarks.
/// mean = (x, y, theta, lx1, ly1, lx2, ly2, ...); cov is the matching
/// square matrix. registry maps each landmark slot to its ground-truth
/// identity for scoring only; association never reads it.
struct SlamState {
    Eigen::VectorXd mean;
    Eigen::MatrixXd cov;
    std::vector<int> registry;

    std::size_t landmark_count() const { return registry.size(); }
    Eigen::Index dim() const { return mean.size(); }
    RobotPose pose() const { return {mean(0), mean(1), mean(2)}; }
    Eigen::Vector2d landmark(std::size_t slot) const;
};

SlamState make_state(const RobotPose& pose, const Eigen::Matrix3d& pose_cov);

/// Insert an a-priori known landmark (imposed map) with the given position
/// uncertainty, uncorrelated with the rest of the state.
void add_prior_landmark(SlamState& state, const Eigen::Vector2d& position,
                        const Eigen::Matrix2d& cov, int true_id);

/// Odometry step: forward d_forward in the heading direction then turn by
/// d_turn; first-order covariance propagation with Q added on the pose
/// block. Throws if Q is not positive semidefinite.
void predict(SlamState& state, double d_forward, double d_turn, const Eigen::Matrix3d& Q);

struct ObservePrediction {
    Eigen::Vector2d zhat;
    Eigen::MatrixXd H;  // 2 x dim
};

/// Point-detector model: the landmark position rotated into the robot
/// frame, with its analytic Jacobian over the full state.
ObservePrediction observe_model(const SlamState& state, std::size_t slot);

/// nu' S^-1 nu through a Cholesky solve. Throws if S is not positive
/// definite.
double mahalanobis2(const Eigen::VectorXd& nu, const Eigen::MatrixXd& S);

/// Chi-square quantile: the q with P(chi2_dof <= q) = alpha.
double chi2_quantile(double alpha, int dof);

struct Observation {
    Eigen::Vector2d z;   // point in robot frame
    int true_id = -1;    // ground-truth identity, hidden from the estimator
};

/// Per-observation pairing with a landmark slot, -1 for none. Non-null
/// entries are injective.
struct Hypothesis {
    std::vector<int> pairing;

    int pairings() const;
    bool operator==(const Hypothesis&) const = default;
};

/// Nearest-neighbor association: per observation, the gated landmark with
/// the smallest Mahalanobis distance (ties to the lowest slot). By default
/// greedy in observation order with used landmarks removed; allow_reuse
/// disables that injectivity repair.
Hypothesis nn_associate(const SlamState& state, const std::vector<Observation>& observations,
                        const Eigen::Matrix2d& R, double alpha, bool allow_reuse = false);

constexpr std::size_t kJcbbMaxObservations = 20;

/// Joint compatibility branch and bound. Depth-first over observations;
/// a partial hypothesis survives only while its stacked innovation passes
/// D2 < chi2(alpha, 2*pairings), and a branch is cut when it can no longer
/// reach a hypothesis at least as good as the incumbent. Returns the
/// hypothesis with the most pairings, ties broken by smaller joint D2,
/// then by lexicographic pairing order (slots before null).
Hypothesis jcbb(const SlamState& state, const std::vector<Observation>& observations,
                const Eigen::Matrix2d& R, double alpha,
                std::size_t max_observations = kJcbbMaxObservations);

/// Joint Mahalanobis distance of the stacked innovation of all non-null
/// pairings (0 when none).
double joint_distance2(const SlamState& state, const std::vector<Observation>& observations,
                       const Hypothesis& hypothesis, const Eigen::Matrix2d& R);

/// EKF measurement update with the paired observations (Joseph form,
/// symmetrized); unpaired observations are appended as new landmarks.
void ekf_update(SlamState& state, const Hypothesis& hypothesis,
                const std::vector<Observation>& observations, const Eigen::Matrix2d& R);

/// Append one landmark from an observation, with cross-correlated blocks.
void augment_landmark(SlamState& state, const Observation& observation,
                      const Eigen::Matrix2d& R);

enum class Associator { nn, jcbb };

struct SimParams {
    double sensor_range = 30.0;
    double step_length = 2.0;
    int laps = 1;
    double alpha_nn = 0.95;
    double alpha_joint = 0.99;
    Eigen::Matrix3d Q = Eigen::Vector3d(0.05 * 0.05, 0.05 * 0.05,
                                        (0.5 * M_PI / 180.0) * (0.5 * M_PI / 180.0))
                            .asDiagonal();
    Eigen::Matrix2d R = Eigen::Vector2d(0.1 * 0.1, 0.1 * 0.1).asDiagonal();
    /// Extra factor on the noise actually injected into the sensor samples,
    /// on top of R; the filter keeps using R. 1 = sensor matches its model.
    double r_true_scale = 1.0;
    /// Same, for the odometry samples versus Q.
    double q_true_scale = 1.0;
    /// Imposed landmarks enter the state up front with this prior sigma per
    /// axis; 0 disables the prior map (landmarks get built from scratch).
    double landmark_prior_sigma = 1.0;
};

/// One association decision, as judged against ground truth. For a null
/// pairing the decision is correct only when the feature was genuinely
/// unmapped (slot stays -1 and the observation is used to augment).
struct AssociationEvent {
    int step = 0;
    int obs = 0;
    int slot = -1;      // paired slot, or -1
    int true_id = -1;
    bool correct = false;
    bool augmented = false;
    int augmented_slot = -1;
};

struct RunResult {
    std::vector<RobotPose> trail_true;
    std::vector<RobotPose> trail_estimated;
    SlamState final_state;
    std::vector<AssociationEvent> history;
    /// Fraction of correct association decisions (see AssociationEvent).
    double correct_rate = 1.0;
    /// Fraction of non-null pairings with the right identity.
    double paired_rate = 1.0;
    Associator associator = Associator::jcbb;
    std::uint64_t seed = 0;
};

/// Drive the square, observing the opinion-shifted feature positions with
/// noise, running predict -> associate -> update each step. Deterministic
/// for a fixed seed (single mt19937_64 stream, draws in step order).
RunResult simulate_run(const landscape::GroundTruthMap& gt,
                       const std::vector<std::array<double, 2>>& observed_positions,
                       const SimParams& params, std::uint64_t seed, Associator associator);

/// CSV exports (header rows, LF).
std::string trail_csv(const RunResult& run);
std::string associations_csv(const RunResult& run);

/// Per-slot ground-truth identity by majority vote over the association
/// history (prior-map slots start with one vote for their imposed identity).
std::vector<int> slot_majority_identity(const RunResult& run);

/// Estimated final positions arranged per ground-truth landmark (list
/// order), using the majority-vote slot for each feature. Features whose
/// slots never resolve are reported through `missing` when given.
std::vector<std::array<double, 2>> estimated_map(const RunResult& run,
                                                 const landscape::GroundTruthMap& gt,
                                                 std::vector<int>* missing = nullptr);

}  // namespace robopinion::slam
