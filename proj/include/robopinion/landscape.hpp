#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "robopinion/interview.hpp"

namespace robopinion::landscape {

/// A ground-truth point feature. `index` is the sub-concept index: -1 is the
/// pre-zero anchor, 0 the zero anchor, 1..n the assessable features.
struct Landmark {
    int index = 0;
    std::string name;
    int sign = 0;  // 0 for dummies
    bool dummy = false;
    double x = 0.0;
    double y = 0.0;
    double feature_value = 0.0;
};

/// Imposed landmark map plus the square trajectory the robot drives.
/// Landmarks sit evenly along the perimeter in order pre-zero, zero, 1..n,
/// starting at the robot's start pose.
struct GroundTruthMap {
    std::vector<Landmark> landmarks;  // size n + 2, list order = perimeter order
    double side = 0.0;
    std::vector<std::array<double, 2>> waypoints;  // square corners, CCW from origin

    int n() const { return static_cast<int>(landmarks.size()) - 2; }
    /// Position of a landmark in the list by sub-concept index.
    std::size_t list_pos(int index) const;
};

constexpr double kDefaultSide = 100.0;
constexpr double kDefaultDeltaMax = 2.0;

/// Build the imposed map. Supplied feature values (one per non-dummy, index
/// order) must respect the parity signs and sum to zero; by default values
/// alternate +1, -1.
GroundTruthMap build_ground_truth(const interview::ConceptSpec& spec,
                                  double side = kDefaultSide,
                                  const std::optional<std::vector<double>>& values = std::nullopt);

/// Same map but with landmark positions taken from a previous run's
/// estimates (one xy per landmark, list order).
GroundTruthMap build_ground_truth(const interview::ConceptSpec& spec, double side,
                                  const std::vector<std::array<double, 2>>& prior_positions,
                                  const std::optional<std::vector<double>>& values = std::nullopt);

/// Signed x-displacement a session response induces on its feature.
struct OpinionOffset {
    int sub_concept_index = 0;
    double delta_x = 0.0;
};

OpinionOffset opinion_offset(const interview::ConceptSpec& spec,
                             const interview::LikertResponse& response,
                             double delta_max = kDefaultDeltaMax);

std::vector<OpinionOffset> session_offsets(const interview::SessionRecord& record,
                                           double delta_max = kDefaultDeltaMax);

/// World positions the simulator observes: ground truth shifted by
/// (delta_x, 0) per feature; dummies never move. One offset per non-dummy
/// landmark is required. Result is aligned with gt.landmarks.
std::vector<std::array<double, 2>> place_observed_features(
    const GroundTruthMap& gt, const std::vector<OpinionOffset>& offsets);

/// CSV `index,name,sign,dummy,x,y,feature_value` with header row.
std::string map_csv(const GroundTruthMap& gt);

/// Same layout for arbitrary positions (estimated maps).
std::string map_csv(const GroundTruthMap& gt, const std::vector<std::array<double, 2>>& positions);

}  // namespace robopinion::landscape
