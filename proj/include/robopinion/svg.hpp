#pragma once

#include <string>

#include "robopinion/landscape.hpp"
#include "robopinion/polarity.hpp"
#include "robopinion/slam.hpp"

namespace robopinion::svg {

/// Two-panel figure: the square trail with ground-truth and estimated
/// landmarks, and the per-feature normalized aberration bars. The output is
/// a byte-deterministic function of its inputs.
std::string emit_svg(const slam::RunResult& run, const landscape::GroundTruthMap& gt,
                     const std::vector<std::array<double, 2>>& estimated_positions,
                     const polarity::AberrationProfile& profile);

}  // namespace robopinion::svg
