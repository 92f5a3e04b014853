#pragma once

#include <string>
#include <vector>

#include "robopinion/landscape.hpp"
#include "robopinion/slam.hpp"

namespace robopinion::polarity {

/// Signed x-axis deviation of each estimated landmark from its imposed
/// ground-truth position, entries in map list order (pre-zero, zero, 1..n).
/// The two dummy anchors always carry 0, so 0 lies inside [min, max].
struct AberrationProfile {
    std::vector<int> indices;
    std::vector<std::string> names;
    std::vector<double> values;
    bool normalized = false;

    double max_value() const;
    double min_value() const;
};

/// Profile from a finished run: estimated x (majority-vote slot per feature)
/// minus ground-truth x; dummies forced to 0. Throws, listing the indices,
/// when some feature was never mapped.
AberrationProfile aberrations(const slam::RunResult& run, const landscape::GroundTruthMap& gt);

/// Convenience for building profiles directly from values (anchors included
/// by the caller).
AberrationProfile profile_from_values(const std::vector<int>& indices,
                                      const std::vector<std::string>& names,
                                      const std::vector<double>& values);

/// Scale so the span max - min becomes exactly 1. A constant profile (span
/// 0) is degenerate and throws; callers report a perfectly neutral opinion.
AberrationProfile normalize(AberrationProfile profile);

constexpr double kDefaultNeutralHalfBand = 0.045;

struct PolarityResult {
    double pos_len = 0.0;
    double neg_len = 0.0;
    double neutral_len = 0.0;
    double score = 0.0;
};

/// Three slope lengths of a normalized profile: pos = max(0, max - eps),
/// neg = max(0, -min - eps), neutral the remainder of the unit span;
/// score = pos - neg.
PolarityResult slope_lengths(const AberrationProfile& profile,
                             double epsilon = kDefaultNeutralHalfBand);

/// CSV `index,name,aberration_normalized` with header row.
std::string profile_csv(const AberrationProfile& profile);

/// CSV single data row `pos,neg,neutral,score` with header row.
std::string result_csv(const PolarityResult& result);

}  // namespace robopinion::polarity
