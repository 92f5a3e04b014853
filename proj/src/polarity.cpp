#include "robopinion/polarity.hpp"

#include <algorithm>
#include <cmath>

#include "robopinion/error.hpp"
#include "robopinion/io.hpp"

namespace robopinion::polarity {

double AberrationProfile::max_value() const {
    if (values.empty()) fail_validation("empty aberration profile");
    return *std::max_element(values.begin(), values.end());
}

double AberrationProfile::min_value() const {
    if (values.empty()) fail_validation("empty aberration profile");
    return *std::min_element(values.begin(), values.end());
}

AberrationProfile aberrations(const slam::RunResult& run, const landscape::GroundTruthMap& gt) {
    std::vector<int> missing;
    const auto estimated = slam::estimated_map(run, gt, &missing);
    if (!missing.empty()) {
        std::string list;
        for (std::size_t i = 0; i < missing.size(); ++i) {
            list += (i == 0 ? "" : ", ") + std::to_string(missing[i]);
        }
        fail_validation("aberrations: features never mapped during the run: " + list);
    }

    AberrationProfile profile;
    for (std::size_t k = 0; k < gt.landmarks.size(); ++k) {
        const landscape::Landmark& lm = gt.landmarks[k];
        profile.indices.push_back(lm.index);
        profile.names.push_back(lm.name);
        profile.values.push_back(lm.dummy ? 0.0 : estimated[k][0] - lm.x);
    }
    return profile;
}

AberrationProfile profile_from_values(const std::vector<int>& indices,
                                      const std::vector<std::string>& names,
                                      const std::vector<double>& values) {
    if (indices.size() != values.size() || names.size() != values.size()) {
        fail_validation("profile_from_values: mismatched lengths");
    }
    AberrationProfile profile;
    profile.indices = indices;
    profile.names = names;
    profile.values = values;
    return profile;
}

AberrationProfile normalize(AberrationProfile profile) {
    const double span = profile.max_value() - profile.min_value();
    if (span == 0.0) {
        fail_validation("degenerate aberration profile: all values equal (perfectly neutral)");
    }
    for (double& value : profile.values) {
        value /= span;
    }
    profile.normalized = true;
    return profile;
}

PolarityResult slope_lengths(const AberrationProfile& profile, double epsilon) {
    if (!profile.normalized) {
        fail_validation("slope_lengths: profile must be normalized first");
    }
    if (!(epsilon >= 0.0 && epsilon < 0.5)) {
        fail_validation("slope_lengths: epsilon must lie in [0, 0.5)");
    }
    PolarityResult result;
    result.pos_len = std::max(0.0, profile.max_value() - epsilon);
    result.neg_len = std::max(0.0, -profile.min_value() - epsilon);
    result.neutral_len = 1.0 - result.pos_len - result.neg_len;
    result.score = result.pos_len - result.neg_len;
    return result;
}

std::string profile_csv(const AberrationProfile& profile) {
    std::string out = "index,name,aberration_normalized\n";
    for (std::size_t i = 0; i < profile.values.size(); ++i) {
        out += std::to_string(profile.indices[i]) + "," + profile.names[i] + "," +
               fmt_double(profile.values[i]) + "\n";
    }
    return out;
}

std::string result_csv(const PolarityResult& result) {
    return "pos,neg,neutral,score\n" + fmt_double(result.pos_len) + "," +
           fmt_double(result.neg_len) + "," + fmt_double(result.neutral_len) + "," +
           fmt_double(result.score) + "\n";
}

}  // namespace robopinion::polarity
