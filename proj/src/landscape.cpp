#include "robopinion/landscape.hpp"

#include <cmath>
#include <map>
#include <set>

#include "robopinion/error.hpp"
#include "robopinion/io.hpp"

namespace robopinion::landscape {

namespace {

// Point at arc length s along the square (0,0)->(S,0)->(S,S)->(0,S)->(0,0).
std::array<double, 2> perimeter_point(double s, double side) {
    s = std::fmod(s, 4.0 * side);
    if (s < side) return {s, 0.0};
    if (s < 2.0 * side) return {side, s - side};
    if (s < 3.0 * side) return {side - (s - 2.0 * side), side};
    return {0.0, side - (s - 3.0 * side)};
}

std::vector<double> resolve_values(const interview::ConceptSpec& spec,
                                   const std::optional<std::vector<double>>& values) {
    const int n = spec.n();
    if (!values) {
        std::vector<double> out(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            out[static_cast<std::size_t>(i)] = (i % 2 == 0) ? 1.0 : -1.0;
        }
        return out;
    }
    if (static_cast<int>(values->size()) != n) {
        fail_validation("feature values: expected " + std::to_string(n) + " entries, got " +
                        std::to_string(values->size()));
    }
    std::string offenders;
    double sum = 0.0;
    for (int i = 0; i < n; ++i) {
        const double v = (*values)[static_cast<std::size_t>(i)];
        const int sign = (i % 2 == 0) ? +1 : -1;
        if ((sign > 0 && v < 0.0) || (sign < 0 && v > 0.0)) {
            offenders += (offenders.empty() ? "" : ", ") + std::to_string(i + 1);
        }
        sum += v;
    }
    if (!offenders.empty()) {
        fail_validation("feature values violate parity signs at indices: " + offenders);
    }
    if (std::abs(sum) > 1e-12) {
        fail_validation("feature values must sum to zero, got " + fmt_double(sum));
    }
    return *values;
}

GroundTruthMap build_common(const interview::ConceptSpec& spec, double side,
                            const std::optional<std::vector<double>>& values) {
    interview::validate_concept_spec(spec);
    if (side <= 0.0) {
        fail_validation("side length must be > 0");
    }
    const std::vector<double> feature_values = resolve_values(spec, values);

    GroundTruthMap gt;
    gt.side = side;
    gt.waypoints = {{0.0, 0.0}, {side, 0.0}, {side, side}, {0.0, side}};

    Landmark pre_zero;
    pre_zero.index = -1;
    pre_zero.name = "pre-zero";
    pre_zero.dummy = true;
    gt.landmarks.push_back(pre_zero);

    Landmark zero;
    zero.index = 0;
    zero.name = "zero";
    zero.dummy = true;
    gt.landmarks.push_back(zero);

    for (const interview::SubConcept& sub : spec.sub_concepts) {
        Landmark lm;
        lm.index = sub.index;
        lm.name = sub.name;
        lm.sign = sub.sign;
        lm.feature_value = feature_values[static_cast<std::size_t>(sub.index - 1)];
        gt.landmarks.push_back(std::move(lm));
    }
    return gt;
}

}  // namespace

std::size_t GroundTruthMap::list_pos(int index) const {
    for (std::size_t k = 0; k < landmarks.size(); ++k) {
        if (landmarks[k].index == index) return k;
    }
    fail_validation("no landmark with sub-concept index " + std::to_string(index));
}

GroundTruthMap build_ground_truth(const interview::ConceptSpec& spec, double side,
                                  const std::optional<std::vector<double>>& values) {
    GroundTruthMap gt = build_common(spec, side, values);
    const double spacing = 4.0 * side / static_cast<double>(gt.landmarks.size());
    for (std::size_t k = 0; k < gt.landmarks.size(); ++k) {
        const auto point = perimeter_point(spacing * static_cast<double>(k), side);
        gt.landmarks[k].x = point[0];
        gt.landmarks[k].y = point[1];
    }
    return gt;
}

GroundTruthMap build_ground_truth(const interview::ConceptSpec& spec, double side,
                                  const std::vector<std::array<double, 2>>& prior_positions,
                                  const std::optional<std::vector<double>>& values) {
    GroundTruthMap gt = build_common(spec, side, values);
    if (prior_positions.size() != gt.landmarks.size()) {
        fail_validation("prior positions: expected " + std::to_string(gt.landmarks.size()) +
                        " entries, got " + std::to_string(prior_positions.size()));
    }
    std::set<std::pair<double, double>> seen;
    for (std::size_t k = 0; k < gt.landmarks.size(); ++k) {
        gt.landmarks[k].x = prior_positions[k][0];
        gt.landmarks[k].y = prior_positions[k][1];
        if (!seen.insert({prior_positions[k][0], prior_positions[k][1]}).second) {
            fail_validation("prior positions: landmarks must not coincide");
        }
    }
    return gt;
}

OpinionOffset opinion_offset(const interview::ConceptSpec& spec,
                             const interview::LikertResponse& response, double delta_max) {
    if (delta_max <= 0.0) {
        fail_validation("delta_max must be > 0");
    }
    if (response.sub_concept_index <= 0) {
        fail_validation("opinion_offset: dummy sub-concept " +
                        std::to_string(response.sub_concept_index) + " carries no opinion");
    }
    const interview::SubConcept* sub = spec.find(response.sub_concept_index);
    if (sub == nullptr) {
        fail_validation("opinion_offset: unknown sub-concept index " +
                        std::to_string(response.sub_concept_index));
    }
    OpinionOffset offset;
    offset.sub_concept_index = response.sub_concept_index;
    offset.delta_x = delta_max * interview::likert_to_value(response.level) * sub->sign;
    return offset;
}

std::vector<OpinionOffset> session_offsets(const interview::SessionRecord& record,
                                           double delta_max) {
    std::vector<OpinionOffset> offsets;
    for (const interview::LikertResponse& response : record.responses) {
        offsets.push_back(opinion_offset(record.concept, response, delta_max));
    }
    return offsets;
}

std::vector<std::array<double, 2>> place_observed_features(
    const GroundTruthMap& gt, const std::vector<OpinionOffset>& offsets) {
    std::map<int, double> by_index;
    for (const OpinionOffset& offset : offsets) {
        if (!by_index.emplace(offset.sub_concept_index, offset.delta_x).second) {
            fail_validation("duplicate offset for sub-concept " +
                            std::to_string(offset.sub_concept_index));
        }
    }
    std::vector<std::array<double, 2>> observed;
    observed.reserve(gt.landmarks.size());
    for (const Landmark& lm : gt.landmarks) {
        if (lm.dummy) {
            observed.push_back({lm.x, lm.y});
            continue;
        }
        const auto it = by_index.find(lm.index);
        if (it == by_index.end()) {
            fail_validation("missing offset for sub-concept " + std::to_string(lm.index));
        }
        observed.push_back({lm.x + it->second, lm.y});
        by_index.erase(it);
    }
    if (!by_index.empty()) {
        fail_validation("offsets refer to sub-concepts not in the map");
    }
    return observed;
}

std::string map_csv(const GroundTruthMap& gt) {
    std::vector<std::array<double, 2>> positions;
    positions.reserve(gt.landmarks.size());
    for (const Landmark& lm : gt.landmarks) positions.push_back({lm.x, lm.y});
    return map_csv(gt, positions);
}

std::string map_csv(const GroundTruthMap& gt,
                    const std::vector<std::array<double, 2>>& positions) {
    if (positions.size() != gt.landmarks.size()) {
        fail_validation("map_csv: positions do not match landmark count");
    }
    std::string out = "index,name,sign,dummy,x,y,feature_value\n";
    for (std::size_t k = 0; k < gt.landmarks.size(); ++k) {
        const Landmark& lm = gt.landmarks[k];
        out += std::to_string(lm.index) + "," + lm.name + "," + std::to_string(lm.sign) + "," +
               (lm.dummy ? "1" : "0") + "," + fmt_double(positions[k][0]) + "," +
               fmt_double(positions[k][1]) + "," + fmt_double(lm.feature_value) + "\n";
    }
    return out;
}

}  // namespace robopinion::landscape
