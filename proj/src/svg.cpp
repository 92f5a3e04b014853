#include "robopinion/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>

namespace robopinion::svg {

namespace {

constexpr double kWidth = 960.0;
constexpr double kHeight = 480.0;
constexpr double kPanelW = 440.0;
constexpr double kPanelH = 400.0;
constexpr double kMargin = 40.0;

std::string num(double v) {
    char buf[48];
    std::snprintf(buf, sizeof(buf), "%.3f", v);
    return buf;
}

struct WorldToPanel {
    double min_x, min_y, scale, ox, oy;

    double px(double x) const { return ox + (x - min_x) * scale; }
    double py(double y) const { return oy + kPanelH - (y - min_y) * scale; }
};

}  // namespace

std::string emit_svg(const slam::RunResult& run, const landscape::GroundTruthMap& gt,
                     const std::vector<std::array<double, 2>>& estimated_positions,
                     const polarity::AberrationProfile& profile) {
    // World extent: the square plus a border.
    const double border = std::max(5.0, 0.1 * gt.side);
    WorldToPanel w{-border, -border,
                   kPanelW / (gt.side + 2.0 * border), kMargin, kMargin};

    std::string out;
    out += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" + num(kWidth) +
           "\" height=\"" + num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " +
           num(kHeight) + "\">\n";
    out += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) +
           "\" fill=\"white\"/>\n";
    out += "<text x=\"" + num(kMargin) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
           "trail and landmarks (red: imposed, blue: estimated)</text>\n";

    // Panel 1: ground-truth square, trails, landmarks.
    out += "<g stroke=\"#cccccc\" fill=\"none\">\n";
    std::string square_points;
    if (!gt.waypoints.empty()) {
        for (std::size_t i = 0; i <= gt.waypoints.size(); ++i) {
            const auto& p = gt.waypoints[i % gt.waypoints.size()];
            square_points += num(w.px(p[0])) + "," + num(w.py(p[1])) + " ";
        }
    }
    out += "<polyline points=\"" + square_points + "\"/>\n";
    out += "</g>\n";

    std::string est_points;
    for (const slam::RobotPose& pose : run.trail_estimated) {
        est_points += num(w.px(pose.x)) + "," + num(w.py(pose.y)) + " ";
    }
    out += "<polyline points=\"" + est_points + "\" stroke=\"#3366cc\" fill=\"none\"/>\n";

    for (const landscape::Landmark& lm : gt.landmarks) {
        out += "<circle cx=\"" + num(w.px(lm.x)) + "\" cy=\"" + num(w.py(lm.y)) +
               "\" r=\"4\" fill=\"#cc3333\"/>\n";
    }
    for (std::size_t k = 0; k < estimated_positions.size() && k < gt.landmarks.size(); ++k) {
        const double x = estimated_positions[k][0];
        const double y = estimated_positions[k][1];
        if (std::isnan(x) || std::isnan(y)) continue;
        const double cx = w.px(x);
        const double cy = w.py(y);
        out += "<path d=\"M " + num(cx - 4) + " " + num(cy) + " L " + num(cx + 4) + " " + num(cy) +
               " M " + num(cx) + " " + num(cy - 4) + " L " + num(cx) + " " + num(cy + 4) +
               "\" stroke=\"#3366cc\"/>\n";
    }

    // Panel 2: normalized aberration bars, one line of markup per feature.
    const double left = kMargin + kPanelW + 60.0;
    const double zero_y = kMargin + kPanelH / 2.0;
    const double bar_scale = kPanelH / 2.2;  // unit span fits with headroom
    const std::size_t bars = profile.values.size();
    const double slot_w = bars == 0 ? kPanelW : kPanelW / static_cast<double>(bars);

    out += "<text x=\"" + num(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"14\">"
           "normalized aberration in x</text>\n";
    out += "<line x1=\"" + num(left) + "\" y1=\"" + num(zero_y) + "\" x2=\"" +
           num(left + kPanelW) + "\" y2=\"" + num(zero_y) + "\" stroke=\"#888888\"/>\n";
    for (std::size_t i = 0; i < bars; ++i) {
        const double v = profile.values[i];
        const double h = std::abs(v) * bar_scale;
        const double x = left + slot_w * static_cast<double>(i) + slot_w * 0.15;
        const double y = v >= 0.0 ? zero_y - h : zero_y;
        out += "<rect x=\"" + num(x) + "\" y=\"" + num(y) + "\" width=\"" + num(slot_w * 0.7) +
               "\" height=\"" + num(h) + "\" fill=\"" + (v >= 0.0 ? "#33aa55" : "#cc3333") +
               "\"/>\n";
        out += "<text x=\"" + num(x) + "\" y=\"" + num(kMargin + kPanelH + 16.0) +
               "\" font-family=\"sans-serif\" font-size=\"10\">" +
               std::to_string(profile.indices[i]) + "</text>\n";
    }

    out += "</svg>\n";
    return out;
}

}  // namespace robopinion::svg
