#include "covest/plot.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <map>
#include <ostream>
#include <set>

namespace covest {

namespace {

constexpr double width = 640.0;
constexpr double height = 420.0;
constexpr double left = 70.0;
constexpr double right = 170.0;
constexpr double top = 40.0;
constexpr double bottom = 60.0;

constexpr std::array<const char*, 6> palette = {"#1f77b4", "#d62728", "#2ca02c",
                                                "#9467bd", "#ff7f0e", "#8c564b"};

std::string num(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out += c;
        }
    }
    return out;
}

struct Point {
    double x, y, err;
};

}  // namespace

void write_loss_plot_svg(std::ostream& os, const std::vector<SweepRow>& rows,
                         const std::string& title) {
    std::set<int> ls;
    std::set<double> mus;
    for (const auto& r : rows) {
        ls.insert(r.measurements);
        mus.insert(r.mu);
    }
    const bool x_is_mu = ls.size() == 1 && mus.size() > 1;

    std::map<std::string, std::vector<Point>> series;
    std::vector<std::string> order;
    for (const auto& r : rows) {
        if (r.trials == 0)
            continue;
        std::string name(to_string(r.estimator));
        if (!x_is_mu && r.estimator != EstimatorKind::max_power && mus.size() > 1)
            name += " mu=" + num(r.mu);
        if (x_is_mu && r.estimator == EstimatorKind::max_power)
            continue;
        if (!series.contains(name))
            order.push_back(name);
        series[name].push_back({x_is_mu ? r.mu : static_cast<double>(r.measurements),
                                r.mean_loss_db, r.stderr_db});
    }

    double x_min = 0.0, x_max = 1.0, y_max = 1.0;
    bool first = true;
    for (const auto& [name, pts] : series) {
        for (const auto& p : pts) {
            if (first) {
                x_min = x_max = p.x;
                first = false;
            }
            x_min = std::min(x_min, p.x);
            x_max = std::max(x_max, p.x);
            y_max = std::max(y_max, p.y + p.err);
        }
    }
    if (x_max == x_min) {
        x_min -= 1.0;
        x_max += 1.0;
    }
    y_max = std::ceil(y_max * 1.1 * 2.0) / 2.0;

    const double pw = width - left - right;
    const double ph = height - top - bottom;
    auto sx = [&](double x) { return left + (x - x_min) / (x_max - x_min) * pw; };
    auto sy = [&](double y) { return top + ph - y / y_max * ph; };

    os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
       << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"14\">"
       << xml_escape(title) << "</text>\n";

    // axes and grid
    os << "<g stroke=\"#888\" stroke-width=\"1\">\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top + ph << "\" x2=\"" << left + pw << "\" y2=\""
       << top + ph << "\"/>\n";
    os << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\"" << top + ph
       << "\"/>\n</g>\n";
    const int y_ticks = 5;
    for (int i = 0; i <= y_ticks; ++i) {
        const double v = y_max * i / y_ticks;
        os << "<line x1=\"" << left << "\" y1=\"" << sy(v) << "\" x2=\"" << left + pw << "\" y2=\""
           << sy(v) << "\" stroke=\"#eee\"/>\n";
        os << "<text x=\"" << left - 8 << "\" y=\"" << sy(v) + 4 << "\" text-anchor=\"end\">" << num(v)
           << "</text>\n";
    }
    std::set<double> xs;
    for (const auto& [name, pts] : series)
        for (const auto& p : pts)
            xs.insert(p.x);
    for (double x : xs)
        os << "<text x=\"" << sx(x) << "\" y=\"" << top + ph + 18 << "\" text-anchor=\"middle\">"
           << num(x) << "</text>\n";
    os << "<text x=\"" << left + pw / 2 << "\" y=\"" << height - 15 << "\" text-anchor=\"middle\">"
       << (x_is_mu ? "mu" : "number of measurements L") << "</text>\n";
    os << "<text transform=\"translate(18," << top + ph / 2
       << ") rotate(-90)\" text-anchor=\"middle\">mean beamforming loss (dB)</text>\n";

    std::size_t idx = 0;
    for (const auto& name : order) {
        const char* colour = palette[idx % palette.size()];
        auto pts = series[name];
        std::sort(pts.begin(), pts.end(), [](const Point& a, const Point& b) { return a.x < b.x; });
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"2\" points=\"";
        for (const auto& p : pts)
            os << sx(p.x) << ',' << sy(p.y) << ' ';
        os << "\"/>\n";
        for (const auto& p : pts) {
            os << "<circle cx=\"" << sx(p.x) << "\" cy=\"" << sy(p.y) << "\" r=\"3\" fill=\"" << colour
               << "\"/>\n";
            if (p.err > 0.0)
                os << "<line x1=\"" << sx(p.x) << "\" y1=\"" << sy(p.y - p.err) << "\" x2=\"" << sx(p.x)
                   << "\" y2=\"" << sy(p.y + p.err) << "\" stroke=\"" << colour << "\"/>\n";
        }
        const double ly = top + 10 + 20.0 * static_cast<double>(idx);
        os << "<line x1=\"" << left + pw + 15 << "\" y1=\"" << ly << "\" x2=\"" << left + pw + 40
           << "\" y2=\"" << ly << "\" stroke=\"" << colour << "\" stroke-width=\"2\"/>\n";
        os << "<text x=\"" << left + pw + 45 << "\" y=\"" << ly + 4 << "\">" << xml_escape(name)
           << "</text>\n";
        ++idx;
    }
    os << "</svg>\n";
}

}  // namespace covest
