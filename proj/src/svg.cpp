#include "piezobeam/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace piezobeam {

namespace {

constexpr const char* palette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::string fixed(double v, int digits = 2) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::fixed, digits);
    return std::string(buf, res.ptr);
}

std::string tick_label(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 4);
    return std::string(buf, res.ptr);
}

std::string escape(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '&': out += "&amp;"; break;
            case '"': out += "&quot;"; break;
            default: out += c;
        }
    }
    return out;
}

struct Axis {
    bool log = false;
    double lo = 0.0, hi = 1.0;

    double transform(double v) const { return log ? std::log10(v) : v; }
    bool usable(double v) const { return std::isfinite(v) && (!log || v > 0.0); }

    void fit(const std::vector<double>& values) {
        double mn = std::numeric_limits<double>::infinity(), mx = -mn;
        for (double v : values) {
            if (!usable(v)) continue;
            mn = std::min(mn, transform(v));
            mx = std::max(mx, transform(v));
        }
        if (!(mn <= mx)) {
            mn = 0.0;
            mx = 1.0;
        }
        if (mx - mn < 1e-300 + 1e-12 * std::abs(mx)) {
            const double pad = mn == 0.0 ? 1.0 : 0.5 * std::abs(mn);
            mn -= pad;
            mx += pad;
        }
        lo = mn;
        hi = mx;
    }

    std::vector<double> ticks() const {
        std::vector<double> out;
        if (log) {
            for (double e = std::ceil(lo); e <= hi + 1e-9; e += 1.0) out.push_back(e);
            if (out.size() >= 2) return out;
            out.clear();
        }
        const double raw = (hi - lo) / 5.0;
        const double mag = std::pow(10.0, std::floor(std::log10(raw)));
        double step = mag;
        for (double m : {1.0, 2.0, 5.0, 10.0}) {
            if (m * mag >= raw) {
                step = m * mag;
                break;
            }
        }
        for (double t = std::ceil(lo / step) * step; t <= hi + 1e-9 * step; t += step) {
            out.push_back(std::abs(t) < 1e-12 * step ? 0.0 : t);
        }
        return out;
    }

    std::string label(double t) const { return tick_label(log ? std::pow(10.0, t) : t); }
};

}  // namespace

std::string render_svg(const PlotSpec& spec, const std::vector<PlotSeries>& series) {
    const double left = 80, right = 20, top = 40, bottom = 60;
    const double w = spec.width, h = spec.height;
    const double pw = w - left - right, ph = h - top - bottom;

    Axis ax{spec.log_x}, ay{spec.log_y};
    std::vector<double> xs, ys;
    for (const auto& s : series) {
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (ax.usable(s.x[i]) && ay.usable(s.y[i])) {
                xs.push_back(s.x[i]);
                ys.push_back(s.y[i]);
            }
        }
    }
    ax.fit(xs);
    ay.fit(ys);
    auto px = [&](double v) { return left + (ax.transform(v) - ax.lo) / (ax.hi - ax.lo) * pw; };
    auto py = [&](double v) { return top + ph - (ay.transform(v) - ay.lo) / (ay.hi - ay.lo) * ph; };

    std::string out;
    out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + std::to_string(spec.width) + "\" height=\"" +
           std::to_string(spec.height) + "\" font-family=\"sans-serif\" font-size=\"12\">\n";
    out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    out += "<text x=\"" + fixed(w / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
           escape(spec.title) + "</text>\n";
    out += "<rect x=\"" + fixed(left) + "\" y=\"" + fixed(top) + "\" width=\"" + fixed(pw) + "\" height=\"" +
           fixed(ph) + "\" fill=\"none\" stroke=\"black\"/>\n";

    for (double t : ax.ticks()) {
        const double x = left + (t - ax.lo) / (ax.hi - ax.lo) * pw;
        out += "<line x1=\"" + fixed(x) + "\" y1=\"" + fixed(top + ph) + "\" x2=\"" + fixed(x) + "\" y2=\"" +
               fixed(top + ph + 5) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fixed(x) + "\" y=\"" + fixed(top + ph + 18) + "\" text-anchor=\"middle\">" +
               escape(ax.label(t)) + "</text>\n";
    }
    for (double t : ay.ticks()) {
        const double y = top + ph - (t - ay.lo) / (ay.hi - ay.lo) * ph;
        out += "<line x1=\"" + fixed(left - 5) + "\" y1=\"" + fixed(y) + "\" x2=\"" + fixed(left) + "\" y2=\"" +
               fixed(y) + "\" stroke=\"black\"/>\n";
        out += "<text x=\"" + fixed(left - 8) + "\" y=\"" + fixed(y + 4) + "\" text-anchor=\"end\">" +
               escape(ay.label(t)) + "</text>\n";
    }
    out += "<text x=\"" + fixed(left + pw / 2) + "\" y=\"" + fixed(h - 15) + "\" text-anchor=\"middle\">" +
           escape(spec.x_label) + "</text>\n";
    out += "<text x=\"18\" y=\"" + fixed(top + ph / 2) + "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " +
           fixed(top + ph / 2) + ")\">" + escape(spec.y_label) + "</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const auto& s = series[k];
        const char* colour = palette[k % std::size(palette)];
        std::string points;
        for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
            if (!ax.usable(s.x[i]) || !ay.usable(s.y[i])) continue;
            if (!points.empty()) points += ' ';
            points += fixed(px(s.x[i])) + ',' + fixed(py(s.y[i]));
        }
        out += "<polyline fill=\"none\" stroke=\"" + std::string(colour) + "\" stroke-width=\"1.5\" points=\"" +
               points + "\"/>\n";
        const double ly = top + 16 + 16 * static_cast<double>(k);
        out += "<line x1=\"" + fixed(left + pw - 130) + "\" y1=\"" + fixed(ly - 4) + "\" x2=\"" +
               fixed(left + pw - 110) + "\" y2=\"" + fixed(ly - 4) + "\" stroke=\"" + colour +
               "\" stroke-width=\"2\"/>\n";
        out += "<text x=\"" + fixed(left + pw - 104) + "\" y=\"" + fixed(ly) + "\">" + escape(s.label) +
               "</text>\n";
    }
    out += "</svg>\n";
    return out;
}

}  // namespace piezobeam
