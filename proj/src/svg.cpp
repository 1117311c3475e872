#include "trajkit/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "trajkit/error.hpp"

namespace trajkit {

namespace {

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string xml_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size());
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out += c; break;
        }
    }
    return out;
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
                          "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

struct Mapper {
    double x0, y0, w, h;       // plot area in svg coords
    double xmin, xmax, ymin, ymax;

    double mx(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
    double my(double y) const { return y0 + (1.0 - (y - ymin) / (ymax - ymin)) * h; }
};

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
    const double span = hi - lo;
    const double raw = span / target;
    const double mag = std::pow(10.0, std::floor(std::log10(raw)));
    double step = mag;
    for (double m : {1.0, 2.0, 2.5, 5.0, 10.0}) {
        if (raw <= m * mag) {
            step = m * mag;
            break;
        }
    }
    std::vector<double> ticks;
    const double start = std::ceil(lo / step) * step;
    for (double t = start; t <= hi + 1e-9 * span; t += step) {
        ticks.push_back(std::abs(t) < 1e-12 * span ? 0.0 : t);
    }
    return ticks;
}

}  // namespace

std::string render_line_chart(const ChartSpec& spec) {
    if (spec.series.empty()) throw Error("render_line_chart: no series");

    double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
    double ymin = xmin, ymax = -xmin;
    for (const auto& s : spec.series) {
        for (double v : s.x) {
            xmin = std::min(xmin, v);
            xmax = std::max(xmax, v);
        }
        for (const auto* vec : {&s.mean, &s.min, &s.max}) {
            for (double v : *vec) {
                if (std::isnan(v)) continue;
                ymin = std::min(ymin, v);
                ymax = std::max(ymax, v);
            }
        }
    }
    if (!(xmax > xmin)) xmax = xmin + 1.0;
    if (!(ymax > ymin)) ymax = ymin + 1.0;
    const double pad = 0.05 * (ymax - ymin);
    ymin -= pad;
    ymax += pad;

    Mapper m{60.0, 30.0, spec.width - 80.0, spec.height - 90.0, xmin, xmax, ymin, ymax};

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << spec.width << "\" height=\""
        << spec.height << "\" viewBox=\"0 0 " << spec.width << " " << spec.height << "\">\n"
        << "  <rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";

    // min-max bands first so the mean lines draw on top
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto& s = spec.series[i];
        if (s.min.size() != s.x.size() || s.max.size() != s.x.size()) continue;
        std::ostringstream pts;
        for (std::size_t k = 0; k < s.x.size(); ++k)
            pts << fmt(m.mx(s.x[k])) << ',' << fmt(m.my(s.max[k])) << ' ';
        for (std::size_t k = s.x.size(); k-- > 0;)
            pts << fmt(m.mx(s.x[k])) << ',' << fmt(m.my(s.min[k])) << ' ';
        svg << "  <polygon fill=\"" << kPalette[i % 10] << "\" fill-opacity=\"0.15\" "
            << "stroke=\"none\" points=\"" << pts.str() << "\"/>\n";
    }

    // axes box
    svg << "  <rect x=\"" << fmt(m.x0) << "\" y=\"" << fmt(m.y0) << "\" width=\"" << fmt(m.w)
        << "\" height=\"" << fmt(m.h) << "\" fill=\"none\" stroke=\"black\"/>\n";

    // ticks and labels
    svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    for (double t : nice_ticks(xmin, xmax)) {
        const double x = m.mx(t);
        svg << "    <line x1=\"" << fmt(x) << "\" y1=\"" << fmt(m.y0 + m.h) << "\" x2=\"" << fmt(x)
            << "\" y2=\"" << fmt(m.y0 + m.h + 4) << "\" stroke=\"black\"/>\n"
            << "    <text x=\"" << fmt(x) << "\" y=\"" << fmt(m.y0 + m.h + 16)
            << "\" text-anchor=\"middle\">" << fmt(t) << "</text>\n";
    }
    for (double t : nice_ticks(ymin, ymax)) {
        const double y = m.my(t);
        svg << "    <line x1=\"" << fmt(m.x0 - 4) << "\" y1=\"" << fmt(y) << "\" x2=\""
            << fmt(m.x0) << "\" y2=\"" << fmt(y) << "\" stroke=\"black\"/>\n"
            << "    <text x=\"" << fmt(m.x0 - 7) << "\" y=\"" << fmt(y + 3.5)
            << "\" text-anchor=\"end\">" << fmt(t) << "</text>\n";
    }
    svg << "  </g>\n";

    // mean polylines
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        const auto& s = spec.series[i];
        std::ostringstream pts;
        for (std::size_t k = 0; k < s.x.size(); ++k) {
            if (std::isnan(s.mean[k])) continue;
            pts << fmt(m.mx(s.x[k])) << ',' << fmt(m.my(s.mean[k])) << ' ';
        }
        svg << "  <polyline fill=\"none\" stroke=\"" << kPalette[i % 10]
            << "\" stroke-width=\"1.5\" points=\"" << pts.str() << "\"/>\n";
    }

    // title + axis labels
    svg << "  <g font-family=\"sans-serif\" fill=\"#000\">\n"
        << "    <text x=\"" << fmt(m.x0 + m.w / 2) << "\" y=\"18\" text-anchor=\"middle\" "
        << "font-size=\"14\" font-weight=\"bold\">" << xml_escape(spec.title) << "</text>\n"
        << "    <text x=\"" << fmt(m.x0 + m.w / 2) << "\" y=\"" << fmt(m.y0 + m.h + 34)
        << "\" text-anchor=\"middle\" font-size=\"12\">" << xml_escape(spec.x_label)
        << "</text>\n"
        << "    <text x=\"14\" y=\"" << fmt(m.y0 + m.h / 2)
        << "\" text-anchor=\"middle\" font-size=\"12\" transform=\"rotate(-90,14,"
        << fmt(m.y0 + m.h / 2) << ")\">" << xml_escape(spec.y_label) << "</text>\n"
        << "  </g>\n";

    // legend below the plot
    svg << "  <g font-family=\"sans-serif\" font-size=\"11\" fill=\"#333\">\n";
    double lx = m.x0;
    const double ly = m.y0 + m.h + 52;
    for (std::size_t i = 0; i < spec.series.size(); ++i) {
        svg << "    <line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly - 4) << "\" x2=\""
            << fmt(lx + 16) << "\" y2=\"" << fmt(ly - 4) << "\" stroke=\"" << kPalette[i % 10]
            << "\" stroke-width=\"2\"/>\n"
            << "    <text x=\"" << fmt(lx + 20) << "\" y=\"" << fmt(ly) << "\">"
            << xml_escape(spec.series[i].label) << "</text>\n";
        lx += 24.0 + 7.0 * static_cast<double>(spec.series[i].label.size()) + 14.0;
        if (lx > spec.width - 60.0) lx = m.x0;  // crude wrap; labels are short
    }
    svg << "  </g>\n</svg>\n";
    return svg.str();
}

void write_line_chart(const ChartSpec& spec, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw InputError("cannot write " + path);
    out << render_line_chart(spec);
}

}  // namespace trajkit
