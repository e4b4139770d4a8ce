#include "codesurvey/chart.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "codesurvey/timeutil.hpp"

namespace codesurvey::chart {

namespace {

const char* kPalette[] = {
    "#4c72b0", "#dd8452", "#55a868", "#c44e52", "#8172b3", "#937860",
    "#da8bc3", "#8c8c8c", "#ccb974", "#64b5cd", "#5975a4", "#b55d60",
    "#5f9e6e", "#867cae", "#cc8963", "#d1a558", "#71aec0", "#a1a1a1",
};
constexpr size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string esc(const std::string& s) {
    std::string out;
    for (char c : s) {
        switch (c) {
            case '&': out += "&amp;"; break;
            case '<': out += "&lt;"; break;
            case '>': out += "&gt;"; break;
            case '"': out += "&quot;"; break;
            default: out.push_back(c);
        }
    }
    return out;
}

std::string svg_open(int width, int height, const std::string& title) {
    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\" "
        << "font-family=\"sans-serif\">\n"
        << "<title>" << esc(title) << "</title>\n"
        << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"#ffffff\"/>\n"
        << "<text x=\"" << width / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">"
        << esc(title) << "</text>\n";
    return out.str();
}

// "Nice" upper bound for a y axis.
double nice_max(double v) {
    if (v <= 0) return 1.0;
    double mag = std::pow(10.0, std::floor(std::log10(v)));
    for (double step : {1.0, 2.0, 2.5, 5.0, 10.0})
        if (v <= step * mag) return step * mag;
    return 10.0 * mag;
}

}  // namespace

std::vector<double> pie_angles(const std::vector<double>& shares) {
    double sum = 0;
    for (double s : shares) sum += s;
    std::vector<double> out;
    for (double s : shares) out.push_back(sum == 0 ? 0.0 : 360.0 * s / sum);
    return out;
}

std::string render_line(const std::vector<TimelineSeries>& series, const std::string& title) {
    if (series.empty()) throw std::runtime_error("render_line: no series");
    for (const auto& s : series)
        if (s.values.empty()) throw std::runtime_error("render_line: empty series " + s.label);

    const int width = 960, height = 540;
    const int left = 70, right = 240, top = 48, bottom = 60;
    const int plot_w = width - left - right, plot_h = height - top - bottom;

    int min_month = series[0].start_month, max_month = series[0].month_at(series[0].values.size() - 1);
    double max_v = 0;
    for (const auto& s : series) {
        min_month = std::min(min_month, s.start_month);
        max_month = std::max(max_month, s.month_at(s.values.size() - 1));
        for (double v : s.values) max_v = std::max(max_v, v);
    }
    double y_max = nice_max(max_v);
    int months = max_month - min_month;  // x span; a single month plots mid-axis

    auto x_of = [&](int month) {
        if (months == 0) return left + plot_w / 2.0;
        return left + plot_w * static_cast<double>(month - min_month) / months;
    };
    auto y_of = [&](double v) { return top + plot_h * (1.0 - v / y_max); };

    std::ostringstream out;
    out << svg_open(width, height, title);
    out << "<g stroke=\"#cccccc\" stroke-width=\"1\">\n";
    for (int t = 0; t <= 4; ++t) {
        double y = top + plot_h * t / 4.0;
        out << "<line x1=\"" << left << "\" y1=\"" << fmt(y) << "\" x2=\"" << left + plot_w
            << "\" y2=\"" << fmt(y) << "\"/>\n";
    }
    out << "</g>\n";
    for (int t = 0; t <= 4; ++t) {
        double y = top + plot_h * t / 4.0;
        double v = y_max * (4 - t) / 4.0;
        out << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-size=\"11\">" << fmt(v) << "</text>\n";
    }
    int tick_step = std::max(1, (months + 1) / 8);
    for (int m = min_month; m <= max_month; m += tick_step) {
        out << "<text x=\"" << fmt(x_of(m)) << "\" y=\"" << top + plot_h + 18
            << "\" text-anchor=\"middle\" font-size=\"11\">" << timeutil::month_label(m)
            << "</text>\n";
    }
    out << "<line x1=\"" << left << "\" y1=\"" << top + plot_h << "\" x2=\"" << left + plot_w
        << "\" y2=\"" << top + plot_h << "\" stroke=\"#333333\"/>\n"
        << "<line x1=\"" << left << "\" y1=\"" << top << "\" x2=\"" << left << "\" y2=\""
        << top + plot_h << "\" stroke=\"#333333\"/>\n";

    for (size_t i = 0; i < series.size(); ++i) {
        const auto& s = series[i];
        const char* color = kPalette[i % kPaletteSize];
        out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
        for (size_t k = 0; k < s.values.size(); ++k) {
            if (k) out << " ";
            out << fmt(x_of(s.month_at(k))) << "," << fmt(y_of(s.values[k]));
        }
        out << "\"/>\n";
        if (s.values.size() == 1) {
            out << "<circle cx=\"" << fmt(x_of(s.start_month)) << "\" cy=\""
                << fmt(y_of(s.values[0])) << "\" r=\"3\" fill=\"" << color << "\"/>\n";
        }
        double ly = top + 16.0 * i;
        out << "<rect x=\"" << left + plot_w + 16 << "\" y=\"" << fmt(ly)
            << "\" width=\"10\" height=\"10\" fill=\"" << color << "\"/>\n"
            << "<text x=\"" << left + plot_w + 30 << "\" y=\"" << fmt(ly + 9)
            << "\" font-size=\"11\">" << esc(s.label) << "</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_pie(const std::vector<DistributionEntry>& entries, const std::string& title) {
    if (entries.empty()) throw std::runtime_error("render_pie: no slices");
    const int width = 960, height = 540;
    const double cx = 300, cy = 290, r = 200;

    std::vector<double> shares;
    for (const auto& e : entries) shares.push_back(e.share);
    std::vector<double> angles = pie_angles(shares);

    std::ostringstream out;
    out << svg_open(width, height, title);
    double start = -90.0;  // 12 o'clock, clockwise
    for (size_t i = 0; i < entries.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        double sweep = angles[i];
        if (sweep <= 0) {
            start += sweep;
            continue;
        }
        if (sweep >= 360.0 - 1e-9) {
            out << "<circle cx=\"" << fmt(cx) << "\" cy=\"" << fmt(cy) << "\" r=\"" << fmt(r)
                << "\" fill=\"" << color << "\"/>\n";
            start += sweep;
            continue;
        }
        double a0 = start * M_PI / 180.0, a1 = (start + sweep) * M_PI / 180.0;
        double x0 = cx + r * std::cos(a0), y0 = cy + r * std::sin(a0);
        double x1 = cx + r * std::cos(a1), y1 = cy + r * std::sin(a1);
        int large = sweep > 180.0 ? 1 : 0;
        out << "<path d=\"M" << fmt(cx) << "," << fmt(cy) << " L" << fmt(x0) << "," << fmt(y0)
            << " A" << fmt(r) << "," << fmt(r) << " 0 " << large << " 1 " << fmt(x1) << ","
            << fmt(y1) << " Z\" fill=\"" << color << "\" stroke=\"#ffffff\"/>\n";
        start += sweep;
    }
    for (size_t i = 0; i < entries.size(); ++i) {
        const char* color = kPalette[i % kPaletteSize];
        double ly = 80.0 + 18.0 * i;
        char pct[16];
        std::snprintf(pct, sizeof(pct), "%.1f%%", entries[i].share * 100.0);
        out << "<rect x=\"560\" y=\"" << fmt(ly) << "\" width=\"10\" height=\"10\" fill=\""
            << color << "\"/>\n"
            << "<text x=\"576\" y=\"" << fmt(ly + 9) << "\" font-size=\"12\">"
            << esc(entries[i].label) << " (" << entries[i].count << ", " << pct << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_bar(const std::vector<RankedCount>& ranking, const std::string& title) {
    if (ranking.empty()) throw std::runtime_error("render_bar: no bars");
    const int width = 960;
    const int left = 340, right = 80, top = 48;
    const int bar_h = 22, gap = 8;
    const int height = top + static_cast<int>(ranking.size()) * (bar_h + gap) + 40;
    const int plot_w = width - left - right;

    int64_t max_count = 1;
    for (const auto& r : ranking) max_count = std::max(max_count, r.count);

    std::ostringstream out;
    out << svg_open(width, height, title);
    for (size_t i = 0; i < ranking.size(); ++i) {
        const auto& r = ranking[i];
        double y = top + i * (bar_h + gap);
        double w = plot_w * static_cast<double>(r.count) / static_cast<double>(max_count);
        char pct[16];
        std::snprintf(pct, sizeof(pct), "%.1f%%", r.share * 100.0);
        out << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + bar_h * 0.7)
            << "\" text-anchor=\"end\" font-size=\"12\">" << esc(r.key) << "</text>\n"
            << "<rect x=\"" << left << "\" y=\"" << fmt(y) << "\" width=\"" << fmt(w)
            << "\" height=\"" << bar_h << "\" fill=\"" << kPalette[0] << "\"/>\n"
            << "<text x=\"" << fmt(left + w + 6) << "\" y=\"" << fmt(y + bar_h * 0.7)
            << "\" font-size=\"12\">" << r.count << " (" << pct << ")</text>\n";
    }
    out << "</svg>\n";
    return out.str();
}

std::string render_heatmap(const FeatureComponentMatrix& matrix, const std::string& title) {
    if (matrix.feature_keywords.empty() || matrix.components.empty())
        throw std::runtime_error("render_heatmap: empty matrix");
    const int left = 180, top = 170;
    const int cell_w = 56, cell_h = 28;
    const int width = left + cell_w * static_cast<int>(matrix.components.size()) + 40;
    const int height = top + cell_h * static_cast<int>(matrix.feature_keywords.size()) + 40;

    int64_t max_v = 1;
    for (const auto& row : matrix.cells)
        for (int64_t v : row) max_v = std::max(max_v, v);

    std::ostringstream out;
    out << svg_open(width, height, title);
    for (size_t c = 0; c < matrix.components.size(); ++c) {
        double x = left + cell_w * (c + 0.5);
        out << "<text x=\"" << fmt(x) << "\" y=\"" << top - 10 << "\" font-size=\"11\" "
            << "text-anchor=\"start\" transform=\"rotate(-45 " << fmt(x) << " " << top - 10
            << ")\">" << esc(matrix.components[c]) << "</text>\n";
    }
    for (size_t k = 0; k < matrix.feature_keywords.size(); ++k) {
        double y = top + cell_h * (k + 0.5);
        out << "<text x=\"" << left - 8 << "\" y=\"" << fmt(y + 4)
            << "\" text-anchor=\"end\" font-size=\"12\">" << esc(matrix.feature_keywords[k])
            << "</text>\n";
        for (size_t c = 0; c < matrix.components.size(); ++c) {
            int64_t v = matrix.cells[k][c];
            // White through palette blue by intensity.
            double f = static_cast<double>(v) / static_cast<double>(max_v);
            int rr = static_cast<int>(255 + (0x4c - 255) * f);
            int gg = static_cast<int>(255 + (0x72 - 255) * f);
            int bb = static_cast<int>(255 + (0xb0 - 255) * f);
            char color[8];
            std::snprintf(color, sizeof(color), "#%02x%02x%02x", rr, gg, bb);
            double x = left + cell_w * c;
            out << "<rect x=\"" << fmt(x) << "\" y=\"" << fmt(top + cell_h * k) << "\" width=\""
                << cell_w << "\" height=\"" << cell_h << "\" fill=\"" << color
                << "\" stroke=\"#dddddd\"/>\n";
            if (v > 0) {
                const char* text_color = f > 0.55 ? "#ffffff" : "#333333";
                out << "<text x=\"" << fmt(x + cell_w / 2.0) << "\" y=\""
                    << fmt(top + cell_h * k + cell_h * 0.68)
                    << "\" text-anchor=\"middle\" font-size=\"11\" fill=\"" << text_color << "\">"
                    << v << "</text>\n";
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

void write_svg(const std::string& path, const std::string& svg) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << svg;
    if (!out) throw std::runtime_error("write failed: " + path);
}

}  // namespace codesurvey::chart
