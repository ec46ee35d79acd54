#ifndef HDMC_SVG_HPP
#define HDMC_SVG_HPP

#include <algorithm>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "hdmc/common.hpp"

namespace hdmc {

// Learning-curve figure rendered directly as SVG text: one mean line per
// variant with a shaded 95% confidence band. Output is byte-stable for a
// fixed input (all numbers go through the fixed formatter).

struct CurveData {
    // variant -> iteration (1-based) -> returns across trials
    std::vector<std::string> variant_order;
    std::map<std::string, std::vector<std::vector<double>>> samples;
};

// Parse the harness CSV (comment lines start with '#'; header row:
// trial,iteration,variant,return,...).
inline CurveData parse_curves_csv(const std::string& csv) {
    CurveData data;
    std::istringstream is(csv);
    std::string line;
    int lineno = 0;
    bool saw_header = false;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::vector<std::string> fields;
        std::string cur;
        for (char ch : line) {
            if (ch == ',') {
                fields.push_back(cur);
                cur.clear();
            } else if (ch != '\r') {
                cur.push_back(ch);
            }
        }
        fields.push_back(cur);
        if (!saw_header) {
            if (fields.size() < 4 || fields[0] != "trial" || fields[1] != "iteration" || fields[2] != "variant" ||
                fields[3] != "return")
                throw ParseError("expected header 'trial,iteration,variant,return,...'", lineno);
            saw_header = true;
            continue;
        }
        if (fields.size() < 4) throw ParseError("row has fewer than 4 fields", lineno);
        int iteration;
        double ret;
        try {
            iteration = std::stoi(fields[1]);
            ret = std::stod(fields[3]);
        } catch (const std::exception&) {
            throw ParseError("non-numeric iteration or return", lineno);
        }
        if (iteration < 1) throw ParseError("iteration must be >= 1", lineno);
        const std::string& variant = fields[2];
        if (variant.empty()) throw ParseError("empty variant field", lineno);
        auto [it, inserted] = data.samples.try_emplace(variant);
        if (inserted) data.variant_order.push_back(variant);
        auto& per_iter = it->second;
        if (static_cast<int>(per_iter.size()) < iteration) per_iter.resize(iteration);
        per_iter[iteration - 1].push_back(ret);
    }
    if (!saw_header) throw ParseError("missing CSV header", lineno == 0 ? 1 : lineno);
    if (data.samples.empty()) throw ParseError("CSV contains no data rows", lineno == 0 ? 1 : lineno);
    return data;
}

namespace detail {

inline std::string svg_num(double x) { return format_double(x); }

}  // namespace detail

inline std::string render_curves(const std::string& csv) {
    CurveData data = parse_curves_csv(csv);

    struct Series {
        std::string name;
        std::vector<double> mean, lo, hi;  // per iteration
    };
    std::vector<Series> series;
    int max_iter = 0;
    double y_min = 0, y_max = 0;
    bool first_val = true;
    for (const std::string& name : data.variant_order) {
        Series s;
        s.name = name;
        for (const auto& xs : data.samples[name]) {
            double m = mean(xs);
            double h = ci95_halfwidth(xs);
            s.mean.push_back(m);
            s.lo.push_back(m - h);
            s.hi.push_back(m + h);
            if (first_val) {
                y_min = m - h;
                y_max = m + h;
                first_val = false;
            } else {
                y_min = std::min(y_min, m - h);
                y_max = std::max(y_max, m + h);
            }
        }
        max_iter = std::max(max_iter, static_cast<int>(s.mean.size()));
        series.push_back(std::move(s));
    }
    if (y_max == y_min) y_max = y_min + 1;

    const double width = 800, height = 500;
    const double ml = 70, mr = 170, mt = 30, mb = 50;
    const double pw = width - ml - mr, ph = height - mt - mb;
    auto x_of = [&](int iter) {
        return ml + (max_iter <= 1 ? 0.5 * pw : pw * (iter - 1) / static_cast<double>(max_iter - 1));
    };
    auto y_of = [&](double v) { return mt + ph * (1.0 - (v - y_min) / (y_max - y_min)); };

    static const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#7f7f7f", "#9467bd",
                                     "#ff7f0e", "#8c564b", "#17becf"};
    const int n_colors = 8;

    std::ostringstream svg;
    svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" viewBox=\"0 0 " << width << " " << height << "\">\n";
    svg << "<rect width=\"" << width << "\" height=\"" << height << "\" fill=\"white\"/>\n";
    // Axes
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    svg << "<line x1=\"" << ml << "\" y1=\"" << mt + ph << "\" x2=\"" << ml + pw << "\" y2=\"" << mt + ph
        << "\" stroke=\"black\"/>\n";
    // Y ticks
    for (int i = 0; i <= 5; ++i) {
        double v = y_min + (y_max - y_min) * i / 5.0;
        double y = y_of(v);
        svg << "<line x1=\"" << ml - 5 << "\" y1=\"" << detail::svg_num(y) << "\" x2=\"" << ml << "\" y2=\""
            << detail::svg_num(y) << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << ml - 10 << "\" y=\"" << detail::svg_num(y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">" << detail::svg_num(v) << "</text>\n";
    }
    // X ticks
    for (int i = 0; i <= 5; ++i) {
        int iter = 1 + (max_iter - 1) * i / 5;
        double x = x_of(iter);
        svg << "<line x1=\"" << detail::svg_num(x) << "\" y1=\"" << mt + ph << "\" x2=\"" << detail::svg_num(x)
            << "\" y2=\"" << mt + ph + 5 << "\" stroke=\"black\"/>\n";
        svg << "<text x=\"" << detail::svg_num(x) << "\" y=\"" << mt + ph + 20
            << "\" font-size=\"12\" text-anchor=\"middle\">" << iter << "</text>\n";
    }
    svg << "<text x=\"" << ml + pw / 2 << "\" y=\"" << height - 10
        << "\" font-size=\"14\" text-anchor=\"middle\">iteration</text>\n";
    svg << "<text x=\"18\" y=\"" << mt + ph / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << mt + ph / 2
        << ")\">discounted return</text>\n";

    for (std::size_t k = 0; k < series.size(); ++k) {
        const Series& s = series[k];
        const char* color = kPalette[k % n_colors];
        if (s.mean.empty()) continue;
        // CI band
        svg << "<polygon fill=\"" << color << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
        for (std::size_t i = 0; i < s.hi.size(); ++i)
            svg << detail::svg_num(x_of(static_cast<int>(i) + 1)) << "," << detail::svg_num(y_of(s.hi[i])) << " ";
        for (std::size_t i = s.lo.size(); i-- > 0;)
            svg << detail::svg_num(x_of(static_cast<int>(i) + 1)) << "," << detail::svg_num(y_of(s.lo[i])) << " ";
        svg << "\"/>\n";
        // Mean line
        svg << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"2\" points=\"";
        for (std::size_t i = 0; i < s.mean.size(); ++i)
            svg << detail::svg_num(x_of(static_cast<int>(i) + 1)) << "," << detail::svg_num(y_of(s.mean[i])) << " ";
        svg << "\"/>\n";
        // Legend
        double ly = mt + 20 + 22 * static_cast<double>(k);
        svg << "<line x1=\"" << ml + pw + 15 << "\" y1=\"" << detail::svg_num(ly) << "\" x2=\"" << ml + pw + 45
            << "\" y2=\"" << detail::svg_num(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
        svg << "<text x=\"" << ml + pw + 50 << "\" y=\"" << detail::svg_num(ly + 4) << "\" font-size=\"12\">"
            << s.name << "</text>\n";
    }
    svg << "</svg>\n";
    return svg.str();
}

}  // namespace hdmc

#endif  // HDMC_SVG_HPP
