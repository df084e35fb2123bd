#include "artipark/trajectory_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <vector>

namespace artipark {

namespace {

constexpr const char* kCsvHeader = "t,x,y,psi,phi,e,theta1,theta2,v,omega,V,mode";

// Plain decimal with nine significant digits; values of magnitude 1e9 and
// up keep all their integer digits.
std::string format_number(double v) {
    if (!std::isfinite(v)) throw InvalidInputError("cannot serialize a non-finite number");
    int exponent = 0;
    double mag = std::abs(v);
    if (mag > 0.0) exponent = static_cast<int>(std::floor(std::log10(mag)));
    int decimals = std::max(0, 8 - exponent);
    char buf[512];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::vector<std::string> split(const std::string& line, char sep) {
    std::vector<std::string> out;
    std::size_t start = 0;
    for (;;) {
        std::size_t pos = line.find(sep, start);
        if (pos == std::string::npos) {
            out.push_back(line.substr(start));
            return out;
        }
        out.push_back(line.substr(start, pos - start));
        start = pos + 1;
    }
}

double parse_number(const std::string& field, const std::string& path, std::size_t line_no) {
    double value = 0.0;
    const char* first = field.data();
    const char* last = field.data() + field.size();
    auto [ptr, ec] = std::from_chars(first, last, value);
    if (ec != std::errc() || ptr != last) {
        std::ostringstream os;
        os << path << ":" << line_no << ": invalid number '" << field << "'";
        throw InvalidInputError(os.str());
    }
    return value;
}

}  // namespace

const char* stop_reason_name(StopReason reason) {
    switch (reason) {
        case StopReason::AtGoal: return "AT_GOAL";
        case StopReason::TimeBudget: return "TIME_BUDGET";
        case StopReason::Singularity: return "SINGULARITY";
        case StopReason::FeedbackFailure: return "FEEDBACK_FAILURE";
    }
    return "UNKNOWN";
}

const char* control_mode_name(ControlMode mode) {
    return mode == ControlMode::Kick ? "KICK" : "NORMAL";
}

void write_trajectory_csv(const Trajectory& traj, const std::string& path) {
    if (traj.samples.empty()) throw InvalidInputError("cannot serialize an empty trajectory");
    std::ostringstream out;
    out << kCsvHeader << "\n";
    for (const TrajectorySample& s : traj.samples) {
        out << format_number(s.t) << ',' << format_number(s.cartesian.x) << ','
            << format_number(s.cartesian.y) << ',' << format_number(s.cartesian.psi) << ','
            << format_number(s.cartesian.phi) << ',' << format_number(s.polar.e) << ','
            << format_number(s.polar.theta1) << ',' << format_number(s.polar.theta2) << ','
            << format_number(s.command.v) << ',' << format_number(s.command.omega) << ','
            << format_number(s.V) << ',' << control_mode_name(s.mode) << "\n";
    }
    out << "# stop_reason=" << stop_reason_name(traj.stop_reason) << "\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open for writing: " + path);
    file << out.str();
    file.flush();
    if (!file) throw IoError("failed while writing: " + path);
}

Trajectory read_trajectory_csv(const std::string& path) {
    std::ifstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open for reading: " + path);

    Trajectory traj;
    std::string line;
    std::size_t line_no = 0;
    bool have_stop = false;

    if (!std::getline(file, line)) throw InvalidInputError(path + ": empty file");
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line != kCsvHeader) {
        throw InvalidInputError(path + ": unexpected header '" + line + "'");
    }

    while (std::getline(file, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        if (line.rfind("# stop_reason=", 0) == 0) {
            std::string reason = line.substr(std::string("# stop_reason=").size());
            if (reason == "AT_GOAL") {
                traj.stop_reason = StopReason::AtGoal;
            } else if (reason == "TIME_BUDGET") {
                traj.stop_reason = StopReason::TimeBudget;
            } else if (reason == "SINGULARITY") {
                traj.stop_reason = StopReason::Singularity;
            } else if (reason == "FEEDBACK_FAILURE") {
                traj.stop_reason = StopReason::FeedbackFailure;
            } else {
                throw InvalidInputError(path + ": unknown stop reason '" + reason + "'");
            }
            have_stop = true;
            continue;
        }
        std::vector<std::string> fields = split(line, ',');
        if (fields.size() != 12) {
            std::ostringstream os;
            os << path << ":" << line_no << ": expected 12 columns, got " << fields.size();
            throw InvalidInputError(os.str());
        }
        TrajectorySample s;
        s.t = parse_number(fields[0], path, line_no);
        double x = parse_number(fields[1], path, line_no);
        double y = parse_number(fields[2], path, line_no);
        double psi = parse_number(fields[3], path, line_no);
        double phi = parse_number(fields[4], path, line_no);
        double e = parse_number(fields[5], path, line_no);
        double theta1 = parse_number(fields[6], path, line_no);
        double theta2 = parse_number(fields[7], path, line_no);
        s.cartesian = CartesianState(x, y, psi, phi);
        s.polar = PolarState(e, theta1, theta2, phi);
        s.command.v = parse_number(fields[8], path, line_no);
        s.command.omega = parse_number(fields[9], path, line_no);
        s.V = parse_number(fields[10], path, line_no);
        if (fields[11] == "NORMAL") {
            s.mode = ControlMode::Normal;
        } else if (fields[11] == "KICK") {
            s.mode = ControlMode::Kick;
        } else {
            std::ostringstream os;
            os << path << ":" << line_no << ": unknown mode '" << fields[11] << "'";
            throw InvalidInputError(os.str());
        }
        traj.samples.push_back(s);
    }

    if (traj.samples.empty()) throw InvalidInputError(path + ": no samples");
    if (!have_stop) throw InvalidInputError(path + ": missing '# stop_reason=' trailer");
    return traj;
}

namespace {

std::string px(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

std::string short_num(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

// Linear data-to-pixel mapping over a fixed pixel interval.
struct Axis {
    double lo = 0.0, hi = 1.0;
    double p0 = 0.0, p1 = 1.0;
    double map(double v) const { return p0 + (v - lo) / (hi - lo) * (p1 - p0); }
};

double nice_step(double span) {
    double raw = span / 5.0;
    double mag = std::pow(10.0, std::floor(std::log10(raw)));
    for (double m : {1.0, 2.0, 5.0, 10.0}) {
        if (raw <= m * mag * (1.0 + 1e-12)) return m * mag;
    }
    return 10.0 * mag;
}

std::vector<double> tick_values(double lo, double hi) {
    std::vector<double> out;
    double step = nice_step(hi - lo);
    double first = std::ceil(lo / step - 1e-9) * step;
    for (double v = first; v <= hi + 1e-9 * step; v += step) {
        out.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
    }
    return out;
}

void expand(double& lo, double& hi, double value) {
    lo = std::min(lo, value);
    hi = std::max(hi, value);
}

void pad_range(double& lo, double& hi, double fraction, double min_span) {
    if (hi - lo < min_span) {
        double mid = 0.5 * (lo + hi);
        lo = mid - 0.5 * min_span;
        hi = mid + 0.5 * min_span;
    }
    double pad = fraction * (hi - lo);
    lo -= pad;
    hi += pad;
}

struct SeriesSpec {
    const char* label;
    const char* color;
};

}  // namespace

void render_trajectory_svg(const Trajectory& traj, const std::string& path) {
    if (traj.samples.empty()) throw InvalidInputError("cannot render an empty trajectory");
    const auto& samples = traj.samples;

    const double width = 760.0;
    const double height = 760.0;
    // Path panel pixel rectangle (y grows downward in SVG).
    const double pl = 64.0, pr = 724.0, pt = 34.0, pb = 430.0;
    // Series panel pixel rectangle.
    const double sl = 64.0, sr = 724.0, st = 496.0, sb = 706.0;

    std::ostringstream svg;
    svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
        << height << "\" viewBox=\"0 0 " << width << " " << height << "\">\n"
        << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<g font-family=\"sans-serif\" font-size=\"12\" fill=\"#333\">\n";

    // -------- path panel --------
    double xlo = 0.0, xhi = 0.0, ylo = 0.0, yhi = 0.0;
    for (const auto& s : samples) {
        expand(xlo, xhi, s.cartesian.x);
        expand(ylo, yhi, s.cartesian.y);
    }
    pad_range(xlo, xhi, 0.08, 0.2);
    pad_range(ylo, yhi, 0.08, 0.2);
    // Equal aspect: widen the shorter span.
    {
        double pw = pr - pl, ph = pb - pt;
        double sx = (xhi - xlo) / pw, sy = (yhi - ylo) / ph;
        double scale = std::max(sx, sy);
        double cx = 0.5 * (xlo + xhi), cy = 0.5 * (ylo + yhi);
        xlo = cx - 0.5 * scale * pw;
        xhi = cx + 0.5 * scale * pw;
        ylo = cy - 0.5 * scale * ph;
        yhi = cy + 0.5 * scale * ph;
    }
    Axis ax{xlo, xhi, pl, pr};
    Axis ay{ylo, yhi, pb, pt};  // inverted: data up is pixel up

    svg << "<text x=\"" << px(pl) << "\" y=\"20\" font-size=\"14\">docking path (stop: "
        << stop_reason_name(traj.stop_reason) << ")</text>\n";
    for (double v : tick_values(xlo, xhi)) {
        double X = ax.map(v);
        svg << "<line x1=\"" << px(X) << "\" y1=\"" << px(pt) << "\" x2=\"" << px(X) << "\" y2=\""
            << px(pb) << "\" stroke=\"#e4e4e4\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px(X) << "\" y=\"" << px(pb + 16) << "\" text-anchor=\"middle\">"
            << short_num(v) << "</text>\n";
    }
    for (double v : tick_values(ylo, yhi)) {
        double Y = ay.map(v);
        svg << "<line x1=\"" << px(pl) << "\" y1=\"" << px(Y) << "\" x2=\"" << px(pr) << "\" y2=\""
            << px(Y) << "\" stroke=\"#e4e4e4\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px(pl - 8) << "\" y=\"" << px(Y + 4)
            << "\" text-anchor=\"end\">" << short_num(v) << "</text>\n";
    }
    svg << "<rect x=\"" << px(pl) << "\" y=\"" << px(pt) << "\" width=\"" << px(pr - pl)
        << "\" height=\"" << px(pb - pt) << "\" fill=\"none\" stroke=\"#888\"/>\n"
        << "<text x=\"" << px(0.5 * (pl + pr)) << "\" y=\"" << px(pb + 34)
        << "\" text-anchor=\"middle\">x [m]</text>\n"
        << "<text x=\"18\" y=\"" << px(0.5 * (pt + pb))
        << "\" text-anchor=\"middle\" transform=\"rotate(-90 18 " << px(0.5 * (pt + pb))
        << ")\">y [m]</text>\n";

    std::size_t stride = std::max<std::size_t>(1, samples.size() / 2000);
    svg << "<polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\"";
    for (std::size_t i = 0; i < samples.size(); i += stride) {
        svg << px(ax.map(samples[i].cartesian.x)) << ',' << px(ay.map(samples[i].cartesian.y))
            << ' ';
    }
    svg << px(ax.map(samples.back().cartesian.x)) << ',' << px(ay.map(samples.back().cartesian.y))
        << "\"/>\n";

    // Heading marks along the path.
    double mark_len = 0.045 * std::max(xhi - xlo, yhi - ylo);
    std::size_t mark_stride = std::max<std::size_t>(1, samples.size() / 36);
    for (std::size_t i = 0; i < samples.size(); i += mark_stride) {
        const auto& c = samples[i].cartesian;
        svg << "<line x1=\"" << px(ax.map(c.x)) << "\" y1=\"" << px(ay.map(c.y)) << "\" x2=\""
            << px(ax.map(c.x + mark_len * std::cos(c.psi))) << "\" y2=\""
            << px(ay.map(c.y + mark_len * std::sin(c.psi)))
            << "\" stroke=\"#9aa5b1\" stroke-width=\"1\"/>\n";
    }

    const auto& first = samples.front().cartesian;
    svg << "<circle cx=\"" << px(ax.map(first.x)) << "\" cy=\"" << px(ay.map(first.y))
        << "\" r=\"4\" fill=\"#2ca02c\"/>\n"
        << "<text x=\"" << px(ax.map(first.x) + 8) << "\" y=\"" << px(ay.map(first.y) - 6)
        << "\">start</text>\n";
    double gx = ax.map(0.0), gy = ay.map(0.0);
    svg << "<line x1=\"" << px(gx - 6) << "\" y1=\"" << px(gy - 6) << "\" x2=\"" << px(gx + 6)
        << "\" y2=\"" << px(gy + 6) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
        << "<line x1=\"" << px(gx - 6) << "\" y1=\"" << px(gy + 6) << "\" x2=\"" << px(gx + 6)
        << "\" y2=\"" << px(gy - 6) << "\" stroke=\"#d62728\" stroke-width=\"2\"/>\n"
        << "<text x=\"" << px(gx + 8) << "\" y=\"" << px(gy + 16) << "\">goal</text>\n";

    // -------- series panel --------
    const SeriesSpec specs[] = {{"e [m]", "#1f77b4"},
                                {"theta1 [rad]", "#d62728"},
                                {"theta2 [rad]", "#2ca02c"},
                                {"phi [rad]", "#9467bd"}};
    auto series_value = [](const TrajectorySample& s, int k) {
        switch (k) {
            case 0: return s.polar.e;
            case 1: return s.polar.theta1;
            case 2: return s.polar.theta2;
            default: return s.polar.phi;
        }
    };

    double tlo = samples.front().t, thi = samples.back().t;
    if (thi - tlo < 1e-9) thi = tlo + 1.0;
    double vlo = 0.0, vhi = 0.0;
    for (const auto& s : samples) {
        for (int k = 0; k < 4; ++k) expand(vlo, vhi, series_value(s, k));
    }
    pad_range(vlo, vhi, 0.08, 0.2);
    Axis at{tlo, thi, sl, sr};
    Axis av{vlo, vhi, sb, st};

    svg << "<text x=\"" << px(sl) << "\" y=\"" << px(st - 22)
        << "\" font-size=\"14\">state variables</text>\n";
    for (double v : tick_values(tlo, thi)) {
        double X = at.map(v);
        svg << "<line x1=\"" << px(X) << "\" y1=\"" << px(st) << "\" x2=\"" << px(X) << "\" y2=\""
            << px(sb) << "\" stroke=\"#e4e4e4\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px(X) << "\" y=\"" << px(sb + 16) << "\" text-anchor=\"middle\">"
            << short_num(v) << "</text>\n";
    }
    for (double v : tick_values(vlo, vhi)) {
        double Y = av.map(v);
        const char* color = (v == 0.0) ? "#bbbbbb" : "#e4e4e4";
        svg << "<line x1=\"" << px(sl) << "\" y1=\"" << px(Y) << "\" x2=\"" << px(sr) << "\" y2=\""
            << px(Y) << "\" stroke=\"" << color << "\" stroke-width=\"1\"/>\n"
            << "<text x=\"" << px(sl - 8) << "\" y=\"" << px(Y + 4)
            << "\" text-anchor=\"end\">" << short_num(v) << "</text>\n";
    }
    svg << "<rect x=\"" << px(sl) << "\" y=\"" << px(st) << "\" width=\"" << px(sr - sl)
        << "\" height=\"" << px(sb - st) << "\" fill=\"none\" stroke=\"#888\"/>\n"
        << "<text x=\"" << px(0.5 * (sl + sr)) << "\" y=\"" << px(sb + 34)
        << "\" text-anchor=\"middle\">t [s]</text>\n";

    double legend_x = sl;
    for (const auto& spec : specs) {
        svg << "<text x=\"" << px(legend_x) << "\" y=\"" << px(st - 6) << "\" fill=\"" << spec.color
            << "\">" << spec.label << "</text>\n";
        legend_x += 110.0;
    }
    for (int k = 0; k < 4; ++k) {
        svg << "<polyline fill=\"none\" stroke=\"" << specs[k].color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < samples.size(); i += stride) {
            svg << px(at.map(samples[i].t)) << ',' << px(av.map(series_value(samples[i], k)))
                << ' ';
        }
        svg << px(at.map(samples.back().t)) << ','
            << px(av.map(series_value(samples.back(), k))) << "\"/>\n";
    }

    svg << "</g>\n</svg>\n";

    std::ofstream file(path, std::ios::binary);
    if (!file) throw IoError("cannot open for writing: " + path);
    file << svg.str();
    file.flush();
    if (!file) throw IoError("failed while writing: " + path);
}

}  // namespace artipark
