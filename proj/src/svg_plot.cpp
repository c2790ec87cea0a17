#include "banditreg/svg_plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace banditreg {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kLeft = 70.0;
constexpr double kRight = 20.0;
constexpr double kTop = 20.0;
constexpr double kBottom = 45.0;

struct Frame {
    double x_min, x_max, y_min, y_max;

    double px(double x) const {
        return kLeft + (x - x_min) / (x_max - x_min) * (kWidth - kLeft - kRight);
    }
    double py(double y) const {
        return kHeight - kBottom - (y - y_min) / (y_max - y_min) * (kHeight - kTop - kBottom);
    }
};

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

std::string polyline_points(const Frame& f, const Vector& xs, const Vector& ys) {
    std::ostringstream out;
    for (Index i = 0; i < xs.size(); ++i) {
        if (i) out << ' ';
        out << num(f.px(xs[i])) << ',' << num(f.py(ys[i]));
    }
    return out.str();
}

void open_svg(std::ostream& out) {
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\""
        << kHeight << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
        << "  <rect width=\"" << kWidth << "\" height=\"" << kHeight
        << "\" fill=\"white\"/>\n";
}

void write_axes(std::ostream& out, const Frame& f, const std::string& x_label,
                const std::string& y_label, const std::string& y_max_id) {
    const double x0 = f.px(f.x_min), x1 = f.px(f.x_max);
    const double y0 = f.py(f.y_min), y1 = f.py(f.y_max);
    out << "  <g stroke=\"black\" stroke-width=\"1\">\n"
        << "    <line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x1)
        << "\" y2=\"" << num(y0) << "\"/>\n"
        << "    <line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\"" << num(x0)
        << "\" y2=\"" << num(y1) << "\"/>\n"
        << "  </g>\n"
        << "  <g font-family=\"sans-serif\" font-size=\"12\" fill=\"black\">\n"
        << "    <text x=\"" << num(x0) << "\" y=\"" << num(y0 + 16) << "\">" << num(f.x_min)
        << "</text>\n"
        << "    <text x=\"" << num(x1 - 30) << "\" y=\"" << num(y0 + 16) << "\">"
        << num(f.x_max) << "</text>\n"
        << "    <text x=\"" << num(x0 - 60) << "\" y=\"" << num(y0) << "\">" << num(f.y_min)
        << "</text>\n"
        << "    <text id=\"" << y_max_id << "\" x=\"" << num(x0 - 60) << "\" y=\""
        << num(y1 + 4) << "\">" << num(f.y_max) << "</text>\n"
        << "    <text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(kHeight - 8) << "\">"
        << x_label << "</text>\n"
        << "    <text x=\"8\" y=\"" << num(kTop + 10) << "\">" << y_label << "</text>\n"
        << "  </g>\n";
}

void pad_if_flat(double& lo, double& hi) {
    if (hi - lo < 1e-12) {
        lo -= 0.5;
        hi += 0.5;
    }
}

} // namespace

void write_prediction_svg(const std::string& path, const EvalTable& table, double train_lo,
                          double train_hi) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_prediction_svg: cannot open " + path);

    Frame f{table.xs.minCoeff(), table.xs.maxCoeff(),
            std::min(table.y_true.minCoeff(), table.y_pred.minCoeff()),
            std::max(table.y_true.maxCoeff(), table.y_pred.maxCoeff())};
    pad_if_flat(f.y_min, f.y_max);

    open_svg(out);
    // Training range shading, clipped to the plotted x extent.
    const double shade_lo = std::max(train_lo, f.x_min);
    const double shade_hi = std::min(train_hi, f.x_max);
    if (shade_lo < shade_hi) {
        out << "  <rect x=\"" << num(f.px(shade_lo)) << "\" y=\"" << num(kTop) << "\" width=\""
            << num(f.px(shade_hi) - f.px(shade_lo)) << "\" height=\""
            << num(kHeight - kTop - kBottom) << "\" fill=\"#dcebf7\"/>\n";
    }
    write_axes(out, f, "x", "y", "y-max");
    out << "  <polyline fill=\"none\" stroke=\"#202020\" stroke-width=\"1.5\" points=\""
        << polyline_points(f, table.xs, table.y_true) << "\"/>\n";
    out << "  <polyline fill=\"none\" stroke=\"#d62728\" stroke-width=\"1.5\" points=\""
        << polyline_points(f, table.xs, table.y_pred) << "\"/>\n";
    out << "  <g font-family=\"sans-serif\" font-size=\"12\">\n"
        << "    <text x=\"" << num(kWidth - 150) << "\" y=\"" << num(kTop + 14)
        << "\" fill=\"#202020\">y_true</text>\n"
        << "    <text x=\"" << num(kWidth - 150) << "\" y=\"" << num(kTop + 30)
        << "\" fill=\"#d62728\">y_pred</text>\n"
        << "  </g>\n";
    out << "</svg>\n";
}

void write_error_svg(const std::string& path, const EvalTable& table) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_error_svg: cannot open " + path);

    Frame f{table.xs.minCoeff(), table.xs.maxCoeff(), 0.0, table.abs_err.maxCoeff()};
    pad_if_flat(f.y_min, f.y_max);

    open_svg(out);
    write_axes(out, f, "x", "abs_err", "y-max");
    out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\""
        << polyline_points(f, table.xs, table.abs_err) << "\"/>\n";
    out << "</svg>\n";
}

void write_losses_svg(const std::string& path, const std::vector<MetricsRow>& metrics) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_losses_svg: cannot open " + path);
    if (metrics.empty()) throw std::runtime_error("write_losses_svg: no metric rows");

    Vector epochs(metrics.size()), critic(metrics.size()), actor(metrics.size());
    for (std::size_t i = 0; i < metrics.size(); ++i) {
        epochs[static_cast<Index>(i)] = metrics[i].epoch;
        critic[static_cast<Index>(i)] = metrics[i].critic_loss;
        actor[static_cast<Index>(i)] = metrics[i].actor_loss;
    }

    Frame f{epochs.minCoeff(), std::max(epochs.maxCoeff(), epochs.minCoeff() + 1.0),
            std::min(critic.minCoeff(), actor.minCoeff()),
            std::max(critic.maxCoeff(), actor.maxCoeff())};
    pad_if_flat(f.y_min, f.y_max);

    open_svg(out);
    write_axes(out, f, "epoch", "loss", "y-max");
    out << "  <polyline fill=\"none\" stroke=\"#1f77b4\" stroke-width=\"1.5\" points=\""
        << polyline_points(f, epochs, critic) << "\"/>\n";
    out << "  <polyline fill=\"none\" stroke=\"#ff7f0e\" stroke-width=\"1.5\" points=\""
        << polyline_points(f, epochs, actor) << "\"/>\n";
    out << "  <g font-family=\"sans-serif\" font-size=\"12\">\n"
        << "    <text x=\"" << num(kWidth - 160) << "\" y=\"" << num(kTop + 14)
        << "\" fill=\"#1f77b4\">critic_loss</text>\n"
        << "    <text x=\"" << num(kWidth - 160) << "\" y=\"" << num(kTop + 30)
        << "\" fill=\"#ff7f0e\">actor_loss</text>\n"
        << "  </g>\n";
    out << "</svg>\n";
}

} // namespace banditreg
