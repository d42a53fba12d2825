#include "unileak/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>

namespace unileak::svg {

namespace {

constexpr int kMarginLeft = 70;
constexpr int kMarginRight = 20;
constexpr int kMarginTop = 28;
constexpr int kMarginBottom = 42;

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Box {
  double x0, y0, w, h;        // pixel frame
  double xmin, xmax, ymin, ymax;
  double px(double x) const { return x0 + (x - xmin) / (xmax - xmin) * w; }
  double py(double y) const { return y0 + h - (y - ymin) / (ymax - ymin) * h; }
};

// Min/max envelope per pixel column so millions of samples stay drawable.
std::vector<std::pair<double, double>> reduce(const Series& s, const Box& box) {
  std::vector<std::pair<double, double>> pts;
  const std::size_t n = std::min(s.x.size(), s.y.size());
  const auto columns = static_cast<std::size_t>(std::max(1.0, box.w));
  if (n <= 4 * columns) {
    for (std::size_t k = 0; k < n; ++k) {
      if (s.x[k] < box.xmin || s.x[k] > box.xmax || !std::isfinite(s.y[k])) continue;
      pts.emplace_back(s.x[k], s.y[k]);
    }
    return pts;
  }
  std::size_t k = 0;
  for (std::size_t col = 0; col < columns; ++col) {
    const double hi = box.xmin + (box.xmax - box.xmin) * static_cast<double>(col + 1) /
                                     static_cast<double>(columns);
    double lo_y = std::numeric_limits<double>::infinity();
    double hi_y = -lo_y;
    double lo_x = 0.0, hi_x = 0.0;
    bool any = false;
    for (; k < n && s.x[k] <= hi; ++k) {
      if (s.x[k] < box.xmin || !std::isfinite(s.y[k])) continue;
      any = true;
      if (s.y[k] < lo_y) { lo_y = s.y[k]; lo_x = s.x[k]; }
      if (s.y[k] > hi_y) { hi_y = s.y[k]; hi_x = s.x[k]; }
    }
    if (!any) continue;
    if (lo_x <= hi_x) {
      pts.emplace_back(lo_x, lo_y);
      pts.emplace_back(hi_x, hi_y);
    } else {
      pts.emplace_back(hi_x, hi_y);
      pts.emplace_back(lo_x, lo_y);
    }
  }
  return pts;
}

void draw_panel(std::ostringstream& out, const Panel& p, double top, int width, int height) {
  double xmin = std::numeric_limits<double>::infinity(), xmax = -xmin;
  if (p.x_range) {
    xmin = p.x_range->first;
    xmax = p.x_range->second;
  } else {
    for (const auto& s : p.series) {
      for (double x : s.x) {
        xmin = std::min(xmin, x);
        xmax = std::max(xmax, x);
      }
    }
  }
  if (!std::isfinite(xmin) || !(xmax > xmin)) { xmin = 0.0; xmax = 1.0; }

  double ymin = std::numeric_limits<double>::infinity(), ymax = -ymin;
  for (const auto& s : p.series) {
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (s.x[k] < xmin || s.x[k] > xmax || !std::isfinite(s.y[k])) continue;
      ymin = std::min(ymin, s.y[k]);
      ymax = std::max(ymax, s.y[k]);
    }
  }
  if (!std::isfinite(ymin)) { ymin = 0.0; ymax = 1.0; }
  if (!(ymax > ymin)) { ymin -= 0.5; ymax += 0.5; }
  const double pad = 0.05 * (ymax - ymin);
  ymin -= pad;
  ymax += pad;

  const Box box{kMarginLeft, top + kMarginTop, double(width - kMarginLeft - kMarginRight),
                double(height - kMarginTop - kMarginBottom), xmin, xmax, ymin, ymax};

  out << "<rect x=\"" << num(box.x0) << "\" y=\"" << num(box.y0) << "\" width=\"" << num(box.w)
      << "\" height=\"" << num(box.h) << "\" fill=\"none\" stroke=\"#444\"/>\n";
  out << "<text x=\"" << num(box.x0) << "\" y=\"" << num(top + 18)
      << "\" font-size=\"14\" font-family=\"sans-serif\">" << escape(p.title) << "</text>\n";
  for (int i = 0; i <= 4; ++i) {
    const double xv = xmin + (xmax - xmin) * i / 4.0;
    const double yv = ymin + (ymax - ymin) * i / 4.0;
    out << "<text x=\"" << num(box.px(xv)) << "\" y=\"" << num(box.y0 + box.h + 14)
        << "\" font-size=\"10\" text-anchor=\"middle\" font-family=\"sans-serif\">"
        << tick_label(xv) << "</text>\n";
    out << "<text x=\"" << num(box.x0 - 4) << "\" y=\"" << num(box.py(yv) + 3)
        << "\" font-size=\"10\" text-anchor=\"end\" font-family=\"sans-serif\">"
        << tick_label(yv) << "</text>\n";
  }
  out << "<text x=\"" << num(box.x0 + box.w / 2) << "\" y=\"" << num(box.y0 + box.h + 32)
      << "\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape(p.x_label) << "</text>\n";
  out << "<text transform=\"translate(" << num(16) << "," << num(box.y0 + box.h / 2)
      << ") rotate(-90)\" font-size=\"12\" text-anchor=\"middle\" font-family=\"sans-serif\">"
      << escape(p.y_label) << "</text>\n";

  double legend_y = box.y0 + 14;
  for (const auto& s : p.series) {
    const auto pts = reduce(s, box);
    if (!pts.empty()) {
      out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1\"";
      if (s.dashed) out << " stroke-dasharray=\"6,4\"";
      out << " points=\"";
      for (const auto& [x, y] : pts) out << num(box.px(x)) << ',' << num(box.py(y)) << ' ';
      out << "\"/>\n";
    }
    if (!s.label.empty()) {
      out << "<text x=\"" << num(box.x0 + box.w - 6) << "\" y=\"" << num(legend_y)
          << "\" font-size=\"11\" text-anchor=\"end\" fill=\"" << s.color
          << "\" font-family=\"sans-serif\">" << escape(s.label) << "</text>\n";
      legend_y += 14;
    }
  }

  const double marker_y = box.y0 + box.h - 8;
  for (const auto& m : p.markers) {
    if (m.x < xmin || m.x > xmax) continue;
    const double x = box.px(m.x);
    if (m.shape == MarkerShape::circle) {
      out << "<circle cx=\"" << num(x) << "\" cy=\"" << num(marker_y)
          << "\" r=\"4\" fill=\"none\" stroke=\"" << m.color << "\" stroke-width=\"1.5\"/>\n";
    } else {
      out << "<polygon points=\"" << num(x) << ',' << num(marker_y - 5) << ' ' << num(x - 5)
          << ',' << num(marker_y + 4) << ' ' << num(x + 5) << ',' << num(marker_y + 4)
          << "\" fill=\"none\" stroke=\"" << m.color << "\" stroke-width=\"1.5\"/>\n";
    }
  }
}

std::string header(int width, int height) {
  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  return out.str();
}

const char* kPalette[] = {"#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd", "#8c564b",
                          "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"};

}  // namespace

std::string render(const std::vector<Panel>& panels, int width, int panel_height) {
  const int height = panel_height * std::max<int>(1, static_cast<int>(panels.size()));
  std::ostringstream out;
  out << header(width, height);
  for (std::size_t i = 0; i < panels.size(); ++i) {
    draw_panel(out, panels[i], static_cast<double>(i) * panel_height, width, panel_height);
  }
  out << "</svg>\n";
  return out.str();
}

std::string field_and_objective(const Trajectory& traj, const CMatrix& p_r) {
  std::vector<Panel> panels;

  Panel field{"Control field", "t", "E(t)", {}, {}, std::nullopt};
  Series re{"Re E", "#1f77b4", traj.times, {}, false};
  Series im{"Im E", "#ff7f0e", traj.times, {}, false};
  for (const auto& e : traj.fields) {
    re.y.push_back(e.real());
    im.y.push_back(e.imag());
  }
  field.series = {std::move(re), std::move(im)};
  panels.push_back(std::move(field));

  if (traj.snapshots.size() >= 2) {
    Panel elems{"Register propagator elements", "t", "|U_ij|", {}, {}, std::nullopt};
    const auto first = snapshot_export(traj.snapshots.front().u, p_r);
    for (std::size_t k = 0; k < first.size(); ++k) {
      Series s{"", kPalette[k % 10], {}, {}, false};
      for (const auto& snap : traj.snapshots) {
        const auto entries = snapshot_export(snap.u, p_r);
        s.x.push_back(snap.t);
        s.y.push_back(std::hypot(entries[k].re, entries[k].im));
      }
      elems.series.push_back(std::move(s));
    }
    panels.push_back(std::move(elems));
  }

  Panel obj{"Objective and constraint", "t", "sqrt(J), C", {}, {}, std::nullopt};
  Series sj{"sqrt(J)", "#2ca02c", traj.times, {}, false};
  Series sc{"C", "#9467bd", traj.times, {}, true};
  for (std::size_t k = 0; k < traj.size(); ++k) {
    sj.y.push_back(std::sqrt(std::max(0.0, traj.j_vals[k])));
    sc.y.push_back(traj.c_vals[k]);
  }
  sj.x.push_back(traj.final_state.t);
  sj.y.push_back(std::sqrt(std::max(0.0, traj.final_state.j)));
  sc.x.push_back(traj.final_state.t);
  sc.y.push_back(traj.final_state.c);
  obj.series = {std::move(sj), std::move(sc)};
  panels.push_back(std::move(obj));

  return render(panels);
}

std::string spectra(const SpectrumReport& report) {
  Panel top{"Field spectrum |E(w)|, one-photon lines (circles)", "w", "|E(w)|", {}, {}, {}};
  Panel bottom{"Intensity spectrum, two-photon lines (triangles)", "w", "||E|^2(w)|", {}, {}, {}};

  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  for (const auto& c : report.one_photon_dips) {
    lo = std::min(lo, c.transition.frequency);
    hi = std::max(hi, c.transition.frequency);
    top.markers.push_back({c.transition.frequency, MarkerShape::circle, "#d62728"});
  }
  if (std::isfinite(lo)) {
    const double margin = std::max(0.25 * (hi - lo), 20.0 * report.resolution);
    top.x_range = std::make_pair(lo - margin, hi + margin);
  }
  top.series.push_back({"", "#1f77b4", report.freqs, report.field_amp, false});

  double peak_hi = 0.0;
  for (const auto& c : report.two_photon_peaks) {
    peak_hi = std::max(peak_hi, c.transition.frequency);
    bottom.markers.push_back({c.transition.frequency, MarkerShape::triangle, "#2ca02c"});
  }
  // Skip the w = 0 bin (mean intensity) so the lines stay visible.
  const double start = report.resolution * 0.5;
  bottom.x_range = std::make_pair(start, peak_hi > 0.0 ? 1.2 * peak_hi : 1.0);
  bottom.series.push_back({"", "#1f77b4", report.intensity_freqs, report.intensity_amp, false});

  return render({top, bottom});
}

std::string compass(const std::vector<Snapshot>& snapshots, const CMatrix& p_r) {
  const int cell = 300;
  const int width = cell * std::max<int>(1, static_cast<int>(snapshots.size()));
  std::ostringstream out;
  out << header(width, cell + 30);
  for (std::size_t s = 0; s < snapshots.size(); ++s) {
    const double cx = cell * (static_cast<double>(s) + 0.5);
    const double cy = cell * 0.5 + 20;
    const double r = cell * 0.4;
    out << "<text x=\"" << num(cx) << "\" y=\"16\" font-size=\"13\" text-anchor=\"middle\" "
           "font-family=\"sans-serif\">t = "
        << tick_label(snapshots[s].t) << "</text>\n";
    out << "<circle cx=\"" << num(cx) << "\" cy=\"" << num(cy) << "\" r=\"" << num(r)
        << "\" fill=\"none\" stroke=\"#bbb\"/>\n";
    out << "<line x1=\"" << num(cx - r) << "\" y1=\"" << num(cy) << "\" x2=\"" << num(cx + r)
        << "\" y2=\"" << num(cy) << "\" stroke=\"#ddd\"/>\n";
    out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy - r) << "\" x2=\"" << num(cx)
        << "\" y2=\"" << num(cy + r) << "\" stroke=\"#ddd\"/>\n";
    const auto entries = snapshot_export(snapshots[s].u, p_r);
    for (const auto& e : entries) {
      const std::string color = kPalette[static_cast<std::size_t>(e.row) % 10];
      out << "<line x1=\"" << num(cx) << "\" y1=\"" << num(cy) << "\" x2=\""
          << num(cx + r * e.re) << "\" y2=\"" << num(cy - r * e.im) << "\" stroke=\"" << color
          << "\" stroke-width=\"1.2\"/>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

}  // namespace unileak::svg
