#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "unileak/analysis.hpp"
#include "unileak/metrics.hpp"

namespace unileak::svg {

struct Series {
  std::string label;
  std::string color = "#1f77b4";
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

enum class MarkerShape { circle, triangle };

struct Marker {
  double x = 0.0;
  MarkerShape shape = MarkerShape::circle;
  std::string color = "#d62728";
};

struct Panel {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  std::vector<Marker> markers;
  std::optional<std::pair<double, double>> x_range;
};

/// Panels stacked vertically in one document. Long series are reduced to a
/// min/max envelope per pixel column before drawing.
std::string render(const std::vector<Panel>& panels, int width = 900, int panel_height = 260);

/// Field (Re, Im, |E|), optional |U_ij| traces from snapshots, sqrt(J) and C.
std::string field_and_objective(const Trajectory& traj, const CMatrix& p_r);

/// |E~(w)| around the one-photon band with circles at one-photon lines, and the
/// intensity spectrum with triangles at two-photon lines.
std::string spectra(const SpectrumReport& report);

/// Register elements as vectors in the complex plane, one panel per snapshot.
std::string compass(const std::vector<Snapshot>& snapshots, const CMatrix& p_r);

}  // namespace unileak::svg
