/*
 * Copyright 2026 The gaitcloud Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "gaitcloud/balance/heatmap.hpp"

#include <algorithm>
#include <cmath>

#include "gaitcloud/error.hpp"

namespace gaitcloud::balance {
namespace {

Heatmap make_grid(HeatmapKind kind, const GridConfig& cfg, const Bounds& b) {
  if (cfg.width == 0 || cfg.height == 0) throw Error(ErrorCode::InvalidParams, "empty grid");
  Heatmap h;
  h.kind = kind;
  h.width = cfg.width;
  h.height = cfg.height;
  h.origin_x = b.x_min;
  h.origin_y = b.y_min;
  h.cell_w = (b.x_max - b.x_min) / static_cast<double>(cfg.width);
  h.cell_h = (b.y_max - b.y_min) / static_cast<double>(cfg.height);
  h.cells.assign(cfg.width * cfg.height, 0.0);
  return h;
}

std::vector<double> gaussian_kernel(double sigma_cells) {
  const int radius = std::max(1, static_cast<int>(std::ceil(4.0 * sigma_cells)));
  std::vector<double> k(2 * radius + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    const double v = std::exp(-0.5 * (i * i) / (sigma_cells * sigma_cells));
    k[i + radius] = v;
    sum += v;
  }
  for (auto& v : k) v /= sum;
  return k;
}

// Separable convolution, zero padding.
void smooth(Heatmap& h, double sigma_mm) {
  if (sigma_mm <= 0.0) return;
  const auto kx = gaussian_kernel(sigma_mm / h.cell_w);
  const auto ky = gaussian_kernel(sigma_mm / h.cell_h);
  const int rx = static_cast<int>(kx.size() / 2);
  const int ry = static_cast<int>(ky.size() / 2);
  const int w = static_cast<int>(h.width);
  const int ht = static_cast<int>(h.height);
  std::vector<double> tmp(h.cells.size(), 0.0);
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int d = -rx; d <= rx; ++d) {
        const int xx = x + d;
        if (xx >= 0 && xx < w) acc += kx[d + rx] * h.cells[y * w + xx];
      }
      tmp[y * w + x] = acc;
    }
  }
  for (int y = 0; y < ht; ++y) {
    for (int x = 0; x < w; ++x) {
      double acc = 0.0;
      for (int d = -ry; d <= ry; ++d) {
        const int yy = y + d;
        if (yy >= 0 && yy < ht) acc += ky[d + ry] * tmp[yy * w + x];
      }
      h.cells[y * w + x] = acc;
    }
  }
}

}  // namespace

std::pair<std::size_t, std::size_t> Heatmap::cell_of(double x, double y) const {
  const auto ix = static_cast<long>(std::floor((x - origin_x) / cell_w));
  const auto iy = static_cast<long>(std::floor((y - origin_y) / cell_h));
  return {static_cast<std::size_t>(std::clamp<long>(ix, 0, static_cast<long>(width) - 1)),
          static_cast<std::size_t>(std::clamp<long>(iy, 0, static_cast<long>(height) - 1))};
}

std::pair<std::size_t, std::size_t> Heatmap::argmax() const {
  const auto it = std::max_element(cells.begin(), cells.end());
  const auto idx = static_cast<std::size_t>(it - cells.begin());
  return {idx % width, idx / width};
}

double Heatmap::max() const {
  return cells.empty() ? 0.0 : *std::max_element(cells.begin(), cells.end());
}

void max_normalize(std::vector<double>& cells) {
  const double peak = cells.empty() ? 0.0 : *std::max_element(cells.begin(), cells.end());
  if (peak <= 0.0) return;
  for (auto& c : cells) c /= peak;
}

Heatmap splat_sensors(const std::array<double, kPressureChannels>& intensity,
                      const SensorLayout& layout, const GridConfig& cfg) {
  const Bounds b = cfg.bounds.value_or(Bounds{-60.0, 0.0, 60.0, layout.length_mm});
  Heatmap h = make_grid(HeatmapKind::PlantarPressure, cfg, b);
  const double inv2s2 = 1.0 / (2.0 * cfg.sigma_mm * cfg.sigma_mm);
  for (std::size_t iy = 0; iy < h.height; ++iy) {
    const double cy = h.center_y(iy);
    for (std::size_t ix = 0; ix < h.width; ++ix) {
      const double cx = h.center_x(ix);
      double acc = 0.0;
      for (std::size_t s = 0; s < kPressureChannels; ++s) {
        if (intensity[s] == 0.0) continue;
        const double dx = cx - layout.positions[s].x;
        const double dy = cy - layout.positions[s].y;
        acc += intensity[s] * std::exp(-(dx * dx + dy * dy) * inv2s2);
      }
      h.cells[iy * h.width + ix] = acc;
    }
  }
  max_normalize(h.cells);
  return h;
}

Heatmap plantar_heatmap(const Session& session, FootSide foot, const SensorLayout& layout,
                        const GridConfig& cfg) {
  std::array<double, kPressureChannels> sum{};
  std::size_t n = 0;
  for (const auto& seg : session.segments(foot)) {
    for (const auto& f : seg.frames) {
      for (std::size_t s = 0; s < kPressureChannels; ++s) sum[s] += f.pressure[s];
      ++n;
    }
  }
  if (n == 0) {
    throw Error(ErrorCode::EmptySession,
                "no " + std::string(to_string(foot)) + " frames in session " + session.session_id);
  }
  for (auto& v : sum) v /= static_cast<double>(n);
  return splat_sensors(sum, layout, cfg);
}

Heatmap cop_occupancy_heatmap(std::span<const CopPoint> cops, const GridConfig& cfg) {
  if (cops.empty()) throw Error(ErrorCode::NoData, "no COP points");
  Bounds b;
  if (cfg.bounds) {
    b = *cfg.bounds;
  } else {
    b = {cops[0].x_mm, cops[0].y_mm, cops[0].x_mm, cops[0].y_mm};
    for (const auto& c : cops) {
      b.x_min = std::min(b.x_min, c.x_mm);
      b.x_max = std::max(b.x_max, c.x_mm);
      b.y_min = std::min(b.y_min, c.y_mm);
      b.y_max = std::max(b.y_max, c.y_mm);
    }
    b.x_min -= cfg.margin_mm;
    b.y_min -= cfg.margin_mm;
    b.x_max += cfg.margin_mm;
    b.y_max += cfg.margin_mm;
  }
  if (!(b.x_max > b.x_min) || !(b.y_max > b.y_min)) {
    throw Error(ErrorCode::InvalidParams, "degenerate heatmap bounds");
  }
  Heatmap h = make_grid(HeatmapKind::CopOccupancy, cfg, b);
  for (const auto& c : cops) {
    const auto [ix, iy] = h.cell_of(c.x_mm, c.y_mm);
    h.cells[iy * h.width + ix] += 1.0;
  }
  smooth(h, cfg.sigma_mm);
  max_normalize(h.cells);
  return h;
}

}  // namespace gaitcloud::balance
