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

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "gaitcloud/balance/cop.hpp"
#include "gaitcloud/core/layout.hpp"
#include "gaitcloud/core/types.hpp"

namespace gaitcloud::balance {

enum class HeatmapKind : std::uint8_t { PlantarPressure, CopOccupancy };

struct Bounds {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;
};

struct GridConfig {
  std::size_t width = 0;
  std::size_t height = 0;
  double sigma_mm = 0.0;
  double margin_mm = 0.0;
  std::optional<Bounds> bounds;  // derived from the data when empty

  static GridConfig plantar() { return {32, 96, 10.0, 0.0, std::nullopt}; }
  static GridConfig occupancy() { return {64, 64, 3.0, 10.0, std::nullopt}; }
};

// Row-major grid; row iy spans y in [origin_y + iy*cell_h, ... + cell_h).
struct Heatmap {
  HeatmapKind kind = HeatmapKind::PlantarPressure;
  std::size_t width = 0;
  std::size_t height = 0;
  double origin_x = 0.0;
  double origin_y = 0.0;
  double cell_w = 0.0;
  double cell_h = 0.0;
  std::vector<double> cells;

  double at(std::size_t ix, std::size_t iy) const { return cells[iy * width + ix]; }
  double center_x(std::size_t ix) const { return origin_x + (static_cast<double>(ix) + 0.5) * cell_w; }
  double center_y(std::size_t iy) const { return origin_y + (static_cast<double>(iy) + 0.5) * cell_h; }
  // Cell containing (x, y), clamped to the grid.
  std::pair<std::size_t, std::size_t> cell_of(double x, double y) const;
  std::pair<std::size_t, std::size_t> argmax() const;
  double max() const;
};

// Divides by the maximum cell unless every cell is zero.
void max_normalize(std::vector<double>& cells);

// Gaussian splat of per-sensor mean pressures, evaluated at cell centres.
Heatmap splat_sensors(const std::array<double, kPressureChannels>& intensity,
                      const SensorLayout& layout, const GridConfig& cfg = GridConfig::plantar());

// Time-averaged plantar pressure of one foot. Default grid covers the insole
// outline [-60, 60] x [0, length]. Throws EmptySession.
Heatmap plantar_heatmap(const Session& session, FootSide foot, const SensorLayout& layout,
                        const GridConfig& cfg = GridConfig::plantar());

// 2D histogram of COP positions, Gaussian-smoothed and max-normalized.
// Throws NoData.
Heatmap cop_occupancy_heatmap(std::span<const CopPoint> cops,
                              const GridConfig& cfg = GridConfig::occupancy());

}  // namespace gaitcloud::balance
