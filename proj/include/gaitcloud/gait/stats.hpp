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

#include <span>

namespace gaitcloud::gait {

double mean(std::span<const double> xs);
// Sample standard deviation (n - 1); 0 for fewer than two values.
double sample_std(std::span<const double> xs);

struct FiveNumber {
  double min = 0.0;
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
  double max = 0.0;
};

// Quartiles by linear interpolation between order statistics.
FiveNumber five_number_summary(std::span<const double> xs);

// I_x(a, b), continued-fraction evaluation (modified Lentz).
double regularized_incomplete_beta(double a, double b, double x);

// Two-sided P(|T| >= |t|) for Student's t with `df` degrees of freedom.
double student_t_two_sided_p(double t, double df);

// Two-sided Welch t-test. Throws InsufficientData when either sample has
// fewer than two values. If both samples have zero variance the p-value is
// 1 when their means agree and 0 otherwise.
double welch_t_test(std::span<const double> a, std::span<const double> b);

}  // namespace gaitcloud::gait
