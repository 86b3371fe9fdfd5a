// Copyright 2026 The lasiq authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace lasiq {

/// f01 = a * r_n^p with residual spread sigma_f (MHz). p < 0, a > 0.
struct PowerLawModel {
    double a = 0.0;            // MHz * Ohm^-p
    double p = 0.0;            // dimensionless, near -0.5
    double sigma_f_mhz = 0.0;  // residual standard deviation

    void validate() const;
};

struct FitStats {
    std::vector<std::pair<int, double>> residuals;  // (qubit id, f - fit) MHz
    double sigma_f_mhz = 0.0;
    double mean_f_mhz = 0.0;
};

class SingularFitError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Least-squares fit of log f = log a + p log R. Residuals and sigma_f are
/// reported in linear frequency space (MHz). Points are (r_n Ohm, f01 MHz);
/// ids label residuals and default to the point index. Set pin_exponent to
/// fix p = -0.5 and fit the prefactor only.
std::pair<PowerLawModel, FitStats> fit_power_law(
    const std::vector<std::pair<double, double>>& points,
    const std::vector<int>* ids = nullptr, bool pin_exponent = false);

/// a * r_n^p. Strictly decreasing in r_n.
double predict_f01(const PowerLawModel& model, double r_n_ohm);

/// Exact inverse of predict_f01.
double predict_rn(const PowerLawModel& model, double f01_mhz);

/// |p| * f01(r_n) * sigma_r_rel: the frequency-equivalent of a relative
/// resistance error sigma_r_rel at operating point r_n.
double freq_sensitivity(const PowerLawModel& model, double r_n_ohm, double sigma_r_rel);

}  // namespace lasiq
