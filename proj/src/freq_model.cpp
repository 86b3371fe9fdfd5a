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

#include "lasiq/freq_model.hpp"

#include <cmath>

namespace lasiq {

void PowerLawModel::validate() const {
    if (!(a > 0)) throw std::invalid_argument("power law prefactor a must be positive");
    if (!(p < 0)) throw std::invalid_argument("power law exponent p must be negative");
    if (sigma_f_mhz < 0) throw std::invalid_argument("sigma_f must be >= 0");
}

std::pair<PowerLawModel, FitStats> fit_power_law(
    const std::vector<std::pair<double, double>>& points, const std::vector<int>* ids,
    bool pin_exponent) {
    const std::size_t n = points.size();
    if (n < 2) throw std::invalid_argument("power-law fit needs at least 2 points");
    if (ids && ids->size() != n)
        throw std::invalid_argument("id list length does not match point count");
    for (const auto& [r, f] : points)
        if (!(r > 0) || !(f > 0))
            throw std::invalid_argument("power-law fit requires positive (r_n, f01)");

    double sx = 0, sy = 0;
    for (const auto& [r, f] : points) {
        sx += std::log(r);
        sy += std::log(f);
    }
    const double mx = sx / n, my = sy / n;
    double sxx = 0, sxy = 0;
    for (const auto& [r, f] : points) {
        const double dx = std::log(r) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(f) - my);
    }

    PowerLawModel model;
    if (pin_exponent) {
        model.p = -0.5;
        model.a = std::exp(my - model.p * mx);
    } else {
        if (sxx <= 0)
            throw SingularFitError("all resistances identical; power-law fit is singular");
        model.p = sxy / sxx;
        model.a = std::exp(my - model.p * mx);
        if (!(model.p < 0))
            throw SingularFitError("fitted exponent is non-negative; data is not a "
                                   "decreasing power law");
    }

    FitStats stats;
    stats.residuals.reserve(n);
    double sum_f = 0, sum_res = 0;
    for (std::size_t i = 0; i < n; ++i) {
        const auto& [r, f] = points[i];
        const double res = f - model.a * std::pow(r, model.p);
        stats.residuals.emplace_back(ids ? (*ids)[i] : static_cast<int>(i), res);
        sum_f += f;
        sum_res += res;
    }
    stats.mean_f_mhz = sum_f / n;
    const double mean_res = sum_res / n;
    double ss = 0;
    for (const auto& [id, res] : stats.residuals) ss += (res - mean_res) * (res - mean_res);
    stats.sigma_f_mhz = n > 1 ? std::sqrt(ss / (n - 1)) : 0.0;
    model.sigma_f_mhz = stats.sigma_f_mhz;
    return {model, stats};
}

double predict_f01(const PowerLawModel& model, double r_n_ohm) {
    model.validate();
    if (!(r_n_ohm > 0)) throw std::invalid_argument("r_n must be positive");
    return model.a * std::pow(r_n_ohm, model.p);
}

double predict_rn(const PowerLawModel& model, double f01_mhz) {
    model.validate();
    if (!(f01_mhz > 0)) throw std::invalid_argument("f01 must be positive");
    return std::pow(f01_mhz / model.a, 1.0 / model.p);
}

double freq_sensitivity(const PowerLawModel& model, double r_n_ohm, double sigma_r_rel) {
    if (sigma_r_rel < 0) throw std::invalid_argument("sigma_r_rel must be >= 0");
    return std::abs(model.p) * predict_f01(model, r_n_ohm) * sigma_r_rel;
}

}  // namespace lasiq
