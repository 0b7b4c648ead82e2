#pragma once

#include <cstddef>
#include <vector>

namespace npin {

/// Box-plot statistics. Quartiles interpolate linearly between order
/// statistics (position q * (n - 1)), the common spreadsheet/numpy default.
struct Summary {
    std::size_t n = 0;
    double mean = 0.0;
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double min = 0.0;
    double max = 0.0;
};

double quantile(std::vector<double> values, double q);
/// Empty input yields n = 0 and zeros elsewhere.
Summary summarize(const std::vector<double>& values);

}  // namespace npin
