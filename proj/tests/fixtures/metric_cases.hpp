#pragma once

// Hand-computed metric cases.  Values are dyadic so every expected number is
// exactly representable and the comparison can be exact.

#include <array>

namespace fixture {

struct MetricCase {
  double d_true, d_pred, percent_error, abs_error;
};

inline constexpr std::array<MetricCase, 10> kMetricCases{{
    {1.0, 0.75, 25.0, 0.25},
    {2.0, 2.5, 25.0, 0.5},
    {0.5, 0.5, 0.0, 0.0},
    {4.0, 1.0, 75.0, 3.0},
    {0.25, 0.5, 100.0, 0.25},
    {8.0, 9.0, 12.5, 1.0},
    {0.125, 0.0625, 50.0, 0.0625},
    {16.0, 20.0, 25.0, 4.0},
    {1.0, 3.0, 200.0, 2.0},
    {2.0, -2.0, 200.0, 4.0},
}};

// (25+25+0+75+100+12.5+50+25+200+200) / 10
inline constexpr double kMeanPercentError = 71.25;

// Per-set means of one reference table row and its "All Sets" cell.
inline constexpr std::array<double, 4> kTableRow{19.3, 30.1, 8.3, 18.2};
inline constexpr const char* kTableAllSets = "19.0";

}  // namespace fixture
