#pragma once

#include "qgh/common.hpp"

#include <string>
#include <vector>

namespace qgh {

struct FiniteMetricSpace {
    std::vector<std::string> labels;
    Eigen::MatrixXd dist;

    int size() const { return static_cast<int>(dist.rows()); }
};

// Throws NotAMetric naming the first failed axiom.
void validate_metric(const FiniteMetricSpace& X, double tol = 1e-9);

FiniteMetricSpace make_metric_space(Eigen::MatrixXd dist, std::vector<std::string> labels = {});

}  // namespace qgh
