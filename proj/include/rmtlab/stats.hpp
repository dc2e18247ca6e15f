#pragma once

#include <utility>
#include <vector>

namespace rmtlab::stats {

double mean(const std::vector<double>& v);
double sample_stddev(const std::vector<double>& v);
double standard_error(const std::vector<double>& v);
double percentile(std::vector<double> v, double q);

/// Regularized upper incomplete gamma Q(a, x).
double gamma_q(double a, double x);

/// Survival function of the chi-square distribution with k dof.
double chi_square_sf(double statistic, int dof);

/// Gauss-Legendre nodes and weights on [a, b].
std::pair<std::vector<double>, std::vector<double>> gauss_legendre(int n, double a, double b);

}  // namespace rmtlab::stats
