#pragma once

#include <functional>
#include <vector>

namespace urnflow::quad {

// Adaptive Gauss-Kronrod (G7/K15) integration on a finite interval with an
// absolute tolerance target. Panels are bisected until the local error
// estimate drops below the tolerance allotted to them.
double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol = 1e-12);

// Same, but the integrand is first split at the given interior breakpoints
// (kinks or jumps), so each sub-panel sees a smooth piece.
double integrate_segmented(const std::function<double(double)>& f, double a,
                           double b, const std::vector<double>& breaks,
                           double abs_tol = 1e-12);

// Single non-adaptive K15 panel; adequate for very short smooth intervals.
double kronrod15(const std::function<double(double)>& f, double a, double b);

// K15 abscissae/weights on [-1, 1], exposed so callers can cache integrand
// values at panel nodes.
extern const double kKronrodNodes[15];
extern const double kKronrodWeights[15];

}  // namespace urnflow::quad
