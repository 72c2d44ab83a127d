#include "urnflow/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace urnflow::quad {

// 15-point Kronrod extension of 7-point Gauss on [-1, 1].
const double kKronrodNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

const double kKronrodWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

namespace {

const double kGaussWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

struct PanelResult {
  double integral;
  double error;
};

PanelResult gk15(const std::function<double(double)>& f, double a, double b) {
  double mid = 0.5 * (a + b);
  double half = 0.5 * (b - a);
  double fk = 0.0, fg = 0.0;
  for (int i = 0; i < 15; ++i) {
    double v = f(mid + half * kKronrodNodes[i]);
    fk += kKronrodWeights[i] * v;
    if (i % 2 == 1) fg += kGaussWeights[i / 2] * v;
  }
  double integral = fk * half;
  double diff = std::fabs((fk - fg) * half);
  // Standard QUADPACK-style sharpening of the raw G-K difference.
  double err = diff > 0.0 ? std::pow(200.0 * diff, 1.5) : 0.0;
  return {integral, std::min(err, diff)};
}

double adaptive(const std::function<double(double)>& f, double a, double b,
                double tol, int depth) {
  PanelResult r = gk15(f, a, b);
  if (r.error <= tol || depth >= 48 || b - a < 1e-15 * (1.0 + std::fabs(a)))
    return r.integral;
  double mid = 0.5 * (a + b);
  return adaptive(f, a, mid, 0.5 * tol, depth + 1) +
         adaptive(f, mid, b, 0.5 * tol, depth + 1);
}

}  // namespace

double integrate(const std::function<double(double)>& f, double a, double b,
                 double abs_tol) {
  if (!(a <= b)) throw std::invalid_argument("integrate: bad interval");
  if (a == b) return 0.0;
  return adaptive(f, a, b, abs_tol, 0);
}

double integrate_segmented(const std::function<double(double)>& f, double a,
                           double b, const std::vector<double>& breaks,
                           double abs_tol) {
  std::vector<double> pts;
  pts.push_back(a);
  for (double t : breaks)
    if (t > a && t < b) pts.push_back(t);
  pts.push_back(b);
  std::sort(pts.begin(), pts.end());
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < pts.size(); ++i)
    total += integrate(f, pts[i], pts[i + 1], abs_tol);
  return total;
}

double kronrod15(const std::function<double(double)>& f, double a, double b) {
  return gk15(f, a, b).integral;
}

}  // namespace urnflow::quad
