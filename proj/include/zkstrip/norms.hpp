#ifndef ZKSTRIP_NORMS_HPP
#define ZKSTRIP_NORMS_HPP

#include <functional>
#include <span>
#include <vector>

#include "zkstrip/transforms.hpp"
#include "zkstrip/weights.hpp"

namespace zk {

// Window quadrature of an arbitrary nodal integrand: dx * w_y * sum.
double integrate(const StripTransform& tr, const Field& f);

// integral of u^2 * w(x) over the window (w evaluated at x nodes).
double weighted_mass(const StripTransform& tr, const Field& u,
                     const std::function<double(double)>& w);

// ||u||_{L2^alpha}: sqrt of integral (1+x_+)^{2 alpha} u^2.
double weighted_l2(const StripTransform& tr, const Field& u, double alpha);

// Gradient fields u_x (spectral) and u_y (psi' synthesis).
struct GradFields {
    Field ux, uy;
};
GradFields gradients(const StripTransform& tr, const SpectralField& sf);
GradFields gradients(const StripTransform& tr, const Field& u);

// Second derivatives u_xx, u_xy, u_yy (u_xy = d_y of the spectral d_x).
struct SecondGradFields {
    Field uxx, uxy, uyy;
};
SecondGradFields second_gradients(const StripTransform& tr, const SpectralField& sf);

// |D u|^2 and |D^2 u|^2 as nodal fields.
Field grad_sq(const StripTransform& tr, const Field& u);
Field grad2_sq(const StripTransform& tr, const Field& u);

// Exact Parseval forms of the unweighted derivative energies.
double mass_spectral(const StripTransform& tr, const SpectralField& sf);
double grad_energy_spectral(const StripTransform& tr, const SpectralField& sf); // int |Du|^2

// H^{k,alpha} norm, k in {0,1}: root-sum-of-squares of weighted_l2(|D^j u|), j <= k.
double hk_alpha_norm(const StripTransform& tr, const Field& u, int k, double alpha);

// X^{k,alpha} seminorm triple over a snapshot trajectory with uniform times.
struct XkSeminorms {
    double sup_hk;      // max over snapshots of hk_alpha_norm
    double window;      // sup_{x0 in nodes} int_0^T int_{x0}^{x0+1} int |D^{k+1}u|^2
    double weighted;    // alpha>0: int over x>0 of (1+x)^{2 alpha - 1} |D^{k+1}u|^2 dt
};
XkSeminorms xk_alpha_seminorms(const StripTransform& tr, std::span<const double> times,
                               std::span<const Field> snaps, int k, double alpha);

// Per-x-column y-integrals, exact for representable fields: int u^2 dy,
// int u_x^2 dy (nodal quadrature, exact by the Gram identity) and
// int u_y^2 dy = sum_m lambda_m B_m^2 (analytic orthogonality of the psi' family).
struct ColumnEnergies {
    std::vector<double> u2, ux2, uy2;
};
ColumnEnergies column_energies(const StripTransform& tr, const SpectralField& sf);

// Same at second order: int u_xx^2, int u_xy^2 (lambda-weighted coefficients of
// u_x), int u_yy^2 dy per column.
struct ColumnEnergies2 {
    std::vector<double> uxx2, uxy2, uyy2;
};
ColumnEnergies2 column_energies2(const StripTransform& tr, const SpectralField& sf);

// Composite Simpson weights for a uniform time grid (trapezoid fallback for < 3 points).
std::vector<double> simpson_weights(std::span<const double> times);

// L_q norm of a nodal field, q >= 1 or infinity (grid max).
double lq_norm(const StripTransform& tr, const Field& f, double q);

} // namespace zk

#endif
