#ifndef ZKSTRIP_PROPAGATOR_HPP
#define ZKSTRIP_PROPAGATOR_HPP

#include <complex>
#include <functional>
#include <vector>

#include "zkstrip/transforms.hpp"

namespace zk {

struct DispersionParams {
    double delta = 0.0; // parabolic regularization in [0,1]
    double t = 0.0;
};

// Growth rate of the mode e^{i xi x} psi_l(y) under u_t + u_xxx + u_xyy - delta(Laplace u) = 0:
//   rate = i(xi^3 + xi lambda) - delta (xi^2 + lambda),
// so delta = 0 evolution is a per-mode isometry and delta > 0 strictly dissipates.
std::complex<double> dispersion_rate(double xi, double lambda, double delta);

// coef *= exp(rate * t). Negative t with delta > 0 is guarded against overflow.
SpectralField propagate(const StripTransform& tr, const SpectralField& sf,
                        const DispersionParams& p);

// Gauss-Legendre nodes/weights on [0,1].
void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights);

// u(t) = e^{tA} u0 + int_0^t e^{(t-tau)A} f(tau) dtau with composite m-point
// Gauss-Legendre over `panels` uniform panels for the convolution integral.
SpectralField duhamel(const StripTransform& tr, const SpectralField& u0,
                      const std::function<SpectralField(double)>& forcing,
                      const DispersionParams& p, int m, int panels = 1);

} // namespace zk

#endif
