#include "zkstrip/propagator.hpp"

#include <cmath>
#include <numbers>

#include "zkstrip/error.hpp"

namespace zk {

std::complex<double> dispersion_rate(double xi, double lambda, double delta) {
    return {-delta * (xi * xi + lambda), xi * xi * xi + xi * lambda};
}

SpectralField propagate(const StripTransform& tr, const SpectralField& sf,
                        const DispersionParams& p) {
    const Grid& g = tr.grid();
    if (sf.grid != g || sf.bc != tr.bc()) fail(Errc::invalid_argument, "propagate: mismatch");
    if (p.delta < 0.0 || p.delta > 1.0)
        fail(Errc::invalid_argument, "propagate: delta must lie in [0,1]");
    SpectralField out = sf;
    for (int jw = 0; jw < g.nx; ++jw) {
        double xi = g.xi(g.freq_of_index(jw));
        for (int m = 0; m < g.ny; ++m) {
            std::complex<double> r = dispersion_rate(xi, tr.basis().lambda(m), p.delta);
            double re = r.real() * p.t;
            if (re > 700.0)
                fail(Errc::invalid_argument,
                     "propagate: dissipative factor overflows (delta*t reversed too far)");
            out.at_wrapped(jw, m) *= std::exp(r * p.t);
        }
    }
    return out;
}

void gauss_legendre(int m, std::vector<double>& nodes, std::vector<double>& weights) {
    if (m < 1) fail(Errc::invalid_argument, "gauss_legendre: need m >= 1");
    nodes.resize(m);
    weights.resize(m);
    // Newton on Legendre P_m over (-1,1), mapped to [0,1].
    for (int i = 0; i < m; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (m + 0.5));
        double pp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= m; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            double pm = (m == 1) ? x : p1;
            double pm1 = (m == 1) ? 1.0 : p0;
            pp = m * (x * pm - pm1) / (x * x - 1.0);
            double dx = pm / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = 0.5 * (1.0 + x);
        weights[i] = 1.0 / ((1.0 - x * x) * pp * pp);
    }
    // roots come out descending in x; flip so nodes ascend on [0,1]
    for (int i = 0; i < m / 2; ++i) {
        std::swap(nodes[i], nodes[m - 1 - i]);
        std::swap(weights[i], weights[m - 1 - i]);
    }
}

SpectralField duhamel(const StripTransform& tr, const SpectralField& u0,
                      const std::function<SpectralField(double)>& forcing,
                      const DispersionParams& p, int m, int panels) {
    if (m < 1) fail(Errc::invalid_argument, "duhamel: need m >= 1 quadrature nodes");
    if (panels < 1) fail(Errc::invalid_argument, "duhamel: need panels >= 1");
    if (p.t < 0.0) fail(Errc::invalid_argument, "duhamel: t must be >= 0");

    SpectralField acc = propagate(tr, u0, p);
    if (p.t == 0.0) return acc;

    std::vector<double> gn, gw;
    gauss_legendre(m, gn, gw);

    const Grid& g = tr.grid();
    double h = p.t / panels;
    for (int pan = 0; pan < panels; ++pan) {
        double a = pan * h;
        for (int q = 0; q < m; ++q) {
            double tau = a + h * gn[q];
            SpectralField f = forcing(tau);
            if (f.grid != g || f.bc != tr.bc())
                fail(Errc::invalid_argument, "duhamel: forcing grid mismatch");
            double w = h * gw[q];
            double dt = p.t - tau;
            for (int jw = 0; jw < g.nx; ++jw) {
                double xi = g.xi(g.freq_of_index(jw));
                for (int mm = 0; mm < g.ny; ++mm) {
                    std::complex<double> r = dispersion_rate(xi, tr.basis().lambda(mm), p.delta);
                    acc.at_wrapped(jw, mm) += w * std::exp(r * dt) * f.at_wrapped(jw, mm);
                }
            }
        }
    }
    return acc;
}

} // namespace zk
