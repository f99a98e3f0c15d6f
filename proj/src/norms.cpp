#include "zkstrip/norms.hpp"

#include <cmath>

#include "zkstrip/error.hpp"

namespace zk {

double integrate(const StripTransform& tr, const Field& f) {
    double acc = 0.0;
    for (double v : f.values) acc += v;
    return acc * f.grid.dx() * tr.y_quad_weight();
}

double weighted_mass(const StripTransform& tr, const Field& u,
                     const std::function<double(double)>& w) {
    const Grid& g = u.grid;
    double acc = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        double wi = w(g.x(i));
        double row = 0.0;
        for (int q = 0; q < g.ny; ++q) {
            double v = u.at(i, q);
            row += v * v;
        }
        acc += wi * row;
    }
    return acc * g.dx() * tr.y_quad_weight();
}

double weighted_l2(const StripTransform& tr, const Field& u, double alpha) {
    if (alpha < 0.0) fail(Errc::invalid_argument, "weighted_l2: alpha must be >= 0");
    return std::sqrt(weighted_mass(tr, u, [alpha](double x) {
        double xp = std::max(x, 0.0);
        return std::pow(1.0 + xp, 2.0 * alpha);
    }));
}

GradFields gradients(const StripTransform& tr, const SpectralField& sf) {
    GradFields gf;
    gf.ux = tr.from_spectral(tr.derivative(sf, 1, false));
    gf.uy = tr.deriv_y(sf);
    return gf;
}

GradFields gradients(const StripTransform& tr, const Field& u) {
    return gradients(tr, tr.to_spectral(u));
}

SecondGradFields second_gradients(const StripTransform& tr, const SpectralField& sf) {
    SecondGradFields s;
    s.uxx = tr.from_spectral(tr.derivative(sf, 2, false));
    s.uxy = tr.deriv_y(tr.derivative(sf, 1, false));
    s.uyy = tr.from_spectral(tr.derivative(sf, 0, true));
    return s;
}

Field grad_sq(const StripTransform& tr, const Field& u) {
    GradFields gf = gradients(tr, u);
    Field out(u.grid);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = gf.ux.values[i] * gf.ux.values[i] + gf.uy.values[i] * gf.uy.values[i];
    return out;
}

Field grad2_sq(const StripTransform& tr, const Field& u) {
    SecondGradFields s = second_gradients(tr, tr.to_spectral(u));
    Field out(u.grid);
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = s.uxx.values[i] * s.uxx.values[i] + s.uxy.values[i] * s.uxy.values[i] +
                        s.uyy.values[i] * s.uyy.values[i];
    return out;
}

double mass_spectral(const StripTransform& tr, const SpectralField& sf) {
    double acc = 0.0;
    for (const auto& c : sf.coef) acc += std::norm(c);
    return 2.0 * tr.grid().half_width * acc;
}

double grad_energy_spectral(const StripTransform& tr, const SpectralField& sf) {
    const Grid& g = tr.grid();
    double acc = 0.0;
    for (int jw = 0; jw < g.nx; ++jw) {
        int j = g.freq_of_index(jw);
        double xi2 = (j == -g.nx / 2) ? 0.0 : g.xi(j) * g.xi(j);
        for (int m = 0; m < g.ny; ++m)
            acc += (xi2 + tr.basis().lambda(m)) * std::norm(sf.at_wrapped(jw, m));
    }
    return 2.0 * g.half_width * acc;
}

double hk_alpha_norm(const StripTransform& tr, const Field& u, int k, double alpha) {
    if (k != 0 && k != 1) fail(Errc::invalid_argument, "hk_alpha_norm: k in {0,1}");
    double n0 = weighted_l2(tr, u, alpha);
    if (k == 0) return n0;
    GradFields gf = gradients(tr, u);
    Field dmag(u.grid);
    for (size_t i = 0; i < dmag.values.size(); ++i)
        dmag.values[i] = std::sqrt(gf.ux.values[i] * gf.ux.values[i] +
                                   gf.uy.values[i] * gf.uy.values[i]);
    double n1 = weighted_l2(tr, dmag, alpha);
    return std::sqrt(n0 * n0 + n1 * n1);
}

ColumnEnergies column_energies(const StripTransform& tr, const SpectralField& sf) {
    const Grid& g = tr.grid();
    ColumnEnergies out;
    out.u2.assign(g.nx, 0.0);
    out.ux2.assign(g.nx, 0.0);
    out.uy2.assign(g.nx, 0.0);

    Field u = tr.from_spectral(sf);
    Field ux = tr.from_spectral(tr.derivative(sf, 1, false));
    std::vector<double> modes(static_cast<size_t>(g.nx) * g.ny);
    tr.y_analyze(u.values.data(), modes.data(), g.nx);

    double wy = tr.y_quad_weight();
    for (int i = 0; i < g.nx; ++i) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (int q = 0; q < g.ny; ++q) {
            a += u.at(i, q) * u.at(i, q);
            b += ux.at(i, q) * ux.at(i, q);
            c += tr.basis().lambda(q) * modes[static_cast<size_t>(i) * g.ny + q] *
                 modes[static_cast<size_t>(i) * g.ny + q];
        }
        out.u2[i] = wy * a;
        out.ux2[i] = wy * b;
        out.uy2[i] = c;
    }
    return out;
}

ColumnEnergies2 column_energies2(const StripTransform& tr, const SpectralField& sf) {
    const Grid& g = tr.grid();
    ColumnEnergies2 out;
    out.uxx2.assign(g.nx, 0.0);
    out.uxy2.assign(g.nx, 0.0);
    out.uyy2.assign(g.nx, 0.0);

    Field uxx = tr.from_spectral(tr.derivative(sf, 2, false));
    Field uyy = tr.from_spectral(tr.derivative(sf, 0, true));
    Field ux = tr.from_spectral(tr.derivative(sf, 1, false));
    std::vector<double> xmodes(static_cast<size_t>(g.nx) * g.ny);
    tr.y_analyze(ux.values.data(), xmodes.data(), g.nx);

    double wy = tr.y_quad_weight();
    for (int i = 0; i < g.nx; ++i) {
        double a = 0.0, b = 0.0, c = 0.0;
        for (int q = 0; q < g.ny; ++q) {
            a += uxx.at(i, q) * uxx.at(i, q);
            c += uyy.at(i, q) * uyy.at(i, q);
            b += tr.basis().lambda(q) * xmodes[static_cast<size_t>(i) * g.ny + q] *
                 xmodes[static_cast<size_t>(i) * g.ny + q];
        }
        out.uxx2[i] = wy * a;
        out.uxy2[i] = b;
        out.uyy2[i] = wy * c;
    }
    return out;
}

std::vector<double> simpson_weights(std::span<const double> times) {
    size_t n = times.size();
    if (n == 0) fail(Errc::invalid_argument, "simpson_weights: empty time grid");
    std::vector<double> w(n, 0.0);
    if (n == 1) return w;
    double dt = times[1] - times[0];
    if (n == 2) {
        w[0] = w[1] = 0.5 * dt;
        return w;
    }
    bool uniform = true;
    for (size_t i = 1; i < n; ++i)
        if (std::abs((times[i] - times[i - 1]) - dt) > 1e-9 * std::max(dt, 1e-12)) uniform = false;
    if (!uniform) { // trapezoid handles ragged snapshot strides correctly
        for (size_t i = 0; i + 1 < n; ++i) {
            double h = times[i + 1] - times[i];
            w[i] += 0.5 * h;
            w[i + 1] += 0.5 * h;
        }
        return w;
    }
    size_t last = n - 1;
    if (last % 2 == 0) {
        for (size_t p = 0; p + 2 <= last; p += 2) {
            w[p] += dt / 3.0;
            w[p + 1] += 4.0 * dt / 3.0;
            w[p + 2] += dt / 3.0;
        }
    } else if (n >= 4) {
        // odd interval count: Simpson up to last-3, then the 3/8 rule
        size_t simpson_last = last - 3;
        for (size_t p = 0; p + 2 <= simpson_last; p += 2) {
            w[p] += dt / 3.0;
            w[p + 1] += 4.0 * dt / 3.0;
            w[p + 2] += dt / 3.0;
        }
        w[last - 3] += 3.0 * dt / 8.0;
        w[last - 2] += 9.0 * dt / 8.0;
        w[last - 1] += 9.0 * dt / 8.0;
        w[last] += 3.0 * dt / 8.0;
    } else {
        fail(Errc::internal, "simpson_weights: unexpected grid");
    }
    return w;
}

XkSeminorms xk_alpha_seminorms(const StripTransform& tr, std::span<const double> times,
                               std::span<const Field> snaps, int k, double alpha) {
    if (times.empty() || snaps.empty() || times.size() != snaps.size())
        fail(Errc::invalid_argument, "xk_alpha_seminorms: empty or mismatched trajectory");
    const Grid& g = tr.grid();

    XkSeminorms out{0.0, 0.0, 0.0};
    std::vector<double> tw = simpson_weights(times);

    // per-x-column time-integrated |D^{k+1} u|^2, then window sup and weighted tail
    std::vector<double> col(g.nx, 0.0);
    for (size_t s = 0; s < snaps.size(); ++s) {
        out.sup_hk = std::max(out.sup_hk, hk_alpha_norm(tr, snaps[s], k, alpha));
        Field dsq = (k == 0) ? grad_sq(tr, snaps[s]) : grad2_sq(tr, snaps[s]);
        double wy = tr.y_quad_weight();
        for (int i = 0; i < g.nx; ++i) {
            double row = 0.0;
            for (int q = 0; q < g.ny; ++q) row += dsq.at(i, q);
            col[i] += tw[s] * wy * row;
        }
    }
    // sliding window of length 1 starting at each node (periodic wrap in x)
    for (int i0 = 0; i0 < g.nx; ++i0) {
        double x0 = g.x(i0);
        double acc = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            double xs = x < x0 ? x + 2.0 * g.half_width : x;
            if (xs >= x0 && xs < x0 + 1.0) acc += col[i];
        }
        out.window = std::max(out.window, acc * g.dx());
    }
    if (alpha > 0.0) {
        double acc = 0.0;
        for (int i = 0; i < g.nx; ++i) {
            double x = g.x(i);
            if (x > 0.0) acc += std::pow(1.0 + x, 2.0 * alpha - 1.0) * col[i];
        }
        out.weighted = acc * g.dx();
    }
    return out;
}

double lq_norm(const StripTransform& tr, const Field& f, double q) {
    if (std::isinf(q)) return f.max_abs();
    if (q < 1.0) fail(Errc::invalid_argument, "lq_norm: q >= 1 required");
    double acc = 0.0;
    for (double v : f.values) acc += std::pow(std::abs(v), q);
    acc *= f.grid.dx() * tr.y_quad_weight();
    return std::pow(acc, 1.0 / q);
}

} // namespace zk
