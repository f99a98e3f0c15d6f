#ifndef ZKSTRIP_FIELD_HPP
#define ZKSTRIP_FIELD_HPP

#include <complex>
#include <vector>

#include "zkstrip/boundary.hpp"
#include "zkstrip/grid.hpp"

namespace zk {

// Real nodal samples u(x_i, y_q), x-major.
struct Field {
    Grid grid;
    std::vector<double> values;

    Field() = default;
    explicit Field(const Grid& g) : grid(g), values(static_cast<size_t>(g.nx) * g.ny, 0.0) {}

    double& at(int ix, int iy) { return values[static_cast<size_t>(ix) * grid.ny + iy]; }
    double at(int ix, int iy) const { return values[static_cast<size_t>(ix) * grid.ny + iy]; }

    bool finite() const;
    double max_abs() const;
};

// Coefficients u_hat(xi_j, l) over Fourier-in-x x eigenbasis-in-y.
// Storage is FFTW frequency order in j (0..nx-1 wrapping) and 0-based mode index in y.
struct SpectralField {
    Grid grid;
    BoundaryCase bc = BoundaryCase::Periodic;
    std::vector<std::complex<double>> coef;

    SpectralField() = default;
    SpectralField(const Grid& g, BoundaryCase b)
        : grid(g), bc(b), coef(static_cast<size_t>(g.nx) * g.ny, {0.0, 0.0}) {}

    std::complex<double>& at_wrapped(int jw, int m) {
        return coef[static_cast<size_t>(jw) * grid.ny + m];
    }
    std::complex<double> at_wrapped(int jw, int m) const {
        return coef[static_cast<size_t>(jw) * grid.ny + m];
    }

    // j is the signed frequency in [-nx/2, nx/2).
    std::complex<double>& at_freq(int j, int m) {
        int jw = j >= 0 ? j : j + grid.nx;
        return at_wrapped(jw, m);
    }
    std::complex<double> at_freq(int j, int m) const {
        int jw = j >= 0 ? j : j + grid.nx;
        return at_wrapped(jw, m);
    }

    double l2_coef_norm() const; // sqrt(sum |coef|^2)
};

Field operator-(const Field& a, const Field& b);
Field operator+(const Field& a, const Field& b);
Field& axpy(Field& y, double a, const Field& x); // y += a*x

} // namespace zk

#endif
