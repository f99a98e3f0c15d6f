#ifndef ZKSTRIP_GRID_HPP
#define ZKSTRIP_GRID_HPP

#include <cmath>
#include <numbers>

#include "zkstrip/error.hpp"

namespace zk {

// Truncated periodic x-window [-X, X) times the strip (0, L).
// x nodes are uniform; y nodes depend on the boundary case and live in EigenBasis.
struct Grid {
    double half_width = 0.0;  // X
    int nx = 0;
    double strip_width = 0.0; // L
    int ny = 0;

    Grid() = default;
    Grid(double X, int nx_, double L, int ny_)
        : half_width(X), nx(nx_), strip_width(L), ny(ny_) {
        if (!(X > 0.0)) fail(Errc::config, "grid: X must be positive");
        if (!(L > 0.0)) fail(Errc::config, "grid: L must be positive");
        if (nx < 8 || nx % 2 != 0) fail(Errc::config, "grid: Nx must be even and >= 8");
        if (ny < 4) fail(Errc::config, "grid: Ny must be >= 4");
    }

    double dx() const { return 2.0 * half_width / nx; }
    double x(int i) const { return -half_width + i * dx(); }

    // xi_j = pi j / X for j in [-nx/2, nx/2).
    double xi(int j) const { return std::numbers::pi * j / half_width; }

    // FFTW storage index -> signed frequency.
    int freq_of_index(int jw) const { return jw < nx / 2 ? jw : jw - nx; }

    bool operator==(const Grid&) const = default;
};

} // namespace zk

#endif
