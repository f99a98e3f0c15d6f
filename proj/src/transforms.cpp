#include "zkstrip/transforms.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <mutex>

#include "zkstrip/error.hpp"

namespace zk {

namespace {

// FFTW planning is not thread-safe; execution on distinct buffers is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

int padded_size(int nx) {
    int mx = (3 * nx) / 2;
    if (mx % 2 != 0) ++mx;
    return mx;
}

} // namespace

struct StripTransform::Plans {
    int nx = 0, ny = 0, mx = 0;

    double* ybuf = nullptr;        // nx x ny rows for the y r2r pass
    double* ybuf_pad = nullptr;    // mx x ny
    fftw_complex* cbuf = nullptr;  // nx x ny for the x c2c pass
    fftw_complex* cbuf_pad = nullptr;

    fftw_plan y_fwd = nullptr, y_bwd = nullptr;
    fftw_plan y_fwd_pad = nullptr, y_bwd_pad = nullptr;
    fftw_plan x_fwd = nullptr, x_bwd = nullptr;
    fftw_plan x_fwd_pad = nullptr, x_bwd_pad = nullptr;

    // Per-case scale factors for the y pass.
    double an_scale0 = 1.0;  // special mode (constant / Nyquist) analysis scale
    double an_scale = 1.0;   // generic mode analysis scale
    double syn_scale0 = 1.0; // special mode synthesis pre-scale
    double syn_scale = 1.0;

    std::vector<double> psi_d1_table; // [q*ny + m] = psi_m'(y_q)

    ~Plans() {
        std::lock_guard<std::mutex> lk(planner_mutex());
        for (fftw_plan p : {y_fwd, y_bwd, y_fwd_pad, y_bwd_pad, x_fwd, x_bwd, x_fwd_pad, x_bwd_pad})
            if (p) fftw_destroy_plan(p);
        if (ybuf) fftw_free(ybuf);
        if (ybuf_pad) fftw_free(ybuf_pad);
        if (cbuf) fftw_free(cbuf);
        if (cbuf_pad) fftw_free(cbuf_pad);
    }
};

StripTransform::StripTransform(const Grid& grid, BoundaryCase bc)
    : grid_(grid), bc_(bc), basis_(std::make_unique<EigenBasis>(bc, grid.strip_width, grid.ny)),
      mx_(padded_size(grid.nx)), plans_(std::make_unique<Plans>()) {
    Plans& p = *plans_;
    p.nx = grid.nx;
    p.ny = grid.ny;
    p.mx = mx_;

    const int nx = grid.nx, ny = grid.ny, mx = mx_;
    const double L = grid.strip_width;
    const double w = basis_->quad_weight();

    p.ybuf = fftw_alloc_real(static_cast<size_t>(nx) * ny);
    p.ybuf_pad = fftw_alloc_real(static_cast<size_t>(mx) * ny);
    p.cbuf = fftw_alloc_complex(static_cast<size_t>(nx) * ny);
    p.cbuf_pad = fftw_alloc_complex(static_cast<size_t>(mx) * ny);

    fftw_r2r_kind fwd_kind = FFTW_R2HC, bwd_kind = FFTW_HC2R;
    switch (bc) {
        case BoundaryCase::DirichletDirichlet:
            fwd_kind = FFTW_RODFT00;
            bwd_kind = FFTW_RODFT00;
            p.an_scale = p.an_scale0 = 0.5 * w * std::sqrt(2.0 / L);
            p.syn_scale = p.syn_scale0 = 0.5 * std::sqrt(2.0 / L);
            break;
        case BoundaryCase::NeumannNeumann:
            fwd_kind = FFTW_REDFT10;
            bwd_kind = FFTW_REDFT01;
            p.an_scale0 = 0.5 * w / std::sqrt(L);
            p.an_scale = 0.5 * w * std::sqrt(2.0 / L);
            p.syn_scale0 = 1.0 / std::sqrt(L);
            p.syn_scale = 0.5 * std::sqrt(2.0 / L);
            break;
        case BoundaryCase::DirichletNeumann:
            fwd_kind = FFTW_RODFT11;
            bwd_kind = FFTW_RODFT11;
            p.an_scale = p.an_scale0 = 0.5 * w * std::sqrt(2.0 / L);
            p.syn_scale = p.syn_scale0 = 0.5 * std::sqrt(2.0 / L);
            break;
        case BoundaryCase::Periodic:
            fwd_kind = FFTW_R2HC;
            bwd_kind = FFTW_HC2R;
            p.an_scale0 = w / std::sqrt(L);         // constant and Nyquist rows
            p.an_scale = w * std::sqrt(2.0 / L);    // cos/sin pairs
            p.syn_scale0 = 1.0 / std::sqrt(L);
            p.syn_scale = 0.5 * std::sqrt(2.0 / L);
            break;
    }

    {
        std::lock_guard<std::mutex> lk(planner_mutex());
        int n[] = {ny};
        fftw_r2r_kind kf[] = {fwd_kind}, kb[] = {bwd_kind};
        p.y_fwd = fftw_plan_many_r2r(1, n, nx, p.ybuf, nullptr, 1, ny, p.ybuf, nullptr, 1, ny, kf,
                                     FFTW_ESTIMATE);
        p.y_bwd = fftw_plan_many_r2r(1, n, nx, p.ybuf, nullptr, 1, ny, p.ybuf, nullptr, 1, ny, kb,
                                     FFTW_ESTIMATE);
        p.y_fwd_pad = fftw_plan_many_r2r(1, n, mx, p.ybuf_pad, nullptr, 1, ny, p.ybuf_pad, nullptr,
                                         1, ny, kf, FFTW_ESTIMATE);
        p.y_bwd_pad = fftw_plan_many_r2r(1, n, mx, p.ybuf_pad, nullptr, 1, ny, p.ybuf_pad, nullptr,
                                         1, ny, kb, FFTW_ESTIMATE);
        int nX[] = {nx}, nM[] = {mx};
        p.x_fwd = fftw_plan_many_dft(1, nX, ny, p.cbuf, nullptr, ny, 1, p.cbuf, nullptr, ny, 1,
                                     FFTW_FORWARD, FFTW_ESTIMATE);
        p.x_bwd = fftw_plan_many_dft(1, nX, ny, p.cbuf, nullptr, ny, 1, p.cbuf, nullptr, ny, 1,
                                     FFTW_BACKWARD, FFTW_ESTIMATE);
        p.x_fwd_pad = fftw_plan_many_dft(1, nM, ny, p.cbuf_pad, nullptr, ny, 1, p.cbuf_pad, nullptr,
                                         ny, 1, FFTW_FORWARD, FFTW_ESTIMATE);
        p.x_bwd_pad = fftw_plan_many_dft(1, nM, ny, p.cbuf_pad, nullptr, ny, 1, p.cbuf_pad, nullptr,
                                         ny, 1, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    p.psi_d1_table.resize(static_cast<size_t>(ny) * ny);
    for (int q = 0; q < ny; ++q)
        for (int m = 0; m < ny; ++m)
            p.psi_d1_table[static_cast<size_t>(q) * ny + m] = basis_->psi_d1(m, basis_->node(q));
}

StripTransform::~StripTransform() = default;

// y r2r output -> orthonormal mode coefficients, one row of length ny, in place.
void StripTransform::y_analyze(const double* values, double* modes, int rows) const {
    Plans& p = *plans_;
    const int ny = p.ny;
    double* buf = (rows == p.nx) ? p.ybuf : p.ybuf_pad;
    fftw_plan plan = (rows == p.nx) ? p.y_fwd : p.y_fwd_pad;
    if (rows != p.nx && rows != p.mx) fail(Errc::internal, "y_analyze: unsupported row count");

    std::memcpy(buf, values, sizeof(double) * static_cast<size_t>(rows) * ny);
    fftw_execute(plan);

    if (bc_ != BoundaryCase::Periodic) {
        for (int i = 0; i < rows; ++i) {
            const double* r = buf + static_cast<size_t>(i) * ny;
            double* out = modes + static_cast<size_t>(i) * ny;
            if (bc_ == BoundaryCase::NeumannNeumann) {
                out[0] = p.an_scale0 * r[0];
                for (int m = 1; m < ny; ++m) out[m] = p.an_scale * r[m];
            } else {
                for (int m = 0; m < ny; ++m) out[m] = p.an_scale * r[m];
            }
        }
    } else {
        const int half = ny / 2;
        for (int i = 0; i < rows; ++i) {
            const double* r = buf + static_cast<size_t>(i) * ny;
            double* out = modes + static_cast<size_t>(i) * ny;
            out[0] = p.an_scale0 * r[0];
            int pairs = (ny - 1) / 2;
            for (int k = 1; k <= pairs; ++k) {
                out[2 * k - 1] = p.an_scale * r[k];
                out[2 * k] = -p.an_scale * r[ny - k];
            }
            if (ny % 2 == 0) out[ny - 1] = p.an_scale0 * r[half];
        }
    }
}

void StripTransform::y_synthesize(const double* modes, double* values, int rows) const {
    Plans& p = *plans_;
    const int ny = p.ny;
    double* buf = (rows == p.nx) ? p.ybuf : p.ybuf_pad;
    fftw_plan plan = (rows == p.nx) ? p.y_bwd : p.y_bwd_pad;
    if (rows != p.nx && rows != p.mx) fail(Errc::internal, "y_synthesize: unsupported row count");

    if (bc_ != BoundaryCase::Periodic) {
        for (int i = 0; i < rows; ++i) {
            const double* in = modes + static_cast<size_t>(i) * ny;
            double* r = buf + static_cast<size_t>(i) * ny;
            if (bc_ == BoundaryCase::NeumannNeumann) {
                r[0] = p.syn_scale0 * in[0];
                for (int m = 1; m < ny; ++m) r[m] = p.syn_scale * in[m];
            } else {
                for (int m = 0; m < ny; ++m) r[m] = p.syn_scale * in[m];
            }
        }
    } else {
        const int half = ny / 2;
        for (int i = 0; i < rows; ++i) {
            const double* in = modes + static_cast<size_t>(i) * ny;
            double* r = buf + static_cast<size_t>(i) * ny;
            for (int m = 0; m < ny; ++m) r[m] = 0.0;
            r[0] = p.syn_scale0 * in[0];
            int pairs = (ny - 1) / 2;
            for (int k = 1; k <= pairs; ++k) {
                r[k] = p.syn_scale * in[2 * k - 1];
                r[ny - k] = -p.syn_scale * in[2 * k];
            }
            if (ny % 2 == 0) r[half] = p.syn_scale0 * in[ny - 1];
        }
    }
    fftw_execute(plan);
    std::memcpy(values, buf, sizeof(double) * static_cast<size_t>(rows) * ny);
}

SpectralField StripTransform::to_spectral(const Field& f) const {
    if (f.grid != grid_) fail(Errc::invalid_argument, "to_spectral: grid mismatch");
    Plans& p = *plans_;
    const int nx = p.nx, ny = p.ny;

    std::vector<double> modes(static_cast<size_t>(nx) * ny);
    y_analyze(f.values.data(), modes.data(), nx);

    for (size_t i = 0; i < modes.size(); ++i) {
        p.cbuf[i][0] = modes[i];
        p.cbuf[i][1] = 0.0;
    }
    fftw_execute(p.x_fwd);

    SpectralField sf(grid_, bc_);
    const double s = 1.0 / nx;
    for (int jw = 0; jw < nx; ++jw) {
        double phase = (jw % 2 == 0) ? s : -s; // (-1)^j from the window offset x0 = -X
        for (int m = 0; m < ny; ++m) {
            size_t idx = static_cast<size_t>(jw) * ny + m;
            sf.coef[idx] = {phase * p.cbuf[idx][0], phase * p.cbuf[idx][1]};
        }
    }
    return sf;
}

Field StripTransform::from_spectral(const SpectralField& sf, double* imag_residual,
                                    double rel_tol) const {
    if (sf.grid != grid_ || sf.bc != bc_) fail(Errc::invalid_argument, "from_spectral: mismatch");
    Plans& p = *plans_;
    const int nx = p.nx, ny = p.ny;

    for (int jw = 0; jw < nx; ++jw) {
        double phase = (jw % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < ny; ++m) {
            size_t idx = static_cast<size_t>(jw) * ny + m;
            p.cbuf[idx][0] = phase * sf.coef[idx].real();
            p.cbuf[idx][1] = phase * sf.coef[idx].imag();
        }
    }
    fftw_execute(p.x_bwd);

    double max_im = 0.0, max_re = 0.0;
    std::vector<double> modes(static_cast<size_t>(nx) * ny);
    for (size_t i = 0; i < modes.size(); ++i) {
        modes[i] = p.cbuf[i][0];
        max_re = std::max(max_re, std::abs(p.cbuf[i][0]));
        max_im = std::max(max_im, std::abs(p.cbuf[i][1]));
    }
    double residual = max_re > 0.0 ? max_im / max_re : max_im;
    if (imag_residual) *imag_residual = residual;
    if (residual > rel_tol)
        fail(Errc::non_real_synthesis,
             "from_spectral: non-real synthesis (relative imaginary residue " +
                 std::to_string(residual) + ")");

    Field f(grid_);
    y_synthesize(modes.data(), f.values.data(), nx);
    return f;
}

SpectralField StripTransform::derivative(const SpectralField& sf, int order_x,
                                         bool apply_yy) const {
    if (order_x < 0 || order_x > 3) fail(Errc::invalid_argument, "derivative: order_x in 0..3");
    SpectralField out = sf;
    const int nx = grid_.nx, ny = grid_.ny;
    for (int jw = 0; jw < nx; ++jw) {
        int j = grid_.freq_of_index(jw);
        std::complex<double> fx{1.0, 0.0};
        if (order_x > 0) {
            if (j == -nx / 2) {
                fx = 0.0; // Nyquist zeroed so d/dx composes exactly and stays real
            } else {
                std::complex<double> ixi{0.0, grid_.xi(j)};
                fx = ixi;
                for (int o = 1; o < order_x; ++o) fx *= ixi;
            }
        }
        for (int m = 0; m < ny; ++m) {
            std::complex<double> v = out.at_wrapped(jw, m) * fx;
            if (apply_yy) v *= -basis_->lambda(m);
            out.at_wrapped(jw, m) = v;
        }
    }
    return out;
}

Field StripTransform::deriv_y(const SpectralField& sf) const {
    if (sf.grid != grid_ || sf.bc != bc_) fail(Errc::invalid_argument, "deriv_y: mismatch");
    Plans& p = *plans_;
    const int nx = p.nx, ny = p.ny;

    for (int jw = 0; jw < nx; ++jw) {
        double phase = (jw % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < ny; ++m) {
            size_t idx = static_cast<size_t>(jw) * ny + m;
            p.cbuf[idx][0] = phase * sf.coef[idx].real();
            p.cbuf[idx][1] = phase * sf.coef[idx].imag();
        }
    }
    fftw_execute(p.x_bwd);

    Field f(grid_);
    // dense psi' synthesis per x row
    for (int i = 0; i < nx; ++i) {
        const size_t row = static_cast<size_t>(i) * ny;
        for (int q = 0; q < ny; ++q) {
            double acc = 0.0;
            const double* d1 = p.psi_d1_table.data() + static_cast<size_t>(q) * ny;
            for (int m = 0; m < ny; ++m) acc += p.cbuf[row + m][0] * d1[m];
            f.values[row + q] = acc;
        }
    }
    return f;
}

Field StripTransform::deriv_y(const Field& f) const { return deriv_y(to_spectral(f)); }

Field StripTransform::deriv_x(const Field& f) const {
    return from_spectral(derivative(to_spectral(f), 1, false));
}

SpectralField StripTransform::shift_x(const SpectralField& sf, double s) const {
    SpectralField out = sf;
    const int nx = grid_.nx, ny = grid_.ny;
    for (int jw = 0; jw < nx; ++jw) {
        int j = grid_.freq_of_index(jw);
        std::complex<double> ph = std::exp(std::complex<double>{0.0, -grid_.xi(j) * s});
        for (int m = 0; m < ny; ++m) out.at_wrapped(jw, m) *= ph;
    }
    return out;
}

Field StripTransform::to_physical_padded(const SpectralField& sf) const {
    if (sf.grid != grid_ || sf.bc != bc_) fail(Errc::invalid_argument, "padded synth: mismatch");
    Plans& p = *plans_;
    const int nx = p.nx, ny = p.ny, mx = p.mx;

    std::memset(p.cbuf_pad, 0, sizeof(fftw_complex) * static_cast<size_t>(mx) * ny);
    for (int jw = 0; jw < nx; ++jw) {
        int j = grid_.freq_of_index(jw);
        int kw = j >= 0 ? j : j + mx;
        double phase = (j % 2 == 0) ? 1.0 : -1.0;
        for (int m = 0; m < ny; ++m) {
            size_t src = static_cast<size_t>(jw) * ny + m;
            size_t dst = static_cast<size_t>(kw) * ny + m;
            p.cbuf_pad[dst][0] = phase * sf.coef[src].real();
            p.cbuf_pad[dst][1] = phase * sf.coef[src].imag();
        }
    }
    fftw_execute(p.x_bwd_pad);

    std::vector<double> modes(static_cast<size_t>(mx) * ny);
    for (size_t i = 0; i < modes.size(); ++i) modes[i] = p.cbuf_pad[i][0];

    Grid pg(grid_.half_width, mx, grid_.strip_width, ny);
    Field f(pg);
    y_synthesize(modes.data(), f.values.data(), mx);
    return f;
}

SpectralField StripTransform::from_physical_padded(const Field& padded) const {
    Plans& p = *plans_;
    const int nx = p.nx, ny = p.ny, mx = p.mx;
    if (padded.grid.nx != mx || padded.grid.ny != ny)
        fail(Errc::invalid_argument, "padded analysis: wrong padded grid");

    std::vector<double> modes(static_cast<size_t>(mx) * ny);
    y_analyze(padded.values.data(), modes.data(), mx);

    for (size_t i = 0; i < modes.size(); ++i) {
        p.cbuf_pad[i][0] = modes[i];
        p.cbuf_pad[i][1] = 0.0;
    }
    fftw_execute(p.x_fwd_pad);

    SpectralField sf(grid_, bc_);
    const double s = 1.0 / mx;
    for (int jw = 0; jw < nx; ++jw) {
        int j = grid_.freq_of_index(jw);
        int kw = j >= 0 ? j : j + mx;
        double phase = (j % 2 == 0) ? s : -s;
        for (int m = 0; m < ny; ++m) {
            size_t src = static_cast<size_t>(kw) * ny + m;
            size_t dst = static_cast<size_t>(jw) * ny + m;
            sf.coef[dst] = {phase * p.cbuf_pad[src][0], phase * p.cbuf_pad[src][1]};
        }
    }
    return sf;
}

} // namespace zk
