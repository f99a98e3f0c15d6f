#include "zkstrip/solver.hpp"

#include <cmath>
#include <sstream>

#include "zkstrip/error.hpp"
#include "zkstrip/norms.hpp"

namespace zk {

void RunConfig::validate() const {
    if (!(T > 0.0)) fail(Errc::config, "run config: T must be > 0");
    if (!(t0 > 0.0) || t0 > T) fail(Errc::config, "run config: need 0 < t0 <= T");
    if (!(tol > 0.0) || tol > 1e-2) fail(Errc::config, "run config: tol in (0, 1e-2]");
    if (max_iter < 2) fail(Errc::config, "run config: max_iter >= 2");
    if (delta < 0.0 || delta > 1.0) fail(Errc::config, "run config: delta in [0,1]");
    if (duhamel_nodes < 2 || duhamel_nodes > 16)
        fail(Errc::config, "run config: duhamel nodes in [2,16]");
    if (snapshot_every < 1) fail(Errc::config, "run config: snapshot_every >= 1");
    if (trunc_h && (!(*trunc_h > 0.0) || *trunc_h > 1.0))
        fail(Errc::config, "run config: truncation h in (0,1]");
}

namespace {

double rel_change(const std::vector<SpectralField>& a, const std::vector<SpectralField>& b) {
    double dn = 0.0, vn = 0.0;
    for (size_t k = 0; k < a.size(); ++k) {
        for (size_t i = 0; i < a[k].coef.size(); ++i) {
            dn += std::norm(a[k].coef[i] - b[k].coef[i]);
            vn += std::norm(b[k].coef[i]);
        }
    }
    return std::sqrt(dn) / (std::sqrt(vn) + 1e-300);
}

// Kernel tables for one slab length: targets T_k = {tau_1..tau_m, len},
// quadrature abscissae s_p(T_k) = T_k gamma_p, and the Lagrange combination
// from values at the slab nodes tau_q.
struct SlabKernel {
    int m;
    double len;
    std::vector<double> gamma, gw;       // reference GL on [0,1]
    std::vector<double> tau;             // slab nodes
    std::vector<double> targets;         // tau + end
    std::vector<double> bary;            // barycentric weights of tau
    std::vector<double> lag;             // lag[k][p][q] = ell_q(T_k gamma_p)
    std::vector<std::complex<double>> kernel; // exp(r T_k (1-gamma_p)) per mode
    std::vector<std::complex<double>> hom;    // exp(r T_k) per mode
    int nmodes;

    SlabKernel(const StripTransform& tr, const RunConfig& cfg, double slab_len)
        : m(cfg.duhamel_nodes), len(slab_len) {
        gauss_legendre(m, gamma, gw);
        tau.resize(m);
        for (int q = 0; q < m; ++q) tau[q] = len * gamma[q];
        targets = tau;
        targets.push_back(len);

        bary.assign(m, 1.0);
        for (int q = 0; q < m; ++q)
            for (int r = 0; r < m; ++r)
                if (r != q) bary[q] /= (tau[q] - tau[r]);

        int nt = int(targets.size());
        lag.assign(size_t(nt) * m * m, 0.0);
        for (int k = 0; k < nt; ++k)
            for (int p = 0; p < m; ++p) {
                double s = targets[k] * gamma[p];
                double* row = &lag[(size_t(k) * m + p) * m];
                int hit = -1;
                for (int q = 0; q < m; ++q)
                    if (std::abs(s - tau[q]) < 1e-14 * len) hit = q;
                if (hit >= 0) {
                    row[hit] = 1.0;
                } else {
                    double denom = 0.0;
                    for (int q = 0; q < m; ++q) denom += bary[q] / (s - tau[q]);
                    for (int q = 0; q < m; ++q) row[q] = bary[q] / (s - tau[q]) / denom;
                }
            }

        const Grid& g = tr.grid();
        nmodes = g.nx * g.ny;
        kernel.resize(size_t(nt) * m * nmodes);
        hom.resize(size_t(nt) * nmodes);
        for (int k = 0; k < nt; ++k) {
            for (int jw = 0; jw < g.nx; ++jw) {
                double xi = g.xi(g.freq_of_index(jw));
                for (int mm = 0; mm < g.ny; ++mm) {
                    std::complex<double> r = dispersion_rate(xi, tr.basis().lambda(mm), cfg.delta);
                    int mode = jw * g.ny + mm;
                    hom[size_t(k) * nmodes + mode] = std::exp(r * targets[k]);
                    for (int p = 0; p < m; ++p)
                        kernel[(size_t(k) * m + p) * nmodes + mode] =
                            std::exp(r * (targets[k] * (1.0 - gamma[p])));
                }
            }
        }
    }

    // out_k = hom_k u0 + T_k sum_p gw_p kernel_kp (sum_q lag_kpq S_q)
    std::vector<SpectralField> apply(const SpectralField& u0,
                                     const std::vector<SpectralField>& s_nodes) const {
        int nt = int(targets.size());
        std::vector<SpectralField> out(nt, SpectralField(u0.grid, u0.bc));
        std::vector<std::complex<double>> interp(nmodes);
        for (int k = 0; k < nt; ++k) {
            SpectralField& ok = out[k];
            const std::complex<double>* hk = &hom[size_t(k) * nmodes];
            for (int i = 0; i < nmodes; ++i) ok.coef[i] = hk[i] * u0.coef[i];
            for (int p = 0; p < m; ++p) {
                const double* lrow = &lag[(size_t(k) * m + p) * m];
                for (int i = 0; i < nmodes; ++i) interp[i] = 0.0;
                for (int q = 0; q < m; ++q) {
                    double lq = lrow[q];
                    if (lq == 0.0) continue;
                    const auto& sq = s_nodes[q].coef;
                    for (int i = 0; i < nmodes; ++i) interp[i] += lq * sq[i];
                }
                const std::complex<double>* kp = &kernel[(size_t(k) * m + p) * nmodes];
                double w = targets[k] * gw[p];
                for (int i = 0; i < nmodes; ++i) ok.coef[i] += w * kp[i] * interp[i];
            }
        }
        return out;
    }
};

std::vector<SpectralField> source_nodes(const StripTransform& tr, const RunConfig& cfg,
                                        const std::vector<SpectralField>& v_nodes,
                                        const std::vector<SpectralField>& f_nodes) {
    std::vector<SpectralField> s;
    s.reserve(v_nodes.size());
    for (size_t q = 0; q < v_nodes.size(); ++q) {
        SpectralField flux = flux_x_spectral(tr, v_nodes[q], cfg.flux, cfg.trunc_h);
        SpectralField sq = f_nodes.empty() ? SpectralField(tr.grid(), tr.bc()) : f_nodes[q];
        for (size_t i = 0; i < sq.coef.size(); ++i) sq.coef[i] -= flux.coef[i];
        s.push_back(std::move(sq));
    }
    return s;
}

struct SlabContext {
    const StripTransform& tr;
    const RunConfig& cfg;
    const Forcing& forcing;
    std::vector<std::unique_ptr<SlabKernel>> kernels; // cached by slab length
    std::vector<double> kernel_len;

    const SlabKernel& kernel_for(double len) {
        for (size_t i = 0; i < kernel_len.size(); ++i)
            if (std::abs(kernel_len[i] - len) < 1e-15 * len) return *kernels[i];
        kernels.push_back(std::make_unique<SlabKernel>(tr, cfg, len));
        kernel_len.push_back(len);
        return *kernels.back();
    }

    SlabResult solve(const SpectralField& u_start, double t_start, double len, int depth) {
        const SlabKernel& K = kernel_for(len);
        int m = cfg.duhamel_nodes;

        std::vector<SpectralField> f_nodes;
        if (!forcing.is_zero()) {
            f_nodes.reserve(m);
            for (int q = 0; q < m; ++q)
                f_nodes.push_back(tr.to_spectral(forcing.eval(t_start + K.tau[q], tr)));
        }

        // constant-in-time initial guess
        std::vector<SpectralField> v(m, u_start);
        int iters = 0;
        for (int it = 1; it <= cfg.max_iter; ++it) {
            std::vector<SpectralField> s = source_nodes(tr, cfg, v, f_nodes);
            std::vector<SpectralField> next = K.apply(u_start, s);
            std::vector<SpectralField> next_nodes(next.begin(), next.begin() + m);
            double change = rel_change(next_nodes, v);
            v = std::move(next_nodes);
            iters = it;
            if (change <= cfg.tol) {
                std::vector<SpectralField> s2 = source_nodes(tr, cfg, v, f_nodes);
                std::vector<SpectralField> fin = K.apply(u_start, s2);
                return {std::move(fin[m]), iters, 0};
            }
        }
        if (depth >= 6) {
            std::ostringstream os;
            os << "solve_slab: no contraction after " << cfg.max_iter << " iterations and "
               << depth << " halvings (t_start=" << t_start << ", len=" << len << ")";
            fail(Errc::solver, os.str());
        }
        SlabResult a = solve(u_start, t_start, 0.5 * len, depth + 1);
        SlabResult b = solve(a.end, t_start + 0.5 * len, 0.5 * len, depth + 1);
        return {std::move(b.end), iters + a.iterations + b.iterations,
                1 + std::max(a.halvings, b.halvings)};
    }
};

// y-spectral tail fraction; large values signal case-incompatible data.
double y_tail_fraction(const StripTransform& tr, const SpectralField& sf) {
    const Grid& g = tr.grid();
    double total = 0.0, tail = 0.0;
    for (int jw = 0; jw < g.nx; ++jw)
        for (int m = 0; m < g.ny; ++m) {
            double a = std::norm(sf.at_wrapped(jw, m));
            total += a;
            if (m >= (3 * g.ny) / 4) tail += a;
        }
    return total > 0.0 ? std::sqrt(tail / total) : 0.0;
}

} // namespace

std::vector<SpectralField> lambda_map(const StripTransform& tr, const RunConfig& cfg,
                                      const SpectralField& u_slab_start,
                                      const std::vector<SpectralField>& v_nodes,
                                      const std::vector<SpectralField>& f_nodes, double slab_len) {
    if (int(v_nodes.size()) != cfg.duhamel_nodes)
        fail(Errc::invalid_argument, "lambda_map: v must be given at the slab quadrature times");
    if (!f_nodes.empty() && f_nodes.size() != v_nodes.size())
        fail(Errc::invalid_argument, "lambda_map: forcing node count mismatch");
    SlabKernel K(tr, cfg, slab_len);
    return K.apply(u_slab_start, source_nodes(tr, cfg, v_nodes, f_nodes));
}

SlabResult solve_slab(const StripTransform& tr, const RunConfig& cfg, const SpectralField& u_start,
                      const Forcing& forcing, double t_start, double slab_len) {
    cfg.validate();
    SlabContext ctx{tr, cfg, forcing, {}, {}};
    return ctx.solve(u_start, t_start, slab_len, 0);
}

double window_leakage(const Field& f) {
    const Grid& g = f.grid;
    double total = 0.0, outer = 0.0;
    for (int i = 0; i < g.nx; ++i) {
        double row = 0.0;
        for (int q = 0; q < g.ny; ++q) row += f.at(i, q) * f.at(i, q);
        total += row;
        if (std::abs(g.x(i)) >= 0.9 * g.half_width) outer += row;
    }
    return total > 0.0 ? outer / total : 0.0;
}

Trajectory run(const StripTransform& tr, const Field& u0, const Forcing& forcing,
               const RunConfig& cfg) {
    cfg.validate();
    if (u0.grid != tr.grid()) fail(Errc::invalid_argument, "run: grid mismatch");
    if (!u0.finite()) fail(Errc::solver, "run: non-finite initial data");
    if (!cfg.trunc_h) {
        // raw flux permitted only while g' stays bounded on the observed range
        double span = 4.0 * (u0.max_abs() + 1.0);
        if (!std::isfinite(cfg.flux.gp(span)) || !std::isfinite(cfg.flux.gp(-span)))
            fail(Errc::config, "run: raw flux has unbounded derivative on the data range");
    }

    Trajectory out;
    out.config = cfg;

    SpectralField u = tr.to_spectral(u0);

    // compatibility + decay warnings
    double max0 = u0.max_abs();
    double outer_max = 0.0;
    for (int i = 0; i < u0.grid.nx; ++i)
        if (std::abs(u0.grid.x(i)) >= 0.9 * u0.grid.half_width)
            for (int q = 0; q < u0.grid.ny; ++q)
                outer_max = std::max(outer_max, std::abs(u0.at(i, q)));
    if (max0 > 0.0 && (outer_max > 1e-10 * max0 || y_tail_fraction(tr, u) > 1e-6))
        out.compat_warning = true;

    int n_slabs = int(std::ceil(cfg.T / cfg.t0 - 1e-12));
    double len = cfg.T / n_slabs;

    out.times.push_back(0.0);
    out.snapshots.push_back(u0);
    out.leakage.push_back(window_leakage(u0));

    SlabContext ctx{tr, cfg, forcing, {}, {}};
    for (int k = 0; k < n_slabs; ++k) {
        SlabResult r = ctx.solve(u, k * len, len, 0);
        u = std::move(r.end);
        out.slab_iterations.push_back(r.iterations);
        out.slab_halvings.push_back(r.halvings);
        if ((k + 1) % cfg.snapshot_every == 0 || k + 1 == n_slabs) {
            Field snap = tr.from_spectral(u);
            if (!snap.finite()) fail(Errc::solver, "run: non-finite field");
            out.times.push_back((k + 1) * len);
            out.leakage.push_back(window_leakage(snap));
            out.snapshots.push_back(std::move(snap));
        }
    }
    for (double l : out.leakage)
        if (l > 1e-4) out.leakage_flag = true;
    return out;
}

std::vector<SweepRow> regularization_sweep(const StripTransform& tr, const Field& u0,
                                           const Forcing& forcing, const RunConfig& base,
                                           const std::vector<double>& h_list, double alpha,
                                           bool couple_delta) {
    if (h_list.empty()) fail(Errc::config, "sweep: empty h list");
    for (size_t i = 1; i < h_list.size(); ++i)
        if (!(h_list[i] < h_list[i - 1])) fail(Errc::config, "sweep: h list must decrease");

    std::vector<SweepRow> rows(h_list.size());
    std::vector<std::optional<Trajectory>> trajs(h_list.size());
    for (size_t i = 0; i < h_list.size(); ++i) {
        rows[i].h = h_list[i];
        RunConfig cfg = base;
        cfg.trunc_h = h_list[i];
        if (couple_delta) cfg.delta = h_list[i];
        try {
            trajs[i] = run(tr, u0, forcing, cfg);
            rows[i].ok = true;
        } catch (const std::exception& e) {
            rows[i].ok = false;
            rows[i].error = e.what();
            continue;
        }
        const Trajectory& t = *trajs[i];
        XkSeminorms sem = xk_alpha_seminorms(tr, t.times, t.snapshots, 0, alpha);
        rows[i].x_norm = sem.sup_hk + std::sqrt(sem.window) + std::sqrt(sem.weighted);
        std::vector<double> tw = simpson_weights(std::span<const double>(t.times));
        double h1a = 0.0;
        for (size_t s = 0; s < t.snapshots.size(); ++s) {
            double n = hk_alpha_norm(tr, t.snapshots[s], 1, alpha);
            h1a += tw[s] * n * n;
        }
        rows[i].h_half_h1 = std::sqrt(h_list[i]) * std::sqrt(h1a);
    }

    for (size_t i = 0; i + 1 < rows.size(); ++i) {
        if (!rows[i].ok || !rows[i + 1].ok) continue;
        const Trajectory& a = *trajs[i];
        const Trajectory& b = *trajs[i + 1];
        size_t n = std::min(a.snapshots.size(), b.snapshots.size());
        double dmax = 0.0, dwmax = 0.0;
        for (size_t s = 0; s < n; ++s) {
            Field diff = a.snapshots[s] - b.snapshots[s];
            dmax = std::max(dmax, weighted_l2(tr, diff, 0.0));
            dwmax = std::max(dwmax, weighted_l2(tr, diff, alpha));
        }
        rows[i].dist_c_l2 = dmax;
        rows[i].dist_weighted = dwmax;
    }
    return rows;
}

} // namespace zk
