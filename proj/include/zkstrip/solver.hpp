#ifndef ZKSTRIP_SOLVER_HPP
#define ZKSTRIP_SOLVER_HPP

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zkstrip/nonlinearity.hpp"
#include "zkstrip/propagator.hpp"

namespace zk {

struct RunConfig {
    BoundaryCase bc = BoundaryCase::Periodic;
    Grid grid;
    double delta = 0.0;               // parabolic regularization
    std::optional<double> trunc_h;    // g_h truncation; nullopt = raw flux
    double T = 1.0;
    double t0 = 0.02;                 // slab length (normalized to divide T)
    double tol = 1e-10;               // fixed-point relative tolerance
    int max_iter = 25;
    int duhamel_nodes = 6;            // Gauss-Legendre nodes per slab
    int snapshot_every = 1;           // snapshot stride in slabs
    Flux flux = Flux::make("zero");

    void validate() const;
};

struct Trajectory {
    RunConfig config;
    std::vector<double> times;
    std::vector<Field> snapshots;
    std::vector<int> slab_iterations; // per top-level slab (summed over auto-halved sub-slabs)
    std::vector<int> slab_halvings;
    std::vector<double> leakage;      // mass fraction in the outer 10% of the window
    bool leakage_flag = false;
    bool compat_warning = false;
};

class Forcing {
  public:
    virtual ~Forcing() = default;
    virtual bool is_zero() const { return false; }
    virtual Field eval(double t, const StripTransform& tr) const = 0;
};

class ZeroForcing : public Forcing {
  public:
    bool is_zero() const override { return true; }
    Field eval(double, const StripTransform& tr) const override { return Field(tr.grid()); }
};

// One application of the contraction map: v (at the slab's quadrature times) ->
// solution of the linear problem with source f - (g_h(v))_x, evaluated at the
// quadrature times and the slab end (last element).
std::vector<SpectralField> lambda_map(const StripTransform& tr, const RunConfig& cfg,
                                      const SpectralField& u_slab_start,
                                      const std::vector<SpectralField>& v_nodes,
                                      const std::vector<SpectralField>& f_nodes, double slab_len);

struct SlabResult {
    SpectralField end;
    int iterations = 0;
    int halvings = 0;
};

// Picard iteration from the constant-in-time initial guess; on max_iter
// exhaustion the slab is halved and re-solved (up to 6 halvings).
SlabResult solve_slab(const StripTransform& tr, const RunConfig& cfg, const SpectralField& u_start,
                      const Forcing& forcing, double t_start, double slab_len);

Trajectory run(const StripTransform& tr, const Field& u0, const Forcing& forcing,
               const RunConfig& cfg);

// mass fraction of a field in |x| >= 0.9 X
double window_leakage(const Field& f);

struct SweepRow {
    double h = 0.0;
    bool ok = false;
    std::string error;
    // distance to the next row's trajectory (filled on rows 0..n-2)
    double dist_c_l2 = 0.0;       // max over snapshots of L2 difference
    double dist_weighted = 0.0;   // same in the L2^alpha norm
    // monitored uniform-bound norms for this row
    double x_norm = 0.0;          // sup_t H^{0,alpha} + window/weighted seminorm roots
    double h_half_h1 = 0.0;       // h^{1/2} ||u||_{L2(0,T;H^{1,alpha})}
};

// Truncation sweep: h varies in g_h; delta stays at cfg.delta unless
// couple_delta, which also sets delta = h per row (the fully coupled regularization).
std::vector<SweepRow> regularization_sweep(const StripTransform& tr, const Field& u0,
                                           const Forcing& forcing, const RunConfig& base,
                                           const std::vector<double>& h_list, double alpha,
                                           bool couple_delta = false);

} // namespace zk

#endif
