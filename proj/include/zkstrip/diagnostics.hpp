#ifndef ZKSTRIP_DIAGNOSTICS_HPP
#define ZKSTRIP_DIAGNOSTICS_HPP

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "zkstrip/norms.hpp"
#include "zkstrip/solver.hpp"

namespace zk {

struct CheckReport {
    std::string name;
    std::string inputs_digest;
    std::map<std::string, double> measured;
    std::map<std::string, double> fitted;
    std::vector<double> refinement; // residual/constant trend under refinement
    bool passed = false;
    double tolerance = 0.0;
    std::string detail;
};

uint64_t fnv1a(const std::string& s);
std::string digest_hex(const std::string& s);

// ---- conserved functionals -------------------------------------------------

// integral of u^2 over the window
double mass(const StripTransform& tr, const Field& u);

// integral of |Du|^2 - 2 g*(u); the conserved functional (gradient part via
// exact Parseval sums, flux primitive by nodal quadrature)
double energy(const StripTransform& tr, const Field& u, const Flux& flux);

// the single-g* printing of the first-page functional, recorded alongside
double energy_single_gstar(const StripTransform& tr, const Field& u, const Flux& flux);

// ---- seeded random fields ----------------------------------------------------

class SplitMix {
  public:
    explicit SplitMix(uint64_t seed) : state_(seed) {}
    uint64_t next();
    double uniform();                       // [0,1)
    double uniform(double lo, double hi);

  private:
    uint64_t state_;
};

// smooth random bump: gaussian in x times a low-mode y combination
Field random_bump(const StripTransform& tr, SplitMix& rng, double amp_lo = 0.5,
                  double amp_hi = 2.0);

// ---- two-weight interpolation inequality --------------------------------------

struct InterpolationParams {
    int k = 1;
    int m = 0;
    double q = 2.0; // may be infinity
    Weight rho1, rho2;
    int family_size = 100;
    uint64_t seed = 1;
    double slack = 0.10;
};

double interpolation_s(int k, int m, double q);

// single-field ratio LHS / (RHS_product + RHS_l2), with the constants stripped
double interpolation_ratio(const StripTransform& tr, const Field& psi,
                           const InterpolationParams& p);

// calibration batch fit + disjoint validation batch + grid-refinement stability
CheckReport interpolation_check(const StripTransform& tr, const InterpolationParams& p);

// ---- weak formulation -----------------------------------------------------------

struct TestFunction {
    // Pairing tables: the x-profile and its derivatives projected onto the
    // grid's resolved band, so quadrature against band-limited fields is exact.
    std::vector<double> B, B1, B2, B3;
    std::vector<double> B_true; // raw samples, used for the support validation
    int ymode = 0;
    std::function<double(double)> theta, theta_d;
    double support_r = 0.0;
    std::string name;
};

// eta-shoulder bump: support (center-r, center+r), flat top, smooth shoulders
TestFunction make_test_function(const StripTransform& tr, double center, double r,
                                double shoulder, int ymode, int theta_kind, double T);

// throws Errc::invalid_argument when phi violates its constraints
void validate_test_function(const StripTransform& tr, const TestFunction& phi, double T);

double weak_residual(const StripTransform& tr, const Trajectory& traj, const Forcing& forcing,
                     const TestFunction& phi);

// ---- weighted energy identity ----------------------------------------------------

struct EnergyIdentityParams {
    Weight rho;
    double delta = 0.0;
    double T = 1.0;
    int time_panels = 8; // composite Gauss panels of the time integral
    int gl_nodes = 6;
    double pass_tol = 1e-8;
};

// trajectory generated internally by the exact linear propagator; f0/f1 may be null
CheckReport energy_identity_check(const StripTransform& tr, const SpectralField& u0,
                                  const Forcing* f0, const Forcing* f1,
                                  const EnergyIdentityParams& p);

// ---- local smoothing ----------------------------------------------------------

double local_smoothing(const StripTransform& tr, const Trajectory& traj, double r);

// ---- weighted energy inequality fit ----------------------------------------------

struct EnergyInequalityParams {
    Weight rho;
    double delta = 0.0;
    double T = 0.5;
    int calib_runs = 6;
    int valid_runs = 6;
    uint64_t seed = 7;
    int time_panels = 12;
    double slack = 0.10;
};
CheckReport energy_inequality_check(const StripTransform& tr, const EnergyInequalityParams& p);

// ---- continuous dependence --------------------------------------------------------

struct DependenceParams {
    double alpha = 0.5;
    double beta = 1.0;
    bool h1_level = false;   // gradient-level quantities instead of the L2 level
    bool apply_shift = true; // Galilean x-shift by g'(0) t before measuring
};

CheckReport continuous_dependence(const StripTransform& tr, const Trajectory& u_traj,
                                  const Trajectory& ut_traj, const Forcing& f, const Forcing& ft,
                                  const DependenceParams& p);

} // namespace zk

#endif
