/* Exercises the shared-library C API end to end: configs, driver verbs,
 * field/snapshot handles, the numeric helpers, and the error paths. */
#include <math.h>
#include <stdio.h>
#include <stdlib.h>
#include <string.h>

#include "zkstrip.h"

static int failures = 0;

#define CHECK(cond)                                                        \
    do {                                                                   \
        if (!(cond)) {                                                     \
            fprintf(stderr, "FAIL %s:%d: %s\n", __FILE__, __LINE__, #cond); \
            ++failures;                                                    \
        }                                                                  \
    } while (0)

static const char* config_text =
    "case = d\n"
    "grid.X = 15\n"
    "grid.nx = 64\n"
    "grid.L = 6.283185307179586\n"
    "grid.ny = 8\n"
    "delta = 0\n"
    "T = 0.05\n"
    "t0 = 0.01\n"
    "tol = 1e-10\n"
    "flux.name = zk\n"
    "ic.type = gaussian\n"
    "ic.amplitude = 0.8\n"
    "ic.sigma = 2.5\n"
    "ic.l = 1\n"
    "seed = 7\n";

int main(void) {
    CHECK(strlen(zk_version()) > 0);

    /* config parsing + rejection */
    zk_config* cfg = NULL;
    CHECK(zk_config_parse(config_text, &cfg) == ZK_OK);
    CHECK(cfg != NULL);
    zk_config* bad = NULL;
    CHECK(zk_config_parse("no.such.key = 1\n", &bad) == ZK_ERR_CONFIG);
    CHECK(strlen(zk_last_error()) > 0);
    CHECK(zk_config_override(cfg, "seed", "9") == ZK_OK);
    CHECK(zk_config_override(cfg, "bogus", "1") == ZK_ERR_CONFIG);

    /* info */
    zk_report* rep = NULL;
    CHECK(zk_info(cfg, &rep) == ZK_OK);
    CHECK(zk_report_exit_code(rep) == 0);
    CHECK(strstr(zk_report_text(rep), "eigenvalues") != NULL);
    zk_report_free(rep);

    /* run */
    rep = NULL;
    CHECK(zk_run(cfg, "/tmp/zk_capi_out", &rep) == ZK_OK);
    CHECK(zk_report_exit_code(rep) == 0);
    CHECK(strstr(zk_report_json(rep), "mass_drift_rel") != NULL);
    zk_report_free(rep);

    /* check verbs: pass and unknown */
    rep = NULL;
    CHECK(zk_check(cfg, "conservation", "/tmp/zk_capi_out", &rep) == ZK_OK);
    CHECK(zk_report_exit_code(rep) == 0);
    zk_report_free(rep);
    rep = NULL;
    CHECK(zk_check(cfg, "nonsense", "/tmp/zk_capi_out", &rep) == ZK_ERR_CONFIG);
    zk_report_free(rep);

    /* sweep */
    CHECK(zk_config_override(cfg, "sweep.t0", "0.025,0.0125") == ZK_OK);
    rep = NULL;
    CHECK(zk_sweep(cfg, "t0", "/tmp/zk_capi_out", &rep) == ZK_OK);
    zk_report_free(rep);

    /* fields and snapshots */
    zk_field* f = NULL;
    CHECK(zk_field_create(ZK_BC_PERIODIC, 15.0, 64, 6.283185307179586, 8, &f) == ZK_OK);
    int nx = 0, ny = 0;
    CHECK(zk_field_dims(f, &nx, &ny) == ZK_OK);
    CHECK(nx == 64 && ny == 8);
    size_t count = (size_t)nx * (size_t)ny;
    double* vals = (double*)malloc(count * sizeof(double));
    for (size_t i = 0; i < count; ++i) vals[i] = sin(0.01 * (double)i);
    CHECK(zk_field_set(f, vals, count) == ZK_OK);
    CHECK(zk_field_set(f, vals, count - 1) == ZK_ERR_ARGUMENT);

    double m = 0.0;
    CHECK(zk_field_mass(f, &m) == ZK_OK);
    CHECK(m > 0.0);
    double wl2 = 0.0;
    CHECK(zk_field_weighted_l2(f, 0.0, &wl2) == ZK_OK);
    CHECK(fabs(wl2 * wl2 - m) < 1e-9 * m);

    CHECK(zk_snapshot_write(f, 0.5, "/tmp/zk_capi_out/field.zks") == ZK_OK);
    zk_field* f2 = NULL;
    double t = 0.0;
    CHECK(zk_snapshot_read("/tmp/zk_capi_out/field.zks", &f2, &t) == ZK_OK);
    CHECK(t == 0.5);
    double* vals2 = (double*)malloc(count * sizeof(double));
    CHECK(zk_field_get(f2, vals2, count) == ZK_OK);
    int identical = 1;
    for (size_t i = 0; i < count; ++i)
        if (vals[i] != vals2[i]) identical = 0;
    CHECK(identical);
    CHECK(zk_snapshot_read("/tmp/zk_no_such_file.zks", &f2, &t) == ZK_ERR_IO);

    /* numeric helpers */
    double lam[4];
    CHECK(zk_eigenvalues(ZK_BC_DIRICHLET_DIRICHLET, 3.14159265358979323846, 4, lam) == ZK_OK);
    CHECK(fabs(lam[0] - 1.0) < 1e-12);
    CHECK(fabs(lam[3] - 16.0) < 1e-11);
    double re = 0.0, im = 0.0;
    CHECK(zk_dispersion_rate(1.0, 1.0, 1.0, &re, &im) == ZK_OK);
    CHECK(fabs(re + 2.0) < 1e-15 && fabs(im - 2.0) < 1e-15);
    CHECK(zk_dispersion_rate(1.0, -1.0, 0.0, &re, &im) == ZK_ERR_ARGUMENT);

    /* null-argument guards */
    CHECK(zk_run(NULL, NULL, NULL) == ZK_ERR_ARGUMENT);
    CHECK(zk_field_mass(NULL, &m) == ZK_ERR_ARGUMENT);

    free(vals);
    free(vals2);
    zk_field_free(f);
    zk_field_free(f2);
    zk_config_free(cfg);

    if (failures) {
        fprintf(stderr, "%d C API check(s) failed\n", failures);
        return 1;
    }
    printf("C API surface: all checks passed\n");
    return 0;
}
