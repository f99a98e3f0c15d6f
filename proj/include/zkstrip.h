/* zkstrip: pseudospectral simulator and verification harness for the
 * generalized Zakharov-Kuznetsov equation on a strip.
 *
 * C API over the C++ core: opaque handles, status codes, thread-local error
 * text via zk_last_error(). All functions return ZK_OK on success.
 */
#ifndef ZKSTRIP_H
#define ZKSTRIP_H

#include <stddef.h>

#ifdef __cplusplus
extern "C" {
#endif

typedef enum zk_status {
    ZK_OK = 0,
    ZK_ERR_CHECK_FAILED = 1,
    ZK_ERR_CONFIG = 2,
    ZK_ERR_SOLVER = 3,
    ZK_ERR_IO = 4,
    ZK_ERR_ARGUMENT = 5,
    ZK_ERR_INTERNAL = 6
} zk_status;

typedef enum zk_bc {
    ZK_BC_DIRICHLET_DIRICHLET = 0, /* case a */
    ZK_BC_NEUMANN_NEUMANN = 1,     /* case b */
    ZK_BC_DIRICHLET_NEUMANN = 2,   /* case c */
    ZK_BC_PERIODIC = 3             /* case d */
} zk_bc;

typedef struct zk_config zk_config;
typedef struct zk_field zk_field;
typedef struct zk_report zk_report;

const char* zk_version(void);
const char* zk_last_error(void);

/* configuration ------------------------------------------------------- */
zk_status zk_config_load(const char* path, zk_config** out);
zk_status zk_config_parse(const char* text, zk_config** out);
zk_status zk_config_override(zk_config* cfg, const char* key, const char* value);
void zk_config_free(zk_config* cfg);

/* driver verbs; report is optional (pass NULL to discard) -------------- */
zk_status zk_run(const zk_config* cfg, const char* out_dir, zk_report** report);
zk_status zk_check(const zk_config* cfg, const char* check_name, const char* out_dir,
                   zk_report** report);
zk_status zk_sweep(const zk_config* cfg, const char* parameter, const char* out_dir,
                   zk_report** report);
zk_status zk_info(const zk_config* cfg, zk_report** report);

/* reports --------------------------------------------------------------- */
int zk_report_exit_code(const zk_report* r);
const char* zk_report_text(const zk_report* r);
const char* zk_report_json(const zk_report* r);
void zk_report_free(zk_report* r);

/* fields and snapshots --------------------------------------------------- */
zk_status zk_field_create(zk_bc bc, double half_width, int nx, double strip_width, int ny,
                          zk_field** out);
zk_status zk_field_set(zk_field* f, const double* values, size_t count); /* x-major */
zk_status zk_field_get(const zk_field* f, double* values, size_t count);
zk_status zk_field_dims(const zk_field* f, int* nx, int* ny);
zk_status zk_field_mass(const zk_field* f, double* out);
zk_status zk_field_weighted_l2(const zk_field* f, double alpha, double* out);
void zk_field_free(zk_field* f);

zk_status zk_snapshot_write(const zk_field* f, double time, const char* path);
zk_status zk_snapshot_read(const char* path, zk_field** out, double* time);

/* small numeric surface --------------------------------------------------- */
zk_status zk_eigenvalues(zk_bc bc, double strip_width, int count, double* out);
zk_status zk_dispersion_rate(double xi, double lambda, double delta, double* re, double* im);

#ifdef __cplusplus
}
#endif
#endif
