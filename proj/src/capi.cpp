#include "zkstrip.h"

#include <cstring>
#include <string>

#include "zkstrip/diagnostics.hpp"
#include "zkstrip/error.hpp"
#include "zkstrip/propagator.hpp"
#include "zkstrip/runner.hpp"
#include "zkstrip/snapshot.hpp"

namespace {

thread_local std::string g_last_error;

zk_status status_of(const zk::Error& e) {
    switch (e.code()) {
        case zk::Errc::config: return ZK_ERR_CONFIG;
        case zk::Errc::solver: return ZK_ERR_SOLVER;
        case zk::Errc::io: return ZK_ERR_IO;
        case zk::Errc::invalid_argument: return ZK_ERR_ARGUMENT;
        case zk::Errc::non_real_synthesis: return ZK_ERR_ARGUMENT;
        default: return ZK_ERR_INTERNAL;
    }
}

template <typename Fn>
zk_status guarded(Fn&& fn) {
    try {
        return fn();
    } catch (const zk::Error& e) {
        g_last_error = e.what();
        return status_of(e);
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return ZK_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return ZK_ERR_INTERNAL;
    }
}

zk::BoundaryCase bc_of(zk_bc bc) {
    switch (bc) {
        case ZK_BC_DIRICHLET_DIRICHLET: return zk::BoundaryCase::DirichletDirichlet;
        case ZK_BC_NEUMANN_NEUMANN: return zk::BoundaryCase::NeumannNeumann;
        case ZK_BC_DIRICHLET_NEUMANN: return zk::BoundaryCase::DirichletNeumann;
        case ZK_BC_PERIODIC: return zk::BoundaryCase::Periodic;
    }
    zk::fail(zk::Errc::invalid_argument, "bad boundary case enum");
}

} // namespace

struct zk_config {
    zk::ConfigFile cfg;
};

struct zk_field {
    zk::Field field;
    zk::BoundaryCase bc;
    // meta carried through snapshot round trips
    zk::SnapshotMeta meta;
};

struct zk_report {
    int exit_code = 0;
    std::string text;
    std::string json;
};

extern "C" {

const char* zk_version(void) { return "zkstrip 1.0.0"; }

const char* zk_last_error(void) { return g_last_error.c_str(); }

zk_status zk_config_load(const char* path, zk_config** out) {
    return guarded([&]() -> zk_status {
        if (!path || !out) zk::fail(zk::Errc::invalid_argument, "null argument");
        *out = new zk_config{zk::ConfigFile::load(path)};
        return ZK_OK;
    });
}

zk_status zk_config_parse(const char* text, zk_config** out) {
    return guarded([&]() -> zk_status {
        if (!text || !out) zk::fail(zk::Errc::invalid_argument, "null argument");
        *out = new zk_config{zk::ConfigFile::parse(text)};
        return ZK_OK;
    });
}

zk_status zk_config_override(zk_config* cfg, const char* key, const char* value) {
    return guarded([&]() -> zk_status {
        if (!cfg || !key || !value) zk::fail(zk::Errc::invalid_argument, "null argument");
        cfg->cfg.set(key, value);
        return ZK_OK;
    });
}

void zk_config_free(zk_config* cfg) { delete cfg; }

namespace {

zk_status finish(const zk::CommandResult& res, zk_report** report) {
    if (report) *report = new zk_report{res.exit_code, res.text, res.json};
    if (res.exit_code == 0) return ZK_OK;
    g_last_error = res.text;
    switch (res.exit_code) {
        case 1: return ZK_ERR_CHECK_FAILED;
        case 2: return ZK_ERR_CONFIG;
        case 3: return ZK_ERR_SOLVER;
        default: return ZK_ERR_INTERNAL;
    }
}

} // namespace

zk_status zk_run(const zk_config* cfg, const char* out_dir, zk_report** report) {
    return guarded([&]() -> zk_status {
        if (!cfg) zk::fail(zk::Errc::invalid_argument, "null config");
        std::string dir = zk::resolve_out_dir(cfg->cfg, out_dir ? out_dir : "");
        return finish(zk::cmd_run(cfg->cfg, dir), report);
    });
}

zk_status zk_check(const zk_config* cfg, const char* check_name, const char* out_dir,
                   zk_report** report) {
    return guarded([&]() -> zk_status {
        if (!cfg || !check_name) zk::fail(zk::Errc::invalid_argument, "null argument");
        std::string dir = zk::resolve_out_dir(cfg->cfg, out_dir ? out_dir : "");
        return finish(zk::cmd_check(cfg->cfg, check_name, dir), report);
    });
}

zk_status zk_sweep(const zk_config* cfg, const char* parameter, const char* out_dir,
                   zk_report** report) {
    return guarded([&]() -> zk_status {
        if (!cfg || !parameter) zk::fail(zk::Errc::invalid_argument, "null argument");
        std::string dir = zk::resolve_out_dir(cfg->cfg, out_dir ? out_dir : "");
        return finish(zk::cmd_sweep(cfg->cfg, parameter, dir), report);
    });
}

zk_status zk_info(const zk_config* cfg, zk_report** report) {
    return guarded([&]() -> zk_status {
        if (!cfg) zk::fail(zk::Errc::invalid_argument, "null config");
        return finish(zk::cmd_info(cfg->cfg), report);
    });
}

int zk_report_exit_code(const zk_report* r) { return r ? r->exit_code : 2; }

const char* zk_report_text(const zk_report* r) { return r ? r->text.c_str() : ""; }

const char* zk_report_json(const zk_report* r) { return r ? r->json.c_str() : ""; }

void zk_report_free(zk_report* r) { delete r; }

zk_status zk_field_create(zk_bc bc, double half_width, int nx, double strip_width, int ny,
                          zk_field** out) {
    return guarded([&]() -> zk_status {
        if (!out) zk::fail(zk::Errc::invalid_argument, "null out");
        zk::Grid g(half_width, nx, strip_width, ny);
        auto* f = new zk_field{zk::Field(g), bc_of(bc), {}};
        f->meta.bc = f->bc;
        *out = f;
        return ZK_OK;
    });
}

zk_status zk_field_set(zk_field* f, const double* values, size_t count) {
    return guarded([&]() -> zk_status {
        if (!f || !values) zk::fail(zk::Errc::invalid_argument, "null argument");
        if (count != f->field.values.size())
            zk::fail(zk::Errc::invalid_argument, "value count does not match nx*ny");
        std::memcpy(f->field.values.data(), values, count * sizeof(double));
        return ZK_OK;
    });
}

zk_status zk_field_get(const zk_field* f, double* values, size_t count) {
    return guarded([&]() -> zk_status {
        if (!f || !values) zk::fail(zk::Errc::invalid_argument, "null argument");
        if (count != f->field.values.size())
            zk::fail(zk::Errc::invalid_argument, "value count does not match nx*ny");
        std::memcpy(values, f->field.values.data(), count * sizeof(double));
        return ZK_OK;
    });
}

zk_status zk_field_dims(const zk_field* f, int* nx, int* ny) {
    return guarded([&]() -> zk_status {
        if (!f || !nx || !ny) zk::fail(zk::Errc::invalid_argument, "null argument");
        *nx = f->field.grid.nx;
        *ny = f->field.grid.ny;
        return ZK_OK;
    });
}

zk_status zk_field_mass(const zk_field* f, double* out) {
    return guarded([&]() -> zk_status {
        if (!f || !out) zk::fail(zk::Errc::invalid_argument, "null argument");
        zk::StripTransform tr(f->field.grid, f->bc);
        *out = zk::mass(tr, f->field);
        return ZK_OK;
    });
}

zk_status zk_field_weighted_l2(const zk_field* f, double alpha, double* out) {
    return guarded([&]() -> zk_status {
        if (!f || !out) zk::fail(zk::Errc::invalid_argument, "null argument");
        zk::StripTransform tr(f->field.grid, f->bc);
        *out = zk::weighted_l2(tr, f->field, alpha);
        return ZK_OK;
    });
}

void zk_field_free(zk_field* f) { delete f; }

zk_status zk_snapshot_write(const zk_field* f, double time, const char* path) {
    return guarded([&]() -> zk_status {
        if (!f || !path) zk::fail(zk::Errc::invalid_argument, "null argument");
        zk::SnapshotMeta meta = f->meta;
        meta.bc = f->bc;
        meta.time = time;
        zk::write_snapshot(path, f->field, meta);
        return ZK_OK;
    });
}

zk_status zk_snapshot_read(const char* path, zk_field** out, double* time) {
    return guarded([&]() -> zk_status {
        if (!path || !out) zk::fail(zk::Errc::invalid_argument, "null argument");
        zk::SnapshotMeta meta;
        zk::Field fld = zk::read_snapshot(path, &meta);
        auto* f = new zk_field{std::move(fld), meta.bc, meta};
        if (time) *time = meta.time;
        *out = f;
        return ZK_OK;
    });
}

zk_status zk_eigenvalues(zk_bc bc, double strip_width, int count, double* out) {
    return guarded([&]() -> zk_status {
        if (!out || count < 1) zk::fail(zk::Errc::invalid_argument, "bad arguments");
        zk::EigenBasis basis(bc_of(bc), strip_width, count);
        for (int m = 0; m < count; ++m) out[m] = basis.lambda(m);
        return ZK_OK;
    });
}

zk_status zk_dispersion_rate(double xi, double lambda, double delta, double* re, double* im) {
    return guarded([&]() -> zk_status {
        if (!re || !im) zk::fail(zk::Errc::invalid_argument, "null out");
        if (lambda < 0.0) zk::fail(zk::Errc::invalid_argument, "lambda must be >= 0");
        auto r = zk::dispersion_rate(xi, lambda, delta);
        *re = r.real();
        *im = r.imag();
        return ZK_OK;
    });
}

} // extern "C"
