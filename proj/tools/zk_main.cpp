// zkstrip command line: run | check | sweep | info, driven entirely through
// the C API of libzkstrip.
#include <CLI11.hpp>

#include <cstdio>
#include <string>

#include "zkstrip.h"

namespace {

struct ConfigHandle {
    zk_config* cfg = nullptr;
    ~ConfigHandle() { zk_config_free(cfg); }
};

int load_config(const std::string& path, const std::string& seed, const std::string& threads,
                ConfigHandle& h) {
    if (zk_config_load(path.c_str(), &h.cfg) != ZK_OK) {
        std::fprintf(stderr, "error: %s\n", zk_last_error());
        return 2;
    }
    if (!seed.empty() && zk_config_override(h.cfg, "seed", seed.c_str()) != ZK_OK) {
        std::fprintf(stderr, "error: %s\n", zk_last_error());
        return 2;
    }
    if (!threads.empty() && zk_config_override(h.cfg, "threads", threads.c_str()) != ZK_OK) {
        std::fprintf(stderr, "error: %s\n", zk_last_error());
        return 2;
    }
    return 0;
}

int emit(zk_report* rep) {
    if (!rep) return 2;
    std::fputs(zk_report_text(rep), stdout);
    int code = zk_report_exit_code(rep);
    zk_report_free(rep);
    return code;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"zkstrip: Zakharov-Kuznetsov strip simulator and verification harness"};
    app.require_subcommand(1);
    app.fallthrough();

    std::string config_path, out_dir, seed, threads;
    app.add_option("--config", config_path, "configuration file")->required();
    app.add_option("--out", out_dir, "output directory (overrides ZKSTRIP_OUT and the config)");
    app.add_option("--seed", seed, "override the configured random seed");
    app.add_option("--threads", threads, "override the configured thread count");

    auto* c_run = app.add_subcommand("run", "integrate and write snapshots + invariants");
    auto* c_check = app.add_subcommand("check", "run one verification check");
    std::string check_name;
    c_check->add_option("name", check_name,
                        "conservation|interpolation|weak-residual|energy-identity|dependence|smoothing")
        ->required();
    auto* c_sweep = app.add_subcommand("sweep", "parameter sweep with a convergence table");
    std::string sweep_param;
    c_sweep->add_option("parameter", sweep_param, "h|delta|t0|grid")->required();
    auto* c_info = app.add_subcommand("info", "print the dispersion table and eigenvalues");

    CLI11_PARSE(app, argc, argv);

    ConfigHandle h;
    if (int rc = load_config(config_path, seed, threads, h)) return rc;
    const char* out = out_dir.empty() ? nullptr : out_dir.c_str();

    zk_report* rep = nullptr;
    if (c_run->parsed()) {
        zk_run(h.cfg, out, &rep);
        return emit(rep);
    }
    if (c_check->parsed()) {
        zk_check(h.cfg, check_name.c_str(), out, &rep);
        return emit(rep);
    }
    if (c_sweep->parsed()) {
        zk_sweep(h.cfg, sweep_param.c_str(), out, &rep);
        return emit(rep);
    }
    if (c_info->parsed()) {
        zk_info(h.cfg, &rep);
        return emit(rep);
    }
    return 2;
}
