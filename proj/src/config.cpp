#include "zkstrip/config.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "zkstrip/diagnostics.hpp"
#include "zkstrip/error.hpp"
#include "zkstrip/snapshot.hpp"

namespace zk {

namespace {

const char* const known_keys[] = {
    "case",          "grid.X",          "grid.nx",        "grid.L",
    "grid.ny",       "delta",           "trunc_h",        "T",
    "t0",            "tol",             "max_iter",       "duhamel_nodes",
    "snapshot_every", "seed",           "threads",        "out_dir",
    "flux.name",     "flux.param",      "ic.type",        "ic.amplitude",
    "ic.j",          "ic.l",            "ic.x0",          "ic.sigma",
    "ic.l2",         "ic.ymix",         "ic.path",        "forcing.type",
    "forcing.amplitude", "forcing.j",   "forcing.l",      "forcing.x0",
    "forcing.sigma", "forcing.omega",   "forcing.dir",    "diag.alpha",
    "diag.emit_plot_script",
};

bool key_known(const std::string& k) {
    for (const char* kk : known_keys)
        if (k == kk) return true;
    // parameterized namespaces consumed by specific commands
    return k.rfind("check.", 0) == 0 || k.rfind("sweep.", 0) == 0;
}

std::string trim(const std::string& s) {
    size_t a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    size_t b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

} // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
    ConfigFile cfg;
    cfg.raw_ = text;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        std::string s = line;
        size_t hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        size_t eq = s.find('=');
        if (eq == std::string::npos)
            fail(Errc::config, "config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(s.substr(0, eq));
        std::string val = trim(s.substr(eq + 1));
        if (key.empty() || val.empty())
            fail(Errc::config, "config line " + std::to_string(lineno) + ": empty key or value");
        if (!key_known(key))
            fail(Errc::config,
                 "config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
        if (cfg.kv_.count(key))
            fail(Errc::config,
                 "config line " + std::to_string(lineno) + ": duplicate key '" + key + "'");
        cfg.kv_[key] = val;
    }
    return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(Errc::config, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string ConfigFile::get_string(const std::string& key, const std::string& def) const {
    auto it = kv_.find(key);
    return it == kv_.end() ? def : it->second;
}

double ConfigFile::get_double(const std::string& key, double def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
        size_t pos = 0;
        double v = std::stod(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail(Errc::config, "config: key '" + key + "' is not a number: " + it->second);
    }
}

int ConfigFile::get_int(const std::string& key, int def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    try {
        size_t pos = 0;
        int v = std::stoi(it->second, &pos);
        if (pos != it->second.size()) throw std::invalid_argument("trailing");
        return v;
    } catch (const std::exception&) {
        fail(Errc::config, "config: key '" + key + "' is not an integer: " + it->second);
    }
}

bool ConfigFile::get_bool(const std::string& key, bool def) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return def;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    fail(Errc::config, "config: key '" + key + "' is not a boolean: " + it->second);
}

std::vector<double> ConfigFile::get_list(const std::string& key) const {
    auto it = kv_.find(key);
    if (it == kv_.end()) return {};
    std::vector<double> out;
    std::istringstream ss(it->second);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        tok = trim(tok);
        if (tok.empty()) continue;
        try {
            out.push_back(std::stod(tok));
        } catch (const std::exception&) {
            fail(Errc::config, "config: list '" + key + "' has a bad entry: " + tok);
        }
    }
    return out;
}

void ConfigFile::set(const std::string& key, const std::string& value) {
    if (!key_known(key)) fail(Errc::config, "config override: unknown key '" + key + "'");
    kv_[key] = value;
}

std::string ConfigFile::digest() const {
    std::string all;
    for (const auto& [k, v] : kv_) all += k + "=" + v + ";";
    return digest_hex(all);
}

RunConfig ConfigFile::run_config() const {
    RunConfig rc;
    rc.bc = boundary_from_tag(get_string("case", "d"));
    rc.grid = Grid(get_double("grid.X", 30.0), get_int("grid.nx", 256),
                   get_double("grid.L", 2.0 * std::numbers::pi), get_int("grid.ny", 32));
    rc.delta = get_double("delta", 0.0);
    std::string h = get_string("trunc_h", "none");
    if (h != "none") rc.trunc_h = get_double("trunc_h", 1.0);
    rc.T = get_double("T", 1.0);
    rc.t0 = get_double("t0", 0.02);
    rc.tol = get_double("tol", 1e-10);
    rc.max_iter = get_int("max_iter", 30);
    rc.duhamel_nodes = get_int("duhamel_nodes", 6);
    rc.snapshot_every = get_int("snapshot_every", 1);
    rc.flux = Flux::make(get_string("flux.name", "zk"), get_double("flux.param", 1.0));
    rc.validate();
    return rc;
}

Field ConfigFile::initial_condition(const StripTransform& tr) const {
    const Grid& g = tr.grid();
    std::string type = get_string("ic.type", "zero");
    Field f(g);
    if (type == "zero") return f;

    if (type == "snapshot") {
        std::string path = get_string("ic.path", "");
        if (path.empty()) fail(Errc::config, "ic.type = snapshot requires ic.path");
        SnapshotMeta meta;
        Field snap = read_snapshot(path, &meta);
        if (snap.grid != g || meta.bc != tr.bc())
            fail(Errc::config, "ic snapshot grid/case does not match the configuration");
        return snap;
    }

    double amp = get_double("ic.amplitude", 1.0);
    int l = get_int("ic.l", 1) - 1; // config uses the 1-based mode index l
    if (l < 0 || l >= g.ny) fail(Errc::config, "ic.l out of range");

    if (type == "mode") {
        int j = get_int("ic.j", 1);
        if (std::abs(j) >= g.nx / 2) fail(Errc::config, "ic.j out of range");
        for (int i = 0; i < g.nx; ++i)
            for (int q = 0; q < g.ny; ++q)
                f.at(i, q) =
                    amp * std::cos(g.xi(j) * g.x(i)) * tr.basis().psi(l, tr.basis().node(q));
        return f;
    }

    double x0 = get_double("ic.x0", 0.0);
    double sigma = get_double("ic.sigma", 0.1 * g.half_width);
    auto psin = [&](int mode) {
        double m = 0.0;
        for (int q = 0; q < g.ny; ++q)
            m = std::max(m, std::abs(tr.basis().psi(mode, tr.basis().node(q))));
        return m;
    };

    if (type == "gaussian") {
        double pm = psin(l);
        for (int i = 0; i < g.nx; ++i) {
            double gx = amp * std::exp(-std::pow((g.x(i) - x0) / sigma, 2));
            for (int q = 0; q < g.ny; ++q)
                f.at(i, q) = gx * tr.basis().psi(l, tr.basis().node(q)) / pm;
        }
        return f;
    }
    if (type == "gaussian_mix") {
        int l2 = get_int("ic.l2", 2) - 1;
        if (l2 < 0 || l2 >= g.ny) fail(Errc::config, "ic.l2 out of range");
        double mix = get_double("ic.ymix", 0.4);
        double pm1 = psin(l), pm2 = psin(l2);
        for (int i = 0; i < g.nx; ++i) {
            double gx = amp * std::exp(-std::pow((g.x(i) - x0) / sigma, 2));
            for (int q = 0; q < g.ny; ++q)
                f.at(i, q) = gx * (tr.basis().psi(l, tr.basis().node(q)) / pm1 +
                                   mix * tr.basis().psi(l2, tr.basis().node(q)) / pm2);
        }
        return f;
    }
    fail(Errc::config, "unknown ic.type '" + type + "'");
}

std::unique_ptr<Forcing> ConfigFile::forcing() const {
    std::string type = get_string("forcing.type", "zero");
    if (type == "zero") return std::make_unique<ZeroForcing>();
    if (type == "snapshot_series") {
        std::string dir = get_string("forcing.dir", "");
        if (dir.empty()) fail(Errc::config, "forcing.type = snapshot_series requires forcing.dir");
        return std::make_unique<SnapshotSeriesForcing>(dir);
    }
    auto fz = std::make_unique<AnalyticForcing>();
    fz->amplitude = get_double("forcing.amplitude", 1.0);
    fz->omega = get_double("forcing.omega", 0.0);
    fz->j = get_int("forcing.j", 1);
    fz->ymode = get_int("forcing.l", 1) - 1;
    fz->x0 = get_double("forcing.x0", 0.0);
    fz->sigma = get_double("forcing.sigma", 2.0);
    if (type == "mode")
        fz->profile = AnalyticForcing::Profile::Mode;
    else if (type == "gaussian")
        fz->profile = AnalyticForcing::Profile::Gaussian;
    else
        fail(Errc::config, "unknown forcing.type '" + type + "'");
    return fz;
}

Field AnalyticForcing::eval(double t, const StripTransform& tr) const {
    const Grid& g = tr.grid();
    Field f(g);
    if (amplitude == 0.0) return f;
    double mod = amplitude * std::cos(omega * t);
    if (ymode < 0 || ymode >= g.ny) fail(Errc::config, "forcing.l out of range");
    if (profile == Profile::Mode) {
        for (int i = 0; i < g.nx; ++i)
            for (int q = 0; q < g.ny; ++q)
                f.at(i, q) =
                    mod * std::cos(g.xi(j) * g.x(i)) * tr.basis().psi(ymode, tr.basis().node(q));
    } else {
        double pm = 0.0;
        for (int q = 0; q < g.ny; ++q)
            pm = std::max(pm, std::abs(tr.basis().psi(ymode, tr.basis().node(q))));
        for (int i = 0; i < g.nx; ++i) {
            double gx = mod * std::exp(-std::pow((g.x(i) - x0) / sigma, 2));
            for (int q = 0; q < g.ny; ++q)
                f.at(i, q) = gx * tr.basis().psi(ymode, tr.basis().node(q)) / pm;
        }
    }
    return f;
}

SnapshotSeriesForcing::SnapshotSeriesForcing(const std::string& dir) {
    namespace fs = std::filesystem;
    if (!fs::is_directory(dir)) fail(Errc::config, "forcing.dir is not a directory: " + dir);
    std::vector<std::string> paths;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.path().extension() == ".zks") paths.push_back(e.path().string());
    std::sort(paths.begin(), paths.end());
    if (paths.empty()) fail(Errc::config, "forcing.dir holds no .zks snapshots: " + dir);
    for (const auto& p : paths) {
        SnapshotMeta meta;
        fields_.push_back(read_snapshot(p, &meta));
        times_.push_back(meta.time);
    }
    for (size_t i = 1; i < times_.size(); ++i)
        if (times_[i] <= times_[i - 1])
            fail(Errc::config, "forcing series times must increase with file order");
}

Field SnapshotSeriesForcing::eval(double t, const StripTransform& tr) const {
    if (fields_.front().grid != tr.grid())
        fail(Errc::config, "forcing series grid does not match the run grid");
    if (t <= times_.front()) return fields_.front();
    if (t >= times_.back()) return fields_.back();
    size_t hi = 1;
    while (times_[hi] < t) ++hi;
    double w = (t - times_[hi - 1]) / (times_[hi] - times_[hi - 1]);
    Field out = fields_[hi - 1];
    for (size_t i = 0; i < out.values.size(); ++i)
        out.values[i] = (1.0 - w) * out.values[i] + w * fields_[hi].values[i];
    return out;
}

} // namespace zk
