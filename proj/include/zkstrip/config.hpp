#ifndef ZKSTRIP_CONFIG_HPP
#define ZKSTRIP_CONFIG_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "zkstrip/solver.hpp"

namespace zk {

// Plain key = value configuration text ('#' comments, dotted keys for nesting).
// Unknown keys are rejected at parse time; parsing is lossless (raw text kept).
class ConfigFile {
  public:
    static ConfigFile parse(const std::string& text);
    static ConfigFile load(const std::string& path);

    bool has(const std::string& key) const { return kv_.count(key) > 0; }
    std::string get_string(const std::string& key, const std::string& def) const;
    double get_double(const std::string& key, double def) const;
    int get_int(const std::string& key, int def) const;
    bool get_bool(const std::string& key, bool def) const;
    std::vector<double> get_list(const std::string& key) const; // comma separated

    void set(const std::string& key, const std::string& value); // override
    const std::string& raw() const { return raw_; }
    const std::map<std::string, std::string>& entries() const { return kv_; }
    std::string digest() const;

    // assembled objects
    RunConfig run_config() const;
    Field initial_condition(const StripTransform& tr) const;
    std::unique_ptr<Forcing> forcing() const;

    uint64_t seed() const { return static_cast<uint64_t>(get_int("seed", 1)); }
    int threads() const { return get_int("threads", 1); }
    std::string out_dir() const { return get_string("out_dir", "zk_out"); }
    double diag_alpha() const { return get_double("diag.alpha", 0.5); }

  private:
    std::map<std::string, std::string> kv_;
    std::string raw_;
};

// analytic forcing: amplitude * cos(omega t) * profile(x, y)
class AnalyticForcing : public Forcing {
  public:
    enum class Profile { Mode, Gaussian };
    Profile profile = Profile::Gaussian;
    double amplitude = 0.0, omega = 0.0;
    int j = 1, ymode = 0;
    double x0 = 0.0, sigma = 2.0;

    bool is_zero() const override { return amplitude == 0.0; }
    Field eval(double t, const StripTransform& tr) const override;
};

// snapshot-series forcing: linear interpolation between stored snapshots
class SnapshotSeriesForcing : public Forcing {
  public:
    explicit SnapshotSeriesForcing(const std::string& dir);
    bool is_zero() const override { return times_.empty(); }
    Field eval(double t, const StripTransform& tr) const override;

  private:
    std::vector<double> times_;
    std::vector<Field> fields_;
};

} // namespace zk

#endif
