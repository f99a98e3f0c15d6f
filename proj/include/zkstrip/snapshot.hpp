#ifndef ZKSTRIP_SNAPSHOT_HPP
#define ZKSTRIP_SNAPSHOT_HPP

#include <optional>
#include <string>

#include "zkstrip/field.hpp"

namespace zk {

// Binary snapshot: self-describing header + row-major float64 payload
// (x-major, then y). Writes and reads are bit-exact round trips.
struct SnapshotMeta {
    BoundaryCase bc = BoundaryCase::Periodic;
    double time = 0.0;
    std::string flux_name = "zero";
    double flux_param = 1.0;
    double delta = 0.0;
    std::optional<double> trunc_h;
};

void write_snapshot(const std::string& path, const Field& f, const SnapshotMeta& meta);
Field read_snapshot(const std::string& path, SnapshotMeta* meta = nullptr);

} // namespace zk

#endif
