#include "zkstrip/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "zkstrip/error.hpp"

namespace zk {

namespace {

constexpr char kMagic[9] = "ZKSNAP01";
constexpr uint32_t kVersion = 1;

template <typename T>
void put(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T take(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!is) fail(Errc::io, "snapshot: truncated file");
    return v;
}

} // namespace

void write_snapshot(const std::string& path, const Field& f, const SnapshotMeta& meta) {
    std::ofstream os(path, std::ios::binary | std::ios::trunc);
    if (!os) fail(Errc::io, "snapshot: cannot open for writing: " + path);
    os.write(kMagic, 8);
    put<uint32_t>(os, kVersion);
    put<uint8_t>(os, static_cast<uint8_t>(boundary_tag(meta.bc)));
    put<uint32_t>(os, static_cast<uint32_t>(f.grid.nx));
    put<uint32_t>(os, static_cast<uint32_t>(f.grid.ny));
    put<double>(os, f.grid.half_width);
    put<double>(os, f.grid.strip_width);
    put<double>(os, meta.time);
    put<double>(os, meta.delta);
    put<double>(os, meta.trunc_h ? *meta.trunc_h : -1.0);
    put<double>(os, meta.flux_param);
    put<uint32_t>(os, static_cast<uint32_t>(meta.flux_name.size()));
    os.write(meta.flux_name.data(), std::streamsize(meta.flux_name.size()));
    os.write(reinterpret_cast<const char*>(f.values.data()),
             std::streamsize(sizeof(double) * f.values.size()));
    if (!os) fail(Errc::io, "snapshot: write failed: " + path);
}

Field read_snapshot(const std::string& path, SnapshotMeta* meta_out) {
    std::ifstream is(path, std::ios::binary);
    if (!is) fail(Errc::io, "snapshot: cannot open: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0)
        fail(Errc::io, "snapshot: bad magic in " + path);
    uint32_t version = take<uint32_t>(is);
    if (version != kVersion)
        fail(Errc::io, "snapshot: unsupported version " + std::to_string(version));
    char tag = static_cast<char>(take<uint8_t>(is));
    uint32_t nx = take<uint32_t>(is);
    uint32_t ny = take<uint32_t>(is);
    double X = take<double>(is);
    double L = take<double>(is);

    SnapshotMeta meta;
    meta.bc = boundary_from_tag(std::string(1, tag));
    meta.time = take<double>(is);
    meta.delta = take<double>(is);
    double h = take<double>(is);
    if (h >= 0.0) meta.trunc_h = h;
    meta.flux_param = take<double>(is);
    uint32_t name_len = take<uint32_t>(is);
    if (name_len > 4096) fail(Errc::io, "snapshot: implausible flux name length");
    meta.flux_name.resize(name_len);
    is.read(meta.flux_name.data(), name_len);

    Field f(Grid(X, int(nx), L, int(ny)));
    is.read(reinterpret_cast<char*>(f.values.data()),
            std::streamsize(sizeof(double) * f.values.size()));
    if (!is) fail(Errc::io, "snapshot: truncated payload in " + path);
    if (meta_out) *meta_out = meta;
    return f;
}

} // namespace zk
