#pragma once

#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include <zlib.h>

#include "crt/core.hpp"
#include "crt/errors.hpp"

namespace crt {

// Field files ("CRTF") and sinogram files ("CRTS"), version 1:
//   magic[4] | u32 version | u32 d
//   per x/u-axis: f64 lo, f64 hi    (d-1 axes)
//   f64 y_lo, f64 y_hi              (theta_lo/theta_hi for sinograms)
//   sinograms additionally carry f64 p directly after d
//   per x/u-axis: u64 count | u64 n_y (n_theta)
//   u32 crc32 of the payload bytes
//   payload: little-endian f64, row-major, last axis (y / theta) fastest.

inline constexpr std::uint32_t file_format_version = 1;

static_assert(std::endian::native == std::endian::little,
              "file format writers assume a little-endian host");

namespace detail {

template <class T>
void put_le(std::string& buf, T v) {
    char bytes[sizeof(T)];
    std::memcpy(bytes, &v, sizeof(T));
    buf.append(bytes, sizeof(T));
}

class Reader {
public:
    Reader(const std::string& buf, const std::string& path) : buf_(buf), path_(path) {}

    template <class T>
    T get() {
        if (pos_ + sizeof(T) > buf_.size())
            throw format_error(path_ + ": truncated at offset " + std::to_string(pos_));
        T v;
        std::memcpy(&v, buf_.data() + pos_, sizeof(T));
        pos_ += sizeof(T);
        return v;
    }
    std::size_t pos() const { return pos_; }
    std::size_t remaining() const { return buf_.size() - pos_; }
    const char* cursor() const { return buf_.data() + pos_; }
    void skip(std::size_t n) { pos_ += n; }

private:
    const std::string& buf_;
    std::string path_;
    std::size_t pos_ = 0;
};

inline std::uint32_t crc32_of(const double* data, std::size_t count) {
    auto crc = crc32(0L, Z_NULL, 0);
    crc = crc32(crc, reinterpret_cast<const Bytef*>(data),
                static_cast<uInt>(count * sizeof(double)));
    return static_cast<std::uint32_t>(crc);
}

inline std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw format_error(path + ": cannot open for reading");
    std::string buf((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return buf;
}

inline void dump(const std::string& path, const std::string& buf) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw format_error(path + ": cannot open for writing");
    out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
    if (!out) throw format_error(path + ": write failed");
}

} // namespace detail

inline void write_field(const std::string& path, const VolumeField& f) {
    std::string buf;
    buf.append("CRTF", 4);
    detail::put_le<std::uint32_t>(buf, file_format_version);
    detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(f.grid.d));
    for (const auto& e : f.grid.x_extent) {
        detail::put_le<double>(buf, e.lo);
        detail::put_le<double>(buf, e.hi);
    }
    detail::put_le<double>(buf, f.grid.y_extent.lo);
    detail::put_le<double>(buf, f.grid.y_extent.hi);
    for (auto n : f.grid.n_x) detail::put_le<std::uint64_t>(buf, n);
    detail::put_le<std::uint64_t>(buf, f.grid.n_y);
    detail::put_le<std::uint32_t>(buf, detail::crc32_of(f.values.data(), f.values.size()));
    for (double v : f.values) detail::put_le<double>(buf, v);
    detail::dump(path, buf);
}

inline VolumeField read_field(const std::string& path) {
    std::string buf = detail::slurp(path);
    detail::Reader r(buf, path);
    char magic[4];
    for (auto& c : magic) c = r.get<char>();
    if (std::memcmp(magic, "CRTF", 4) != 0)
        throw format_error(path + ": bad magic (expected CRTF) at offset 0");
    auto version = r.get<std::uint32_t>();
    if (version != file_format_version)
        throw format_error(path + ": unsupported version " + std::to_string(version));
    auto d = static_cast<int>(r.get<std::uint32_t>());
    if (d != 2 && d != 3) throw format_error(path + ": bad dimension");
    std::vector<Interval> xe(d - 1);
    for (auto& e : xe) {
        e.lo = r.get<double>();
        e.hi = r.get<double>();
    }
    Interval ye{r.get<double>(), r.get<double>()};
    std::vector<std::size_t> nx(d - 1);
    for (auto& n : nx) n = static_cast<std::size_t>(r.get<std::uint64_t>());
    auto ny = static_cast<std::size_t>(r.get<std::uint64_t>());
    auto crc = r.get<std::uint32_t>();
    VolumeGrid grid = make_volume_grid(d, std::move(xe), std::move(nx), ye, ny);
    std::size_t count = grid.node_count();
    if (r.remaining() != count * sizeof(double))
        throw format_error(path + ": payload truncated at offset " + std::to_string(r.pos()) +
                           " (expected " + std::to_string(count * sizeof(double)) + " bytes, got " +
                           std::to_string(r.remaining()) + ")");
    std::vector<double> values(count);
    std::memcpy(values.data(), r.cursor(), count * sizeof(double));
    if (detail::crc32_of(values.data(), count) != crc)
        throw format_error(path + ": payload checksum mismatch at offset " +
                           std::to_string(r.pos()));
    return make_volume_field(std::move(grid), std::move(values));
}

inline void write_sinogram(const std::string& path, const ConeSinogram& s) {
    std::string buf;
    buf.append("CRTS", 4);
    detail::put_le<std::uint32_t>(buf, file_format_version);
    detail::put_le<std::uint32_t>(buf, static_cast<std::uint32_t>(s.grid.d));
    detail::put_le<double>(buf, s.p);
    for (const auto& e : s.grid.u_extent) {
        detail::put_le<double>(buf, e.lo);
        detail::put_le<double>(buf, e.hi);
    }
    detail::put_le<double>(buf, s.grid.theta_extent.lo);
    detail::put_le<double>(buf, s.grid.theta_extent.hi);
    for (auto n : s.grid.n_u) detail::put_le<std::uint64_t>(buf, n);
    detail::put_le<std::uint64_t>(buf, s.grid.n_theta);
    detail::put_le<std::uint32_t>(buf, detail::crc32_of(s.values.data(), s.values.size()));
    for (double v : s.values) detail::put_le<double>(buf, v);
    detail::dump(path, buf);
}

inline ConeSinogram read_sinogram(const std::string& path) {
    std::string buf = detail::slurp(path);
    detail::Reader r(buf, path);
    char magic[4];
    for (auto& c : magic) c = r.get<char>();
    if (std::memcmp(magic, "CRTS", 4) != 0)
        throw format_error(path + ": bad magic (expected CRTS) at offset 0");
    auto version = r.get<std::uint32_t>();
    if (version != file_format_version)
        throw format_error(path + ": unsupported version " + std::to_string(version));
    auto d = static_cast<int>(r.get<std::uint32_t>());
    if (d != 2 && d != 3) throw format_error(path + ": bad dimension");
    double p = r.get<double>();
    std::vector<Interval> ue(d - 1);
    for (auto& e : ue) {
        e.lo = r.get<double>();
        e.hi = r.get<double>();
    }
    Interval te{r.get<double>(), r.get<double>()};
    std::vector<std::size_t> nu(d - 1);
    for (auto& n : nu) n = static_cast<std::size_t>(r.get<std::uint64_t>());
    auto nt = static_cast<std::size_t>(r.get<std::uint64_t>());
    auto crc = r.get<std::uint32_t>();
    ConeSinogramGrid grid = make_sinogram_grid(d, std::move(ue), std::move(nu), te, nt);
    std::size_t count = grid.node_count();
    if (r.remaining() != count * sizeof(double))
        throw format_error(path + ": payload truncated at offset " + std::to_string(r.pos()) +
                           " (expected " + std::to_string(count * sizeof(double)) + " bytes, got " +
                           std::to_string(r.remaining()) + ")");
    std::vector<double> values(count);
    std::memcpy(values.data(), r.cursor(), count * sizeof(double));
    if (detail::crc32_of(values.data(), count) != crc)
        throw format_error(path + ": payload checksum mismatch at offset " +
                           std::to_string(r.pos()));
    return make_cone_sinogram(std::move(grid), p, std::move(values));
}

// NaN/Inf scan used by the CLI before anything is written out.
inline bool all_finite(const std::vector<double>& v) {
    for (double x : v)
        if (!std::isfinite(x)) return false;
    return true;
}

} // namespace crt
