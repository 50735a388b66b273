#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "spnls/error.hpp"
#include "spnls/grid.hpp"

namespace spnls {
namespace {

static_assert(std::endian::native == std::endian::little || std::endian::native == std::endian::big);

void to_le(double* v, std::size_t n) {
    if constexpr (std::endian::native == std::endian::big) {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t u;
            std::memcpy(&u, &v[i], 8);
            u = __builtin_bswap64(u);
            std::memcpy(&v[i], &u, 8);
        }
    }
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_payload(const std::string& path, const std::string& header, const cvec& values) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), ErrorKind::Config, "cannot open for writing: " + path);
    out.write(header.data(), static_cast<std::streamsize>(header.size()));
    std::vector<double> buf(2 * values.size());
    std::memcpy(buf.data(), static_cast<const void*>(values.data()), buf.size() * sizeof(double));
    to_le(buf.data(), buf.size());
    out.write(reinterpret_cast<const char*>(buf.data()), static_cast<std::streamsize>(buf.size() * sizeof(double)));
    require(static_cast<bool>(out), ErrorKind::Config, "write failed: " + path);
}

struct RawFile {
    std::vector<std::string> tokens;
    std::string payload;
};

RawFile read_raw(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), ErrorKind::Config, "cannot open: " + path);
    std::string all((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    std::size_t nl = all.find('\n');
    require(nl != std::string::npos && nl > 0 && nl < 512, ErrorKind::MalformedHeader, path);
    RawFile raw;
    std::istringstream hs(all.substr(0, nl));
    for (std::string tok; hs >> tok;) raw.tokens.push_back(tok);
    raw.payload = all.substr(nl + 1);
    return raw;
}

long long parse_int(const std::string& s, const std::string& path) {
    std::size_t pos = 0;
    long long v = 0;
    try {
        v = std::stoll(s, &pos);
    } catch (...) {
        fail(ErrorKind::MalformedHeader, path + ": bad integer '" + s + "'");
    }
    require(pos == s.size(), ErrorKind::MalformedHeader, path + ": bad integer '" + s + "'");
    return v;
}

double parse_real(const std::string& s, const std::string& path) {
    std::size_t pos = 0;
    double v = 0;
    try {
        v = std::stod(s, &pos);
    } catch (...) {
        fail(ErrorKind::MalformedHeader, path + ": bad number '" + s + "'");
    }
    require(pos == s.size(), ErrorKind::MalformedHeader, path + ": bad number '" + s + "'");
    return v;
}

cvec decode(const std::string& payload, std::size_t n, const std::string& path) {
    std::size_t want = n * 2 * sizeof(double);
    require(payload.size() >= want, ErrorKind::TruncatedPayload,
            path + ": expected " + std::to_string(want) + " bytes, got " + std::to_string(payload.size()));
    require(payload.size() == want, ErrorKind::DimensionMismatch,
            path + ": payload longer than header dimensions");
    std::vector<double> buf(2 * n);
    std::memcpy(buf.data(), payload.data(), want);
    to_le(buf.data(), buf.size());
    cvec v(n);
    std::memcpy(static_cast<void*>(v.data()), buf.data(), want);
    return v;
}

}  // namespace

void write_field(const Field& f, const std::string& path, std::optional<double> t) {
    const GridSpec& s = f.spec();
    std::string header = "SPNLS1 " + std::to_string(s.L1) + " " + std::to_string(s.n1) + " " + std::to_string(s.nper);
    if (t) header += " " + fmt17(*t);
    header += "\n";
    write_payload(path, header, f.values());
}

Field read_field(const std::string& path, std::optional<double>* t) {
    RawFile raw = read_raw(path);
    require((raw.tokens.size() == 4 || raw.tokens.size() == 5) && raw.tokens[0] == "SPNLS1",
            ErrorKind::MalformedHeader, path);
    GridSpec spec;
    long long L1 = parse_int(raw.tokens[1], path), n1 = parse_int(raw.tokens[2], path),
              nper = parse_int(raw.tokens[3], path);
    require(L1 > 0 && L1 < (1 << 20) && n1 > 0 && n1 < (1 << 24) && nper > 0 && nper < (1 << 12),
            ErrorKind::InvariantViolation, path + ": dimensions out of range");
    spec.L1 = static_cast<int>(L1);
    spec.n1 = static_cast<int>(n1);
    spec.nper = static_cast<int>(nper);
    spec.validate();
    if (t) *t = raw.tokens.size() == 5 ? std::optional<double>(parse_real(raw.tokens[4], path)) : std::nullopt;
    return Field(spec, decode(raw.payload, spec.size(), path));
}

void write_euclid_field(const EuclidField& f, const std::string& path) {
    std::string header = "SPNLS4 " + fmt17(f.spec().side) + " " + std::to_string(f.spec().n4) + "\n";
    write_payload(path, header, f.values());
}

EuclidField read_euclid_field(const std::string& path) {
    RawFile raw = read_raw(path);
    require(raw.tokens.size() == 3 && raw.tokens[0] == "SPNLS4", ErrorKind::MalformedHeader, path);
    EuclidSpec spec;
    spec.side = parse_real(raw.tokens[1], path);
    long long n4 = parse_int(raw.tokens[2], path);
    require(n4 > 0 && n4 < (1 << 10), ErrorKind::InvariantViolation, path + ": n4 out of range");
    spec.n4 = static_cast<int>(n4);
    spec.validate();
    return EuclidField(spec, decode(raw.payload, spec.size(), path));
}

}  // namespace spnls
