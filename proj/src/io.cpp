#include "stochns/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <cstring>
#include <fstream>
#include <sstream>

namespace stochns {

namespace {

constexpr std::array<char, 8> magic = {'S', 'T', 'N', 'S', 'S', 'N', 'A', 'P'};
constexpr std::uint32_t endian_tag = 0x01020304u;

std::vector<std::string_view> split(std::string_view line) {
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(',', start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return out;
}

std::ofstream open_out(const fs::path& path) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    return out;
}

std::ifstream open_in(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return in;
}

std::string strip_cr(std::string line) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
}

[[noreturn]] void malformed(const fs::path& path, std::size_t line, const std::string& what) {
    throw IoError(path.string() + ":" + std::to_string(line) + ": " + what);
}

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    const U bits = std::bit_cast<U>(value);
    char bytes[sizeof(T)];
    for (std::size_t i = 0; i < sizeof(T); ++i) bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xff);
    out.write(bytes, sizeof(T));
}

template <class T>
T get_le(std::istream& in, const fs::path& path) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    unsigned char bytes[sizeof(T)];
    if (!in.read(reinterpret_cast<char*>(bytes), sizeof(T))) throw IoError(path.string() + ": truncated snapshot");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

std::size_t payload_size(int n, SnapshotKind kind) {
    const std::size_t nn = static_cast<std::size_t>(n);
    return kind == SnapshotKind::physical ? 2 * nn * nn : 4 * nn * (nn / 2 + 1);
}

}  // namespace

std::string format_double(double x) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view text) {
    double x = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), x);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw IoError("not a number: '" + std::string(text) + "'");
    return x;
}

void write_diagnostics_csv(const fs::path& path, std::span<const DiagnosticsRecord> records) {
    auto out = open_out(path);
    out << diagnostics_header << '\n';
    for (const auto& r : records)
        out << format_double(r.t) << ',' << format_double(r.energy) << ',' << format_double(r.grad_sq) << ','
            << format_double(r.enstrophy) << ',' << format_double(r.cumulative_dissipation) << ','
            << format_double(r.noise_input_theoretical) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<DiagnosticsRecord> read_diagnostics_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != diagnostics_header)
        malformed(path, 1, "expected header '" + std::string(diagnostics_header) + "'");
    std::vector<DiagnosticsRecord> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 6) malformed(path, lineno, "expected 6 fields, found " + std::to_string(f.size()));
        try {
            out.push_back({parse_double(f[0]), parse_double(f[1]), parse_double(f[2]), parse_double(f[3]),
                           parse_double(f[4]), parse_double(f[5])});
        } catch (const IoError& e) {
            malformed(path, lineno, e.what());
        }
    }
    return out;
}

std::size_t CsvTable::column(std::string_view name) const {
    for (std::size_t i = 0; i < header.size(); ++i)
        if (header[i] == name) return i;
    throw IoError("no column '" + std::string(name) + "'");
}

void write_csv(const fs::path& path, const CsvTable& table) {
    auto out = open_out(path);
    for (std::size_t i = 0; i < table.header.size(); ++i) out << (i ? "," : "") << table.header[i];
    out << '\n';
    for (const auto& row : table.rows) {
        if (row.size() != table.header.size()) throw IoError("row width differs from header in " + path.string());
        for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << format_double(row[i]);
        out << '\n';
    }
    if (!out) throw IoError("write failed: " + path.string());
}

CsvTable read_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line)) malformed(path, 1, "missing header");
    CsvTable table;
    line = strip_cr(line);
    for (auto h : split(line)) table.header.emplace_back(h);
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != table.header.size())
            malformed(path, lineno, "expected " + std::to_string(table.header.size()) + " fields, found " +
                                        std::to_string(f.size()));
        std::vector<double> row;
        try {
            for (auto s : f) row.push_back(parse_double(s));
        } catch (const IoError& e) {
            malformed(path, lineno, e.what());
        }
        table.rows.push_back(std::move(row));
    }
    return table;
}

void write_sf_csv(const fs::path& path, std::span<const SfRow> rows) {
    auto out = open_out(path);
    out << "t_or_total,r,p,value\n";
    for (const auto& r : rows)
        out << (r.total ? std::string("total") : format_double(r.t)) << ',' << format_double(r.r) << ',' << r.p << ','
            << format_double(r.value) << '\n';
    if (!out) throw IoError("write failed: " + path.string());
}

std::vector<SfRow> read_sf_csv(const fs::path& path) {
    auto in = open_in(path);
    std::string line;
    if (!std::getline(in, line) || strip_cr(line) != "t_or_total,r,p,value")
        malformed(path, 1, "expected header 't_or_total,r,p,value'");
    std::vector<SfRow> out;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        line = strip_cr(line);
        if (line.empty()) continue;
        const auto f = split(line);
        if (f.size() != 4) malformed(path, lineno, "expected 4 fields, found " + std::to_string(f.size()));
        SfRow row;
        try {
            row.total = f[0] == "total";
            if (!row.total) row.t = parse_double(f[0]);
            row.r = parse_double(f[1]);
            row.p = static_cast<int>(parse_double(f[2]));
            row.value = parse_double(f[3]);
        } catch (const IoError& e) {
            malformed(path, lineno, e.what());
        }
        out.push_back(row);
    }
    return out;
}

void write_snapshot(const fs::path& path, const SnapshotFile& snap) {
    if (snap.payload.size() != payload_size(snap.n, snap.kind)) throw IoError("snapshot payload size mismatch");
    auto out = open_out(path);
    out.write(magic.data(), magic.size());
    put_le(out, snapshot_version);
    put_le(out, static_cast<std::uint32_t>(snap.n));
    put_le(out, snap.t);
    put_le(out, static_cast<std::uint32_t>(snap.kind));
    put_le(out, endian_tag);
    for (double x : snap.payload) put_le(out, x);
    if (!out) throw IoError("write failed: " + path.string());
}

SnapshotFile read_snapshot(const fs::path& path) {
    auto in = open_in(path);
    std::array<char, 8> m{};
    if (!in.read(m.data(), m.size()) || m != magic) throw IoError(path.string() + ": not a snapshot file");
    const auto version = get_le<std::uint32_t>(in, path);
    if (version != snapshot_version)
        throw IoError(path.string() + ": unsupported snapshot version " + std::to_string(version));
    SnapshotFile snap;
    snap.n = static_cast<int>(get_le<std::uint32_t>(in, path));
    snap.t = get_le<double>(in, path);
    const auto kind = get_le<std::uint32_t>(in, path);
    if (kind != 1 && kind != 2) throw IoError(path.string() + ": unknown field kind " + std::to_string(kind));
    snap.kind = static_cast<SnapshotKind>(kind);
    if (get_le<std::uint32_t>(in, path) != endian_tag) throw IoError(path.string() + ": bad endianness tag");
    snap.payload.resize(payload_size(snap.n, snap.kind));
    for (auto& x : snap.payload) x = get_le<double>(in, path);
    if (in.peek() != std::char_traits<char>::eof()) throw IoError(path.string() + ": trailing bytes");
    return snap;
}

SnapshotFile make_snapshot(const SpectralField& u, double t) {
    SnapshotFile s{u.grid.n(), t, SnapshotKind::spectral, {}};
    s.payload.reserve(payload_size(s.n, s.kind));
    for (const auto& c : u.comp)
        for (auto z : c) {
            s.payload.push_back(z.real());
            s.payload.push_back(z.imag());
        }
    return s;
}

SnapshotFile make_snapshot(const PhysicalField& u, double t) {
    SnapshotFile s{u.grid.n(), t, SnapshotKind::physical, {}};
    for (const auto& c : u.comp) s.payload.insert(s.payload.end(), c.begin(), c.end());
    return s;
}

SpectralField spectral_field(const SnapshotFile& snap) {
    if (snap.kind != SnapshotKind::spectral) throw IoError("snapshot holds a physical field");
    SpectralField u{Grid(snap.n)};
    std::size_t k = 0;
    for (auto& c : u.comp)
        for (auto& z : c) {
            z = {snap.payload[k], snap.payload[k + 1]};
            k += 2;
        }
    return u;
}

PhysicalField physical_field(const SnapshotFile& snap) {
    if (snap.kind != SnapshotKind::physical) throw IoError("snapshot holds a spectral field");
    PhysicalField u{Grid(snap.n)};
    const std::size_t m = u.comp[0].size();
    std::copy_n(snap.payload.begin(), m, u.comp[0].begin());
    std::copy_n(snap.payload.begin() + static_cast<std::ptrdiff_t>(m), m, u.comp[1].begin());
    return u;
}

}  // namespace stochns
