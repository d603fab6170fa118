#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "stochns/diagnostics.hpp"
#include "stochns/fields.hpp"

namespace stochns {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Shortest decimal that reads back to the same double.
std::string format_double(double x);
double parse_double(std::string_view text);

inline constexpr std::string_view diagnostics_header = "t,energy,grad_sq,enstrophy,cum_dissipation,noise_input_theoretical";

void write_diagnostics_csv(const fs::path& path, std::span<const DiagnosticsRecord> records);
std::vector<DiagnosticsRecord> read_diagnostics_csv(const fs::path& path);

/// Numeric CSV with a header row.
struct CsvTable {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
};

void write_csv(const fs::path& path, const CsvTable& table);
CsvTable read_csv(const fs::path& path);

/// Structure-function rows: t_or_total, r, p, value. Snapshot rows carry a time,
/// time-integrated rows the literal "total".
struct SfRow {
    bool total = false;
    double t = 0.0;
    double r = 0.0;
    int p = 2;
    double value = 0.0;
};

void write_sf_csv(const fs::path& path, std::span<const SfRow> rows);
std::vector<SfRow> read_sf_csv(const fs::path& path);

enum class SnapshotKind : std::uint32_t { physical = 1, spectral = 2 };

/// Binary field snapshot. Header: 8-byte magic, u32 version, u32 n, f64 t, u32 kind,
/// u32 endianness tag; payload of little-endian f64. Physical payload: component 1 then 2,
/// each row-major n x n. Spectral payload: per component the n x (n/2+1) half spectrum,
/// real and imaginary parts interleaved.
struct SnapshotFile {
    int n = 0;
    double t = 0.0;
    SnapshotKind kind = SnapshotKind::spectral;
    std::vector<double> payload;

    friend bool operator==(const SnapshotFile&, const SnapshotFile&) = default;
};

inline constexpr std::uint32_t snapshot_version = 1;

void write_snapshot(const fs::path& path, const SnapshotFile& snap);
SnapshotFile read_snapshot(const fs::path& path);

SnapshotFile make_snapshot(const SpectralField& u, double t);
SnapshotFile make_snapshot(const PhysicalField& u, double t);
SpectralField spectral_field(const SnapshotFile& snap);
PhysicalField physical_field(const SnapshotFile& snap);

}  // namespace stochns
