// export.hpp - text and binary serialization of records, spectra and tables.
//
// Text: comma-separated, long format (one row per snapshot and site), with a
// '#'-commented header giving the metadata JSON, field kinds, column names
// and units. Numbers use %.17g so a read-back is exact.
//
// Binary ("PLTR1"), all integers uint64 little-endian, all reals IEEE double:
//   magic "PLTR1\0\0\0"                       8 bytes
//   numSnapshots, numSites, numFields, metaBytes
//   per field: nameBytes, name, kind (1 byte: 0 real, 1 complex)
//   meta JSON (metaBytes)
//   axis: numSnapshots doubles
//   payload per field, in descriptor order, row-major (snapshot, site);
//   complex values interleaved (re, im)

#pragma once

#include "polariton/record.hpp"
#include "polariton/spectrum.hpp"

#include <filesystem>
#include <string>
#include <vector>

namespace polariton {

inline constexpr char kBinaryMagic[8] = {'P', 'L', 'T', 'R', '1', '\0', '\0', '\0'};

/// Column-oriented table; every column has the same length.
struct Table {
    std::vector<std::string> names;
    std::vector<std::string> units;
    std::vector<std::vector<double>> columns;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t numRows() const { return columns.empty() ? 0 : columns.front().size(); }
    void addColumn(std::string name, std::string unit, std::vector<double> values);
};

/// Bytes preceding the first payload byte (magic, sizes, descriptors, meta, axis).
std::size_t binary_header_size(const SpatioTemporalRecord& record);

void write_text_record(const SpatioTemporalRecord& record, const std::filesystem::path& path);
void write_binary_record(const SpatioTemporalRecord& record, const std::filesystem::path& path);
SpatioTemporalRecord read_text_record(const std::filesystem::path& path);
SpatioTemporalRecord read_binary_record(const std::filesystem::path& path);

/// Record whose axis is the frequency grid (meta "axis" = "omega").
SpatioTemporalRecord spectrum_to_record(const RealSpectrumMap& map, const std::string& fieldName);
SpatioTemporalRecord spectrum_to_record(const SpectrumMap& map, const std::string& fieldName);

void write_text_table(const Table& table, const std::filesystem::path& path);
Table read_text_table(const std::filesystem::path& path);
/// Tables go through the binary container as a one-site record per column
/// (the first column becomes the axis).
void write_binary_table(const Table& table, const std::filesystem::path& path);
Table read_binary_table(const std::filesystem::path& path);

/// Writes stem.txt and/or stem.pltr below `dir`; returns the paths written.
/// Throws IoError.
std::vector<std::filesystem::path> export_record(const SpatioTemporalRecord& record, const std::filesystem::path& dir,
                                                 const std::string& stem, bool text, bool binary);
std::vector<std::filesystem::path> export_table(const Table& table, const std::filesystem::path& dir,
                                                const std::string& stem, bool text, bool binary);

}  // namespace polariton
