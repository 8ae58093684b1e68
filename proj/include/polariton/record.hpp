// record.hpp - time-stamped per-site snapshots of named fields.

#pragma once

#include "polariton/core_model.hpp"

#include <json.hpp>

#include <map>
#include <span>
#include <string>
#include <vector>

namespace polariton {

/// Snapshot-major storage: element (s, n) lives at s * numSites + n.
/// Real fields keep their values in `real`, complex fields in `complex`.
struct FieldSeries {
    bool isComplex = false;
    std::size_t numSites = 0;
    std::vector<double> real;
    std::vector<cplx> complex;

    static FieldSeries makeReal(std::size_t numSites, std::size_t numSnapshots = 0);
    static FieldSeries makeComplex(std::size_t numSites, std::size_t numSnapshots = 0);

    std::size_t numSnapshots() const;
    std::span<const double> realRow(std::size_t s) const;
    std::span<const cplx> complexRow(std::size_t s) const;
    std::span<double> realRow(std::size_t s);
    std::span<cplx> complexRow(std::size_t s);

    void appendRow(std::span<const double> row);
    void appendRow(std::span<const cplx> row);
};

struct SpatioTemporalRecord {
    std::vector<double> times;  // fs, uniform
    std::map<std::string, FieldSeries> fields;
    nlohmann::json meta = nlohmann::json::object();

    std::size_t numSnapshots() const { return times.size(); }
    std::size_t numSites() const;
    bool has(const std::string& name) const { return fields.contains(name); }
    /// Throws MissingFieldError.
    const FieldSeries& field(const std::string& name) const;
    /// Snapshot spacing; zero for fewer than two snapshots.
    double timeStep() const;
};

}  // namespace polariton
