#include "polariton/record.hpp"

#include "polariton/errors.hpp"

namespace polariton {

FieldSeries FieldSeries::makeReal(std::size_t numSites, std::size_t numSnapshots)
{
    FieldSeries f;
    f.numSites = numSites;
    f.real.assign(numSites * numSnapshots, 0.0);
    return f;
}

FieldSeries FieldSeries::makeComplex(std::size_t numSites, std::size_t numSnapshots)
{
    FieldSeries f;
    f.isComplex = true;
    f.numSites = numSites;
    f.complex.assign(numSites * numSnapshots, cplx{});
    return f;
}

std::size_t FieldSeries::numSnapshots() const
{
    if (numSites == 0) {
        return 0;
    }
    return (isComplex ? complex.size() : real.size()) / numSites;
}

std::span<const double> FieldSeries::realRow(std::size_t s) const
{
    return std::span<const double>(real).subspan(s * numSites, numSites);
}

std::span<const cplx> FieldSeries::complexRow(std::size_t s) const
{
    return std::span<const cplx>(complex).subspan(s * numSites, numSites);
}

std::span<double> FieldSeries::realRow(std::size_t s)
{
    return std::span<double>(real).subspan(s * numSites, numSites);
}

std::span<cplx> FieldSeries::complexRow(std::size_t s)
{
    return std::span<cplx>(complex).subspan(s * numSites, numSites);
}

void FieldSeries::appendRow(std::span<const double> row)
{
    real.insert(real.end(), row.begin(), row.end());
}

void FieldSeries::appendRow(std::span<const cplx> row)
{
    complex.insert(complex.end(), row.begin(), row.end());
}

std::size_t SpatioTemporalRecord::numSites() const
{
    return fields.empty() ? 0 : fields.begin()->second.numSites;
}

const FieldSeries& SpatioTemporalRecord::field(const std::string& name) const
{
    const auto it = fields.find(name);
    if (it == fields.end()) {
        throw MissingFieldError("record has no field '" + name + "'");
    }
    return it->second;
}

double SpatioTemporalRecord::timeStep() const
{
    if (times.size() < 2) {
        return 0.0;
    }
    return (times.back() - times.front()) / static_cast<double>(times.size() - 1);
}

}  // namespace polariton
