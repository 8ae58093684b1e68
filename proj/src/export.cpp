#include "polariton/export.hpp"

#include "polariton/errors.hpp"

#include <bit>
#include <charconv>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>

namespace polariton {

void Table::addColumn(std::string name, std::string unit, std::vector<double> values)
{
    if (!columns.empty() && values.size() != numRows()) {
        throw IoError("table column '" + name + "' has " + std::to_string(values.size()) + " rows, expected " +
                      std::to_string(numRows()));
    }
    names.push_back(std::move(name));
    units.push_back(std::move(unit));
    columns.push_back(std::move(values));
}

namespace {

std::string axis_name(const SpatioTemporalRecord& r)
{
    return r.meta.contains("axis") && r.meta["axis"].is_string() ? r.meta["axis"].get<std::string>() : "time";
}

std::string axis_unit(const SpatioTemporalRecord& r)
{
    return r.meta.contains("axisUnit") && r.meta["axisUnit"].is_string() ? r.meta["axisUnit"].get<std::string>()
                                                                          : "fs";
}

void put_number(std::string& line, double v)
{
    char buf[32];
    const int len = std::snprintf(buf, sizeof buf, "%.17g", v);
    line.append(buf, static_cast<std::size_t>(len));
}

double parse_number(std::string_view token, const std::filesystem::path& path)
{
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
    if (ec != std::errc() || ptr != token.data() + token.size()) {
        throw IoError("malformed number '" + std::string(token) + "' in " + path.string());
    }
    return v;
}

std::vector<std::string_view> split(std::string_view line, char sep)
{
    std::vector<std::string_view> out;
    std::size_t start = 0;
    while (true) {
        const auto pos = line.find(sep, start);
        out.push_back(line.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
        if (pos == std::string_view::npos) {
            break;
        }
        start = pos + 1;
    }
    return out;
}

std::ofstream open_out(const std::filesystem::path& path, std::ios::openmode mode = std::ios::out)
{
    std::ofstream f(path, mode | std::ios::trunc);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for writing");
    }
    return f;
}

std::ifstream open_in(const std::filesystem::path& path, std::ios::openmode mode = std::ios::in)
{
    std::ifstream f(path, mode);
    if (!f) {
        throw IoError("cannot open " + path.string() + " for reading");
    }
    return f;
}

void finish_write(std::ofstream& f, const std::filesystem::path& path)
{
    f.flush();
    if (!f) {
        throw IoError("failed writing " + path.string());
    }
}

// Header key/value lines look like "# key: value".
bool header_value(const std::string& line, const char* key, std::string& value)
{
    const std::string prefix = std::string("# ") + key + ": ";
    if (line.rfind(prefix, 0) != 0) {
        return false;
    }
    value = line.substr(prefix.size());
    return true;
}

// --- binary helpers -------------------------------------------------------

void write_u64(std::ostream& out, std::uint64_t v)
{
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) {
        bytes[i] = static_cast<unsigned char>(v >> (8 * i));
    }
    out.write(reinterpret_cast<const char*>(bytes), 8);
}

std::uint64_t read_u64(std::istream& in)
{
    unsigned char bytes[8];
    if (!in.read(reinterpret_cast<char*>(bytes), 8)) {
        throw IoError("truncated binary header");
    }
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) {
        v = (v << 8) | bytes[i];
    }
    return v;
}

void write_doubles(std::ostream& out, const double* data, std::size_t count)
{
    if constexpr (std::endian::native == std::endian::little) {
        out.write(reinterpret_cast<const char*>(data), static_cast<std::streamsize>(count * sizeof(double)));
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            write_u64(out, std::bit_cast<std::uint64_t>(data[i]));
        }
    }
}

void read_doubles(std::istream& in, double* data, std::size_t count)
{
    if constexpr (std::endian::native == std::endian::little) {
        if (!in.read(reinterpret_cast<char*>(data), static_cast<std::streamsize>(count * sizeof(double)))) {
            throw IoError("truncated binary payload");
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            data[i] = std::bit_cast<double>(read_u64(in));
        }
    }
}

}  // namespace

std::size_t binary_header_size(const SpatioTemporalRecord& record)
{
    std::size_t size = sizeof kBinaryMagic + 4 * 8;
    for (const auto& [name, _] : record.fields) {
        size += 8 + name.size() + 1;
    }
    size += record.meta.dump().size();
    size += record.numSnapshots() * sizeof(double);
    return size;
}

void write_text_record(const SpatioTemporalRecord& record, const std::filesystem::path& path)
{
    auto f = open_out(path);
    const std::size_t sites = record.numSites();
    std::string fieldsLine;
    std::string columns = axis_name(record) + ",site";
    std::string units = axis_unit(record) + ",index";
    for (const auto& [name, series] : record.fields) {
        fieldsLine += (fieldsLine.empty() ? "" : " ") + name + (series.isComplex ? ":complex" : ":real");
        if (series.isComplex) {
            columns += "," + name + "_re," + name + "_im";
            units += ",1,1";
        } else {
            columns += "," + name;
            units += ",1";
        }
    }
    f << "# polariton-record text 1\n";
    f << "# meta: " << record.meta.dump() << "\n";
    f << "# snapshots: " << record.numSnapshots() << "\n";
    f << "# sites: " << sites << "\n";
    f << "# fields: " << fieldsLine << "\n";
    f << "# columns: " << columns << "\n";
    f << "# units: " << units << "\n";

    std::string line;
    for (std::size_t s = 0; s < record.numSnapshots(); ++s) {
        for (std::size_t n = 0; n < sites; ++n) {
            line.clear();
            put_number(line, record.times[s]);
            line += ',';
            line += std::to_string(n);
            for (const auto& [name, series] : record.fields) {
                line += ',';
                if (series.isComplex) {
                    const cplx v = series.complex[s * sites + n];
                    put_number(line, v.real());
                    line += ',';
                    put_number(line, v.imag());
                } else {
                    put_number(line, series.real[s * sites + n]);
                }
            }
            line += '\n';
            f << line;
        }
    }
    finish_write(f, path);
}

SpatioTemporalRecord read_text_record(const std::filesystem::path& path)
{
    auto f = open_in(path);
    SpatioTemporalRecord record;
    std::string line;
    std::string value;
    std::size_t snapshots = 0;
    std::size_t sites = 0;
    std::vector<std::pair<std::string, bool>> fields;
    bool sawFields = false;
    while (f.peek() == '#' && std::getline(f, line)) {
        if (header_value(line, "meta", value)) {
            record.meta = nlohmann::json::parse(value);
        } else if (header_value(line, "snapshots", value)) {
            snapshots = std::stoull(value);
        } else if (header_value(line, "sites", value)) {
            sites = std::stoull(value);
        } else if (header_value(line, "fields", value)) {
            sawFields = true;
            std::istringstream ss(value);
            for (std::string token; ss >> token;) {
                const auto colon = token.rfind(':');
                if (colon == std::string::npos) {
                    throw IoError("malformed field descriptor '" + token + "' in " + path.string());
                }
                fields.emplace_back(token.substr(0, colon), token.substr(colon + 1) == "complex");
            }
        }
    }
    if (!sawFields) {
        throw IoError(path.string() + " is not a record text file");
    }
    for (const auto& [name, isComplex] : fields) {
        record.fields.emplace(name, isComplex ? FieldSeries::makeComplex(sites, snapshots)
                                              : FieldSeries::makeReal(sites, snapshots));
    }
    std::size_t row = 0;
    while (std::getline(f, line)) {
        if (line.empty()) {
            continue;
        }
        const auto tokens = split(line, ',');
        const std::size_t s = row / std::max<std::size_t>(sites, 1);
        const std::size_t n = row % std::max<std::size_t>(sites, 1);
        if (s >= snapshots) {
            throw IoError("more rows than declared in " + path.string());
        }
        if (n == 0) {
            record.times.push_back(parse_number(tokens.at(0), path));
        }
        std::size_t col = 2;
        for (const auto& [name, isComplex] : fields) {
            auto& series = record.fields.at(name);
            if (isComplex) {
                series.complex[s * sites + n] = {parse_number(tokens.at(col), path),
                                                 parse_number(tokens.at(col + 1), path)};
                col += 2;
            } else {
                series.real[s * sites + n] = parse_number(tokens.at(col), path);
                col += 1;
            }
        }
        ++row;
    }
    if (row != snapshots * sites) {
        throw IoError("row count does not match the header in " + path.string());
    }
    if (sites == 0) {
        record.times.assign(snapshots, 0.0);
    }
    return record;
}

void write_binary_record(const SpatioTemporalRecord& record, const std::filesystem::path& path)
{
    auto f = open_out(path, std::ios::out | std::ios::binary);
    const std::string meta = record.meta.dump();
    f.write(kBinaryMagic, sizeof kBinaryMagic);
    write_u64(f, record.numSnapshots());
    write_u64(f, record.numSites());
    write_u64(f, record.fields.size());
    write_u64(f, meta.size());
    for (const auto& [name, series] : record.fields) {
        write_u64(f, name.size());
        f.write(name.data(), static_cast<std::streamsize>(name.size()));
        const char kind = series.isComplex ? 1 : 0;
        f.write(&kind, 1);
    }
    f.write(meta.data(), static_cast<std::streamsize>(meta.size()));
    write_doubles(f, record.times.data(), record.times.size());
    for (const auto& [name, series] : record.fields) {
        if (series.isComplex) {
            write_doubles(f, reinterpret_cast<const double*>(series.complex.data()), 2 * series.complex.size());
        } else {
            write_doubles(f, series.real.data(), series.real.size());
        }
    }
    finish_write(f, path);
}

SpatioTemporalRecord read_binary_record(const std::filesystem::path& path)
{
    auto f = open_in(path, std::ios::in | std::ios::binary);
    char magic[sizeof kBinaryMagic];
    if (!f.read(magic, sizeof magic) || std::memcmp(magic, kBinaryMagic, sizeof magic) != 0) {
        throw IoError(path.string() + " does not start with the PLTR1 magic");
    }
    const auto snapshots = read_u64(f);
    const auto sites = read_u64(f);
    const auto numFields = read_u64(f);
    const auto metaBytes = read_u64(f);
    std::vector<std::pair<std::string, bool>> fields;
    for (std::uint64_t i = 0; i < numFields; ++i) {
        const auto len = read_u64(f);
        std::string name(len, '\0');
        char kind = 0;
        if (!f.read(name.data(), static_cast<std::streamsize>(len)) || !f.read(&kind, 1)) {
            throw IoError("truncated field descriptor in " + path.string());
        }
        fields.emplace_back(std::move(name), kind == 1);
    }
    std::string meta(metaBytes, '\0');
    if (!f.read(meta.data(), static_cast<std::streamsize>(metaBytes))) {
        throw IoError("truncated metadata in " + path.string());
    }
    SpatioTemporalRecord record;
    record.meta = nlohmann::json::parse(meta);
    record.times.resize(snapshots);
    read_doubles(f, record.times.data(), snapshots);
    for (const auto& [name, isComplex] : fields) {
        auto series = isComplex ? FieldSeries::makeComplex(sites, snapshots) : FieldSeries::makeReal(sites, snapshots);
        if (isComplex) {
            read_doubles(f, reinterpret_cast<double*>(series.complex.data()), 2 * series.complex.size());
        } else {
            read_doubles(f, series.real.data(), series.real.size());
        }
        record.fields.emplace(name, std::move(series));
    }
    return record;
}

SpatioTemporalRecord spectrum_to_record(const RealSpectrumMap& map, const std::string& fieldName)
{
    SpatioTemporalRecord r;
    r.times = map.omegas;
    auto series = FieldSeries::makeReal(map.numSites, map.numFreqs());
    series.real = map.values;
    r.fields.emplace(fieldName, std::move(series));
    r.meta["axis"] = "omega";
    r.meta["axisUnit"] = "eV";
    r.meta["window"] = to_json(map.window);
    return r;
}

SpatioTemporalRecord spectrum_to_record(const SpectrumMap& map, const std::string& fieldName)
{
    SpatioTemporalRecord r;
    r.times = map.omegas;
    auto series = FieldSeries::makeComplex(map.numSites, map.numFreqs());
    series.complex = map.values;
    r.fields.emplace(fieldName, std::move(series));
    r.meta["axis"] = "omega";
    r.meta["axisUnit"] = "eV";
    r.meta["window"] = to_json(map.window);
    return r;
}

void write_text_table(const Table& table, const std::filesystem::path& path)
{
    auto f = open_out(path);
    std::string names;
    std::string units;
    for (std::size_t c = 0; c < table.names.size(); ++c) {
        names += (c ? "," : "") + table.names[c];
        units += (c ? "," : "") + table.units[c];
    }
    f << "# polariton-table text 1\n";
    f << "# meta: " << table.meta.dump() << "\n";
    f << "# columns: " << names << "\n";
    f << "# units: " << units << "\n";
    std::string line;
    for (std::size_t r = 0; r < table.numRows(); ++r) {
        line.clear();
        for (std::size_t c = 0; c < table.columns.size(); ++c) {
            if (c) {
                line += ',';
            }
            put_number(line, table.columns[c][r]);
        }
        line += '\n';
        f << line;
    }
    finish_write(f, path);
}

Table read_text_table(const std::filesystem::path& path)
{
    auto f = open_in(path);
    Table table;
    std::string line;
    std::string value;
    bool sawColumns = false;
    while (f.peek() == '#' && std::getline(f, line)) {
        if (header_value(line, "meta", value)) {
            table.meta = nlohmann::json::parse(value);
        } else if (header_value(line, "columns", value)) {
            sawColumns = true;
            for (auto t : split(value, ',')) {
                table.names.emplace_back(t);
            }
        } else if (header_value(line, "units", value)) {
            for (auto t : split(value, ',')) {
                table.units.emplace_back(t);
            }
        }
    }
    if (!sawColumns) {
        throw IoError(path.string() + " is not a table text file");
    }
    if (table.names.size() == 1 && table.names.front().empty()) {
        table.names.clear();
        table.units.clear();
    }
    table.columns.assign(table.names.size(), {});
    while (std::getline(f, line)) {
        if (line.empty()) {
            continue;
        }
        const auto tokens = split(line, ',');
        if (tokens.size() != table.names.size()) {
            throw IoError("row width does not match the header in " + path.string());
        }
        for (std::size_t c = 0; c < tokens.size(); ++c) {
            table.columns[c].push_back(parse_number(tokens[c], path));
        }
    }
    return table;
}

void write_binary_table(const Table& table, const std::filesystem::path& path)
{
    SpatioTemporalRecord r;
    r.meta = {{"table", table.meta}, {"columns", table.names}, {"units", table.units}};
    if (!table.columns.empty()) {
        r.times = table.columns.front();
        r.meta["axis"] = table.names.front();
        r.meta["axisUnit"] = table.units.front();
    }
    for (std::size_t c = 1; c < table.columns.size(); ++c) {
        auto series = FieldSeries::makeReal(1, table.numRows());
        series.real = table.columns[c];
        r.fields.emplace(table.names[c], std::move(series));
    }
    write_binary_record(r, path);
}

Table read_binary_table(const std::filesystem::path& path)
{
    const auto r = read_binary_record(path);
    Table table;
    if (!r.meta.contains("columns")) {
        throw IoError(path.string() + " does not hold a table");
    }
    table.meta = r.meta.value("table", nlohmann::json::object());
    const auto names = r.meta["columns"].get<std::vector<std::string>>();
    const auto units = r.meta["units"].get<std::vector<std::string>>();
    for (std::size_t c = 0; c < names.size(); ++c) {
        table.addColumn(names[c], units[c], c == 0 ? r.times : r.field(names[c]).real);
    }
    return table;
}

std::vector<std::filesystem::path> export_record(const SpatioTemporalRecord& record, const std::filesystem::path& dir,
                                                 const std::string& stem, bool text, bool binary)
{
    std::vector<std::filesystem::path> written;
    if (text) {
        written.push_back(dir / (stem + ".txt"));
        write_text_record(record, written.back());
    }
    if (binary) {
        written.push_back(dir / (stem + ".pltr"));
        write_binary_record(record, written.back());
    }
    return written;
}

std::vector<std::filesystem::path> export_table(const Table& table, const std::filesystem::path& dir,
                                                const std::string& stem, bool text, bool binary)
{
    std::vector<std::filesystem::path> written;
    if (text) {
        written.push_back(dir / (stem + ".txt"));
        write_text_table(table, written.back());
    }
    if (binary) {
        written.push_back(dir / (stem + ".pltr"));
        write_binary_table(table, written.back());
    }
    return written;
}

}  // namespace polariton
