#include "cl/dataset/measurements.hpp"

#include "cl/common/csv.hpp"
#include "cl/common/error.hpp"
#include "cl/common/io.hpp"

#include <charconv>
#include <cmath>
#include <set>
#include <tuple>

namespace cl::dataset {

namespace {

constexpr std::array<std::string_view, 6> kFixed = {"dataset_id", "snippet_id", "participant_id", "AU", "PBU", "RL"};

[[noreturn]] void bad_row(std::size_t line, const std::string& msg) {
    throw ValueError("line " + std::to_string(line) + ": " + msg);
}

std::optional<int> int_cell(const std::string& cell, std::string_view col, int lo, int hi, std::size_t line) {
    if (cell.empty()) return std::nullopt;
    int v = 0;
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size())
        bad_row(line, std::string(col) + " '" + cell + "' is not an integer");
    if (v < lo || v > hi)
        bad_row(line, std::string(col) + "=" + cell + " outside " + std::to_string(lo) + ".." + std::to_string(hi));
    return v;
}

double real_cell(const std::string& cell, std::string_view col, std::size_t line) {
    if (cell.empty()) return std::nan("");
    double v = 0;
    const auto [p, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{} || p != cell.data() + cell.size() || !std::isfinite(v))
        bad_row(line, std::string(col) + " '" + cell + "' is not a finite number");
    return v;
}

std::string render(std::optional<int> v) { return v ? std::to_string(*v) : std::string(); }

}  // namespace

std::vector<std::string> MeasurementTable::dataset_ids() const {
    std::set<std::string> ids;
    for (const auto& r : records) ids.insert(r.dataset_id);
    return {ids.begin(), ids.end()};
}

MeasurementTable MeasurementTable::only(std::string_view dataset_id) const {
    MeasurementTable out;
    out.dev_names = dev_names;
    for (const auto& r : records)
        if (r.dataset_id == dataset_id) out.records.push_back(r);
    return out;
}

MeasurementTable parse_measurements(std::string_view csv_text) {
    const auto rows = csv::parse(csv_text);
    if (rows.empty()) throw SchemaError("measurements: missing header row");
    const auto& header = rows.front();
    for (std::size_t i = 0; i < kFixed.size(); ++i) {
        if (i >= header.size()) throw SchemaError("measurements: missing column '" + std::string(kFixed[i]) + "'");
        if (header[i] != kFixed[i])
            throw SchemaError("measurements: column " + std::to_string(i + 1) + " must be '" + std::string(kFixed[i]) +
                              "', found '" + header[i] + "'");
    }
    MeasurementTable table;
    std::set<std::string> seen_dev;
    for (std::size_t i = kFixed.size(); i < header.size(); ++i) {
        if (!header[i].starts_with("dev_") || header[i].size() == 4)
            throw SchemaError("measurements: unexpected column '" + header[i] + "' (extra columns must be dev_<name>)");
        auto name = header[i].substr(4);
        if (!seen_dev.insert(name).second) throw SchemaError("measurements: duplicate column '" + header[i] + "'");
        table.dev_names.push_back(std::move(name));
    }

    std::set<std::tuple<std::string, std::string, std::string>> keys;
    table.records.reserve(rows.size() - 1);
    for (std::size_t r = 1; r < rows.size(); ++r) {
        const auto& row = rows[r];
        const std::size_t line = r + 1;
        if (row.size() != header.size())
            bad_row(line, "expected " + std::to_string(header.size()) + " fields, found " + std::to_string(row.size()));
        MeasurementRecord rec;
        rec.dataset_id = row[0];
        rec.snippet_id = row[1];
        rec.participant_id = row[2];
        if (rec.dataset_id.empty() || rec.snippet_id.empty() || rec.participant_id.empty())
            bad_row(line, "dataset_id, snippet_id and participant_id are required");
        rec.AU = int_cell(row[3], "AU", 0, 3, line);
        rec.PBU = int_cell(row[4], "PBU", 0, 1, line);
        rec.RL = int_cell(row[5], "RL", 1, 5, line);
        if (!rec.AU && !rec.PBU && !rec.RL) bad_row(line, "none of AU, PBU, RL present");
        for (std::size_t c = kFixed.size(); c < row.size(); ++c) rec.dev.push_back(real_cell(row[c], header[c], line));
        if (!keys.emplace(rec.dataset_id, rec.snippet_id, rec.participant_id).second)
            bad_row(line, "duplicate measurement for snippet " + rec.snippet_id + " by " + rec.participant_id);
        table.records.push_back(std::move(rec));
    }
    return table;
}

MeasurementTable ingest_measurements(const std::filesystem::path& path) {
    try {
        return parse_measurements(io::read_text(path));
    } catch (const SchemaError& e) {
        throw SchemaError(path.string() + ": " + e.what());
    } catch (const ValueError& e) {
        throw ValueError(path.string() + ": " + e.what());
    }
}

std::string measurements_csv(const MeasurementTable& table) {
    csv::Row header(kFixed.begin(), kFixed.end());
    for (const auto& n : table.dev_names) header.push_back("dev_" + n);
    std::string out = csv::join(header) + "\n";
    for (const auto& r : table.records) {
        csv::Row row = {r.dataset_id, r.snippet_id, r.participant_id, render(r.AU), render(r.PBU), render(r.RL)};
        for (double d : r.dev) {
            if (std::isnan(d)) {
                row.emplace_back();
            } else {
                char buf[64];
                const auto [p, ec] = std::to_chars(buf, buf + sizeof buf, d);
                row.emplace_back(buf, p);
            }
        }
        out += csv::join(row) + "\n";
    }
    return out;
}

}  // namespace cl::dataset
