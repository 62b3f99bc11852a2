#pragma once

#include "cl/dataset/metrics.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace cl::dataset {

struct MeasurementRecord {
    std::string dataset_id;
    std::string snippet_id;
    std::string participant_id;
    std::optional<int> AU;
    std::optional<int> PBU;
    std::optional<int> RL;
    // Aligned with MeasurementTable::dev_names; NaN = absent.
    std::vector<double> dev;

    DerivedMetrics derived() const { return derive_metrics(AU, PBU, RL); }
};

struct MeasurementTable {
    std::vector<std::string> dev_names;  // without the dev_ prefix
    std::vector<MeasurementRecord> records;

    std::size_t size() const { return records.size(); }
    std::vector<std::string> dataset_ids() const;
    MeasurementTable only(std::string_view dataset_id) const;
};

// Header: dataset_id,snippet_id,participant_id,AU,PBU,RL then any number
// of dev_<name> columns. Empty cell = absent. SchemaError for header
// problems; ValueError (with the 1-based file line) for bad rows.
MeasurementTable parse_measurements(std::string_view csv_text);
MeasurementTable ingest_measurements(const std::filesystem::path& path);

std::string measurements_csv(const MeasurementTable& table);

}  // namespace cl::dataset
