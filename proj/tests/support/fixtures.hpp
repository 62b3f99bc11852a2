#pragma once

#include "cl/dataset/measurements.hpp"
#include "cl/extract/corpus.hpp"

#include <cstdint>
#include <filesystem>
#include <string>

namespace cl::testing {

inline std::filesystem::path data_path(const std::string& rel) { return std::filesystem::path(CL_TEST_DATA_DIR) / rel; }

inline const dataset::MeasurementTable& ds1() {
    static const auto t = dataset::ingest_measurements(data_path("fixtures/ds1_measurements.csv"));
    return t;
}
inline const dataset::MeasurementTable& ds2() {
    static const auto t = dataset::ingest_measurements(data_path("fixtures/ds2_measurements.csv"));
    return t;
}
inline const extract::FeatureTable& ds1_features() {
    static const auto t = extract::read_feature_table(data_path("fixtures/ds1_features.csv"));
    return t;
}
inline const extract::FeatureTable& ds2_features() {
    static const auto t = extract::read_feature_table(data_path("fixtures/ds2_features.csv"));
    return t;
}

// Share in tenths of a percent, rounded half up, in integers so that
// 4005/10000 reliably prints as 40.1.
inline std::int64_t tenths(std::uint64_t count, std::uint64_t n) {
    return static_cast<std::int64_t>((count * 2000 + n) / (2 * n));
}

}  // namespace cl::testing
