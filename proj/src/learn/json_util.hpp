#pragma once

#include "cl/common/error.hpp"
#include "cl/common/matrix.hpp"

#include <string>
#include <vector>

#include <json.hpp>

namespace cl::learn::detail {

inline nlohmann::json matrix_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", m.data()}};
}

inline Matrix matrix_from(const nlohmann::json& j) {
    const auto rows = j.at("rows").get<std::size_t>();
    const auto cols = j.at("cols").get<std::size_t>();
    const auto data = j.at("data").get<std::vector<double>>();
    if (data.size() != rows * cols) throw CorruptModel("matrix payload has the wrong size");
    Matrix m(rows, cols);
    for (std::size_t r = 0; r < rows; ++r)
        for (std::size_t c = 0; c < cols; ++c) m(r, c) = data[r * cols + c];
    return m;
}

}  // namespace cl::learn::detail
