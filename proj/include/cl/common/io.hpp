#pragma once

#include <filesystem>
#include <functional>
#include <ostream>
#include <string>
#include <string_view>

namespace cl::io {

std::string read_text(const std::filesystem::path& path);

// Writes to a sibling temp file and renames over the target, so readers
// never observe a partially written file.
void write_atomic(const std::filesystem::path& path, std::string_view contents);
// Same, for output too large to build in memory.
void write_atomic_with(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill);

}  // namespace cl::io
