#include "cl/common/io.hpp"

#include "cl/common/error.hpp"

#include <fstream>
#include <sstream>
#include <system_error>

namespace cl::io {

std::string read_text(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

void write_atomic_with(const std::filesystem::path& path, const std::function<void(std::ostream&)>& fill) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    auto tmp = path;
    tmp += ".tmp";
    try {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw IoError("cannot write " + tmp.string());
        fill(out);
        out.flush();
        if (!out) throw IoError("short write to " + tmp.string());
    } catch (...) {
        std::error_code ignored;
        std::filesystem::remove(tmp, ignored);
        throw;
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw IoError("cannot rename " + tmp.string() + ": " + ec.message());
    }
}

void write_atomic(const std::filesystem::path& path, std::string_view contents) {
    write_atomic_with(path, [&](std::ostream& out) { out.write(contents.data(), static_cast<std::streamsize>(contents.size())); });
}

}  // namespace cl::io
