#include "robopinion/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "robopinion/error.hpp"

namespace robopinion {

std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        fail_io("cannot open file for reading: " + path.string());
    }
    std::ostringstream out;
    out << in.rdbuf();
    if (in.bad()) {
        fail_io("read error on file: " + path.string());
    }
    return out.str();
}

void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) {
        fail_io("cannot open file for writing: " + path.string());
    }
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    out.flush();
    if (!out) {
        fail_io("write error on file: " + path.string());
    }
}

std::string fmt_double(double value) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
    if (ec != std::errc{}) {
        fail_runtime("number formatting failed");
    }
    return std::string(buf, ptr);
}

}  // namespace robopinion
