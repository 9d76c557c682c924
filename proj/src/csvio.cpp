#include "tumorlin/csvio.hpp"

#include <cstdio>
#include <filesystem>
#include <stdexcept>
#include <system_error>

namespace tumorlin {

void atomic_write(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    if (target.has_parent_path()) {
        std::error_code ec;
        fs::create_directories(target.parent_path(), ec);
        if (ec) throw std::runtime_error("atomic_write: cannot create " + target.parent_path().string());
    }
    const fs::path tmp = target.string() + ".tmp";
    {
        std::FILE* f = std::fopen(tmp.c_str(), "wb");
        if (!f) throw std::runtime_error("atomic_write: cannot open " + tmp.string());
        const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
        const int rc = std::fclose(f);
        if (written != content.size() || rc != 0) {
            std::remove(tmp.c_str());
            throw std::runtime_error("atomic_write: short write to " + tmp.string());
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) throw std::runtime_error("atomic_write: rename failed for " + target.string());
}

} // namespace tumorlin
