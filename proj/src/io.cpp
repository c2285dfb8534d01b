#include "dlalab/io.hpp"

#include <fstream>

#include "dlalab/errors.hpp"

namespace dlalab {

void atomic_write(const std::filesystem::path& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path dir = path.parent_path();
    if (!dir.empty()) fs::create_directories(dir);
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValidationError("cannot open " + tmp.string() + " for writing");
        out << content;
        if (!out.flush()) throw ValidationError("write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

}  // namespace dlalab
