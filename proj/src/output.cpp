#include "sshbp/output.hpp"

#include <fstream>
#include <stdexcept>
#include <system_error>

namespace sshbp {

OutputSet::OutputSet(std::filesystem::path dir) : dir_(std::move(dir))
{
    std::error_code ec;
    if (!std::filesystem::exists(dir_, ec)) {
        std::filesystem::create_directories(dir_, ec);
        if (ec)
            throw std::runtime_error("cannot create output directory '" + dir_.string() + "': " + ec.message());
        created_dir_ = true;
    }
}

OutputSet::~OutputSet()
{
    if (committed_)
        return;
    std::error_code ec;
    for (const auto& p : written_)
        std::filesystem::remove(p, ec);
    if (created_dir_ && std::filesystem::is_empty(dir_, ec))
        std::filesystem::remove(dir_, ec);
}

void OutputSet::write(const std::string& name, const std::string& content)
{
    const auto path = dir_ / name;
    {
        std::ofstream out(path, std::ios::binary | std::ios::trunc);
        if (!out)
            throw std::runtime_error("cannot write '" + path.string() + "'");
        written_.push_back(path);
        out << content;
        if (!out)
            throw std::runtime_error("write failed for '" + path.string() + "'");
    }
}

} // namespace sshbp
