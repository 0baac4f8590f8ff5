#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace sshbp {

/// Files written by one CLI run. Unless commit() is called, the destructor
/// removes every file this set wrote, so a failed run leaves no partial
/// outputs behind.
class OutputSet {
public:
    explicit OutputSet(std::filesystem::path dir);
    ~OutputSet();

    OutputSet(const OutputSet&) = delete;
    OutputSet& operator=(const OutputSet&) = delete;

    const std::filesystem::path& dir() const { return dir_; }

    void write(const std::string& name, const std::string& content);
    void commit() { committed_ = true; }

    const std::vector<std::filesystem::path>& written() const { return written_; }

private:
    std::filesystem::path dir_;
    bool created_dir_ = false;
    bool committed_ = false;
    std::vector<std::filesystem::path> written_;
};

} // namespace sshbp
