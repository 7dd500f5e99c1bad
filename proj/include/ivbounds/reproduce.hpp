#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace ivbounds {

struct ReproductionCheck {
    std::string name;
    std::string expected;
    std::string actual;
    bool pass = false;
};

struct ReproductionReport {
    std::string target;  // b2, b3 or b4
    std::vector<ReproductionCheck> checks;
    bool passed() const;
};

// IVBOUNDS_DATA_DIR when set, else the data directory of the source tree.
std::filesystem::path default_data_dir();

// Runs one golden pipeline on the bundled tables. Unknown targets raise InvalidArgument.
ReproductionReport reproduce(std::string_view target, const std::filesystem::path& data_dir = default_data_dir());

const std::vector<std::string>& reproduction_targets();

}  // namespace ivbounds
