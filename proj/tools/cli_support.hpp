#pragma once

#include <json.hpp>

#include <fstream>
#include <memory>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace rainbow::cli {

/// Bad flag values or combinations; reported with exit status 2.
struct UsageError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// "start:stop:step" with both ends included, a comma-separated list, or a
/// single value.
std::vector<int> parse_int_range(const std::string& text);
std::vector<double> parse_double_range(const std::string& text);

/// Destination for an artifact: a file, or standard output for "-".
class Output {
public:
    Output(const std::string& path, bool binary = false);
    std::ostream& stream() { return *os_; }
    const std::string& path() const { return path_; }
    void finish();

private:
    std::string path_;
    std::unique_ptr<std::ofstream> file_;
    std::ostream* os_;
};

/// "# rainbow_lab <version>", "# command: ...", "# config: {...}".
std::vector<std::string> provenance_lines(const std::string& command,
                                          const nlohmann::ordered_json& config);
nlohmann::ordered_json provenance_json(const std::string& command,
                                       const nlohmann::ordered_json& config);

std::string tool_version();

} // namespace rainbow::cli
