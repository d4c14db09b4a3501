#include "cli_support.hpp"

#include <charconv>
#include <cmath>
#include <iostream>
#include <sstream>

namespace rainbow::cli {

namespace {

template <class T>
T parse_number(const std::string& text) {
    T value{};
    const char* first = text.data();
    const char* last = text.data() + text.size();
    const auto res = std::from_chars(first, last, value);
    if (res.ec != std::errc{} || res.ptr != last)
        throw UsageError("not a number: '" + text + "'");
    return value;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> parts;
    std::string part;
    std::istringstream is(text);
    while (std::getline(is, part, sep))
        parts.push_back(part);
    if (!text.empty() && text.back() == sep)
        parts.emplace_back();
    return parts;
}

template <class T>
std::vector<T> parse_range(const std::string& text) {
    if (text.empty())
        throw UsageError("empty range");
    if (text.find(',') != std::string::npos) {
        std::vector<T> values;
        for (const auto& part : split(text, ','))
            values.push_back(parse_number<T>(part));
        return values;
    }
    const auto parts = split(text, ':');
    if (parts.size() == 1)
        return {parse_number<T>(parts[0])};
    if (parts.size() != 3)
        throw UsageError("range must read start:stop:step, got '" + text + "'");
    const T start = parse_number<T>(parts[0]);
    const T stop = parse_number<T>(parts[1]);
    const T step = parse_number<T>(parts[2]);
    if (!(step > 0))
        throw UsageError("range step must be positive in '" + text + "'");
    if (stop < start)
        throw UsageError("range stop lies below start in '" + text + "'");
    std::vector<T> values;
    if constexpr (std::is_integral_v<T>) {
        for (T v = start; v <= stop; v += step)
            values.push_back(v);
    } else {
        // absorb round-off so that 0:4:0.4 ends at 4
        const auto count = static_cast<long>(std::floor((stop - start) / step + 1e-9)) + 1;
        for (long k = 0; k < count; ++k)
            values.push_back(start + static_cast<T>(k) * step);
    }
    return values;
}

} // namespace

std::vector<int> parse_int_range(const std::string& text) { return parse_range<int>(text); }

std::vector<double> parse_double_range(const std::string& text) { return parse_range<double>(text); }

Output::Output(const std::string& path, bool binary) : path_(path), os_(&std::cout) {
    if (path == "-")
        return;
    file_ = std::make_unique<std::ofstream>(
        path, binary ? std::ios::out | std::ios::binary : std::ios::out);
    if (!*file_)
        throw std::runtime_error("cannot open '" + path + "' for writing");
    os_ = file_.get();
}

void Output::finish() {
    os_->flush();
    if (!*os_)
        throw std::runtime_error("write to '" + path_ + "' failed");
}

std::string tool_version() { return RAINBOW_LAB_VERSION; }

std::vector<std::string> provenance_lines(const std::string& command,
                                          const nlohmann::ordered_json& config) {
    return {"rainbow_lab " + tool_version(), "command: " + command, "config: " + config.dump()};
}

nlohmann::ordered_json provenance_json(const std::string& command,
                                       const nlohmann::ordered_json& config) {
    nlohmann::ordered_json j;
    j["tool"] = "rainbow_lab";
    j["version"] = tool_version();
    j["command"] = command;
    j["config"] = config;
    return j;
}

} // namespace rainbow::cli
