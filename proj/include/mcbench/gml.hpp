#pragma once

#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "mcbench/graph.hpp"

namespace mcbench {

class GmlParseError : public std::runtime_error {
public:
    GmlParseError(int line, const std::string& detail, const std::string& source = "")
        : std::runtime_error((source.empty() ? "" : source + ": ") + "line " + std::to_string(line) + ": " +
                             detail),
          line_(line),
          detail_(detail) {}
    int line() const { return line_; }
    const std::string& detail() const { return detail_; }

private:
    int line_;
    std::string detail_;
};

/// Writes the GML subset: one `node [ id i ]` per vertex, one
/// `edge [ source i target j weight w ]` per edge, weights at full precision.
std::string write_gml(const WeightedGraph& graph);

/// Parses the same subset. Every edge must carry an explicit positive weight
/// and node ids must be exactly 0..n-1.
WeightedGraph parse_gml(std::string_view text);

WeightedGraph read_gml_file(const std::filesystem::path& path);
void write_gml_file(const std::filesystem::path& path, const WeightedGraph& graph);

}  // namespace mcbench
