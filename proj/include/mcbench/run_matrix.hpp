#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace mcbench {

using Metadata = std::vector<std::pair<std::string, std::string>>;

/// R runs x N shots of cut values, row-major.
class RunMatrix {
public:
    RunMatrix(std::size_t runs, std::size_t shots, std::vector<double> values, std::string instance = {},
              Metadata metadata = {});

    std::size_t runs() const { return runs_; }
    std::size_t shots() const { return shots_; }
    double at(std::size_t run, std::size_t shot) const { return values_[run * shots_ + shot]; }
    std::span<const double> row(std::size_t run) const { return {values_.data() + run * shots_, shots_}; }
    std::span<const double> values() const { return values_; }

    const std::string& instance() const { return instance_; }
    const Metadata& metadata() const { return metadata_; }

    friend bool operator==(const RunMatrix&, const RunMatrix&) = default;

private:
    std::size_t runs_;
    std::size_t shots_;
    std::vector<double> values_;
    std::string instance_;
    Metadata metadata_;
};

class RunMatrixFormatError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

constexpr std::uint32_t kRunMatrixFormatVersion = 1;

/***
 * Binary layout, all integers and doubles little-endian:
 *   "MCRUNMAT" | u32 version | u64 R | u64 N
 *   | u32 len, instance bytes | u32 count, (u32 len, key, u32 len, value)*
 *   | R*N IEEE-754 doubles stored column by column (shot-major).
 */
std::string encode_run_matrix(const RunMatrix& matrix);
RunMatrix decode_run_matrix(std::string_view bytes);

void write_run_matrix(const std::filesystem::path& path, const RunMatrix& matrix);
RunMatrix read_run_matrix(const std::filesystem::path& path);

/// One line per run: run index followed by its N cut values.
std::string run_matrix_csv(const RunMatrix& matrix);

}  // namespace mcbench
