#include "mcbench/run_matrix.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <sstream>

#include "mcbench/graph.hpp"
#include "mcbench/text.hpp"

namespace mcbench {

RunMatrix::RunMatrix(std::size_t runs, std::size_t shots, std::vector<double> values, std::string instance,
                     Metadata metadata)
    : runs_(runs), shots_(shots), values_(std::move(values)), instance_(std::move(instance)),
      metadata_(std::move(metadata)) {
    if (runs < 1 || shots < 1) throw ContractError("run matrix needs R >= 1 and N >= 1");
    if (values_.size() != runs * shots) throw ContractError("run matrix needs R*N values");
}

namespace {

constexpr char kMagic[8] = {'M', 'C', 'R', 'U', 'N', 'M', 'A', 'T'};

template <typename T>
void put(std::string& out, T value) {
    for (std::size_t b = 0; b < sizeof(T); ++b) out.push_back(static_cast<char>((value >> (8 * b)) & 0xff));
}

void put_string(std::string& out, const std::string& s) {
    put<std::uint32_t>(out, static_cast<std::uint32_t>(s.size()));
    out += s;
}

class Reader {
public:
    explicit Reader(std::string_view bytes) : bytes_(bytes) {}

    template <typename T>
    T get() {
        need(sizeof(T));
        T value = 0;
        for (std::size_t b = 0; b < sizeof(T); ++b) {
            value |= static_cast<T>(static_cast<unsigned char>(bytes_[pos_ + b])) << (8 * b);
        }
        pos_ += sizeof(T);
        return value;
    }

    std::string get_string() {
        const auto len = get<std::uint32_t>();
        need(len);
        std::string s(bytes_.substr(pos_, len));
        pos_ += len;
        return s;
    }

    std::string_view take(std::size_t len) {
        need(len);
        auto view = bytes_.substr(pos_, len);
        pos_ += len;
        return view;
    }

    bool done() const { return pos_ == bytes_.size(); }

private:
    void need(std::size_t len) const {
        if (bytes_.size() - pos_ < len) throw RunMatrixFormatError("run matrix file is truncated");
    }

    std::string_view bytes_;
    std::size_t pos_ = 0;
};

}  // namespace

std::string encode_run_matrix(const RunMatrix& matrix) {
    std::string out(kMagic, sizeof(kMagic));
    put<std::uint32_t>(out, kRunMatrixFormatVersion);
    put<std::uint64_t>(out, matrix.runs());
    put<std::uint64_t>(out, matrix.shots());
    put_string(out, matrix.instance());
    put<std::uint32_t>(out, static_cast<std::uint32_t>(matrix.metadata().size()));
    for (const auto& [key, value] : matrix.metadata()) {
        put_string(out, key);
        put_string(out, value);
    }
    out.reserve(out.size() + matrix.values().size() * 8);
    for (std::size_t s = 0; s < matrix.shots(); ++s) {
        for (std::size_t r = 0; r < matrix.runs(); ++r) put<std::uint64_t>(out, std::bit_cast<std::uint64_t>(matrix.at(r, s)));
    }
    return out;
}

RunMatrix decode_run_matrix(std::string_view bytes) {
    Reader in(bytes);
    if (in.take(sizeof(kMagic)) != std::string_view(kMagic, sizeof(kMagic))) {
        throw RunMatrixFormatError("not a run matrix file (bad magic)");
    }
    const auto version = in.get<std::uint32_t>();
    if (version != kRunMatrixFormatVersion) {
        throw RunMatrixFormatError("unsupported run matrix format version " + std::to_string(version));
    }
    const auto runs = in.get<std::uint64_t>();
    const auto shots = in.get<std::uint64_t>();
    std::string instance = in.get_string();
    Metadata metadata;
    const auto count = in.get<std::uint32_t>();
    for (std::uint32_t m = 0; m < count; ++m) {
        std::string key = in.get_string();
        metadata.emplace_back(std::move(key), in.get_string());
    }
    if (runs == 0 || shots == 0 || runs > (std::uint64_t{1} << 40) / shots) {
        throw RunMatrixFormatError("invalid run matrix shape");
    }
    std::vector<double> values(runs * shots);
    for (std::size_t s = 0; s < shots; ++s) {
        for (std::size_t r = 0; r < runs; ++r) values[r * shots + s] = std::bit_cast<double>(in.get<std::uint64_t>());
    }
    if (!in.done()) throw RunMatrixFormatError("trailing bytes after run matrix payload");
    return RunMatrix(runs, shots, std::move(values), std::move(instance), std::move(metadata));
}

void write_run_matrix(const std::filesystem::path& path, const RunMatrix& matrix) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << encode_run_matrix(matrix);
}

RunMatrix read_run_matrix(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    return decode_run_matrix(ss.str());
}

std::string run_matrix_csv(const RunMatrix& matrix) {
    std::string out = "run";
    for (std::size_t s = 1; s <= matrix.shots(); ++s) out += ",s" + std::to_string(s);
    out += '\n';
    for (std::size_t r = 0; r < matrix.runs(); ++r) {
        out += std::to_string(r);
        for (double v : matrix.row(r)) out += "," + format_double(v);
        out += '\n';
    }
    return out;
}

}  // namespace mcbench
