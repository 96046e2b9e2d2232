#include "mcbench/gml.hpp"

#include <fstream>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <vector>

#include "mcbench/text.hpp"

namespace mcbench {

std::string write_gml(const WeightedGraph& graph) {
    std::string out = "graph [\n";
    for (int v = 0; v < graph.n(); ++v) {
        out += "  node [ id " + std::to_string(v) + " ]\n";
    }
    for (const auto& e : graph.edges()) {
        out += "  edge [ source " + std::to_string(e.i) + " target " + std::to_string(e.j) + " weight " +
               format_double(e.w) + " ]\n";
    }
    out += "]\n";
    return out;
}

namespace {

struct Token {
    std::string_view text;
    int line;
};

std::vector<Token> tokenize(std::string_view text) {
    std::vector<Token> tokens;
    int line = 1;
    std::size_t pos = 0;
    while (pos < text.size()) {
        char c = text[pos];
        if (c == '\n') {
            ++line;
            ++pos;
        } else if (c == ' ' || c == '\t' || c == '\r') {
            ++pos;
        } else if (c == '[' || c == ']') {
            tokens.push_back({text.substr(pos, 1), line});
            ++pos;
        } else {
            std::size_t start = pos;
            while (pos < text.size() && text[pos] != '[' && text[pos] != ']' && text[pos] != ' ' &&
                   text[pos] != '\t' && text[pos] != '\r' && text[pos] != '\n') {
                ++pos;
            }
            tokens.push_back({text.substr(start, pos - start), line});
        }
    }
    return tokens;
}

class Parser {
public:
    explicit Parser(std::vector<Token> tokens) : tokens_(std::move(tokens)) {}

    WeightedGraph parse() {
        expect("graph");
        expect("[");
        std::set<long long> ids;
        std::vector<Edge> edges;
        std::set<std::pair<int, int>> seen;
        while (peek("node") || peek("edge")) {
            const Token head = next();
            expect("[");
            if (head.text == "node") {
                const Token key = next();
                if (key.text != "id") fail(key, "expected 'id' in node record");
                const Token val = next();
                auto id = parse_int(val.text);
                if (!id) fail(val, "non-integer node id '" + std::string(val.text) + "'");
                if (!ids.insert(*id).second) fail(val, "duplicate node id " + std::to_string(*id));
                expect("]");
            } else {
                std::optional<long long> source, target;
                std::optional<double> weight;
                while (!peek("]")) {
                    const Token key = next();
                    const Token val = next();
                    if (key.text == "source" || key.text == "target") {
                        auto v = parse_int(val.text);
                        if (!v) fail(val, "non-integer " + std::string(key.text));
                        if (*v < 0 || *v > std::numeric_limits<int>::max()) {
                            fail(val, std::string(key.text) + " out of range");
                        }
                        (key.text == "source" ? source : target) = *v;
                    } else if (key.text == "weight") {
                        weight = parse_double(val.text);
                        if (!weight) fail(val, "non-numeric weight '" + std::string(val.text) + "'");
                        if (!(*weight > 0.0)) fail(val, "edge weight must be positive");
                    } else {
                        fail(key, "unexpected key '" + std::string(key.text) + "' in edge record");
                    }
                }
                const Token close = next();
                if (!source || !target) fail(close, "edge record missing source or target");
                if (!weight) fail(close, "edge record missing weight");
                if (*source == *target) fail(close, "self-loop edge");
                int a = static_cast<int>(std::min(*source, *target));
                int b = static_cast<int>(std::max(*source, *target));
                if (!seen.insert({a, b}).second) {
                    fail(close, "duplicate edge (" + std::to_string(a) + "," + std::to_string(b) + ")");
                }
                edges.push_back({a, b, *weight});
                edge_lines_.push_back(close.line);
            }
        }
        const Token close = next();
        if (close.text != "]") fail(close, "unexpected token '" + std::string(close.text) + "'");
        if (pos_ != tokens_.size()) fail(tokens_[pos_], "trailing content after graph");

        const long long n = static_cast<long long>(ids.size());
        if (n < 2) fail(close, "graph needs at least two nodes");
        if (*ids.begin() != 0 || *ids.rbegin() != n - 1) fail(close, "node ids must be exactly 0..n-1");
        for (std::size_t k = 0; k < edges.size(); ++k) {
            if (edges[k].i < 0 || edges[k].j >= n) {
                throw GmlParseError(edge_lines_[k], "edge endpoint outside 0..n-1");
            }
        }
        return WeightedGraph(static_cast<int>(n), std::move(edges));
    }

private:
    [[noreturn]] void fail(const Token& at, const std::string& what) { throw GmlParseError(at.line, what); }

    bool peek(std::string_view text) const { return pos_ < tokens_.size() && tokens_[pos_].text == text; }

    Token next() {
        if (pos_ >= tokens_.size()) {
            throw GmlParseError(tokens_.empty() ? 1 : tokens_.back().line, "unexpected end of input");
        }
        return tokens_[pos_++];
    }

    void expect(std::string_view text) {
        const Token t = next();
        if (t.text != text) {
            fail(t, "expected '" + std::string(text) + "', found '" + std::string(t.text) + "'");
        }
    }

    std::vector<Token> tokens_;
    std::size_t pos_ = 0;
    std::vector<int> edge_lines_;
};

}  // namespace

WeightedGraph parse_gml(std::string_view text) { return Parser(tokenize(text)).parse(); }

WeightedGraph read_gml_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open " + path.string());
    std::ostringstream ss;
    ss << in.rdbuf();
    try {
        return parse_gml(ss.str());
    } catch (const GmlParseError& e) {
        throw GmlParseError(e.line(), e.detail(), path.string());
    }
}

void write_gml_file(const std::filesystem::path& path, const WeightedGraph& graph) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << write_gml(graph);
}

}  // namespace mcbench
