#include "mcbench/instance_name.hpp"

#include <cmath>
#include <vector>

#include "mcbench/text.hpp"

namespace mcbench {

std::string_view model_prefix(GraphModel model) {
    switch (model) {
        case GraphModel::ConnectedWattsStrogatz: return "cws";
        case GraphModel::BarabasiAlbert: return "ba";
        case GraphModel::ErdosRenyi: return "er";
    }
    return "?";
}

GraphModel parse_model(std::string_view prefix) {
    if (prefix == "cws") return GraphModel::ConnectedWattsStrogatz;
    if (prefix == "ba") return GraphModel::BarabasiAlbert;
    if (prefix == "er") return GraphModel::ErdosRenyi;
    throw NameParseError("unknown graph model prefix '" + std::string(prefix) + "'");
}

double round_to_thousandths(double value) { return std::round(value * 1000.0) / 1000.0; }

InstanceName InstanceName::cws(int n, int k, double p, long long task_id) {
    InstanceName name;
    name.model = GraphModel::ConnectedWattsStrogatz;
    name.n = n;
    name.k = k;
    name.p = round_to_thousandths(p);
    name.task_id = task_id;
    return name;
}

InstanceName InstanceName::ba(int n, int m, long long task_id) {
    InstanceName name;
    name.model = GraphModel::BarabasiAlbert;
    name.n = n;
    name.m = m;
    name.task_id = task_id;
    return name;
}

InstanceName InstanceName::er(int n, double p, long long task_id) {
    InstanceName name;
    name.model = GraphModel::ErdosRenyi;
    name.n = n;
    name.p = round_to_thousandths(p);
    name.task_id = task_id;
    return name;
}

std::string format_name(const InstanceName& name) {
    std::string out(model_prefix(name.model));
    out += "_n-" + std::to_string(name.n);
    switch (name.model) {
        case GraphModel::ConnectedWattsStrogatz:
            out += "_k-" + std::to_string(name.k) + "_p-" + format_fixed(name.p, 3);
            break;
        case GraphModel::BarabasiAlbert:
            out += "_m-" + std::to_string(name.m);
            break;
        case GraphModel::ErdosRenyi:
            out += "_p-" + format_fixed(name.p, 3);
            break;
    }
    out += "_" + std::to_string(name.task_id);
    return out;
}

namespace {

std::string_view field_value(std::string_view field, std::string_view key, std::string_view whole) {
    if (field.size() <= key.size() + 1 || field.substr(0, key.size()) != key ||
        field[key.size()] != '-') {
        throw NameParseError("expected field '" + std::string(key) + "-' in '" + std::string(whole) + "'");
    }
    return field.substr(key.size() + 1);
}

int int_field(std::string_view field, std::string_view key, std::string_view whole) {
    auto v = parse_int(field_value(field, key, whole));
    if (!v) throw NameParseError("non-numeric '" + std::string(key) + "' in '" + std::string(whole) + "'");
    return static_cast<int>(*v);
}

double real_field(std::string_view field, std::string_view key, std::string_view whole) {
    auto text = field_value(field, key, whole);
    auto v = parse_double(text);
    if (!v) throw NameParseError("non-numeric '" + std::string(key) + "' in '" + std::string(whole) + "'");
    return *v;
}

}  // namespace

InstanceName parse_name(std::string_view text) {
    const std::string_view whole = text;
    if (text.size() > 4 && text.substr(text.size() - 4) == ".gml") text.remove_suffix(4);
    auto parts = split(text, '_');
    if (parts.size() < 3) throw NameParseError("malformed instance name '" + std::string(whole) + "'");

    const GraphModel model = parse_model(parts[0]);
    const std::size_t expected = model == GraphModel::ConnectedWattsStrogatz ? 5 : 4;
    if (parts.size() != expected) {
        throw NameParseError("wrong number of fields in '" + std::string(whole) + "'");
    }
    auto id = parse_int(parts.back());
    if (!id) throw NameParseError("non-numeric task id in '" + std::string(whole) + "'");

    const int n = int_field(parts[1], "n", whole);
    switch (model) {
        case GraphModel::ConnectedWattsStrogatz:
            return InstanceName::cws(n, int_field(parts[2], "k", whole), real_field(parts[3], "p", whole), *id);
        case GraphModel::BarabasiAlbert:
            return InstanceName::ba(n, int_field(parts[2], "m", whole), *id);
        case GraphModel::ErdosRenyi:
            return InstanceName::er(n, real_field(parts[2], "p", whole), *id);
    }
    throw NameParseError("unreachable");
}

}  // namespace mcbench
