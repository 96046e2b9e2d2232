#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace mcbench {

enum class GraphModel { ConnectedWattsStrogatz, BarabasiAlbert, ErdosRenyi };

std::string_view model_prefix(GraphModel model);
GraphModel parse_model(std::string_view prefix);

class NameParseError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/***
 * Instance identity following the file-name templates
 *   cws_n-$n_k-$k_p-$p_$task_id
 *   ba_n-$n_m-$m_$task_id
 *   er_n-$n_p-$p_$task_id
 * Real parameters are kept at three decimals so that formatting and parsing
 * are mutually inverse.
 */
struct InstanceName {
    GraphModel model = GraphModel::ErdosRenyi;
    int n = 0;
    int k = 0;        // cws
    int m = 0;        // ba
    double p = 0.0;   // cws, er
    long long task_id = 0;

    static InstanceName cws(int n, int k, double p, long long task_id);
    static InstanceName ba(int n, int m, long long task_id);
    static InstanceName er(int n, double p, long long task_id);

    friend bool operator==(const InstanceName&, const InstanceName&) = default;
};

double round_to_thousandths(double value);

std::string format_name(const InstanceName& name);

/// Accepts the bare name or the name with a trailing ".gml".
InstanceName parse_name(std::string_view text);

inline std::string file_name(const InstanceName& name) { return format_name(name) + ".gml"; }

}  // namespace mcbench
