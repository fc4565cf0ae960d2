#ifndef PICOH_CLI_HPP
#define PICOH_CLI_HPP

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "picoh/coefficients.hpp"

namespace picoh {

struct JobConfig {
    std::string command;
    std::vector<std::string> inputs;
    std::string format = "table";  // "table" | "json"
    long margin = 2;
    std::uint64_t seed = 0;
    long u_cap = 16;
    long t_lo = -8, t_hi = 8;
    long floor = -8;
    int depth_cap = 12;
    int flow_n = 2;
    int flow_depth = 6;
    long flow_i = 0, flow_j = 1;
    std::optional<Rational> alpha;
};

// exit status: 0 success, 1 validation error, 2 precision exhaustion,
// 3 property-check failure
int cli_run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

} // namespace picoh

#endif
