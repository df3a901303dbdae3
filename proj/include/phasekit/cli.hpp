#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "phasekit/io.hpp"

namespace phasekit::cli {

/// Every recognised key with its default value.
Json default_config();

/// Defaults, then `file` (if any), then dotted overrides such as
/// {"quadrature.gh_order", "96"}. Values are parsed as JSON when possible and
/// must match the type of the default. Throws ConfigError on unknown keys,
/// type mismatches and out-of-range values.
Json resolve_config(const std::optional<std::string>& file,
                    const std::vector<std::pair<std::string, std::string>>& overrides);

/// Checks ranges of a resolved config; throws ConfigError.
void validate_config(const Json& cfg);

/// Entry point shared by the executable and the tests. Returns the process
/// exit code: 0 success, 1 numerical or verification failure, 2 usage or
/// configuration error.
int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

}  // namespace phasekit::cli
