#pragma once

#include <functional>
#include <string>

namespace imbtk {

using WarningHandler = std::function<void(const std::string&)>;

/// Replace the process-wide warning sink. Passing an empty handler restores
/// the default (stderr). Not thread-safe; set once before sampling runs.
void set_warning_handler(WarningHandler handler);

void warn(const std::string& message);

}  // namespace imbtk
