#include "imbtk/warnings.hpp"

#include <iostream>

namespace imbtk {

namespace {
WarningHandler g_handler;
}

void set_warning_handler(WarningHandler handler) {
    g_handler = std::move(handler);
}

void warn(const std::string& message) {
    if (g_handler) {
        g_handler(message);
    } else {
        std::cerr << "warning: " << message << "\n";
    }
}

}  // namespace imbtk
