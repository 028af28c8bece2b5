#pragma once

#include <iostream>
#include <string>

namespace fbnet::log {

inline bool& quiet() {
    static bool q = false;
    return q;
}

inline void info(const std::string& msg) {
    if (!quiet()) std::cerr << "[fbnet] " << msg << "\n";
}

inline void warn(const std::string& msg) {
    if (!quiet()) std::cerr << "[fbnet] warning: " << msg << "\n";
}

}  // namespace fbnet::log
