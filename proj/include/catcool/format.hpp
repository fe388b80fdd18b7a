// format.hpp
// Number formatting shared by plan files and CSV output

#pragma once

#include <cmath>
#include <cstdio>
#include <string>

namespace catcool {

// 12 significant digits; infinities print as inf / -inf.
inline std::string format_number(double x) {
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    if (x == 0.0) {
        return "0";
    }
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

} // namespace catcool
