#pragma once
// 12-significant-digit numeric formatting shared by every CSV and summary
// writer, so identical configs reproduce byte-identical artifacts.

#include <cstdio>
#include <string>

namespace crimewave {

inline std::string fmt_g(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace crimewave
