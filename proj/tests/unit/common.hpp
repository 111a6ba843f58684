#pragma once

// Small helpers shared by the unit suites.

#include <string>

#include <doctest.h>

#include "pscurve/path.hpp"

namespace unit {

inline pscurve::PathDef path_from(const std::string& text) { return pscurve::parse_path(text); }

inline pscurve::PathDef hyperbola(const std::string& interval = "(-inf, inf)") {
    return path_from("n: 2\np: 1\ninterval: " + interval + "\nlabel: hyperbola\nx1 = cosh(t)\nx2 = sinh(t)\n");
}

inline pscurve::PathDef circle(const std::string& interval = "(0, 6)") {
    return path_from("n: 2\ninterval: " + interval + "\nlabel: circle\nx1 = cos(t)\nx2 = sin(t)\n");
}

inline pscurve::PathDef lightlike() {
    return path_from("n: 2\np: 1\ninterval: (0, 1)\nx1 = t\nx2 = t\n");
}

inline pscurve::Matrix boost(double a) {
    pscurve::Matrix b(2, 2);
    b << std::cosh(a), std::sinh(a), std::sinh(a), std::cosh(a);
    return b;
}

}  // namespace unit
