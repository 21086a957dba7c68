#pragma once

#include <functional>
#include <optional>
#include <vector>

namespace renorm::roots {

// Root of f on [a, b] given f(a), f(b) of opposite sign (or zero), solved to
// full double precision with TOMS 748. Throws NumericError otherwise.
double solve_bracketed(const std::function<double(double)>& f, double a, double b);

// Scans [a, b] at `samples` equispaced points and returns every root bracketed
// by a sign change, each refined with solve_bracketed. Ascending order.
std::vector<double> scan_roots(const std::function<double(double)>& f, double a, double b, int samples);

}  // namespace renorm::roots
