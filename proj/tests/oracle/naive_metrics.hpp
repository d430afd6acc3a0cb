#pragma once

// Reference implementation of the per-pedestrian flow-performance quantities
// for tests. Deliberately shares no code with the library: positions are
// plain arrays, sums run in long double, and the straight-line displacement
// is accumulated from the steps instead of taken from the endpoints.

#include <cmath>
#include <vector>

namespace oracle {

struct Sample {
    double t;
    double x;
    double y;
};

struct Metrics {
    long double omega = 0, psi = 0, omega_straight = 0;
    long double net_x = 0, net_y = 0;
    long double xi_x = 0, xi_y = 0;
    long double var_x = 0, var_y = 0;
    long double gamma_componentwise = 0, gamma_trace = 0, lambda = 0;
};

inline Metrics naive_metrics(const std::vector<Sample>& s) {
    Metrics r;
    const std::size_t rho = s.size();
    const long double samples = static_cast<long double>(rho - 1);
    for (std::size_t t = 0; t + 1 < rho; ++t) {
        const long double dx = static_cast<long double>(s[t + 1].x) - s[t].x;
        const long double dy = static_cast<long double>(s[t + 1].y) - s[t].y;
        r.omega += std::sqrt(dx * dx + dy * dy);
        r.net_x += dx;
        r.net_y += dy;
    }
    r.psi = r.omega / (static_cast<long double>(s.back().t) - s.front().t);
    r.omega_straight = std::sqrt(r.net_x * r.net_x + r.net_y * r.net_y);
    r.xi_x = r.net_x / samples;
    r.xi_y = r.net_y / samples;
    for (std::size_t t = 0; t + 1 < rho; ++t) {
        const long double ex = (static_cast<long double>(s[t + 1].x) - s[t].x) - r.xi_x;
        const long double ey = (static_cast<long double>(s[t + 1].y) - s[t].y) - r.xi_y;
        r.var_x += ex * ex;
        r.var_y += ey * ey;
    }
    r.var_x /= samples;
    r.var_y /= samples;
    r.gamma_componentwise = std::sqrt(r.var_x * r.var_x + r.var_y * r.var_y) / r.omega;
    r.gamma_trace = (r.var_x + r.var_y) / r.omega;
    r.lambda = (r.omega - r.omega_straight) / (r.omega * r.psi);
    return r;
}

}  // namespace oracle
