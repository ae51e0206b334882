#include "susy2d/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace susy2d {

namespace {

GaussRule build_rule(int n) {
    GaussRule r;
    r.nodes.resize(n);
    r.weights.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double dp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        double p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        dp = n * (x * p1 - p0) / (x * x - 1.0);
        double w = 2.0 / ((1.0 - x * x) * dp * dp);
        r.nodes[i] = -x;
        r.nodes[n - 1 - i] = x;
        r.weights[i] = r.weights[n - 1 - i] = w;
    }
    return r;
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be positive");
    if (n == 1) return {{0.0}, {2.0}};
    static std::mutex mu;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> lock(mu);
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, build_rule(n)).first;
    return it->second;
}

double integrate_1d(const std::function<double(double)>& f, double a, double b, int n, int panels) {
    GaussRule r = gauss_legendre(n);
    double h = (b - a) / panels, sum = 0.0;
    for (int p = 0; p < panels; ++p) {
        double c = a + (p + 0.5) * h;
        for (int i = 0; i < n; ++i) sum += r.weights[i] * f(c + 0.5 * h * r.nodes[i]);
    }
    return 0.5 * h * sum;
}

double integrate_2d(const std::function<double(double, double)>& f, double a1, double b1, double a2, double b2,
                    int n, int panels1, int panels2) {
    GaussRule r = gauss_legendre(n);
    double h1 = (b1 - a1) / panels1, h2 = (b2 - a2) / panels2;
    std::vector<double> x2, w2;
    for (int p = 0; p < panels2; ++p)
        for (int i = 0; i < n; ++i) {
            x2.push_back(a2 + (p + 0.5) * h2 + 0.5 * h2 * r.nodes[i]);
            w2.push_back(0.5 * h2 * r.weights[i]);
        }
    double sum = 0.0;
    for (int p = 0; p < panels1; ++p)
        for (int i = 0; i < n; ++i) {
            double x1 = a1 + (p + 0.5) * h1 + 0.5 * h1 * r.nodes[i];
            double inner = 0.0;
            for (std::size_t j = 0; j < x2.size(); ++j) inner += w2[j] * f(x1, x2[j]);
            sum += 0.5 * h1 * r.weights[i] * inner;
        }
    return sum;
}

}  // namespace susy2d
