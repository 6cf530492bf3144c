#include "blindssr/quadrature.hpp"
#include "blindssr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <queue>
#include <sstream>
#include <vector>

namespace blindssr {

namespace {

// 15-point Kronrod nodes on [-1, 1] (symmetric; nonnegative half stored) with
// the embedded 7-point Gauss rule on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120813, 0.949107912342759, 0.864864423359769, 0.741531185599394,
    0.586087235467691, 0.405845151377397, 0.207784955007898, 0.000000000000000};
constexpr double kWgk[8] = {
    0.022935322010529, 0.063092092629979, 0.104790010322250, 0.140653259715525,
    0.169004726639267, 0.190350578064785, 0.204432940075298, 0.209482141084728};
constexpr double kWg[4] = {
    0.129484966168870, 0.279705391489277, 0.381830050505119, 0.417959183673469};

struct Panel {
    double a;
    double b;
    double value;  // Kronrod estimate
    double error;  // |Kronrod - Gauss|
    std::uint64_t order; // insertion counter, deterministic tie-break
};

struct WorstFirst {
    bool operator()(const Panel& lhs, const Panel& rhs) const {
        if (lhs.error != rhs.error) return lhs.error < rhs.error;
        return lhs.order > rhs.order;
    }
};

Panel evaluate(const std::function<double(double)>& f, double a, double b,
               std::uint64_t order) {
    const double c = 0.5 * (a + b);
    const double h = 0.5 * (b - a);
    const double fc = f(c);
    double result_g = fc * kWg[3];
    double result_k = fc * kWgk[7];
    for (int i = 0; i < 7; ++i) {
        const double dx = h * kXgk[i];
        const double fsum = f(c - dx) + f(c + dx);
        result_k += fsum * kWgk[i];
        if (i % 2 == 1) result_g += fsum * kWg[i / 2];
    }
    return {a, b, result_k * h, std::fabs((result_k - result_g) * h), order};
}

} // namespace

QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b, double abs_tol) {
    if (!(abs_tol > 0.0)) throw DomainError("quadrature tolerance must be > 0");
    if (a == b) return {0.0, 0.0, 0};
    if (!(b > a)) throw DomainError("quadrature interval must satisfy a <= b");

    constexpr int kMaxPanels = 4000;
    const double min_width = 1e-14 * (b - a);

    std::uint64_t order = 0;
    std::priority_queue<Panel, std::vector<Panel>, WorstFirst> queue;
    std::vector<Panel> done;
    queue.push(evaluate(f, a, b, order++));
    double total_error = queue.top().error;

    int panels = 1;
    while (total_error > abs_tol && panels < kMaxPanels) {
        const Panel worst = queue.top();
        queue.pop();
        if (worst.b - worst.a <= min_width) {
            // Cannot refine further; its error is already in the budget.
            done.push_back(worst);
            if (queue.empty()) break;
            continue;
        }
        const double mid = 0.5 * (worst.a + worst.b);
        const Panel left = evaluate(f, worst.a, mid, order++);
        const Panel right = evaluate(f, mid, worst.b, order++);
        total_error += left.error + right.error - worst.error;
        queue.push(left);
        queue.push(right);
        panels += 1;
    }

    if (total_error > abs_tol) {
        std::ostringstream os;
        os << "quadrature failed to converge on [" << a << ", " << b << "]: "
           << panels << " panels, error estimate " << total_error << " > tolerance "
           << abs_tol;
        throw NumericError(os.str());
    }

    while (!queue.empty()) {
        done.push_back(queue.top());
        queue.pop();
    }
    // Sum in interval order with compensation: deterministic and robust.
    std::sort(done.begin(), done.end(),
              [](const Panel& l, const Panel& r) { return l.a < r.a; });
    double sum = 0.0, comp = 0.0, err = 0.0;
    for (const Panel& p : done) {
        const double y = p.value - comp;
        const double t = sum + y;
        comp = (t - sum) - y;
        sum = t;
        err += p.error;
    }
    return {sum, err, panels};
}

} // namespace blindssr
