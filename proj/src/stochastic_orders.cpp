#include "myopic/stochastic_orders.h"

#include <limits>
#include <stdexcept>

namespace myopic {

OrderCheckResult mlr_ge(const std::vector<double>& p, const std::vector<double>& q, double tol) {
    if (p.size() != q.size() || p.empty())
        throw std::invalid_argument("mlr_ge: length mismatch");
    int n = static_cast<int>(p.size());
    OrderCheckResult r;
    r.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n - 1; ++i)
        for (int j = i + 1; j < n; ++j) {
            double slack = p[j] * q[i] - p[i] * q[j];
            if (slack < r.margin) r.margin = slack;
            if (slack < -tol && !r.witness) {
                r.holds = false;
                r.witness = std::vector<int>{i + 1, j + 1};
            }
        }
    return r;
}

OrderCheckResult fosd_ge(const std::vector<double>& p, const std::vector<double>& q, double tol) {
    if (p.size() != q.size() || p.empty())
        throw std::invalid_argument("fosd_ge: length mismatch");
    int n = static_cast<int>(p.size());
    OrderCheckResult r;
    r.margin = std::numeric_limits<double>::infinity();
    double tp = 0.0, tq = 0.0;
    std::vector<double> slack(n);
    for (int i = n - 1; i >= 0; --i) {
        tp += p[i];
        tq += q[i];
        slack[i] = tp - tq;
    }
    for (int i = 0; i < n; ++i) {
        if (slack[i] < r.margin) r.margin = slack[i];
        if (slack[i] < -tol && !r.witness) {
            r.holds = false;
            r.witness = std::vector<int>{i + 1};
        }
    }
    return r;
}

OrderCheckResult is_tp2(const Matrix& m, double tol) {
    if (m.rows < 1 || m.cols < 1) throw std::invalid_argument("is_tp2: empty matrix");
    OrderCheckResult r;
    r.margin = std::numeric_limits<double>::infinity();
    for (int i = 0; i < m.rows - 1; ++i)
        for (int k = i + 1; k < m.rows; ++k)
            for (int j = 0; j < m.cols - 1; ++j)
                for (int l = j + 1; l < m.cols; ++l) {
                    double minor = m(i, j) * m(k, l) - m(i, l) * m(k, j);
                    if (minor < r.margin) r.margin = minor;
                    if (minor < -tol && !r.witness) {
                        r.holds = false;
                        r.witness = std::vector<int>{i + 1, k + 1, j + 1, l + 1};
                    }
                }
    return r;
}

}  // namespace myopic
