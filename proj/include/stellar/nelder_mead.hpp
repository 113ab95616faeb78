#ifndef STELLAR_NELDER_MEAD_HPP
#define STELLAR_NELDER_MEAD_HPP

#include <algorithm>
#include <functional>
#include <vector>

#include <Eigen/Dense>

namespace stellar {

struct NelderMeadOptions {
    double tol = 1e-8;       // convergence on the simplex value spread
    int max_evals = 2000;
    double init_step = 0.3;  // initial simplex edge length
};

struct NelderMeadResult {
    Eigen::VectorXd x;
    double value = 0.0;
    int evals = 0;
    bool converged = false;
};

/// Classic downhill simplex minimizer (reflection 1, expansion 2,
/// contraction 1/2, shrink 1/2). Deterministic given x0 and f.
inline NelderMeadResult nelder_mead(const std::function<double(const Eigen::VectorXd&)>& f,
                                    const Eigen::VectorXd& x0,
                                    const NelderMeadOptions& opts = {}) {
    const int d = static_cast<int>(x0.size());
    int evals = 0;
    auto eval = [&](const Eigen::VectorXd& x) {
        ++evals;
        return f(x);
    };

    std::vector<Eigen::VectorXd> pts(static_cast<std::size_t>(d) + 1, x0);
    std::vector<double> vals(static_cast<std::size_t>(d) + 1);
    for (int i = 0; i < d; ++i) pts[static_cast<std::size_t>(i) + 1](i) += opts.init_step;
    for (std::size_t i = 0; i < pts.size(); ++i) vals[i] = eval(pts[i]);

    std::vector<std::size_t> order(pts.size());
    NelderMeadResult res;
    while (evals < opts.max_evals) {
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(),
                  [&](std::size_t a, std::size_t b) { return vals[a] < vals[b]; });
        const std::size_t best = order.front(), worst = order.back(),
                          second_worst = order[order.size() - 2];
        if (vals[worst] - vals[best] < opts.tol) {
            res.converged = true;
            break;
        }
        Eigen::VectorXd centroid = Eigen::VectorXd::Zero(d);
        for (std::size_t i : order)
            if (i != worst) centroid += pts[i];
        centroid /= double(d);

        Eigen::VectorXd xr = centroid + (centroid - pts[worst]);
        const double fr = eval(xr);
        if (fr < vals[best]) {
            Eigen::VectorXd xe = centroid + 2.0 * (centroid - pts[worst]);
            const double fe = eval(xe);
            if (fe < fr) {
                pts[worst] = xe;
                vals[worst] = fe;
            } else {
                pts[worst] = xr;
                vals[worst] = fr;
            }
        } else if (fr < vals[second_worst]) {
            pts[worst] = xr;
            vals[worst] = fr;
        } else {
            const bool outside = fr < vals[worst];
            Eigen::VectorXd xc =
                centroid + 0.5 * ((outside ? xr : pts[worst]) - centroid);
            const double fc = eval(xc);
            if (fc < std::min(fr, vals[worst])) {
                pts[worst] = xc;
                vals[worst] = fc;
            } else {
                for (std::size_t i : order)
                    if (i != best) {
                        pts[i] = pts[best] + 0.5 * (pts[i] - pts[best]);
                        vals[i] = eval(pts[i]);
                        if (evals >= opts.max_evals) break;
                    }
            }
        }
    }
    std::size_t best = 0;
    for (std::size_t i = 1; i < vals.size(); ++i)
        if (vals[i] < vals[best]) best = i;
    res.x = pts[best];
    res.value = vals[best];
    res.evals = evals;
    return res;
}

} // namespace stellar

#endif
