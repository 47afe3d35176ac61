// Entropy programs: primal-dual interior point for the concave maximization,
// multistart sequential linearization for the (nonconvex) minimization.
#include "empathic/solver/solve.hpp"

#include "empathic/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <future>
#include <random>
#include <thread>

namespace empathic::solver {

namespace {

constexpr double kLogFloor = 1e-12;

struct Dense {
    Eigen::MatrixXd a, g, c;  // equalities, inequalities (Gx <= h), entropy arguments
    Eigen::VectorXd b, h, d;
    double scale = 1.0;
};

Dense densify(const MathProgram& p) {
    const int n = p.num_variables();
    std::vector<std::pair<std::vector<Term>, double>> eq, in;
    for (const auto& c : p.constraints()) {
        if (c.sense == Sense::Equal) {
            eq.push_back({c.terms, c.rhs});
        } else if (c.sense == Sense::LessEqual) {
            in.push_back({c.terms, c.rhs});
        } else {
            std::vector<Term> neg = c.terms;
            for (auto& t : neg) t.coef = -t.coef;
            in.push_back({neg, -c.rhs});
        }
    }
    for (int j = 0; j < n; ++j) {
        const auto& v = p.variables()[j];
        if (std::isfinite(v.lower) && std::isfinite(v.upper) && v.upper - v.lower <= 1e-12) {
            eq.push_back({{{j, 1.0}}, v.lower});
            continue;
        }
        if (std::isfinite(v.lower)) in.push_back({{{j, -1.0}}, -v.lower});
        if (std::isfinite(v.upper)) in.push_back({{{j, 1.0}}, v.upper});
    }
    Dense d;
    d.a = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(eq.size()), n);
    d.b.resize(static_cast<Eigen::Index>(eq.size()));
    for (std::size_t i = 0; i < eq.size(); ++i) {
        for (const auto& t : eq[i].first) d.a(i, t.var) += t.coef;
        d.b(i) = eq[i].second;
    }
    d.g = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(in.size()), n);
    d.h.resize(static_cast<Eigen::Index>(in.size()));
    for (std::size_t i = 0; i < in.size(); ++i) {
        for (const auto& t : in[i].first) d.g(i, t.var) += t.coef;
        d.h(i) = in[i].second;
    }
    const auto& e = *p.entropy();
    d.scale = e.scale;
    d.c = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(e.arguments.size()), n);
    d.d.resize(static_cast<Eigen::Index>(e.arguments.size()));
    for (std::size_t j = 0; j < e.arguments.size(); ++j) {
        for (const auto& t : e.arguments[j].terms) d.c(j, t.var) += t.coef;
        d.d(j) = e.arguments[j].constant;
    }
    return d;
}

// Largest alpha in (0, 1] keeping v + alpha * dv >= 0.
double max_step(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
    double alpha = 1.0;
    for (Eigen::Index i = 0; i < v.size(); ++i)
        if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
    return alpha;
}

MathProgram with_linear_objective(const MathProgram& p, const Eigen::VectorXd& coef, ObjectiveSense sense) {
    MathProgram q = p;
    std::vector<Term> terms;
    for (Eigen::Index j = 0; j < coef.size(); ++j)
        if (coef(j) != 0.0) terms.push_back({static_cast<int>(j), coef(j)});
    q.set_linear_objective(std::move(terms), sense);
    return q;
}

Eigen::VectorXd arguments_gradient_row_sum(const MathProgram& p, const Eigen::VectorXd& weights) {
    Eigen::VectorXd g = Eigen::VectorXd::Zero(p.num_variables());
    const auto& e = *p.entropy();
    for (std::size_t j = 0; j < e.arguments.size(); ++j)
        for (const auto& t : e.arguments[j].terms) g(t.var) += weights(static_cast<Eigen::Index>(j)) * t.coef;
    return g;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

std::vector<double> entropy_gradient(const EntropyObjective& e, const std::vector<double>& x, int num_vars) {
    std::vector<double> g(num_vars, 0.0);
    for (const auto& a : e.arguments) {
        const double y = evaluate(a, x);
        const double dphi = -(std::log(std::max(y / e.scale, kLogFloor)) + 1.0) / e.scale;
        for (const auto& t : a.terms) g[t.var] += dphi * t.coef;
    }
    return g;
}

SolveResult maximize_entropy(const MathProgram& p, const EntropyOptions& opt) {
    p.validate();
    if (!p.entropy() || p.sense() != ObjectiveSense::Maximize)
        throw PreconditionError("maximize_entropy needs an entropy objective with sense max");
    if (p.has_binaries()) throw PreconditionError("maximize_entropy does not accept binaries");

    SolveResult res;
    MathProgram feas = p;
    feas.set_linear_objective({}, ObjectiveSense::Minimize);
    const SolveResult start = solve_lp(feas);
    if (start.status != SolveStatus::Optimal) {
        res.status = start.status == SolveStatus::Infeasible ? SolveStatus::Infeasible : start.status;
        res.meta.message = "no feasible starting point";
        return res;
    }

    const Dense dm = densify(p);
    const Eigen::Index n = dm.a.cols(), me = dm.a.rows(), mi = dm.g.rows();
    Eigen::VectorXd x = Eigen::Map<const Eigen::VectorXd>(start.values.data(), n);
    Eigen::VectorXd lam = Eigen::VectorXd::Zero(me);
    Eigen::VectorXd s = (dm.h - dm.g * x).cwiseMax(1e-2);
    Eigen::VectorXd z = Eigen::VectorXd::Ones(mi);
    const double sc = dm.scale;
    const double reg = 1e-11;

    auto grad_hess = [&](const Eigen::VectorXd& xv, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) {
        const Eigen::VectorXd y = dm.c * xv + dm.d;
        Eigen::VectorXd gy(y.size()), hy(y.size());
        for (Eigen::Index j = 0; j < y.size(); ++j) {
            const double yj = std::max(y(j), kLogFloor * sc);
            gy(j) = (std::log(yj / sc) + 1.0) / sc;  // gradient of -H
            hy(j) = 1.0 / (sc * yj);
        }
        grad = dm.c.transpose() * gy;
        hess = dm.c.transpose() * hy.asDiagonal() * dm.c;
    };

    Eigen::VectorXd grad;
    Eigen::MatrixXd hess;
    int it = 0;
    double stat = kInf, pinf = kInf, mu = kInf;
    bool converged = false;
    for (; it < opt.max_iterations; ++it) {
        grad_hess(x, grad, hess);
        const Eigen::VectorXd rd = grad + dm.a.transpose() * lam + dm.g.transpose() * z;
        const Eigen::VectorXd rp = dm.a * x - dm.b;
        const Eigen::VectorXd ri = dm.g * x + s - dm.h;
        mu = mi > 0 ? s.dot(z) / static_cast<double>(mi) : 0.0;
        stat = rd.lpNorm<Eigen::Infinity>();
        pinf = std::max(me ? rp.lpNorm<Eigen::Infinity>() : 0.0, mi ? ri.lpNorm<Eigen::Infinity>() : 0.0);
        if (stat <= opt.tolerance && pinf <= opt.tolerance && mu <= opt.tolerance) {
            converged = true;
            break;
        }

        Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n + me, n + me);
        const Eigen::VectorXd zs = z.cwiseQuotient(s);
        k.topLeftCorner(n, n) = hess + dm.g.transpose() * zs.asDiagonal() * dm.g;
        k.topLeftCorner(n, n).diagonal().array() += reg;
        k.topRightCorner(n, me) = dm.a.transpose();
        k.bottomLeftCorner(me, n) = dm.a;
        k.bottomRightCorner(me, me).diagonal().array() -= reg;
        Eigen::PartialPivLU<Eigen::MatrixXd> lu(k);

        auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& dl,
                             Eigen::VectorXd& ds, Eigen::VectorXd& dz) {
            const Eigen::VectorXd t = (-rc + z.cwiseProduct(ri)).cwiseQuotient(s);
            Eigen::VectorXd rhs(n + me);
            rhs.head(n) = -rd - dm.g.transpose() * t;
            rhs.tail(me) = -rp;
            const Eigen::VectorXd sol = lu.solve(rhs);
            dx = sol.head(n);
            dl = sol.tail(me);
            ds = -ri - dm.g * dx;
            dz = t + zs.cwiseProduct(dm.g * dx);
        };

        Eigen::VectorXd dx, dl, ds, dz;
        Eigen::VectorXd rc = s.cwiseProduct(z);
        direction(rc, dx, dl, ds, dz);
        if (mi > 0) {
            const double a_aff = std::min(max_step(s, ds), max_step(z, dz));
            const double mu_aff = (s + a_aff * ds).dot(z + a_aff * dz) / static_cast<double>(mi);
            const double sigma = std::pow(std::max(mu_aff, 0.0) / std::max(mu, 1e-300), 3.0);
            rc += ds.cwiseProduct(dz) - Eigen::VectorXd::Constant(mi, sigma * mu);
            direction(rc, dx, dl, ds, dz);
        }
        // Near the optimum the KKT matrix can turn singular; keep the last iterate.
        if (!dx.allFinite() || !dl.allFinite() || !ds.allFinite() || !dz.allFinite()) break;
        double alpha = mi > 0 ? std::min(1.0, 0.99 * std::min(max_step(s, ds), max_step(z, dz))) : 1.0;
        for (int tries = 0; tries < 60; ++tries) {
            const Eigen::VectorXd y = dm.c * (x + alpha * dx) + dm.d;
            if (y.size() == 0 || y.minCoeff() > 0.0) break;
            alpha *= 0.5;
        }
        const Eigen::VectorXd xn = x + alpha * dx, ln = lam + alpha * dl;
        const Eigen::VectorXd sn = (s + alpha * ds).cwiseMax(1e-300), zn = (z + alpha * dz).cwiseMax(1e-300);
        if (!xn.allFinite() || !ln.allFinite() || !sn.allFinite() || !zn.allFinite()) break;
        x = xn;
        lam = ln;
        s = sn;
        z = zn;
    }

    res.values = to_std(x);
    for (int j = 0; j < p.num_variables(); ++j)
        res.values[j] = std::clamp(res.values[j], p.variables()[j].lower, p.variables()[j].upper);
    res.objective = p.evaluate_entropy(res.values);
    res.meta.iterations = it;
    res.meta.stationarity = stat;
    const double loose = std::sqrt(opt.tolerance);
    if (!converged && stat <= loose && pinf <= opt.tolerance * 10.0 && mu <= opt.tolerance * 10.0) {
        converged = true;
        res.meta.message = "stalled within tolerance";
    }
    res.status = converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
    if (!converged) res.meta.message = "interior point iteration limit";
    return res;
}

SolveResult minimize_entropy(const MathProgram& p, int starts, std::uint64_t seed) {
    p.validate();
    if (!p.entropy() || p.sense() != ObjectiveSense::Minimize)
        throw PreconditionError("minimize_entropy needs an entropy objective with sense min");
    if (p.has_binaries()) throw PreconditionError("minimize_entropy does not accept binaries");
    if (starts < 1) throw ValidationError("starts must be positive", "starts");

    const auto& e = *p.entropy();
    const int k_args = static_cast<int>(e.arguments.size());

    // Start objectives: mass-to-node vertices first, then Dirichlet mixes.
    std::vector<std::pair<std::string, Eigen::VectorXd>> plans;
    for (int j = 0; j < k_args && static_cast<int>(plans.size()) < starts; ++j) {
        Eigen::VectorXd w = Eigen::VectorXd::Zero(k_args);
        w(j) = 1.0;
        plans.push_back({"vertex:" + std::to_string(j + 1), w});
    }
    std::mt19937_64 rng(seed);
    std::gamma_distribution<double> gamma(1.0, 1.0);
    for (int r = 0; static_cast<int>(plans.size()) < starts; ++r) {
        Eigen::VectorXd w(k_args);
        for (int j = 0; j < k_args; ++j) w(j) = gamma(rng);
        w /= w.sum();
        plans.push_back({"random:" + std::to_string(r + 1), w});
    }

    struct Outcome {
        StartRecord record;
        std::vector<double> x;
    };
    auto run = [&p, &e](const std::string& origin, const Eigen::VectorXd& weights) {
        Outcome out;
        out.record.origin = origin;
        const Eigen::VectorXd coef = arguments_gradient_row_sum(p, weights);
        SolveResult r = solve_lp(with_linear_objective(p, coef, ObjectiveSense::Maximize));
        if (r.status != SolveStatus::Optimal) return out;
        std::vector<double> x = std::move(r.values);
        double f = p.evaluate_entropy(x);
        out.record.initial = f;
        int it = 0;
        for (; it < 200; ++it) {
            const std::vector<double> g = entropy_gradient(e, x, p.num_variables());
            const Eigen::VectorXd gv = Eigen::Map<const Eigen::VectorXd>(g.data(), static_cast<Eigen::Index>(g.size()));
            SolveResult step = solve_lp(with_linear_objective(p, gv, ObjectiveSense::Minimize));
            if (step.status != SolveStatus::Optimal) break;
            const double fn = p.evaluate_entropy(step.values);
            if (fn >= f - 1e-12) break;
            x = std::move(step.values);
            f = fn;
        }
        out.record.final = f;
        out.record.iterations = it;
        out.record.ok = true;
        out.x = std::move(x);
        return out;
    };

    std::vector<Outcome> outcomes(plans.size());
    const std::size_t width = std::max(1u, std::thread::hardware_concurrency());
    for (std::size_t base = 0; base < plans.size(); base += width) {
        std::vector<std::future<Outcome>> batch;
        const std::size_t end = std::min(plans.size(), base + width);
        for (std::size_t i = base; i < end; ++i)
            batch.push_back(std::async(width > 1 ? std::launch::async : std::launch::deferred, run,
                                       plans[i].first, plans[i].second));
        for (std::size_t i = base; i < end; ++i) outcomes[i] = batch[i - base].get();
    }

    SolveResult res;
    res.meta.starts = static_cast<int>(plans.size());
    res.meta.seed = seed;
    int best = -1;
    for (std::size_t i = 0; i < outcomes.size(); ++i) {
        res.meta.trace.push_back(outcomes[i].record);
        res.meta.iterations += outcomes[i].record.iterations;
        if (!outcomes[i].record.ok) continue;
        if (best < 0 || outcomes[i].record.final < outcomes[best].record.final - 1e-12) best = static_cast<int>(i);
    }
    if (best < 0) {
        res.status = SolveStatus::Infeasible;
        res.meta.message = "no start produced a feasible point";
        return res;
    }
    res.values = outcomes[best].x;
    res.objective = outcomes[best].record.final;
    res.status = SolveStatus::LocalOptimum;
    return res;
}

}  // namespace empathic::solver
