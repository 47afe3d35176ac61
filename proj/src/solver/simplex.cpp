// Dense two-phase primal simplex on a bounded-variable LP.
#include "empathic/solver/solve.hpp"

#include "empathic/error.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace empathic::solver {

namespace {

constexpr double kPivotTol = 1e-9;
constexpr double kCostTol = 1e-10;

struct Column {
    int original;
    double sign;  // x_orig += sign * y
};

struct StandardForm {
    int rows = 0;
    int structural = 0;                 // y-columns from variables
    int cols = 0;                       // structural + slacks
    std::vector<double> a;              // rows x cols, row-major
    std::vector<double> b;
    std::vector<double> c;              // minimization costs
    double c_const = 0.0;
    std::vector<Column> columns;        // structural columns only
    std::vector<double> x_const;        // per original variable
    std::vector<int> row_origin;        // original constraint index, or -1 for bound rows
    std::vector<double> row_sign;       // +1 / -1 after rhs normalization
    std::vector<int> slack_col;         // -1 when equality
    double at(int i, int j) const { return a[static_cast<std::size_t>(i) * cols + j]; }
};

StandardForm build(const MathProgram& p) {
    StandardForm sf;
    const auto& vars = p.variables();
    const int nv = p.num_variables();
    sf.x_const.assign(nv, 0.0);
    std::vector<std::vector<std::pair<int, double>>> var_cols(nv);
    struct UpperRow { int col; double bound; };
    std::vector<UpperRow> upper_rows;

    for (int j = 0; j < nv; ++j) {
        const double l = vars[j].lower, u = vars[j].upper;
        if (std::isfinite(l) && std::isfinite(u) && u - l <= 1e-12) {
            sf.x_const[j] = l;
        } else if (std::isfinite(l)) {
            sf.x_const[j] = l;
            const int col = static_cast<int>(sf.columns.size());
            sf.columns.push_back({j, 1.0});
            var_cols[j].push_back({col, 1.0});
            if (std::isfinite(u)) upper_rows.push_back({col, u - l});
        } else if (std::isfinite(u)) {
            sf.x_const[j] = u;
            const int col = static_cast<int>(sf.columns.size());
            sf.columns.push_back({j, -1.0});
            var_cols[j].push_back({col, -1.0});
        } else {
            const int cp = static_cast<int>(sf.columns.size());
            sf.columns.push_back({j, 1.0});
            sf.columns.push_back({j, -1.0});
            var_cols[j].push_back({cp, 1.0});
            var_cols[j].push_back({cp + 1, -1.0});
        }
    }
    sf.structural = static_cast<int>(sf.columns.size());

    struct Row {
        std::vector<std::pair<int, double>> coefs;
        Sense sense;
        double rhs;
        int origin;
    };
    std::vector<Row> rows;
    for (std::size_t k = 0; k < p.constraints().size(); ++k) {
        const auto& con = p.constraints()[k];
        Row r{{}, con.sense, con.rhs, static_cast<int>(k)};
        std::vector<double> dense(sf.structural, 0.0);
        for (const auto& t : con.terms) {
            r.rhs -= t.coef * sf.x_const[t.var];
            for (auto [col, s] : var_cols[t.var]) dense[col] += t.coef * s;
        }
        for (int col = 0; col < sf.structural; ++col)
            if (dense[col] != 0.0) r.coefs.push_back({col, dense[col]});
        rows.push_back(std::move(r));
    }
    for (const auto& ur : upper_rows) rows.push_back(Row{{{ur.col, 1.0}}, Sense::LessEqual, ur.bound, -1});

    sf.rows = static_cast<int>(rows.size());
    int slacks = 0;
    for (const auto& r : rows)
        if (r.sense != Sense::Equal) ++slacks;
    sf.cols = sf.structural + slacks;
    sf.a.assign(static_cast<std::size_t>(sf.rows) * sf.cols, 0.0);
    sf.b.assign(sf.rows, 0.0);
    sf.row_origin.resize(sf.rows);
    sf.row_sign.resize(sf.rows);
    sf.slack_col.assign(sf.rows, -1);
    int next_slack = sf.structural;
    for (int i = 0; i < sf.rows; ++i) {
        const auto& r = rows[i];
        double* row = &sf.a[static_cast<std::size_t>(i) * sf.cols];
        for (auto [col, v] : r.coefs) row[col] = v;
        if (r.sense == Sense::LessEqual) row[next_slack] = 1.0;
        if (r.sense == Sense::GreaterEqual) row[next_slack] = -1.0;
        if (r.sense != Sense::Equal) sf.slack_col[i] = next_slack++;
        double sign = 1.0;
        if (r.rhs < 0.0) {
            sign = -1.0;
            for (int j = 0; j < sf.cols; ++j) row[j] = -row[j];
        }
        sf.b[i] = sign * r.rhs;
        sf.row_sign[i] = sign;
        sf.row_origin[i] = r.origin;
    }

    sf.c.assign(sf.cols, 0.0);
    const double dir = p.sense() == ObjectiveSense::Maximize ? -1.0 : 1.0;
    sf.c_const = dir * p.objective_constant();
    for (const auto& t : p.objective()) {
        sf.c_const += dir * t.coef * sf.x_const[t.var];
        for (auto [col, s] : var_cols[t.var]) sf.c[col] += dir * t.coef * s;
    }
    return sf;
}

class Tableau {
public:
    Tableau(const StandardForm& sf, int max_iter) : sf_(sf), max_iter_(max_iter) {
        m_ = sf.rows;
        // Artificials for rows lacking a +1 slack.
        basis_.assign(m_, -1);
        int art = 0;
        for (int i = 0; i < m_; ++i) {
            const int s = sf.slack_col[i];
            if (s >= 0 && sf.at(i, s) > 0.0) basis_[i] = s;
            else ++art;
        }
        n_art_ = art;
        width_ = sf.cols + n_art_ + 1;
        t_.assign(static_cast<std::size_t>(m_) * width_, 0.0);
        int next_art = sf.cols;
        for (int i = 0; i < m_; ++i) {
            for (int j = 0; j < sf.cols; ++j) cell(i, j) = sf.at(i, j);
            cell(i, rhs()) = sf.b[i];
            if (basis_[i] < 0) {
                cell(i, next_art) = 1.0;
                basis_[i] = next_art++;
            }
        }
        active_row_.assign(m_, 1);
        allowed_.assign(width_ - 1, 1);
    }

    int iterations() const { return iterations_; }

    // Returns Optimal, Unbounded or IterationLimit.
    SolveStatus optimize(const std::vector<double>& cost) {
        cost_ = cost;
        std::vector<double> d(width_ - 1);
        int degenerate = 0;
        bool bland = false;
        for (;;) {
            if (iterations_ >= max_iter_) return SolveStatus::IterationLimit;
            reduced_costs(d);
            int enter = -1;
            double best = -kCostTol;
            for (int j = 0; j < width_ - 1; ++j) {
                if (!allowed_[j] || d[j] >= -kCostTol) continue;
                if (bland) {
                    enter = j;
                    break;
                }
                if (d[j] < best) {
                    best = d[j];
                    enter = j;
                }
            }
            if (enter < 0) return SolveStatus::Optimal;
            int leave = -1;
            double ratio = std::numeric_limits<double>::infinity();
            for (int i = 0; i < m_; ++i) {
                if (!active_row_[i]) continue;
                const double a = cell(i, enter);
                if (a <= kPivotTol) continue;
                const double r = std::max(cell(i, rhs()), 0.0) / a;
                if (leave < 0 || r < ratio - 1e-12) {
                    ratio = r;
                    leave = i;
                } else if (r <= ratio + 1e-12) {
                    const bool take = bland ? basis_[i] < basis_[leave] : a > cell(leave, enter);
                    if (take) {
                        ratio = std::min(ratio, r);
                        leave = i;
                    }
                }
            }
            if (leave < 0) return SolveStatus::Unbounded;
            if (ratio <= 1e-12) {
                if (++degenerate > 50) bland = true;
            } else {
                degenerate = 0;
                bland = false;
            }
            pivot(leave, enter);
            ++iterations_;
        }
    }

    double basic_artificial_sum() const {
        double s = 0.0;
        for (int i = 0; i < m_; ++i)
            if (active_row_[i] && is_artificial(basis_[i])) s += cell(i, rhs());
        return s;
    }

    // Pivot zero-level artificials out of the basis; drop redundant rows.
    void expel_artificials() {
        for (int i = 0; i < m_; ++i) {
            if (!active_row_[i] || !is_artificial(basis_[i])) continue;
            int best = -1;
            double mag = 1e-7;
            for (int j = 0; j < sf_.cols; ++j) {
                if (std::abs(cell(i, j)) > mag) {
                    mag = std::abs(cell(i, j));
                    best = j;
                }
            }
            if (best >= 0) pivot(i, best);
            else active_row_[i] = 0;
        }
        for (int j = sf_.cols; j < width_ - 1; ++j) allowed_[j] = 0;
    }

    std::vector<double> phase1_cost() const {
        std::vector<double> c(width_ - 1, 0.0);
        for (int j = sf_.cols; j < width_ - 1; ++j) c[j] = 1.0;
        return c;
    }

    std::vector<double> phase2_cost() const {
        std::vector<double> c(width_ - 1, 0.0);
        std::copy(sf_.c.begin(), sf_.c.end(), c.begin());
        return c;
    }

    const std::vector<int>& basis() const { return basis_; }
    const std::vector<char>& active_rows() const { return active_row_; }
    double value(int i) const { return cell(i, rhs()); }

private:
    double& cell(int i, int j) { return t_[static_cast<std::size_t>(i) * width_ + j]; }
    double cell(int i, int j) const { return t_[static_cast<std::size_t>(i) * width_ + j]; }
    int rhs() const { return width_ - 1; }
    bool is_artificial(int j) const { return j >= sf_.cols; }

    void reduced_costs(std::vector<double>& d) const {
        std::copy(cost_.begin(), cost_.end(), d.begin());
        for (int i = 0; i < m_; ++i) {
            if (!active_row_[i]) continue;
            const double cb = cost_[basis_[i]];
            if (cb == 0.0) continue;
            const double* row = &t_[static_cast<std::size_t>(i) * width_];
            for (int j = 0; j < width_ - 1; ++j) d[j] -= cb * row[j];
        }
    }

    void pivot(int r, int e) {
        double* prow = &t_[static_cast<std::size_t>(r) * width_];
        const double inv = 1.0 / prow[e];
        for (int j = 0; j < width_; ++j) prow[j] *= inv;
        prow[e] = 1.0;
        for (int i = 0; i < m_; ++i) {
            if (i == r) continue;
            double* row = &t_[static_cast<std::size_t>(i) * width_];
            const double f = row[e];
            if (f == 0.0) continue;
            for (int j = 0; j < width_; ++j) row[j] -= f * prow[j];
            row[e] = 0.0;
        }
        basis_[r] = e;
    }

    const StandardForm& sf_;
    int max_iter_;
    int m_ = 0;
    int n_art_ = 0;
    int width_ = 0;
    int iterations_ = 0;
    std::vector<double> t_;
    std::vector<int> basis_;
    std::vector<char> active_row_;
    std::vector<char> allowed_;
    std::vector<double> cost_;
};

}  // namespace

std::string to_string(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return "Optimal";
        case SolveStatus::Infeasible: return "Infeasible";
        case SolveStatus::Unbounded: return "Unbounded";
        case SolveStatus::LocalOptimum: return "LocalOptimum";
        case SolveStatus::IterationLimit: return "IterationLimit";
    }
    return "Unknown";
}

SolveResult solve_lp(const MathProgram& p, const LpOptions& opt) {
    p.validate();
    if (p.entropy()) throw PreconditionError("solve_lp needs a linear objective");
    SolveResult res;
    for (const auto& v : p.variables()) {
        if (v.lower > v.upper + 1e-12) {
            res.status = SolveStatus::Infeasible;
            res.meta.message = "empty bounds on " + v.name;
            return res;
        }
    }
    const StandardForm sf = build(p);
    const int max_iter = opt.max_iterations > 0 ? opt.max_iterations : 20000 + 50 * (sf.rows + sf.cols);
    Tableau tab(sf, max_iter);

    double bscale = 1.0;
    for (double v : sf.b) bscale = std::max(bscale, std::abs(v));
    SolveStatus st = tab.optimize(tab.phase1_cost());
    if (st == SolveStatus::IterationLimit) {
        res.status = st;
        res.meta.iterations = tab.iterations();
        res.meta.message = "iteration limit in phase 1";
        return res;
    }
    if (tab.basic_artificial_sum() > Tolerances::feasibility * bscale) {
        res.status = SolveStatus::Infeasible;
        res.meta.iterations = tab.iterations();
        return res;
    }
    tab.expel_artificials();
    st = tab.optimize(tab.phase2_cost());
    res.meta.iterations = tab.iterations();
    if (st != SolveStatus::Optimal) {
        res.status = st;
        if (st == SolveStatus::IterationLimit) res.meta.message = "iteration limit in phase 2";
        return res;
    }

    // Recompute the basic solution from the original data to shed pivot drift.
    const auto& basis = tab.basis();
    const auto& active = tab.active_rows();
    std::vector<int> rows, cols;
    for (int i = 0; i < sf.rows; ++i) {
        if (!active[i]) continue;
        rows.push_back(i);
        cols.push_back(basis[i]);
    }
    std::vector<double> y(sf.cols, 0.0);
    const int k = static_cast<int>(rows.size());
    Eigen::MatrixXd bmat(k, k);
    Eigen::VectorXd bvec(k);
    for (int r = 0; r < k; ++r) {
        bvec(r) = sf.b[rows[r]];
        for (int c = 0; c < k; ++c) bmat(r, c) = sf.at(rows[r], cols[c]);
    }
    Eigen::PartialPivLU<Eigen::MatrixXd> lu;
    Eigen::VectorXd yb(0);
    bool clean = true;  // an empty basis has nothing to refine
    if (k > 0) {
        lu.compute(bmat);
        yb = lu.solve(bvec);
        clean = yb.allFinite() && (bmat * yb - bvec).cwiseAbs().maxCoeff() <= 1e-9 * bscale;
    }
    for (int r = 0; r < k; ++r) {
        const double v = clean ? yb(r) : tab.value(rows[r]);
        y[cols[r]] = std::max(v, 0.0);
    }

    res.values = sf.x_const;
    for (int col = 0; col < sf.structural; ++col) res.values[sf.columns[col].original] += sf.columns[col].sign * y[col];
    for (std::size_t j = 0; j < res.values.size(); ++j) {
        const auto& v = p.variables()[j];
        res.values[j] = std::clamp(res.values[j], v.lower, v.upper);
    }
    res.objective = p.evaluate_linear(res.values);
    res.status = SolveStatus::Optimal;

    if (opt.compute_duals && clean) {
        Eigen::VectorXd cb(k);
        for (int r = 0; r < k; ++r) cb(r) = sf.c[cols[r]];
        Eigen::VectorXd pi = k > 0 ? Eigen::VectorXd(lu.transpose().solve(cb)) : Eigen::VectorXd(0);
        double dual_obj = sf.c_const;
        for (int r = 0; r < k; ++r) dual_obj += pi(r) * bvec(r);
        const double dir = p.sense() == ObjectiveSense::Maximize ? -1.0 : 1.0;
        res.meta.bound = dir * dual_obj;
        // Dual feasibility: reduced costs c - A^T pi must be nonnegative.
        double worst = 0.0;
        for (int j = 0; j < sf.cols; ++j) {
            double red = sf.c[j];
            for (int r = 0; r < k; ++r) red -= sf.at(rows[r], j) * pi(r);
            worst = std::max(worst, -red);
        }
        res.meta.stationarity = worst;
        res.duals.assign(p.constraints().size(), 0.0);
        for (int r = 0; r < k; ++r) {
            const int origin = sf.row_origin[rows[r]];
            if (origin >= 0) res.duals[origin] = dir * sf.row_sign[rows[r]] * pi(r);
        }
    }
    const double viol = p.max_violation(res.values);
    if (viol > Tolerances::feasibility) {
        res.meta.message = "basic solution violates constraints by " + std::to_string(viol);
    }
    return res;
}

}  // namespace empathic::solver
