#include "empathic/solver/program.hpp"

#include "empathic/error.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace empathic::solver {

namespace {

void check_terms(const std::vector<Term>& terms, int n, const std::string& where) {
    for (const auto& t : terms) {
        if (t.var < 0 || t.var >= n)
            throw ValidationError(where + " references undeclared variable " + std::to_string(t.var), where);
        if (!std::isfinite(t.coef)) throw ValidationError(where + " has a non-finite coefficient", where);
    }
}

double dot(const std::vector<Term>& terms, const std::vector<double>& x) {
    double s = 0.0;
    for (const auto& t : terms) s += t.coef * x[t.var];
    return s;
}

double entropy_term(double y, double scale) {
    const double p = y / scale;
    if (p <= 0.0) return 0.0;
    return -p * std::log(std::max(p, 1e-12));
}

void write_terms(std::ostream& os, const MathProgram& p, const std::vector<Term>& terms) {
    if (terms.empty()) {
        os << " 0";
        return;
    }
    for (const auto& t : terms) {
        os << (t.coef < 0 ? " - " : " + ") << std::abs(t.coef) << ' ' << p.variables()[t.var].name;
    }
}

}  // namespace

int MathProgram::add_variable(std::string name, double lower, double upper) {
    vars_.push_back(Variable{std::move(name), lower, upper, false});
    return static_cast<int>(vars_.size()) - 1;
}

int MathProgram::add_binary(std::string name) {
    vars_.push_back(Variable{std::move(name), 0.0, 1.0, true});
    return static_cast<int>(vars_.size()) - 1;
}

void MathProgram::add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name) {
    cons_.push_back(Constraint{std::move(terms), sense, rhs, std::move(name)});
}

void MathProgram::set_linear_objective(std::vector<Term> terms, ObjectiveSense sense, double constant) {
    objective_ = std::move(terms);
    objective_constant_ = constant;
    sense_ = sense;
    entropy_.reset();
}

void MathProgram::set_entropy_objective(EntropyObjective obj, ObjectiveSense sense) {
    entropy_ = std::move(obj);
    objective_.clear();
    objective_constant_ = 0.0;
    sense_ = sense;
}

bool MathProgram::has_binaries() const {
    return std::any_of(vars_.begin(), vars_.end(), [](const Variable& v) { return v.binary; });
}

int MathProgram::find_variable(const std::string& name) const {
    for (std::size_t i = 0; i < vars_.size(); ++i)
        if (vars_[i].name == name) return static_cast<int>(i);
    return -1;
}

void MathProgram::validate() const {
    const int n = num_variables();
    for (const auto& v : vars_) {
        if (std::isnan(v.lower) || std::isnan(v.upper)) throw ValidationError("NaN bound on " + v.name, v.name);
    }
    for (const auto& c : cons_) {
        check_terms(c.terms, n, c.name.empty() ? "constraint" : c.name);
        if (!std::isfinite(c.rhs)) throw ValidationError("non-finite rhs in " + c.name, c.name);
    }
    check_terms(objective_, n, "objective");
    if (entropy_) {
        if (!(entropy_->scale > 0.0)) throw ValidationError("entropy scale must be positive", "objective");
        for (const auto& a : entropy_->arguments) check_terms(a.terms, n, "entropy argument");
    }
}

double evaluate(const AffineForm& f, const std::vector<double>& x) { return dot(f.terms, x) + f.constant; }

double MathProgram::evaluate_linear(const std::vector<double>& x) const {
    return dot(objective_, x) + objective_constant_;
}

double MathProgram::evaluate_entropy(const std::vector<double>& x) const {
    if (!entropy_) return 0.0;
    double h = 0.0;
    for (const auto& a : entropy_->arguments) h += entropy_term(evaluate(a, x), entropy_->scale);
    return h;
}

double MathProgram::max_violation(const std::vector<double>& x) const {
    double v = 0.0;
    for (std::size_t i = 0; i < vars_.size(); ++i) {
        v = std::max(v, vars_[i].lower - x[i]);
        v = std::max(v, x[i] - vars_[i].upper);
    }
    for (const auto& c : cons_) {
        const double lhs = dot(c.terms, x);
        switch (c.sense) {
            case Sense::LessEqual: v = std::max(v, lhs - c.rhs); break;
            case Sense::GreaterEqual: v = std::max(v, c.rhs - lhs); break;
            case Sense::Equal: v = std::max(v, std::abs(lhs - c.rhs)); break;
        }
    }
    return v;
}

std::string to_lp_format(const MathProgram& p) {
    std::ostringstream os;
    os.precision(12);
    if (p.entropy()) {
        const auto& e = *p.entropy();
        os << "\\ entropy objective: sum_j -(y_j/" << e.scale << ") ln(y_j/" << e.scale << ")\n";
        for (std::size_t j = 0; j < e.arguments.size(); ++j) {
            os << "\\ y" << j + 1 << " =";
            write_terms(os, p, e.arguments[j].terms);
            if (e.arguments[j].constant != 0.0) os << " + " << e.arguments[j].constant;
            os << '\n';
        }
    }
    os << (p.sense() == ObjectiveSense::Maximize ? "Maximize\n" : "Minimize\n") << " obj:";
    if (p.entropy()) os << " 0";
    else write_terms(os, p, p.objective());
    os << "\nSubject To\n";
    int k = 0;
    for (const auto& c : p.constraints()) {
        os << ' ' << (c.name.empty() ? "c" + std::to_string(++k) : c.name) << ':';
        write_terms(os, p, c.terms);
        os << (c.sense == Sense::LessEqual ? " <= " : c.sense == Sense::GreaterEqual ? " >= " : " = ") << c.rhs
           << '\n';
    }
    os << "Bounds\n";
    for (const auto& v : p.variables()) {
        if (v.binary) continue;
        if (std::isinf(v.lower) && std::isinf(v.upper)) {
            os << ' ' << v.name << " free\n";
        } else {
            os << ' ';
            if (std::isinf(v.lower)) os << "-inf";
            else os << v.lower;
            os << " <= " << v.name << " <= ";
            if (std::isinf(v.upper)) os << "+inf";
            else os << v.upper;
            os << '\n';
        }
    }
    bool any = false;
    for (const auto& v : p.variables()) {
        if (!v.binary) continue;
        if (!any) os << "Binary\n";
        any = true;
        os << ' ' << v.name << '\n';
    }
    os << "End\n";
    return os.str();
}

}  // namespace empathic::solver
