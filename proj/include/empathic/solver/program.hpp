#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace empathic::solver {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Tolerances {
    static constexpr double feasibility = 1e-7;
    static constexpr double optimality = 1e-8;
    static constexpr double integrality = 1e-6;
};

enum class Sense { LessEqual, GreaterEqual, Equal };
enum class ObjectiveSense { Minimize, Maximize };

struct Term {
    int var;
    double coef;
};

struct AffineForm {
    std::vector<Term> terms;
    double constant = 0.0;
};

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = kInf;
    bool binary = false;
};

struct Constraint {
    std::vector<Term> terms;
    Sense sense = Sense::LessEqual;
    double rhs = 0.0;
    std::string name;
};

// sum_j phi(l_j(x)), phi(y) = -(y/scale) ln(y/scale).
struct EntropyObjective {
    std::vector<AffineForm> arguments;
    double scale = 1.0;
};

class MathProgram {
public:
    int add_variable(std::string name, double lower = 0.0, double upper = kInf);
    int add_binary(std::string name);
    void add_constraint(std::vector<Term> terms, Sense sense, double rhs, std::string name = {});

    void set_linear_objective(std::vector<Term> terms, ObjectiveSense sense, double constant = 0.0);
    void set_entropy_objective(EntropyObjective obj, ObjectiveSense sense);

    int num_variables() const { return static_cast<int>(vars_.size()); }
    const std::vector<Variable>& variables() const { return vars_; }
    std::vector<Variable>& variables() { return vars_; }
    const std::vector<Constraint>& constraints() const { return cons_; }
    const std::vector<Term>& objective() const { return objective_; }
    double objective_constant() const { return objective_constant_; }
    ObjectiveSense sense() const { return sense_; }
    const std::optional<EntropyObjective>& entropy() const { return entropy_; }
    bool has_binaries() const;

    int find_variable(const std::string& name) const;

    // Throws ValidationError on dangling variable references or empty bounds.
    void validate() const;

    double evaluate_linear(const std::vector<double>& x) const;
    double evaluate_entropy(const std::vector<double>& x) const;
    // Largest violation of bounds and rows (integrality excluded).
    double max_violation(const std::vector<double>& x) const;

private:
    std::vector<Variable> vars_;
    std::vector<Constraint> cons_;
    std::vector<Term> objective_;
    double objective_constant_ = 0.0;
    ObjectiveSense sense_ = ObjectiveSense::Minimize;
    std::optional<EntropyObjective> entropy_;
};

double evaluate(const AffineForm& f, const std::vector<double>& x);

// CPLEX-LP style text; entropy objectives are written as a comment block.
std::string to_lp_format(const MathProgram& p);

}  // namespace empathic::solver
