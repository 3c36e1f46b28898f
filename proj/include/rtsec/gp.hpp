#pragma once

#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace rtsec::gp {

/// Values of named positive variables.
using Point = std::map<std::string, double>;

/// c * prod x_l^{a_l} with c > 0. Zero exponents are not stored.
class Monomial {
public:
    Monomial() = default;
    explicit Monomial(double coeff, std::map<std::string, double> exponents = {});

    static Monomial constant(double c) { return Monomial(c); }
    static Monomial variable(const std::string& name, double exponent = 1.0);

    double coeff() const { return coeff_; }
    const std::map<std::string, double>& exponents() const { return exponents_; }
    double exponent(const std::string& name) const;

    /// Throws std::invalid_argument on unbound or non-positive variables.
    double eval(const Point& x) const;

    Monomial pow(double p) const;

    friend Monomial operator*(const Monomial& a, const Monomial& b);
    friend Monomial operator/(const Monomial& a, const Monomial& b);
    friend Monomial operator*(double s, const Monomial& m);

private:
    double coeff_ = 1.0;
    std::map<std::string, double> exponents_;
};

/// Sum of monomials. Like terms are not merged.
class Posynomial {
public:
    Posynomial() = default;
    Posynomial(Monomial m) : terms_{std::move(m)} {}  // NOLINT(implicit)
    explicit Posynomial(std::vector<Monomial> terms);

    const std::vector<Monomial>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    double eval(const Point& x) const;

    Posynomial& operator+=(const Posynomial& other);
    friend Posynomial operator+(Posynomial a, const Posynomial& b) { return a += b; }
    friend Posynomial operator*(const Posynomial& a, const Posynomial& b);
    friend Posynomial operator/(const Posynomial& a, const Monomial& m);

private:
    std::vector<Monomial> terms_;
};

inline Posynomial operator+(const Monomial& a, const Monomial& b) { return Posynomial(a) + b; }

/// Best local monomial under-estimator of a posynomial: prod (u_l / alpha_l)^alpha_l
/// with alpha_l = u_l(at) / g(at). Exact at `at`, never above g elsewhere.
Monomial condense(const Posynomial& g, const Point& at);

struct Variable {
    std::string name;
    double lower = 0.0;
    double upper = std::numeric_limits<double>::infinity();
    std::optional<double> guess;  // starting hint; ignored when outside the box
};

/// minimize objective(x) subject to constraint_k(x) <= 1 and lower <= x <= upper.
struct GpProblem {
    std::vector<Variable> variables;
    Posynomial objective;
    std::vector<Posynomial> constraints;
    std::vector<std::string> labels;  // optional, parallel to constraints

    /// Throws std::invalid_argument on undeclared variables or bad bounds.
    void validate() const;

    /// One monomial per line, `coeff * var^exp * ...`, for diffing.
    std::string dump() const;
};

/// f(z) = log sum_k exp(A_k . z + b_k).
struct LogSumExp {
    Eigen::MatrixXd A;
    Eigen::VectorXd b;

    double value(const Eigen::VectorXd& z) const;
    /// Value, gradient and Hessian in one pass.
    double derivatives(const Eigen::VectorXd& z, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const;
    Eigen::VectorXd gradient(const Eigen::VectorXd& z) const;
};

/// GP after z = log x: minimize objective(z) s.t. constraints[k](z) <= 0 and
/// log_lower <= z <= log_upper.
struct ConvexProgram {
    std::vector<std::string> variables;
    Eigen::VectorXd log_lower;
    Eigen::VectorXd log_upper;
    LogSumExp objective;
    std::vector<LogSumExp> constraints;
};

ConvexProgram to_convex(const GpProblem& problem);

enum class Status { optimal, infeasible, max_iter };

const char* to_string(Status s);

struct SolverSettings {
    int max_newton_steps = 200;     // per phase
    double tolerance = 1e-8;        // KKT residual and duality gap
    double feasibility_tol = 1e-8;  // on constraints in log space
    double barrier_growth = 10.0;   // mu in the surrogate-gap update
};

struct GpSolution {
    Point values;
    double objective_value = 0.0;
    Status status = Status::infeasible;
    double kkt_residual = 0.0;
    double max_violation = 0.0;  // max over constraints of log f_k(x), <= feasibility_tol when feasible
    int newton_steps = 0;
};

GpSolution solve(const GpProblem& problem, const SolverSettings& settings = {});

}  // namespace rtsec::gp
