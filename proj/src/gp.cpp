#include "rtsec/gp.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <iomanip>
#include <set>
#include <sstream>
#include <stdexcept>

namespace rtsec::gp {

// ---------------------------------------------------------------- algebra

Monomial::Monomial(double coeff, std::map<std::string, double> exponents)
    : coeff_(coeff), exponents_(std::move(exponents)) {
    if (!(coeff_ > 0) || !std::isfinite(coeff_)) throw std::invalid_argument("monomial coefficient must be positive");
    std::erase_if(exponents_, [](const auto& kv) { return kv.second == 0.0; });
}

Monomial Monomial::variable(const std::string& name, double exponent) { return Monomial(1.0, {{name, exponent}}); }

double Monomial::exponent(const std::string& name) const {
    auto it = exponents_.find(name);
    return it == exponents_.end() ? 0.0 : it->second;
}

double Monomial::eval(const Point& x) const {
    double log_v = std::log(coeff_);
    for (const auto& [name, a] : exponents_) {
        auto it = x.find(name);
        if (it == x.end()) throw std::invalid_argument("unbound variable '" + name + "'");
        if (!(it->second > 0)) throw std::invalid_argument("non-positive value for '" + name + "'");
        log_v += a * std::log(it->second);
    }
    return std::exp(log_v);
}

Monomial Monomial::pow(double p) const {
    std::map<std::string, double> e;
    for (const auto& [name, a] : exponents_) e[name] = a * p;
    return Monomial(std::pow(coeff_, p), std::move(e));
}

Monomial operator*(const Monomial& a, const Monomial& b) {
    auto e = a.exponents_;
    for (const auto& [name, x] : b.exponents_) e[name] += x;
    return Monomial(a.coeff_ * b.coeff_, std::move(e));
}

Monomial operator/(const Monomial& a, const Monomial& b) { return a * b.pow(-1.0); }

Monomial operator*(double s, const Monomial& m) { return Monomial(s * m.coeff_, m.exponents_); }

Posynomial::Posynomial(std::vector<Monomial> terms) : terms_(std::move(terms)) {}

double Posynomial::eval(const Point& x) const {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t.eval(x);
    return sum;
}

Posynomial& Posynomial::operator+=(const Posynomial& other) {
    terms_.insert(terms_.end(), other.terms_.begin(), other.terms_.end());
    return *this;
}

Posynomial operator*(const Posynomial& a, const Posynomial& b) {
    std::vector<Monomial> out;
    out.reserve(a.size() * b.size());
    for (const auto& x : a.terms_)
        for (const auto& y : b.terms_) out.push_back(x * y);
    return Posynomial(std::move(out));
}

Posynomial operator/(const Posynomial& a, const Monomial& m) {
    std::vector<Monomial> out;
    out.reserve(a.size());
    for (const auto& x : a.terms_) out.push_back(x / m);
    return Posynomial(std::move(out));
}

Monomial condense(const Posynomial& g, const Point& at) {
    if (g.empty()) throw std::invalid_argument("cannot condense an empty posynomial");
    if (g.size() == 1) return g.terms().front();
    for (const auto& [name, v] : at)
        if (!(v > 0)) throw std::invalid_argument("non-positive anchor value for '" + name + "'");

    std::vector<double> u;
    u.reserve(g.size());
    double total = 0.0;
    for (const auto& t : g.terms()) {
        u.push_back(t.eval(at));
        total += u.back();
    }
    double log_coeff = 0.0;
    std::map<std::string, double> e;
    for (std::size_t l = 0; l < g.size(); ++l) {
        const double alpha = u[l] / total;
        if (alpha == 0.0) continue;
        const auto& term = g.terms()[l];
        log_coeff += alpha * (std::log(term.coeff()) - std::log(alpha));
        for (const auto& [name, a] : term.exponents()) e[name] += alpha * a;
    }
    return Monomial(std::exp(log_coeff), std::move(e));
}

// ---------------------------------------------------------------- problem

void GpProblem::validate() const {
    std::set<std::string> declared;
    for (const auto& v : variables) {
        if (!declared.insert(v.name).second) throw std::invalid_argument("duplicate variable '" + v.name + "'");
        if (!(v.lower > 0) || !std::isfinite(v.lower))
            throw std::invalid_argument("variable '" + v.name + "' needs a finite positive lower bound");
        if (!(v.lower <= v.upper)) throw std::invalid_argument("variable '" + v.name + "' has lower > upper");
    }
    auto check = [&](const Posynomial& p, const char* what) {
        if (p.empty()) throw std::invalid_argument(std::string(what) + " is an empty posynomial");
        for (const auto& t : p.terms())
            for (const auto& [name, a] : t.exponents())
                if (!declared.count(name))
                    throw std::invalid_argument(std::string(what) + " uses undeclared variable '" + name + "'");
    };
    check(objective, "objective");
    for (const auto& c : constraints) check(c, "constraint");
    if (!labels.empty() && labels.size() != constraints.size())
        throw std::invalid_argument("labels must be empty or parallel to constraints");
}

namespace {

void dump_monomial(std::ostringstream& os, const Monomial& m) {
    os << std::setprecision(17) << m.coeff();
    for (const auto& [name, a] : m.exponents()) os << " * " << name << "^" << a;
    os << "\n";
}

}  // namespace

std::string GpProblem::dump() const {
    std::ostringstream os;
    os << "variables:\n";
    for (const auto& v : variables) os << std::setprecision(17) << "  " << v.name << " in [" << v.lower << ", " << v.upper << "]\n";
    os << "minimize:\n";
    for (const auto& t : objective.terms()) dump_monomial(os, t);
    for (std::size_t k = 0; k < constraints.size(); ++k) {
        os << "constraint " << k;
        if (!labels.empty()) os << " (" << labels[k] << ")";
        os << " <= 1:\n";
        for (const auto& t : constraints[k].terms()) dump_monomial(os, t);
    }
    return os.str();
}

// ---------------------------------------------------------------- log-sum-exp

double LogSumExp::value(const Eigen::VectorXd& z) const {
    const Eigen::VectorXd y = A * z + b;
    const double m = y.maxCoeff();
    return m + std::log((y.array() - m).exp().sum());
}

double LogSumExp::derivatives(const Eigen::VectorXd& z, Eigen::VectorXd& grad, Eigen::MatrixXd& hess) const {
    const Eigen::VectorXd y = A * z + b;
    const double m = y.maxCoeff();
    Eigen::VectorXd w = (y.array() - m).exp();
    const double s = w.sum();
    w /= s;
    grad = A.transpose() * w;
    hess = A.transpose() * w.asDiagonal() * A - grad * grad.transpose();
    return m + std::log(s);
}

Eigen::VectorXd LogSumExp::gradient(const Eigen::VectorXd& z) const {
    const Eigen::VectorXd y = A * z + b;
    const double m = y.maxCoeff();
    Eigen::VectorXd w = (y.array() - m).exp();
    w /= w.sum();
    return A.transpose() * w;
}

namespace {

LogSumExp lower(const Posynomial& p, const std::vector<std::string>& vars) {
    LogSumExp f;
    f.A = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(p.size()), static_cast<Eigen::Index>(vars.size()));
    f.b.resize(static_cast<Eigen::Index>(p.size()));
    for (std::size_t k = 0; k < p.size(); ++k) {
        const auto& t = p.terms()[k];
        f.b(static_cast<Eigen::Index>(k)) = std::log(t.coeff());
        for (std::size_t j = 0; j < vars.size(); ++j)
            f.A(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = t.exponent(vars[j]);
    }
    return f;
}

}  // namespace

ConvexProgram to_convex(const GpProblem& problem) {
    problem.validate();
    ConvexProgram cp;
    const auto n = static_cast<Eigen::Index>(problem.variables.size());
    cp.log_lower.resize(n);
    cp.log_upper.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        const auto& v = problem.variables[static_cast<std::size_t>(j)];
        cp.variables.push_back(v.name);
        cp.log_lower(j) = std::log(v.lower);
        cp.log_upper(j) = std::isinf(v.upper) ? std::numeric_limits<double>::infinity() : std::log(v.upper);
    }
    cp.objective = lower(problem.objective, cp.variables);
    for (const auto& c : problem.constraints) cp.constraints.push_back(lower(c, cp.variables));
    return cp;
}

const char* to_string(Status s) {
    switch (s) {
        case Status::optimal: return "optimal";
        case Status::infeasible: return "infeasible";
        case Status::max_iter: return "max_iter";
    }
    return "?";
}

// ---------------------------------------------------------------- interior point

namespace {

// minimize f0(x) s.t. g_i(x) <= 0 (log-sum-exp) and A x <= c (affine).
struct BarrierProblem {
    LogSumExp objective;
    std::vector<LogSumExp> inequalities;
    Eigen::MatrixXd affine_A;
    Eigen::VectorXd affine_c;

    Eigen::Index dim() const { return objective.A.cols(); }
    Eigen::Index count() const { return static_cast<Eigen::Index>(inequalities.size()) + affine_c.size(); }

    bool strictly_feasible(const Eigen::VectorXd& x) const {
        for (const auto& g : inequalities)
            if (!(g.value(x) < 0)) return false;
        return affine_c.size() == 0 || ((affine_c - affine_A * x).array() > 0).all();
    }
};

struct BarrierRun {
    Eigen::VectorXd x;
    Eigen::VectorXd lambda;
    int steps = 0;
    bool converged = false;
    bool stopped_early = false;
    double dual_residual = 0.0;
    double gap = 0.0;
};

// Primal-dual interior point iteration on the problem above.
BarrierRun run_barrier(const BarrierProblem& bp, Eigen::VectorXd x, const SolverSettings& settings,
                       const std::function<bool(const Eigen::VectorXd&)>& early_stop = {}) {
    BarrierRun run;
    run.x = std::move(x);
    const Eigen::Index n = bp.dim();
    const Eigen::Index q = static_cast<Eigen::Index>(bp.inequalities.size());
    const Eigen::Index m = bp.count();
    const double gap_tol = settings.tolerance * 1e-2;

    // Values and gradients of every inequality; Hessian of the Lagrangian.
    Eigen::VectorXd fval(m);
    Eigen::MatrixXd fgrad(m, n);
    auto eval_constraints = [&](const Eigen::VectorXd& x_, Eigen::VectorXd& f) {
        for (Eigen::Index i = 0; i < q; ++i) f(i) = bp.inequalities[static_cast<std::size_t>(i)].value(x_);
        if (m > q) f.tail(m - q) = bp.affine_A * x_ - bp.affine_c;
    };
    auto residual = [&](const Eigen::VectorXd& x_, const Eigen::VectorXd& lam, double t, Eigen::VectorXd& r_dual,
                        Eigen::VectorXd& r_cent) {
        Eigen::VectorXd f(m);
        eval_constraints(x_, f);
        r_dual = bp.objective.gradient(x_);
        for (Eigen::Index i = 0; i < q; ++i) r_dual += lam(i) * bp.inequalities[static_cast<std::size_t>(i)].gradient(x_);
        if (m > q) r_dual += bp.affine_A.transpose() * lam.tail(m - q);
        r_cent = -lam.cwiseProduct(f).array() - 1.0 / t;
        return std::sqrt(r_dual.squaredNorm() + r_cent.squaredNorm());
    };

    eval_constraints(run.x, fval);
    run.lambda = (-fval).cwiseInverse();  // lambda_i f_i = -1
    const double kMu = settings.barrier_growth;
    constexpr double kAlpha = 0.01, kBeta = 0.5;

    Eigen::VectorXd g;
    Eigen::MatrixXd h;
    Eigen::VectorXd r_dual, r_cent;
    double t = 1.0;
    bool short_step = false;
    while (true) {
        eval_constraints(run.x, fval);
        run.gap = -fval.dot(run.lambda);
        // Surrogate-gap target, grown at most kMu-fold per step and held after a short
        // step or while the dual residual still dominates the gap (the gap is then no
        // guide to how close the central path is).
        residual(run.x, run.lambda, t, r_dual, r_cent);
        const bool dual_ok = r_dual.cwiseAbs().maxCoeff() <= std::max(settings.tolerance, run.gap);
        const double target = kMu * static_cast<double>(m) / std::max(run.gap, 1e-300);
        if (!short_step && dual_ok) t = std::max(t, std::min(target, kMu * t));
        const double r_norm = residual(run.x, run.lambda, t, r_dual, r_cent);
        run.dual_residual = r_dual.cwiseAbs().maxCoeff();
        if (run.dual_residual <= settings.tolerance && run.gap <= gap_tol) {
            run.converged = true;
            return run;
        }
        if (run.steps >= settings.max_newton_steps) return run;

        // Reduced Newton system.
        bp.objective.derivatives(run.x, g, h);
        Eigen::MatrixXd H = h;
        for (Eigen::Index i = 0; i < q; ++i) {
            bp.inequalities[static_cast<std::size_t>(i)].derivatives(run.x, g, h);
            fgrad.row(i) = g.transpose();
            H += run.lambda(i) * h;
        }
        if (m > q) fgrad.bottomRows(m - q) = bp.affine_A;
        const Eigen::VectorXd w = run.lambda.cwiseQuotient(-fval);
        H += fgrad.transpose() * w.asDiagonal() * fgrad;
        const Eigen::VectorXd rhs = -r_dual + fgrad.transpose() * r_cent.cwiseQuotient(-fval);
        H.diagonal().array() += 1e-14 * (1.0 + H.diagonal().cwiseAbs().maxCoeff());
        const Eigen::VectorXd dx = H.ldlt().solve(rhs);
        const Eigen::VectorXd dlam = (run.lambda.cwiseProduct(fgrad * dx) - r_cent).cwiseQuotient(-fval);
        if (!dx.allFinite() || !dlam.allFinite()) return run;

        double step = 1.0;
        for (Eigen::Index i = 0; i < m; ++i)
            if (dlam(i) < 0) step = std::min(step, -run.lambda(i) / dlam(i));
        step *= 0.99;
        Eigen::VectorXd x_next, lam_next, rd, rc;
        int halvings = 0;
        for (; halvings < 80; ++halvings, step *= kBeta) {
            x_next = run.x + step * dx;
            if (!bp.strictly_feasible(x_next)) continue;
            lam_next = run.lambda + step * dlam;
            if (residual(x_next, lam_next, t, rd, rc) <= (1 - kAlpha * step) * r_norm) break;
        }
        ++run.steps;
        short_step = step < 0.5;
        if (halvings == 80) return run;  // no progress possible in floating point
        run.x = std::move(x_next);
        run.lambda = std::move(lam_next);
        if (early_stop && early_stop(run.x)) {
            run.stopped_early = true;
            return run;
        }
    }
}

}  // namespace

GpSolution solve(const GpProblem& problem, const SolverSettings& settings) {
    const ConvexProgram cp = to_convex(problem);
    const auto n_all = static_cast<Eigen::Index>(cp.variables.size());

    // Substitute variables pinned by lower == upper.
    std::vector<Eigen::Index> free_idx;
    Eigen::VectorXd z_all(n_all);
    for (Eigen::Index j = 0; j < n_all; ++j) {
        if (cp.log_lower(j) < cp.log_upper(j)) {
            free_idx.push_back(j);
        } else {
            z_all(j) = cp.log_lower(j);
        }
    }
    const auto n = static_cast<Eigen::Index>(free_idx.size());

    auto restrict = [&](const LogSumExp& f) {
        LogSumExp r;
        r.A.resize(f.A.rows(), n);
        r.b = f.b;
        for (Eigen::Index j = 0, k = 0; j < n_all; ++j) {
            if (k < n && free_idx[static_cast<std::size_t>(k)] == j) {
                r.A.col(k++) = f.A.col(j);
            } else {
                r.b += f.A.col(j) * z_all(j);
            }
        }
        return r;
    };

    GpSolution sol;
    auto finish = [&](const Eigen::VectorXd& z_free) {
        for (Eigen::Index k = 0; k < n; ++k) z_all(free_idx[static_cast<std::size_t>(k)]) = z_free(k);
        for (Eigen::Index j = 0; j < n_all; ++j) {
            const auto& var = problem.variables[static_cast<std::size_t>(j)];
            sol.values[var.name] = var.lower == var.upper ? var.lower : std::exp(z_all(j));
        }
        sol.objective_value = problem.objective.eval(sol.values);
        sol.max_violation = -std::numeric_limits<double>::infinity();
        for (const auto& c : cp.constraints) sol.max_violation = std::max(sol.max_violation, c.value(z_all));
        if (cp.constraints.empty()) sol.max_violation = 0.0;
    };

    BarrierProblem base;
    base.objective = restrict(cp.objective);
    for (const auto& c : cp.constraints) {
        LogSumExp r = restrict(c);
        if (r.A.cols() == 0 || r.A.isZero(0.0)) {
            // Constant constraint.
            const double v = r.value(Eigen::VectorXd::Zero(n));
            if (v > settings.feasibility_tol) {
                sol.status = Status::infeasible;
                sol.max_violation = v;
                return sol;
            }
            continue;
        }
        base.inequalities.push_back(std::move(r));
    }

    if (n == 0) {
        finish(Eigen::VectorXd(0));
        sol.status = Status::optimal;
        return sol;
    }

    // Box rows: -z <= -lo and z <= hi.
    Eigen::VectorXd z0(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::Index j = free_idx[static_cast<std::size_t>(k)];
        const double lo = cp.log_lower(j), hi = cp.log_upper(j);
        const auto& var = problem.variables[static_cast<std::size_t>(j)];
        double start = std::isinf(hi) ? lo + 1.0 : 0.5 * (lo + hi);
        if (var.guess && *var.guess > 0) {
            const double g = std::log(*var.guess);
            const double margin = std::isinf(hi) ? 1e-3 : 1e-3 * (hi - lo);
            if (g > lo + margin && g < hi - margin) start = g;
        }
        z0(k) = start;
    }
    const auto box_count = [&] {
        Eigen::Index c = n;
        for (Eigen::Index k = 0; k < n; ++k)
            if (!std::isinf(cp.log_upper(free_idx[static_cast<std::size_t>(k)]))) ++c;
        return c;
    }();
    base.affine_A = Eigen::MatrixXd::Zero(box_count, n);
    base.affine_c.resize(box_count);
    {
        Eigen::Index r = 0;
        for (Eigen::Index k = 0; k < n; ++k) {
            const Eigen::Index j = free_idx[static_cast<std::size_t>(k)];
            base.affine_A(r, k) = -1.0;
            base.affine_c(r++) = -cp.log_lower(j);
            if (!std::isinf(cp.log_upper(j))) {
                base.affine_A(r, k) = 1.0;
                base.affine_c(r++) = cp.log_upper(j);
            }
        }
    }

    auto max_ineq = [&](const Eigen::VectorXd& z) {
        double worst = -std::numeric_limits<double>::infinity();
        for (const auto& g : base.inequalities) worst = std::max(worst, g.value(z));
        return worst;
    };

    // Phase 1: minimize s subject to g_i(z) <= s, box, s >= -1.
    double offset = 0.0;
    Eigen::VectorXd z_start = z0;
    constexpr double kPhase1Depth = 1e-4;
    if (!base.inequalities.empty() && !(max_ineq(z0) < -kPhase1Depth)) {
        BarrierProblem p1;
        p1.objective.A = Eigen::MatrixXd::Zero(1, n + 1);
        p1.objective.A(0, n) = 1.0;
        p1.objective.b = Eigen::VectorXd::Zero(1);
        for (const auto& g : base.inequalities) {
            LogSumExp a;
            a.A.resize(g.A.rows(), n + 1);
            a.A.leftCols(n) = g.A;
            a.A.col(n).setConstant(-1.0);
            a.b = g.b;
            p1.inequalities.push_back(std::move(a));
        }
        p1.affine_A = Eigen::MatrixXd::Zero(box_count + 1, n + 1);
        p1.affine_A.topLeftCorner(box_count, n) = base.affine_A;
        p1.affine_A(box_count, n) = -1.0;
        p1.affine_c.resize(box_count + 1);
        p1.affine_c.head(box_count) = base.affine_c;
        p1.affine_c(box_count) = 1.0;

        Eigen::VectorXd x0(n + 1);
        x0.head(n) = z0;
        x0(n) = std::max(max_ineq(z0) + 1.0, 0.0);
        auto run = run_barrier(p1, x0, settings, [&](const Eigen::VectorXd& x) {
            return max_ineq(x.head(n)) < -kPhase1Depth;
        });
        sol.newton_steps += run.steps;
        z_start = run.x.head(n);
        const double depth = max_ineq(z_start);
        if (!(depth < 0)) {
            if (depth > settings.feasibility_tol) {
                finish(z_start);
                sol.status = Status::infeasible;
                return sol;
            }
            // Feasible only within tolerance; relax every constraint by the residual.
            offset = depth + 0.05 * settings.feasibility_tol;
        }
    }

    BarrierProblem p2 = base;
    for (auto& g : p2.inequalities) g.b.array() -= offset;
    auto run = run_barrier(p2, z_start, settings);
    sol.newton_steps += run.steps;
    finish(run.x);
    sol.kkt_residual = std::max(run.dual_residual, run.gap);
    sol.status = run.converged ? Status::optimal : Status::max_iter;
    return sol;
}

}  // namespace rtsec::gp
