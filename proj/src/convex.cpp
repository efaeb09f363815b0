#include "d2d/convex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace d2d::convex {

namespace {

constexpr double kLn2 = 0.6931471805599453;

// ---------- dense symmetric solve ----------

// In-place LLT with escalating diagonal jitter. Returns false if the matrix
// refuses to factor even after regularization.
bool cholesky_solve(std::vector<double>& H, std::vector<double>& rhs, int n) {
    double max_diag = 0.0;
    for (int i = 0; i < n; ++i) max_diag = std::max(max_diag, std::abs(H[size_t(i) * n + i]));
    if (max_diag <= 0.0) max_diag = 1.0;

    std::vector<double> A;
    for (double jitter = 0.0;;) {
        A = H;
        if (jitter > 0.0)
            for (int i = 0; i < n; ++i) A[size_t(i) * n + i] += jitter;
        bool ok = true;
        for (int j = 0; j < n && ok; ++j) {
            double d = A[size_t(j) * n + j];
            for (int t = 0; t < j; ++t) d -= A[size_t(j) * n + t] * A[size_t(j) * n + t];
            if (d <= 0.0 || !std::isfinite(d)) {
                ok = false;
                break;
            }
            const double L = std::sqrt(d);
            A[size_t(j) * n + j] = L;
            for (int i = j + 1; i < n; ++i) {
                double v = A[size_t(i) * n + j];
                for (int t = 0; t < j; ++t) v -= A[size_t(i) * n + t] * A[size_t(j) * n + t];
                A[size_t(i) * n + j] = v / L;
            }
        }
        if (ok) break;
        jitter = (jitter == 0.0) ? 1e-12 * max_diag : jitter * 100.0;
        if (jitter > 1e-1 * max_diag) return false;
    }
    // forward/backward substitution
    for (int i = 0; i < n; ++i) {
        double v = rhs[size_t(i)];
        for (int t = 0; t < i; ++t) v -= A[size_t(i) * n + t] * rhs[size_t(t)];
        rhs[size_t(i)] = v / A[size_t(i) * n + i];
    }
    for (int i = n - 1; i >= 0; --i) {
        double v = rhs[size_t(i)];
        for (int t = i + 1; t < n; ++t) v -= A[size_t(t) * n + i] * rhs[size_t(t)];
        rhs[size_t(i)] = v / A[size_t(i) * n + i];
    }
    return true;
}

double lse(const std::vector<double>& e) {
    double mx = -std::numeric_limits<double>::infinity();
    for (double v : e) mx = std::max(mx, v);
    double s = 0.0;
    for (double v : e) s += std::exp(v - mx);
    return mx + std::log(s);
}

// ---------- barrier machinery ----------

struct Barrier {
    const ConvexProgram& prog;
    int n;
    std::vector<double> exps_buf;

    explicit Barrier(const ConvexProgram& p) : prog(p), n(p.num_vars) {}

    double constraint_value(const Constraint& con, const std::vector<double>& x) {
        if (!con.is_lse) return con.affine.eval(x);
        exps_buf.clear();
        for (const auto& e : con.exps) exps_buf.push_back(e.eval(x));
        return lse(exps_buf);
    }

    // dense gradient of one constraint
    void constraint_gradient(const Constraint& con, const std::vector<double>& x,
                             std::vector<double>& out) {
        out.assign(size_t(n), 0.0);
        if (!con.is_lse) {
            for (const auto& t : con.affine.terms) out[size_t(t.var)] += t.coef;
            return;
        }
        exps_buf.clear();
        for (const auto& e : con.exps) exps_buf.push_back(e.eval(x));
        double mx = -std::numeric_limits<double>::infinity();
        for (double v : exps_buf) mx = std::max(mx, v);
        double z = 0.0;
        for (double& v : exps_buf) {
            v = std::exp(v - mx);
            z += v;
        }
        for (size_t j = 0; j < con.exps.size(); ++j)
            for (const auto& t : con.exps[j].terms)
                out[size_t(t.var)] += (exps_buf[j] / z) * t.coef;
    }

    bool strictly_feasible(const std::vector<double>& x, double margin) {
        for (const auto& con : prog.constraints)
            if (constraint_value(con, x) >= -margin) return false;
        return true;
    }

    // phi = -t * f(x) - sum ln(-G_q); returns +inf when any constraint active.
    double phi(const std::vector<double>& x, double t) {
        double v = -t * prog.objective.eval(x);
        for (const auto& con : prog.constraints) {
            const double g = constraint_value(con, x);
            if (g >= 0.0) return std::numeric_limits<double>::infinity();
            v -= std::log(-g);
        }
        return v;
    }

    void assemble(const std::vector<double>& x, double t, std::vector<double>& H,
                  std::vector<double>& grad) {
        H.assign(size_t(n) * size_t(n), 0.0);
        grad.assign(size_t(n), 0.0);
        for (const auto& term : prog.objective.terms)
            grad[size_t(term.var)] -= t * term.coef;

        std::vector<int> vars;
        std::vector<double> gq;  // dense-on-support gradient of G
        for (const auto& con : prog.constraints) {
            const double g = constraint_value(con, x);
            const double s = -g;  // slack > 0
            const double inv_s = 1.0 / s;
            const double inv_s2 = inv_s * inv_s;
            if (!con.is_lse) {
                for (const auto& ta : con.affine.terms)
                    grad[size_t(ta.var)] += inv_s * ta.coef;
                for (const auto& ta : con.affine.terms)
                    for (const auto& tb : con.affine.terms)
                        H[size_t(ta.var) * n + tb.var] += inv_s2 * ta.coef * tb.coef;
                continue;
            }
            // softmax weights
            exps_buf.clear();
            for (const auto& e : con.exps) exps_buf.push_back(e.eval(x));
            double mx = -std::numeric_limits<double>::infinity();
            for (double v : exps_buf) mx = std::max(mx, v);
            double z = 0.0;
            for (double& v : exps_buf) {
                v = std::exp(v - mx);
                z += v;
            }
            for (double& v : exps_buf) v /= z;  // now p_j

            // support union and softmax gradient
            vars.clear();
            for (const auto& e : con.exps)
                for (const auto& tt : e.terms) vars.push_back(tt.var);
            std::sort(vars.begin(), vars.end());
            vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
            gq.assign(vars.size(), 0.0);
            auto pos = [&](int v) {
                return size_t(std::lower_bound(vars.begin(), vars.end(), v) - vars.begin());
            };
            for (size_t j = 0; j < con.exps.size(); ++j)
                for (const auto& tt : con.exps[j].terms)
                    gq[pos(tt.var)] += exps_buf[j] * tt.coef;

            for (size_t a = 0; a < vars.size(); ++a)
                grad[size_t(vars[a])] += inv_s * gq[a];
            // hess(G) = sum p_j a_j a_j' - gq gq'; barrier adds gq gq'/s^2
            for (size_t j = 0; j < con.exps.size(); ++j) {
                const auto& terms = con.exps[j].terms;
                const double pj = exps_buf[j];
                for (const auto& ta : terms)
                    for (const auto& tb : terms)
                        H[size_t(ta.var) * n + tb.var] += inv_s * pj * ta.coef * tb.coef;
            }
            for (size_t a = 0; a < vars.size(); ++a)
                for (size_t b2 = 0; b2 < vars.size(); ++b2)
                    H[size_t(vars[a]) * n + vars[b2]] +=
                        (inv_s2 - inv_s) * gq[a] * gq[b2];
        }
    }

    // Newton centering at fixed t. Returns false when the iteration budget is
    // exhausted or the linear algebra fails.
    bool center(std::vector<double>& x, double t, const BarrierOptions& opt, int& iters_used,
                int early_stop_var, double early_stop_threshold, bool* early_stopped) {
        std::vector<double> H, grad, dx, xt;
        for (int it = 0; it < 60; ++it) {
            if (iters_used >= opt.max_newton_iters) return false;
            ++iters_used;
            assemble(x, t, H, grad);
            dx = grad;
            for (double& v : dx) v = -v;
            if (!cholesky_solve(H, dx, n)) return false;
            double lambda2 = 0.0;
            for (int i = 0; i < n; ++i) lambda2 -= grad[size_t(i)] * dx[size_t(i)];
            if (lambda2 / 2.0 <= opt.newton_tol) return true;

            const double phi0 = phi(x, t);
            double slope = -lambda2;  // grad . dx
            double step = 1.0;
            xt.resize(size_t(n));
            int bt = 0;
            // the decrease test tolerates evaluation noise so that the final
            // high-t centerings are not starved by rounding
            const double noise = 1e-11 * (1.0 + std::abs(phi0));
            for (; bt < 300; ++bt) {
                for (int i = 0; i < n; ++i) xt[size_t(i)] = x[size_t(i)] + step * dx[size_t(i)];
                const double ph = phi(xt, t);
                if (ph <= phi0 + opt.armijo * step * slope + noise) break;
                step *= opt.backtrack;
            }
            if (bt == 300) return true;  // no further progress possible
            x.swap(xt);
            if (early_stop_var >= 0 && x[size_t(early_stop_var)] < early_stop_threshold) {
                if (early_stopped) *early_stopped = true;
                return true;
            }
        }
        return true;
    }
};

// Augment a program with one slack variable bounding every relaxable
// constraint from above (phase-I construction).
ConvexProgram make_phase1(const ConvexProgram& prog, const std::vector<double>& x0, double* s0) {
    ConvexProgram p1;
    p1.num_vars = prog.num_vars + 1;
    const int sv = prog.num_vars;
    p1.objective.terms = {{sv, -1.0}};  // maximize -s
    p1.y_rows = prog.y_rows;
    p1.y_cols = prog.y_cols;

    Barrier eval(prog);
    double worst = -std::numeric_limits<double>::infinity();
    for (const auto& con : prog.constraints) {
        Constraint c = con;
        if (c.relaxable) {
            if (c.is_lse) {
                for (auto& e : c.exps) e.terms.push_back({sv, -1.0});
            } else {
                c.affine.terms.push_back({sv, -1.0});
            }
            worst = std::max(worst, eval.constraint_value(con, x0));
        }
        p1.constraints.push_back(std::move(c));
    }
    *s0 = (std::isfinite(worst) ? worst : 0.0) + 1.0;
    p1.x_init = x0;
    p1.x_init.push_back(*s0);
    return p1;
}

}  // namespace

double Constraint::value(const std::vector<double>& x) const {
    if (!is_lse) return affine.eval(x);
    std::vector<double> e;
    e.reserve(exps.size());
    for (const auto& ex : exps) e.push_back(ex.eval(x));
    return lse(e);
}

std::string to_string(const ConstraintTag& tag) {
    static const char* names[] = {"rate_gate_ub", "rate_gate_on", "beta_cell", "beta_d2d",
                                  "sinr_d2d",     "sinr_cell",    "cell_cap",  "d2d_budget",
                                  "link_ub",      "link_lb",      "box_lo",    "box_hi"};
    std::ostringstream os;
    os << names[static_cast<int>(tag.family)];
    if (tag.k >= 0) os << " k=" << tag.k;
    if (tag.m >= 0) os << " m=" << tag.m;
    if (tag.d >= 0) os << " d=" << tag.d;
    return os.str();
}

PrimalSolution solve(const ConvexProgram& program, const BarrierOptions& options) {
    PrimalSolution out;
    const int n = program.num_vars;
    const auto Q = static_cast<double>(program.constraints.size());
    Barrier barrier(program);
    std::vector<double> x = program.x_init;
    int iters = 0;

    if (!barrier.strictly_feasible(x, 1e-12)) {
        // phase I: drive the feasibility slack negative
        double s0 = 0.0;
        ConvexProgram p1 = make_phase1(program, x, &s0);
        Barrier b1(p1);
        std::vector<double> x1 = p1.x_init;
        const int sv = n;
        double t = 1.0;
        const double q1 = static_cast<double>(p1.constraints.size());
        const double p1_gap = std::max(options.duality_gap * 100.0, 1e-7);
        bool stopped = false;
        bool p1_budget_ok = true;
        for (;;) {
            if (!b1.center(x1, t, options, iters, sv, -1e-6, &stopped)) {
                p1_budget_ok = false;
                break;
            }
            if (stopped || q1 / t <= p1_gap * std::max(1.0, std::abs(x1[size_t(sv)]))) break;
            t *= options.mu;
        }
        if (x1[size_t(sv)] >= -options.feas_margin) {
            // an unfinished phase I cannot certify infeasibility
            out.status = p1_budget_ok ? SolveStatus::Infeasible : SolveStatus::IterationLimit;
            out.x.assign(x1.begin(), x1.begin() + n);
            out.kkt.newton_iters = iters;
            return out;
        }
        x.assign(x1.begin(), x1.begin() + n);
    }

    // phase II: follow the central path
    double f0 = program.objective.eval(x);
    double t = std::max(1.0, Q / std::max(10.0, std::abs(f0)));
    bool budget_ok = true;
    for (;;) {
        const int before = iters;
        if (!barrier.center(x, t, options, iters, -1, 0.0, nullptr)) {
            budget_ok = false;
            break;
        }
        if (options.trace)
            *options.trace << "barrier t=" << t << " gap=" << Q / t
                           << " objective=" << program.objective.eval(x)
                           << " newton=" << iters - before << "\n";
        if (Q / t <= options.duality_gap) break;
        t *= options.mu;
    }

    out.status = budget_ok ? SolveStatus::Optimal : SolveStatus::IterationLimit;
    out.x = x;
    out.objective = program.objective.eval(x);
    out.g_values.resize(program.constraints.size());
    out.multipliers.resize(program.constraints.size());
    for (size_t q = 0; q < program.constraints.size(); ++q) {
        const double g = barrier.constraint_value(program.constraints[q], x);
        out.g_values[q] = g;
        out.multipliers[q] = 1.0 / (t * std::max(-g, 1e-300));
    }

    // KKT stationarity of obj - sum lambda grad(G). The raw 1/(t s) values are
    // limited by the conditioning of the final centering, so the near-active
    // multipliers get a nonnegative least-squares polish on top.
    std::vector<double> c(size_t(n), 0.0);
    for (const auto& term : program.objective.terms) c[size_t(term.var)] += term.coef;
    std::vector<double> gq;
    auto residual_inf = [&](const std::vector<double>& lam) {
        std::vector<double> r = c;
        for (size_t q = 0; q < program.constraints.size(); ++q) {
            if (lam[q] == 0.0) continue;
            barrier.constraint_gradient(program.constraints[q], x, gq);
            for (int i = 0; i < n; ++i) r[size_t(i)] -= lam[q] * gq[size_t(i)];
        }
        double mx = 0.0;
        for (double v : r) mx = std::max(mx, std::abs(v));
        return mx;
    };
    double stat = residual_inf(out.multipliers);

    double lmax = 0.0;
    for (double l : out.multipliers) lmax = std::max(lmax, l);
    std::vector<int> act;
    for (size_t q = 0; q < out.multipliers.size(); ++q)
        if (out.multipliers[q] > 1e-7 * (1.0 + lmax)) act.push_back(static_cast<int>(q));
    if (!act.empty()) {
        std::vector<std::vector<double>> J;  // gradients of the active constraints
        for (int q : act) {
            barrier.constraint_gradient(program.constraints[static_cast<size_t>(q)], x, gq);
            J.push_back(gq);
        }
        std::vector<double> lam_act;
        for (int round = 0; round < 6 && !act.empty(); ++round) {
            const int a = static_cast<int>(act.size());
            std::vector<double> gram(size_t(a) * size_t(a), 0.0), rhs(size_t(a), 0.0);
            for (int i = 0; i < a; ++i) {
                for (int j2 = 0; j2 <= i; ++j2) {
                    double dot = 0.0;
                    for (int v = 0; v < n; ++v)
                        dot += J[size_t(i)][size_t(v)] * J[size_t(j2)][size_t(v)];
                    gram[size_t(i) * a + j2] = gram[size_t(j2) * a + i] = dot;
                }
                gram[size_t(i) * a + i] += 1e-12 * (1.0 + gram[size_t(i) * a + i]);
                for (int v = 0; v < n; ++v) rhs[size_t(i)] += J[size_t(i)][size_t(v)] * c[size_t(v)];
            }
            if (!cholesky_solve(gram, rhs, a)) break;
            bool any_negative = false;
            for (double l : rhs) any_negative |= l < 0.0;
            lam_act = rhs;
            if (!any_negative) break;
            // drop negatives and refit
            std::vector<int> keep_act;
            std::vector<std::vector<double>> keep_J;
            for (int i = 0; i < a; ++i)
                if (rhs[size_t(i)] >= 0.0) {
                    keep_act.push_back(act[size_t(i)]);
                    keep_J.push_back(std::move(J[size_t(i)]));
                }
            act.swap(keep_act);
            J.swap(keep_J);
            lam_act.clear();
        }
        if (!act.empty() && lam_act.size() == act.size()) {
            std::vector<double> polished = out.multipliers;
            for (size_t i = 0; i < act.size(); ++i)
                polished[static_cast<size_t>(act[i])] = std::max(lam_act[i], 0.0);
            const double stat2 = residual_inf(polished);
            if (stat2 < stat) {
                out.multipliers.swap(polished);
                stat = stat2;
            }
        }
    }
    double comp = 0.0;
    for (size_t q = 0; q < program.constraints.size(); ++q)
        comp = std::max(comp, std::abs(out.multipliers[q] * out.g_values[q]));
    out.kkt.stationarity = stat;
    out.kkt.complementarity = comp;
    out.kkt.duality_gap = Q / t;
    out.kkt.newton_iters = iters;
    return out;
}

FeasibilitySolution solve_l1(const ConvexProgram& program, const BarrierOptions& options) {
    FeasibilitySolution out;
    const int n = program.num_vars;

    // augmented program over (x, alpha)
    std::vector<int> relaxed;  // constraint index -> alpha index (or -1)
    int n_alpha = 0;
    for (const auto& con : program.constraints)
        relaxed.push_back(con.relaxable ? n_alpha++ : -1);

    ConvexProgram aug;
    aug.num_vars = n + n_alpha;
    for (int j = 0; j < n_alpha; ++j) aug.objective.terms.push_back({n + j, -1.0});
    for (size_t q = 0; q < program.constraints.size(); ++q) {
        Constraint c = program.constraints[q];
        if (relaxed[q] >= 0) {
            const int av = n + relaxed[q];
            if (c.is_lse)
                for (auto& e : c.exps) e.terms.push_back({av, -1.0});
            else
                c.affine.terms.push_back({av, -1.0});
        }
        aug.constraints.push_back(std::move(c));
    }
    for (int j = 0; j < n_alpha; ++j) {
        Constraint lo;
        lo.tag = {Family::BoxLo, n + j, -1, -1};
        lo.relaxable = false;
        lo.affine.terms = {{n + j, -1.0}};
        aug.constraints.push_back(std::move(lo));
    }
    aug.x_init = program.x_init;
    aug.x_init.resize(size_t(n + n_alpha));
    Barrier eval(program);
    for (size_t q = 0; q < program.constraints.size(); ++q)
        if (relaxed[q] >= 0)
            aug.x_init[size_t(n + relaxed[q])] =
                std::max(eval.constraint_value(program.constraints[q], program.x_init), 0.0) + 1.0;

    Barrier barrier(aug);
    std::vector<double> x = aug.x_init;
    int iters = 0;
    double t = 1.0;
    const double Q = static_cast<double>(aug.constraints.size());
    bool budget_ok = true;
    for (;;) {
        if (!barrier.center(x, t, options, iters, -1, 0.0, nullptr)) {
            budget_ok = false;
            break;
        }
        if (Q / t <= options.duality_gap) break;
        t *= options.mu;
    }
    out.status = budget_ok ? SolveStatus::Optimal : SolveStatus::IterationLimit;

    out.x.assign(x.begin(), x.begin() + n);
    out.alphas.assign(program.constraints.size(), 0.0);
    out.multipliers.assign(program.constraints.size(), 0.0);
    out.g_values.assign(program.constraints.size(), 0.0);
    out.alpha_sum = 0.0;
    double raw_sum = 0.0;
    for (size_t q = 0; q < program.constraints.size(); ++q) {
        out.g_values[q] = barrier.constraint_value(aug.constraints[q], x);  // G - alpha
        if (relaxed[q] >= 0) {
            const double alpha = x[size_t(n + relaxed[q])];
            out.alphas[q] = alpha;
            out.alpha_sum += alpha;
            out.multipliers[q] = 1.0 / (t * std::max(-out.g_values[q], 1e-300));
            raw_sum += out.multipliers[q];
            out.g_values[q] += alpha;  // back to G(x)
        }
    }
    if (raw_sum > 0.0)
        for (double& v : out.multipliers) v /= raw_sum;
    return out;
}

// ---------- instance-derived constants ----------

GateConstants compute_gate_constants(const NetworkInstance& instance, const SolverConfig& config) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    const auto& g = instance.gains;
    const auto& rc = instance.constants;
    GateConstants gc;
    gc.a.resize(size_t(K));
    gc.c_a.assign(size_t(K), std::vector<double>(size_t(M), 0.0));
    gc.c_b = gc.c_a;
    gc.s_width = gc.c_a;
    gc.b_ub = gc.c_a;
    gc.b_lb = gc.c_a;

    double g_max_off = 0.0;
    for (int k = 0; k < K; ++k) {
        for (int m = 0; m < M; ++m) g_max_off = std::max(g_max_off, g.g_d2c[size_t(k)][size_t(m)]);
        for (int kp = 0; kp < K; ++kp)
            for (double v : g.g_d2d_cross[size_t(k)][size_t(kp)]) g_max_off = std::max(g_max_off, v);
    }
    if (g_max_off <= 0.0) g_max_off = 1.0;

    gc.c_link = std::max((1.0 + config.epsilon) / (1e-10 * rc.p_max_d2d_mw),
                         config.epsilon * g_max_off / (1e-4 * rc.noise_mw));
    gc.p_floor_off = config.epsilon / gc.c_link;
    gc.p_floor_on = (1.0 + config.epsilon) / gc.c_link;

    double max_rate = 1.0;
    for (int m = 0; m < M; ++m)
        max_rate = std::max(max_rate,
                            std::log2(rc.p_max_cell_mw * g.g_cell[size_t(m)] / rc.noise_mw));
    const double ln_gd = std::log(rc.gamma_d2d);
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        gc.a[ku] = instance.group_size(k) / kLn2;
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            double ub = std::numeric_limits<double>::infinity();
            double lb = std::numeric_limits<double>::infinity();
            for (int d = 0; d < instance.group_size(k); ++d) {
                const auto du = static_cast<size_t>(d);
                const double gs = g.g_d2d_self[ku][mu][du];
                ub = std::min(ub, std::log(gs / rc.noise_mw));
                double denom = rc.noise_mw + rc.p_max_cell_mw * g.g_c2d[ku][mu][du];
                for (int kp = 0; kp < K; ++kp) {
                    if (kp == k) continue;
                    denom += rc.p_max_d2d_mw * g.g_d2d_cross[ku][size_t(kp)][du];
                }
                lb = std::min(lb, std::log(gs / denom));
            }
            gc.b_ub[ku][mu] = ub;
            gc.b_lb[ku][mu] = lb;
            gc.s_width[ku][mu] = ln_gd - std::log(gc.p_floor_off) - lb + 2.0;
            gc.c_a[ku][mu] = gc.a[ku] * (gc.s_width[ku][mu] - ln_gd) + 1.0;
            gc.c_b[ku][mu] = std::max(
                0.0, gc.a[ku] * (std::log((1.0 + config.epsilon) * rc.p_max_d2d_mw) + ub)) + 1.0;
            max_rate = std::max(max_rate, gc.c_b[ku][mu]);
        }
    }
    gc.big_c = config.big_c_factor * max_rate;
    return gc;
}

// ---------- builders ----------

namespace {

void check_binary(const NetworkInstance& instance, const BinaryMatrix& y,
                  const SolverConfig& config) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    if (static_cast<int>(y.size()) != K)
        throw std::invalid_argument("binary matrix: row count mismatch");
    std::vector<int> cols(size_t(M), 0);
    for (int k = 0; k < K; ++k) {
        if (static_cast<int>(y[size_t(k)].size()) != M)
            throw std::invalid_argument("binary matrix: column count mismatch");
        int rows = 0;
        for (int m = 0; m < M; ++m) {
            const uint8_t v = y[size_t(k)][size_t(m)];
            if (v > 1) throw std::invalid_argument("binary matrix: non-binary entry");
            rows += v;
            cols[size_t(m)] += v;
        }
        if (rows > config.c1) throw std::invalid_argument("binary matrix: C1 cap violated");
    }
    for (int m = 0; m < M; ++m)
        if (cols[size_t(m)] > config.c2)
            throw std::invalid_argument("binary matrix: C2 cap violated");
}

void add_box(ConvexProgram& prog, int var, double lo, double hi) {
    Constraint clo;
    clo.tag = {Family::BoxLo, var, -1, -1};
    clo.relaxable = false;
    clo.affine.terms = {{var, -1.0}};
    clo.affine.constant = lo;
    prog.constraints.push_back(std::move(clo));
    Constraint chi;
    chi.tag = {Family::BoxHi, var, -1, -1};
    chi.relaxable = false;
    chi.affine.terms = {{var, 1.0}};
    chi.affine.constant = -hi;
    prog.constraints.push_back(std::move(chi));
}

}  // namespace

ConvexProgram build_primal(const NetworkInstance& instance, const BinaryMatrix& y,
                           const SolverConfig& config) {
    check_binary(instance, y, config);
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    const auto& g = instance.gains;
    const auto& rc = instance.constants;
    const GateConstants gc = compute_gate_constants(instance, config);

    ConvexProgram prog;
    prog.y_rows = K;
    prog.y_cols = M;
    prog.num_vars = 3 * K * M + 2 * M;
    auto iu = [&](int k, int m) { return k * M + m; };
    auto iv = [&](int m) { return K * M + m; };
    auto ib = [&](int k, int m) { return K * M + M + k * M + m; };
    auto ic = [&](int m) { return 2 * K * M + M + m; };
    auto ir = [&](int k, int m) { return 2 * K * M + 2 * M + k * M + m; };
    prog.var_names.resize(size_t(prog.num_vars));
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) {
            prog.var_names[size_t(iu(k, m))] = "u_" + std::to_string(k) + "_" + std::to_string(m);
            prog.var_names[size_t(ib(k, m))] = "b_" + std::to_string(k) + "_" + std::to_string(m);
            prog.var_names[size_t(ir(k, m))] = "r_" + std::to_string(k) + "_" + std::to_string(m);
        }
    for (int m = 0; m < M; ++m) {
        prog.var_names[size_t(iv(m))] = "v_" + std::to_string(m);
        prog.var_names[size_t(ic(m))] = "c_" + std::to_string(m);
    }

    const double eps = config.epsilon;
    const double ln_eps = std::log(eps);
    const double delta_link = std::log1p(eps) - ln_eps;
    const double ln_pd_max = std::log(rc.p_max_d2d_mw);
    const double ln_pc_max = std::log(rc.p_max_cell_mw);
    const double ln_gd = std::log(rc.gamma_d2d);
    const double ln_gc = std::log(rc.gamma_cell);

    auto yv = [&](int k, int m) { return static_cast<double>(y[size_t(k)][size_t(m)]); };

    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        const double a = gc.a[ku];
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            const int flat = k * M + m;
            const double cA = gc.c_a[ku][mu];
            const double cB = gc.c_b[ku][mu];
            const double S = gc.s_width[ku][mu];

            Constraint gate_ub;
            gate_ub.tag = {Family::RateGateUb, k, m, -1};
            gate_ub.affine.terms = {{ir(k, m), 1.0}, {iu(k, m), -a}, {ib(k, m), -a}};
            gate_ub.affine.constant = cA * (yv(k, m) - 1.0);
            gate_ub.y_coef = {{flat, cA}};
            prog.constraints.push_back(std::move(gate_ub));

            Constraint gate_on;
            gate_on.tag = {Family::RateGateOn, k, m, -1};
            gate_on.affine.terms = {{ir(k, m), 1.0}};
            gate_on.affine.constant = -cB * yv(k, m);
            gate_on.y_coef = {{flat, -cB}};
            prog.constraints.push_back(std::move(gate_on));

            Constraint sinr;
            sinr.tag = {Family::SinrD2D, k, m, -1};
            sinr.affine.terms = {{iu(k, m), -1.0}, {ib(k, m), -1.0}};
            sinr.affine.constant = ln_gd - S * (1.0 - yv(k, m));
            sinr.y_coef = {{flat, S}};
            prog.constraints.push_back(std::move(sinr));

            Constraint link_ub;
            link_ub.tag = {Family::LinkUb, k, m, -1};
            link_ub.affine.terms = {{iu(k, m), 1.0}};
            link_ub.affine.constant = -ln_pd_max - ln_eps - yv(k, m) * delta_link;
            link_ub.y_coef = {{flat, -delta_link}};
            prog.constraints.push_back(std::move(link_ub));

            Constraint link_lb;
            link_lb.tag = {Family::LinkLb, k, m, -1};
            link_lb.affine.terms = {{iu(k, m), -1.0}};
            link_lb.affine.constant = ln_eps + yv(k, m) * delta_link - std::log(gc.c_link);
            link_lb.y_coef = {{flat, delta_link}};
            prog.constraints.push_back(std::move(link_lb));
        }
    }

    for (int m = 0; m < M; ++m) {
        const auto mu = static_cast<size_t>(m);
        Constraint bc;
        bc.tag = {Family::BetaCell, -1, m, -1};
        bc.is_lse = true;
        bc.exps.push_back({{{ic(m), 1.0}}, std::log(rc.noise_mw / g.g_cell[mu])});
        for (int k = 0; k < K; ++k)
            bc.exps.push_back({{{ic(m), 1.0}, {iu(k, m), 1.0}},
                               std::log(g.g_d2c[size_t(k)][mu] / g.g_cell[mu])});
        prog.constraints.push_back(std::move(bc));

        Constraint sc;
        sc.tag = {Family::SinrCell, -1, m, -1};
        sc.affine.terms = {{iv(m), -1.0}, {ic(m), -1.0}};
        sc.affine.constant = ln_gc;
        prog.constraints.push_back(std::move(sc));

        Constraint cap;
        cap.tag = {Family::CellPowerCap, -1, m, -1};
        cap.affine.terms = {{iv(m), 1.0}};
        cap.affine.constant = -ln_pc_max;
        prog.constraints.push_back(std::move(cap));
    }

    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            for (int d = 0; d < instance.group_size(k); ++d) {
                const auto du = static_cast<size_t>(d);
                const double gs = g.g_d2d_self[ku][mu][du];
                Constraint bd;
                bd.tag = {Family::BetaD2D, k, m, d};
                bd.is_lse = true;
                bd.exps.push_back({{{ib(k, m), 1.0}}, std::log(rc.noise_mw / gs)});
                bd.exps.push_back(
                    {{{ib(k, m), 1.0}, {iv(m), 1.0}}, std::log(g.g_c2d[ku][mu][du] / gs)});
                for (int kp = 0; kp < K; ++kp) {
                    if (kp == k) continue;
                    bd.exps.push_back({{{ib(k, m), 1.0}, {iu(kp, m), 1.0}},
                                       std::log(g.g_d2d_cross[ku][size_t(kp)][du] / gs)});
                }
                prog.constraints.push_back(std::move(bd));
            }
        }
        Constraint budget;
        budget.tag = {Family::D2DBudget, k, -1, -1};
        budget.is_lse = true;
        for (int m = 0; m < M; ++m)
            budget.exps.push_back({{{iu(k, m), 1.0}}, -ln_pd_max});
        prog.constraints.push_back(std::move(budget));
    }

    // boxes and the initial point
    prog.x_init.assign(size_t(prog.num_vars), 0.0);
    const double u_lo = std::log(gc.p_floor_off) - 2.0;
    const double u_hi = std::log1p(eps) + ln_pd_max + 2.0;
    double v_lo = ln_pc_max;
    for (int m = 0; m < M; ++m)
        v_lo = std::min(v_lo, std::log(rc.gamma_cell * rc.noise_mw / g.g_cell[size_t(m)]));
    v_lo -= 5.0;

    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            add_box(prog, iu(k, m), u_lo, u_hi);
            const double b_lo =
                std::min(gc.b_lb[ku][mu], ln_gd - u_hi - gc.s_width[ku][mu]) - 5.0;
            add_box(prog, ib(k, m), b_lo, gc.b_ub[ku][mu] + 2.0);
            const double r_lo = std::min(0.0, instance.group_size(k) * std::log2(rc.gamma_d2d)) - 2.0;
            add_box(prog, ir(k, m), r_lo, gc.c_b[ku][mu] + 2.0);
            const bool on = y[ku][mu] != 0;
            prog.x_init[size_t(iu(k, m))] =
                on ? std::log(rc.p_max_d2d_mw / (2.0 * M)) : std::log(gc.p_floor_off) + 1.0;
            prog.x_init[size_t(ir(k, m))] = r_lo + 1.0;
        }
    }
    for (int m = 0; m < M; ++m) {
        add_box(prog, iv(m), v_lo, ln_pc_max + 1.0);
        double c_lo = std::numeric_limits<double>::infinity();
        double denom = rc.noise_mw;
        for (int k = 0; k < K; ++k) denom += rc.p_max_d2d_mw * g.g_d2c[size_t(k)][size_t(m)];
        c_lo = std::log(g.g_cell[size_t(m)] / denom);
        add_box(prog, ic(m), c_lo - 5.0, std::log(g.g_cell[size_t(m)] / rc.noise_mw) + 2.0);
        prog.x_init[size_t(iv(m))] = ln_pc_max - 0.5;
    }
    // beta starts strictly below their bounds at the initial powers
    for (int m = 0; m < M; ++m) {
        double denom = rc.noise_mw;
        for (int k = 0; k < K; ++k)
            denom += std::exp(prog.x_init[size_t(iu(k, m))]) * g.g_d2c[size_t(k)][size_t(m)];
        prog.x_init[size_t(ic(m))] = std::log(g.g_cell[size_t(m)] / denom) - 0.1;
    }
    for (int k = 0; k < K; ++k) {
        const auto ku = static_cast<size_t>(k);
        for (int m = 0; m < M; ++m) {
            const auto mu = static_cast<size_t>(m);
            double bound = std::numeric_limits<double>::infinity();
            for (int d = 0; d < instance.group_size(k); ++d) {
                const auto du = static_cast<size_t>(d);
                double denom = rc.noise_mw + std::exp(prog.x_init[size_t(iv(m))]) * g.g_c2d[ku][mu][du];
                for (int kp = 0; kp < K; ++kp) {
                    if (kp == k) continue;
                    denom += std::exp(prog.x_init[size_t(iu(kp, m))]) *
                             g.g_d2d_cross[ku][size_t(kp)][du];
                }
                bound = std::min(bound, std::log(g.g_d2d_self[ku][mu][du] / denom));
            }
            prog.x_init[size_t(ib(k, m))] = bound - 0.1;
        }
    }

    // objective: sum_k sum_m r + sum_m (v + c)/ln2
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m) prog.objective.terms.push_back({ir(k, m), 1.0});
    for (int m = 0; m < M; ++m) {
        prog.objective.terms.push_back({iv(m), 1.0 / kLn2});
        prog.objective.terms.push_back({ic(m), 1.0 / kLn2});
    }
    return prog;
}

namespace {

struct ActivePair {
    int k;
    int m;
};

// Gated program over active-pair powers only; u_j at 2j, b_j at 2j+1,
// then v_m and c_m blocks.
ConvexProgram build_primal_reduced(const NetworkInstance& instance, const BinaryMatrix& y,
                                   const SolverConfig& config, const GateConstants& gc,
                                   std::vector<ActivePair>& actives) {
    const int K = instance.num_groups();
    const int M = instance.num_channels();
    const auto& g = instance.gains;
    const auto& rc = instance.constants;

    actives.clear();
    for (int k = 0; k < K; ++k)
        for (int m = 0; m < M; ++m)
            if (y[size_t(k)][size_t(m)]) actives.push_back({k, m});
    const int A = static_cast<int>(actives.size());

    ConvexProgram prog;
    prog.y_rows = K;
    prog.y_cols = M;
    prog.num_vars = 2 * A + 2 * M;
    auto iu = [&](int j) { return 2 * j; };
    auto ib = [&](int j) { return 2 * j + 1; };
    auto iv = [&](int m) { return 2 * A + m; };
    auto ic = [&](int m) { return 2 * A + M + m; };

    const double ln_pd_max = std::log(rc.p_max_d2d_mw);
    const double ln_pc_max = std::log(rc.p_max_cell_mw);
    const double ln_gd = std::log(rc.gamma_d2d);
    const double ln_gc = std::log(rc.gamma_cell);

    std::vector<int> row_count(size_t(K), 0);
    for (const auto& ap : actives) row_count[size_t(ap.k)]++;

    for (int j = 0; j < A; ++j) {
        const int k = actives[size_t(j)].k;
        const int m = actives[size_t(j)].m;
        Constraint sinr;
        sinr.tag = {Family::SinrD2D, k, m, -1};
        sinr.affine.terms = {{iu(j), -1.0}, {ib(j), -1.0}};
        sinr.affine.constant = ln_gd;
        sinr.y_coef = {{k * M + m, gc.s_width[size_t(k)][size_t(m)]}};
        prog.constraints.push_back(std::move(sinr));
    }
    for (int m = 0; m < M; ++m) {
        const auto mu = static_cast<size_t>(m);
        Constraint bc;
        bc.tag = {Family::BetaCell, -1, m, -1};
        bc.is_lse = true;
        bc.exps.push_back({{{ic(m), 1.0}}, std::log(rc.noise_mw / g.g_cell[mu])});
        for (int j = 0; j < A; ++j)
            if (actives[size_t(j)].m == m)
                bc.exps.push_back(
                    {{{ic(m), 1.0}, {iu(j), 1.0}},
                     std::log(g.g_d2c[size_t(actives[size_t(j)].k)][mu] / g.g_cell[mu])});
        prog.constraints.push_back(std::move(bc));

        Constraint sc;
        sc.tag = {Family::SinrCell, -1, m, -1};
        sc.affine.terms = {{iv(m), -1.0}, {ic(m), -1.0}};
        sc.affine.constant = ln_gc;
        prog.constraints.push_back(std::move(sc));

        Constraint cap;
        cap.tag = {Family::CellPowerCap, -1, m, -1};
        cap.affine.terms = {{iv(m), 1.0}};
        cap.affine.constant = -ln_pc_max;
        prog.constraints.push_back(std::move(cap));
    }
    for (int j = 0; j < A; ++j) {
        const int k = actives[size_t(j)].k;
        const int m = actives[size_t(j)].m;
        const auto ku = static_cast<size_t>(k);
        const auto mu = static_cast<size_t>(m);
        for (int d = 0; d < instance.group_size(k); ++d) {
            const auto du = static_cast<size_t>(d);
            const double gs = g.g_d2d_self[ku][mu][du];
            Constraint bd;
            bd.tag = {Family::BetaD2D, k, m, d};
            bd.is_lse = true;
            bd.exps.push_back({{{ib(j), 1.0}}, std::log(rc.noise_mw / gs)});
            bd.exps.push_back({{{ib(j), 1.0}, {iv(m), 1.0}}, std::log(g.g_c2d[ku][mu][du] / gs)});
            for (int jp = 0; jp < A; ++jp) {
                if (jp == j || actives[size_t(jp)].m != m || actives[size_t(jp)].k == k) continue;
                bd.exps.push_back(
                    {{{ib(j), 1.0}, {iu(jp), 1.0}},
                     std::log(g.g_d2d_cross[ku][size_t(actives[size_t(jp)].k)][du] / gs)});
            }
            prog.constraints.push_back(std::move(bd));
        }
    }
    for (int k = 0; k < K; ++k) {
        if (row_count[size_t(k)] == 0) continue;
        Constraint budget;
        budget.tag = {Family::D2DBudget, k, -1, -1};
        budget.is_lse = true;
        for (int j = 0; j < A; ++j)
            if (actives[size_t(j)].k == k) budget.exps.push_back({{{iu(j), 1.0}}, -ln_pd_max});
        prog.constraints.push_back(std::move(budget));
    }

    prog.x_init.assign(size_t(prog.num_vars), 0.0);
    double v_lo = ln_pc_max;
    for (int m = 0; m < M; ++m)
        v_lo = std::min(v_lo, std::log(rc.gamma_cell * rc.noise_mw / g.g_cell[size_t(m)]));
    v_lo -= 5.0;
    for (int m = 0; m < M; ++m) {
        add_box(prog, iv(m), v_lo, ln_pc_max + 1.0);
        double denom = rc.noise_mw;
        for (int j = 0; j < A; ++j)
            if (actives[size_t(j)].m == m)
                denom += rc.p_max_d2d_mw * g.g_d2c[size_t(actives[size_t(j)].k)][size_t(m)];
        add_box(prog, ic(m), std::log(g.g_cell[size_t(m)] / denom) - 5.0,
                std::log(g.g_cell[size_t(m)] / rc.noise_mw) + 2.0);
        prog.x_init[size_t(iv(m))] = ln_pc_max - 0.5;
    }
    for (int j = 0; j < A; ++j) {
        const int k = actives[size_t(j)].k;
        const int m = actives[size_t(j)].m;
        const auto ku = static_cast<size_t>(k);
        const auto mu = static_cast<size_t>(m);
        add_box(prog, iu(j), std::log(gc.p_floor_on), ln_pd_max + std::log1p(config.epsilon) + 1.0);
        add_box(prog, ib(j), gc.b_lb[ku][mu] - 40.0, gc.b_ub[ku][mu] + 2.0);
        prog.x_init[size_t(iu(j))] =
            std::log(rc.p_max_d2d_mw / (2.0 * row_count[size_t(k)]));
    }
    // exact beta starts at the initial powers
    for (int m = 0; m < M; ++m) {
        double denom = rc.noise_mw;
        for (int j = 0; j < A; ++j)
            if (actives[size_t(j)].m == m)
                denom += std::exp(prog.x_init[size_t(iu(j))]) *
                         g.g_d2c[size_t(actives[size_t(j)].k)][size_t(m)];
        prog.x_init[size_t(ic(m))] = std::log(g.g_cell[size_t(m)] / denom) - 0.1;
    }
    for (int j = 0; j < A; ++j) {
        const int k = actives[size_t(j)].k;
        const int m = actives[size_t(j)].m;
        const auto ku = static_cast<size_t>(k);
        const auto mu = static_cast<size_t>(m);
        double bound = std::numeric_limits<double>::infinity();
        for (int d = 0; d < instance.group_size(k); ++d) {
            const auto du = static_cast<size_t>(d);
            double denom = rc.noise_mw + std::exp(prog.x_init[size_t(iv(m))]) * g.g_c2d[ku][mu][du];
            for (int jp = 0; jp < A; ++jp) {
                if (jp == j || actives[size_t(jp)].m != m || actives[size_t(jp)].k == k) continue;
                denom += std::exp(prog.x_init[size_t(iu(jp))]) *
                         g.g_d2d_cross[ku][size_t(actives[size_t(jp)].k)][du];
            }
            bound = std::min(bound, std::log(g.g_d2d_self[ku][mu][du] / denom));
        }
        prog.x_init[size_t(ib(j))] = bound - 0.1;
    }

    for (int j = 0; j < A; ++j) {
        const double a = gc.a[size_t(actives[size_t(j)].k)];
        prog.objective.terms.push_back({iu(j), a});
        prog.objective.terms.push_back({ib(j), a});
    }
    for (int m = 0; m < M; ++m) {
        prog.objective.terms.push_back({iv(m), 1.0 / kLn2});
        prog.objective.terms.push_back({ic(m), 1.0 / kLn2});
    }
    return prog;
}

}  // namespace

PrimalOutcome solve_primal(const NetworkInstance& instance, const BinaryMatrix& y,
                           const SolverConfig& config) {
    PrimalOutcome out;
    const GateConstants gc = compute_gate_constants(instance, config);
    std::vector<ActivePair> actives;
    out.program = build_primal_reduced(instance, y, config, gc, actives);
    out.solution = solve(out.program, config.barrier);
    out.status = out.solution.status;
    if (out.status != SolveStatus::Optimal) return out;

    const int K = instance.num_groups();
    const int M = instance.num_channels();
    out.assignment.y = y;
    out.assignment.p_d2d.assign(size_t(K), std::vector<double>(size_t(M), 0.0));
    out.assignment.p_cell.assign(size_t(M), 0.0);
    const int A = static_cast<int>(actives.size());
    for (int j = 0; j < A; ++j)
        out.assignment.p_d2d[size_t(actives[size_t(j)].k)][size_t(actives[size_t(j)].m)] =
            std::exp(out.solution.x[size_t(2 * j)]);
    for (int m = 0; m < M; ++m)
        out.assignment.p_cell[size_t(m)] = std::exp(out.solution.x[size_t(2 * A + m)]);
    out.objective = out.solution.objective;
    return out;
}

FeasibilityOutcome solve_primal_feasibility(const NetworkInstance& instance, const BinaryMatrix& y,
                                            const SolverConfig& config) {
    FeasibilityOutcome out;
    const GateConstants gc = compute_gate_constants(instance, config);
    std::vector<ActivePair> actives;
    out.program = build_primal_reduced(instance, y, config, gc, actives);
    out.solution = solve_l1(out.program, config.barrier);
    out.status = out.solution.status;
    out.alpha_sum = out.solution.alpha_sum;
    return out;
}

FeasibilitySolution solve_feasibility(const NetworkInstance& instance, const BinaryMatrix& y,
                                      const SolverConfig& config) {
    const ConvexProgram prog = build_primal(instance, y, config);
    return solve_l1(prog, config.barrier);
}

PairSolution solve_pair(const NetworkInstance& instance, int k, int m, const SolverConfig& config) {
    if (k < 0 || k >= instance.num_groups() || m < 0 || m >= instance.num_channels())
        throw std::invalid_argument("solve_pair: index out of range");
    const auto ku = static_cast<size_t>(k);
    const auto mu = static_cast<size_t>(m);
    const auto& g = instance.gains;
    const auto& rc = instance.constants;
    const int D = instance.group_size(k);

    ConvexProgram prog;
    prog.num_vars = 4;  // u, b, v, c
    const int U = 0, B = 1, V = 2, C = 3;
    const double ln_pd_max = std::log(rc.p_max_d2d_mw);
    const double ln_pc_max = std::log(rc.p_max_cell_mw);

    Constraint sinr_d;
    sinr_d.tag = {Family::SinrD2D, k, m, -1};
    sinr_d.affine.terms = {{U, -1.0}, {B, -1.0}};
    sinr_d.affine.constant = std::log(rc.gamma_d2d);
    prog.constraints.push_back(std::move(sinr_d));

    Constraint sinr_c;
    sinr_c.tag = {Family::SinrCell, -1, m, -1};
    sinr_c.affine.terms = {{V, -1.0}, {C, -1.0}};
    sinr_c.affine.constant = std::log(rc.gamma_cell);
    prog.constraints.push_back(std::move(sinr_c));

    Constraint bc;
    bc.tag = {Family::BetaCell, -1, m, -1};
    bc.is_lse = true;
    bc.exps.push_back({{{C, 1.0}}, std::log(rc.noise_mw / g.g_cell[mu])});
    bc.exps.push_back({{{C, 1.0}, {U, 1.0}}, std::log(g.g_d2c[ku][mu] / g.g_cell[mu])});
    prog.constraints.push_back(std::move(bc));

    double b_ub = std::numeric_limits<double>::infinity();
    double b_lb = std::numeric_limits<double>::infinity();
    for (int d = 0; d < D; ++d) {
        const auto du = static_cast<size_t>(d);
        const double gs = g.g_d2d_self[ku][mu][du];
        Constraint bd;
        bd.tag = {Family::BetaD2D, k, m, d};
        bd.is_lse = true;
        bd.exps.push_back({{{B, 1.0}}, std::log(rc.noise_mw / gs)});
        bd.exps.push_back({{{B, 1.0}, {V, 1.0}}, std::log(g.g_c2d[ku][mu][du] / gs)});
        prog.constraints.push_back(std::move(bd));
        b_ub = std::min(b_ub, std::log(gs / rc.noise_mw));
        b_lb = std::min(b_lb,
                        std::log(gs / (rc.noise_mw + rc.p_max_cell_mw * g.g_c2d[ku][mu][du])));
    }

    Constraint budget;
    budget.tag = {Family::D2DBudget, k, -1, -1};
    budget.is_lse = true;
    budget.exps.push_back({{{U, 1.0}}, -ln_pd_max});
    prog.constraints.push_back(std::move(budget));

    Constraint cap;
    cap.tag = {Family::CellPowerCap, -1, m, -1};
    cap.affine.terms = {{V, 1.0}};
    cap.affine.constant = -ln_pc_max;
    prog.constraints.push_back(std::move(cap));

    add_box(prog, U, ln_pd_max - 100.0, ln_pd_max + 1.0);
    add_box(prog, B, b_lb - 40.0, b_ub + 2.0);
    const double v_lo =
        std::min(ln_pc_max, std::log(rc.gamma_cell * rc.noise_mw / g.g_cell[mu])) - 5.0;
    add_box(prog, V, v_lo, ln_pc_max + 1.0);
    const double c_lb =
        std::log(g.g_cell[mu] / (rc.noise_mw + rc.p_max_d2d_mw * g.g_d2c[ku][mu]));
    add_box(prog, C, c_lb - 5.0, std::log(g.g_cell[mu] / rc.noise_mw) + 2.0);

    prog.x_init = {ln_pd_max - 0.7, 0.0, ln_pc_max - 0.7, 0.0};
    {
        double bound = std::numeric_limits<double>::infinity();
        for (int d = 0; d < D; ++d) {
            const auto du = static_cast<size_t>(d);
            bound = std::min(bound, std::log(g.g_d2d_self[ku][mu][du] /
                                             (rc.noise_mw + std::exp(prog.x_init[size_t(V)]) *
                                                                g.g_c2d[ku][mu][du])));
        }
        prog.x_init[size_t(B)] = bound - 0.1;
        prog.x_init[size_t(C)] =
            std::log(g.g_cell[mu] /
                     (rc.noise_mw + std::exp(prog.x_init[size_t(U)]) * g.g_d2c[ku][mu])) - 0.1;
    }

    const double a = instance.group_size(k) / kLn2;
    prog.objective.terms = {{U, a}, {B, a}, {V, 1.0 / kLn2}, {C, 1.0 / kLn2}};

    const PrimalSolution sol = solve(prog, config.barrier);
    PairSolution out;
    if (sol.status != SolveStatus::Optimal) return out;

    out.feasible = true;
    out.p_d2d = std::exp(sol.x[size_t(U)]);
    out.p_cell = std::exp(sol.x[size_t(V)]);
    double beta_d = std::numeric_limits<double>::infinity();
    for (int d = 0; d < D; ++d) {
        const auto du = static_cast<size_t>(d);
        beta_d = std::min(beta_d, g.g_d2d_self[ku][mu][du] /
                                      (rc.noise_mw + out.p_cell * g.g_c2d[ku][mu][du]));
    }
    const double beta_c = g.g_cell[mu] / (rc.noise_mw + out.p_d2d * g.g_d2c[ku][mu]);
    out.rate_d2d = D * std::log2(out.p_d2d * beta_d);
    out.rate_cell = std::log2(out.p_cell * beta_c);
    out.objective = out.rate_d2d + out.rate_cell;
    return out;
}

}  // namespace d2d::convex
