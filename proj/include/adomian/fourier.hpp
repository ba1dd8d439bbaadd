#pragma once

#include <cmath>
#include <cstdlib>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include "components.hpp"
#include "expr.hpp"

namespace adomian {

struct fourier_domain_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct quadrature_accuracy_error : std::runtime_error {
    cplx previous, last;
    quadrature_accuracy_error(const std::string& msg, cplx prev, cplx lst)
        : std::runtime_error(msg), previous(prev), last(lst) {}
};
struct cost_budget_error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Trapezoidal sampling of the circle: node counts, adaptivity, and the
/// budget guard for the nested recursive method. M must be a power of two.
struct QuadratureConfig {
    int nodes = 64;
    bool adaptive = true;
    double rel_tol = 1e-12;
    int max_nodes = 1 << 16;
    int recursive_nodes = 32;
    double cost_budget = double(1 << 25);

    void validate() const {
        auto pow2 = [](int m) { return m >= 8 && (m & (m - 1)) == 0; };
        if (!pow2(nodes)) throw std::invalid_argument("QuadratureConfig: nodes must be a power of two >= 8");
        if (!pow2(recursive_nodes))
            throw std::invalid_argument("QuadratureConfig: recursive_nodes must be a power of two >= 8");
        if (!(rel_tol > 0)) throw std::invalid_argument("QuadratureConfig: rel_tol must be positive");
    }

    int capped_max_nodes() const {
        int cap = max_nodes;
        if (const char* s = std::getenv("ADOMIAN_QUAD_MAX_M")) {
            char* end = nullptr;
            long v = std::strtol(s, &end, 10);
            if (end != s && v >= 8) cap = std::min<long>(cap, v);
        }
        return cap;
    }
};

/// (1/M) sum_m f(lambda_m) e^{-i n lambda_m} on the uniform grid
/// lambda_m = -pi + 2 pi m / M. Exact for trigonometric polynomials of
/// degree below M (modulo aliasing).
inline cplx fourier_mode(const std::function<cplx(double)>& f, int n, int M) {
    constexpr double pi = std::numbers::pi;
    cplx acc(0.0, 0.0);
    for (int m = 0; m < M; ++m) {
        double lam = -pi + 2.0 * pi * double(m) / double(M);
        acc += f(lam) * std::exp(cplx(0.0, -double(n) * lam));
    }
    return acc / double(M);
}

namespace detail {

/// Shared sampler: one compiled expression over (name, conj) slots, each slot
/// backed by a coefficient sequence evaluated as sum_k c_k e^{ik lambda}.
/// Conjugate slots use the stated coefficients with the same phase sign.
struct FourierEngine {
    std::vector<std::pair<std::string, bool>> slots;
    std::vector<std::vector<cplx>> coefs; // one sequence per slot
    CompiledExpr prog;
    bool guard_needed = false;

    FourierEngine(const Expr& N, const MultiComponentSet& c) {
        auto vars = free_variables(N);
        for (const auto& v : vars) slots.push_back(v);
        for (const auto& [name, conj] : slots) {
            const auto* seq = c.find(name);
            if (!seq)
                throw missing_component_error("no component sequence named '" + name + "'");
            if (!conj) {
                coefs.push_back(seq->u);
            } else if (seq->conj_u) {
                coefs.push_back(*seq->conj_u);
            } else {
                std::vector<cplx> cc(seq->u.size());
                for (std::size_t k = 0; k < cc.size(); ++k) cc[k] = std::conj(seq->u[k]);
                coefs.push_back(std::move(cc));
            }
        }
        prog = CompiledExpr::compile(N, slots);
        guard_needed = needs_domain_guard(N);
    }

    int max_index() const {
        std::size_t m = 1;
        for (const auto& s : coefs) m = std::max(m, s.size());
        return int(m) - 1;
    }

    void check_guard() const {
        if (!guard_needed) return;
        for (std::size_t i = 0; i < coefs.size(); ++i) {
            double tail = 0.0;
            for (std::size_t k = 1; k < coefs[i].size(); ++k) tail += std::abs(coefs[i][k]);
            if (coefs[i].empty() || !(tail < std::abs(coefs[i][0])))
                throw fourier_domain_error(
                    "domain guard violated for '" + slots[i].first +
                    "': sum of |u_k|, k>=1, must stay below |u_0| for this nonlinearity");
        }
    }

    cplx sample(double lam, std::vector<cplx>& slot_vals) const {
        cplx z = std::exp(cplx(0.0, lam));
        slot_vals.resize(slots.size());
        for (std::size_t i = 0; i < coefs.size(); ++i) {
            const auto& cs = coefs[i];
            cplx acc(0.0, 0.0);
            for (std::size_t k = cs.size(); k-- > 0;) acc = acc * z + cs[k];
            slot_vals[i] = acc;
        }
        return prog.eval(slot_vals);
    }

    /// One pass at M nodes: samples, their mean magnitude, and the selected
    /// Fourier modes.
    void modes_at(int M, const std::vector<int>& ns, std::vector<cplx>& out,
                  double& mean_mag) const {
        constexpr double pi = std::numbers::pi;
        std::vector<cplx> fs(static_cast<std::size_t>(M));
        std::vector<cplx> slot_vals;
        mean_mag = 0.0;
        for (int m = 0; m < M; ++m) {
            double lam = -pi + 2.0 * pi * double(m) / double(M);
            cplx v = sample(lam, slot_vals);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw fourier_domain_error("integrand singular at node " + std::to_string(m) +
                                           " (lambda=" + std::to_string(lam) + ")");
            fs[std::size_t(m)] = v;
            mean_mag += std::abs(v);
        }
        mean_mag /= double(M);
        out.assign(ns.size(), cplx(0.0, 0.0));
        for (std::size_t j = 0; j < ns.size(); ++j) {
            cplx acc(0.0, 0.0);
            for (int m = 0; m < M; ++m) {
                double lam = -pi + 2.0 * pi * double(m) / double(M);
                acc += fs[std::size_t(m)] * std::exp(cplx(0.0, -double(ns[j]) * lam));
            }
            out[j] = acc / double(M);
        }
    }

    std::vector<cplx> modes(const Expr& N, const std::vector<int>& ns,
                            const QuadratureConfig& q) const {
        q.validate();
        check_guard();
        int n_top = 0;
        for (int n : ns) n_top = std::max(n_top, std::abs(n));

        if (auto deg = polynomial_degree(N)) {
            // trigonometric polynomial: one exact pass, no adaptivity
            long long freq_top = *deg * std::max(1, max_index());
            int M = 8;
            while (M <= std::max<long long>(freq_top + 1, n_top)) M *= 2;
            std::vector<cplx> out;
            double mag = 0.0;
            modes_at(M, ns, out, mag);
            return out;
        }

        int M = std::max(q.nodes, 8);
        while (M <= n_top) M *= 2;
        std::vector<cplx> prev, cur;
        double mag = 0.0;
        modes_at(M, ns, prev, mag);
        if (!q.adaptive) return prev;
        const int cap = q.capped_max_nodes();
        while (2 * M <= cap) {
            M *= 2;
            modes_at(M, ns, cur, mag);
            bool ok = true;
            // once successive estimates differ by less than the summation's
            // own roundoff noise, further doubling cannot improve them
            const double noise_floor = 32.0 * std::numeric_limits<double>::epsilon() * mag;
            for (std::size_t j = 0; j < ns.size(); ++j) {
                double diff = std::abs(cur[j] - prev[j]);
                if (diff <= q.rel_tol * std::abs(cur[j])) continue;
                if (diff <= noise_floor) continue;
                ok = false;
                break;
            }
            if (ok) return cur;
            prev = cur;
        }
        throw quadrature_accuracy_error(
            "quadrature did not converge below rel_tol " + std::to_string(q.rel_tol) +
            " within " + std::to_string(cap) + " nodes",
            prev.empty() ? cplx{} : prev[0], cur.empty() ? cplx{} : cur[0]);
    }

    /// Nested recursion: A_n = (1/(2 n pi)) integral of A_{n-1} at shifted
    /// arguments v_k = c_k + (k+1) c_{k+1} e^{i lambda}, applied to every
    /// slot sequence (conjugates shift with the same phase).
    cplx recursive(int n, const QuadratureConfig& q) const {
        q.validate();
        check_guard();
        const int M = q.recursive_nodes;
        if (std::pow(double(M), double(n)) > q.cost_budget)
            throw cost_budget_error("recursive method cost " + std::to_string(M) + "^" +
                                    std::to_string(n) + " exceeds the configured budget");
        // level r holds the r+1 leading coefficients of each slot sequence
        std::vector<std::vector<std::vector<cplx>>> work(std::size_t(n) + 1);
        for (int r = 0; r <= n; ++r) {
            work[std::size_t(r)].resize(slots.size());
            for (auto& v : work[std::size_t(r)]) v.resize(std::size_t(r) + 1);
        }
        for (std::size_t i = 0; i < coefs.size(); ++i)
            for (int k = 0; k <= n; ++k)
                work[std::size_t(n)][i][std::size_t(k)] =
                    std::size_t(k) < coefs[i].size() ? coefs[i][std::size_t(k)] : cplx(0.0, 0.0);
        std::vector<cplx> slot_vals(slots.size());
        return recurse(n, work, slot_vals, M);
    }

private:
    cplx recurse(int r, std::vector<std::vector<std::vector<cplx>>>& work,
                 std::vector<cplx>& slot_vals, int M) const {
        constexpr double pi = std::numbers::pi;
        const auto& cur = work[std::size_t(r)];
        if (r == 0) {
            for (std::size_t i = 0; i < cur.size(); ++i) slot_vals[i] = cur[i][0];
            cplx v = prog.eval(slot_vals);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw fourier_domain_error("integrand singular inside recursive quadrature");
            return v;
        }
        cplx acc(0.0, 0.0);
        auto& next = work[std::size_t(r - 1)];
        for (int m = 0; m < M; ++m) {
            double lam = -pi + 2.0 * pi * double(m) / double(M);
            cplx z = std::exp(cplx(0.0, lam));
            for (std::size_t i = 0; i < cur.size(); ++i)
                for (int k = 0; k < r; ++k)
                    next[i][std::size_t(k)] =
                        cur[i][std::size_t(k)] + double(k + 1) * cur[i][std::size_t(k) + 1] * z;
            acc += recurse(r - 1, work, slot_vals, M) * std::exp(cplx(0.0, -lam));
        }
        return acc / (double(r) * double(M));
    }
};

inline std::string unique_base_variable(const Expr& N) {
    std::string name;
    for (const auto& [nm, conj] : free_variables(N)) {
        if (name.empty()) name = nm;
        else if (nm != name)
            throw std::invalid_argument("univariate backend expects one variable, found '" +
                                        name + "' and '" + nm + "'");
    }
    return name.empty() ? std::string("u") : name;
}

} // namespace detail

/// A_n as the n-th Fourier coefficient of N along the sampled circle. Uses
/// every supplied component; extra components beyond n leave the value
/// unchanged up to quadrature error.
inline cplx gen_fourier_direct(const Expr& N, const ComponentSet& c, int n,
                               const QuadratureConfig& q = {}) {
    if (n < 0) throw std::invalid_argument("gen_fourier_direct: n < 0");
    if (c.size() < std::size_t(n) + 1)
        throw missing_component_error("need at least n+1 components for order " +
                                      std::to_string(n));
    detail::FourierEngine eng(N, MultiComponentSet::single(detail::unique_base_variable(N), c));
    return eng.modes(N, {n}, q)[0];
}

/// All of A_0..A_n from shared sample passes.
inline std::vector<cplx> gen_fourier_direct_all(const Expr& N, const ComponentSet& c, int n,
                                                const QuadratureConfig& q = {}) {
    if (n < 0) throw std::invalid_argument("gen_fourier_direct_all: n < 0");
    if (c.size() < std::size_t(n) + 1)
        throw missing_component_error("need at least n+1 components for order " +
                                      std::to_string(n));
    std::vector<int> ns(std::size_t(n) + 1);
    for (int k = 0; k <= n; ++k) ns[std::size_t(k)] = k;
    detail::FourierEngine eng(N, MultiComponentSet::single(detail::unique_base_variable(N), c));
    return eng.modes(N, ns, q);
}

/// A_n by the nested one-mode recursion (depth n, cost M^n).
inline cplx gen_fourier_recursive(const Expr& N, const ComponentSet& c, int n,
                                  const QuadratureConfig& q = {}) {
    if (n < 1) throw std::invalid_argument("gen_fourier_recursive: n must be >= 1");
    if (c.size() < std::size_t(n) + 1)
        throw missing_component_error("need at least n+1 components for order " +
                                      std::to_string(n));
    detail::FourierEngine eng(
        N, MultiComponentSet::single(detail::unique_base_variable(N), c.truncated(n + 1)));
    return eng.recursive(n, q);
}

} // namespace adomian
