#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <vector>

#include "polynomial.hpp"
#include "rational.hpp"

namespace adomian {

/// Finite component vector u_0..u_n with optional explicit conjugate values.
/// Unset conjugates default to the elementwise complex conjugate.
struct ComponentSet {
    std::vector<cplx> u;
    std::optional<std::vector<cplx>> conj_u;

    std::size_t size() const { return u.size(); }

    cplx at(int k) const {
        if (k < 0 || std::size_t(k) >= u.size())
            throw missing_component_error("component u" + std::to_string(k) +
                                          " not supplied (have " + std::to_string(u.size()) +
                                          ")");
        return u[std::size_t(k)];
    }
    cplx conj_at(int k) const {
        if (conj_u) {
            if (k < 0 || std::size_t(k) >= conj_u->size())
                throw missing_component_error("component conj(u" + std::to_string(k) +
                                              ") not supplied");
            return (*conj_u)[std::size_t(k)];
        }
        return std::conj(at(k));
    }

    ComponentSet truncated(int count) const {
        ComponentSet out;
        out.u.assign(u.begin(), u.begin() + std::min<std::size_t>(count, u.size()));
        if (conj_u)
            out.conj_u = std::vector<cplx>(
                conj_u->begin(), conj_u->begin() + std::min<std::size_t>(count, conj_u->size()));
        return out;
    }
};

/// Components for several named sequences sharing one parameter.
struct MultiComponentSet {
    struct Seq {
        std::string name;
        std::vector<cplx> u;
        std::optional<std::vector<cplx>> conj_u;
    };
    std::vector<Seq> seqs;

    const Seq* find(const std::string& name) const {
        for (const auto& s : seqs)
            if (s.name == name) return &s;
        return nullptr;
    }

    cplx at(const CompKey& key) const {
        const Seq* s = find(key.seq);
        if (!s)
            throw missing_component_error("no component sequence named '" + key.seq + "'");
        if (key.index < 0 || std::size_t(key.index) >= s->u.size())
            throw missing_component_error("sequence '" + key.seq + "' has no index " +
                                          std::to_string(key.index));
        if (!key.conj) return s->u[std::size_t(key.index)];
        if (s->conj_u) {
            if (std::size_t(key.index) >= s->conj_u->size())
                throw missing_component_error("sequence '" + key.seq +
                                              "' has no conjugate index " +
                                              std::to_string(key.index));
            return (*s->conj_u)[std::size_t(key.index)];
        }
        return std::conj(s->u[std::size_t(key.index)]);
    }

    static MultiComponentSet single(std::string name, const ComponentSet& c) {
        MultiComponentSet m;
        m.seqs.push_back({std::move(name), c.u, c.conj_u});
        return m;
    }

    /// All sequences (and their explicit conjugates) must share one length.
    void require_rectangular() const {
        std::size_t len = seqs.empty() ? 0 : seqs[0].u.size();
        for (const auto& s : seqs) {
            if (s.u.size() != len || (s.conj_u && s.conj_u->size() != len))
                throw std::invalid_argument(
                    "component matrix must be rectangular; sequence '" + s.name +
                    "' breaks the shared length " + std::to_string(len));
        }
    }
};

// ---------------------------------------------------------------------------
// deterministic sampling (identical across platforms for a fixed seed)

/// Minimal xoshiro-free deterministic generator: splitmix64.
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }
    /// uniform in [0, 1)
    double next_unit() { return double(next_u64() >> 11) * 0x1.0p-53; }
    /// uniform in [lo, hi)
    double next_in(double lo, double hi) { return lo + (hi - lo) * next_unit(); }

private:
    std::uint64_t state_;
};

struct SampleOpts {
    double mod0_lo = 0.75;  // |u_0| range
    double mod0_hi = 1.5;
    double tail_radius = 0.5;  // |u_k| bound for k >= 1
    bool guard = false;        // keep sum_{k>=1} |u_k| < guard_ratio * |u_0|
    double guard_ratio = 0.7;
};

/// Random component vector. With the guard on, u_0 stays in the right
/// half-plane and the tail is rescaled so the sampled circle cannot reach
/// zero or cross the principal branch cut.
inline ComponentSet sample_components(DetRng& rng, int count, const SampleOpts& opts = {}) {
    constexpr double pi = std::numbers::pi;
    ComponentSet c;
    c.u.reserve(std::size_t(count));
    double m0 = rng.next_in(opts.mod0_lo, opts.mod0_hi);
    double a0 = opts.guard ? rng.next_in(-pi / 2, pi / 2) : rng.next_in(-pi, pi);
    c.u.push_back(cplx(m0 * std::cos(a0), m0 * std::sin(a0)));
    double tail = 0.0;
    for (int k = 1; k < count; ++k) {
        double r = opts.tail_radius * rng.next_unit();
        double a = rng.next_in(-pi, pi);
        c.u.push_back(cplx(r * std::cos(a), r * std::sin(a)));
        tail += r;
    }
    if (opts.guard && tail >= opts.guard_ratio * m0 && tail > 0.0) {
        double f = opts.guard_ratio * m0 / tail * 0.999;
        for (int k = 1; k < count; ++k) c.u[std::size_t(k)] *= f;
    }
    return c;
}

} // namespace adomian
