#include "sqzcool/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numeric>
#include <random>

#include <gsl/gsl_multimin.h>
#include <gsl/gsl_vector.h>

#include "sqzcool/errors.hpp"

namespace sqzcool {

namespace {

constexpr double kOutside = 1e12;

struct BoxObjective {
    const Objective* f;
    std::span<const Bound> bounds;
    int evaluations = 0;
    std::vector<double> scratch;

    double operator()(std::span<const double> x) {
        double outside = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            if (!std::isfinite(x[i])) return kOutside * 10.0;
            const double w = bounds[i].hi - bounds[i].lo;
            if (x[i] < bounds[i].lo) outside += (bounds[i].lo - x[i]) / w;
            if (x[i] > bounds[i].hi) outside += (x[i] - bounds[i].hi) / w;
        }
        if (outside > 0.0) return kOutside * (1.0 + outside);
        ++evaluations;
        const double v = (*f)(x);
        return std::isfinite(v) ? v : kOutside;
    }
};

double gsl_trampoline(const gsl_vector* v, void* params) {
    auto* box = static_cast<BoxObjective*>(params);
    box->scratch.assign(v->data, v->data + v->size);
    return (*box)(box->scratch);
}

struct VectorDeleter {
    void operator()(gsl_vector* v) const { gsl_vector_free(v); }
};
struct MinimizerDeleter {
    void operator()(gsl_multimin_fminimizer* m) const { gsl_multimin_fminimizer_free(m); }
};
using VectorPtr = std::unique_ptr<gsl_vector, VectorDeleter>;
using MinimizerPtr = std::unique_ptr<gsl_multimin_fminimizer, MinimizerDeleter>;

struct Candidate {
    std::vector<double> x;
    double value;
};

Candidate nelder_mead(BoxObjective& box, Candidate start, const OptimizerOptions& opt) {
    const std::size_t n = start.x.size();
    VectorPtr x0(gsl_vector_alloc(n));
    VectorPtr step(gsl_vector_alloc(n));
    double char_width = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double w = box.bounds[i].hi - box.bounds[i].lo;
        gsl_vector_set(x0.get(), i, start.x[i]);
        // Step towards the interior so the initial simplex stays in the box.
        const double room_up = box.bounds[i].hi - start.x[i];
        const double s = 0.1 * w;
        gsl_vector_set(step.get(), i, room_up >= s ? s : -s);
        char_width = std::max(char_width, w);
    }

    gsl_multimin_function fn;
    fn.n = n;
    fn.f = &gsl_trampoline;
    fn.params = &box;

    MinimizerPtr m(gsl_multimin_fminimizer_alloc(gsl_multimin_fminimizer_nmsimplex2, n));
    gsl_multimin_fminimizer_set(m.get(), &fn, x0.get(), step.get());
    for (int it = 0; it < opt.max_iterations; ++it) {
        if (gsl_multimin_fminimizer_iterate(m.get()) != GSL_SUCCESS) break;
        const double size = gsl_multimin_fminimizer_size(m.get());
        if (gsl_multimin_test_size(size, opt.simplex_tol * char_width) == GSL_SUCCESS) break;
    }
    Candidate out;
    const gsl_vector* xb = gsl_multimin_fminimizer_x(m.get());
    out.x.assign(xb->data, xb->data + n);
    out.value = gsl_multimin_fminimizer_minimum(m.get());
    if (out.value > start.value) return start;
    return out;
}

// Coordinate-wise 5-point grid around the incumbent, shrinking each round.
void grid_polish(BoxObjective& box, Candidate& best, int rounds) {
    const std::size_t n = best.x.size();
    double frac = 0.01;
    for (int r = 0; r < rounds; ++r, frac *= 0.25) {
        for (std::size_t i = 0; i < n; ++i) {
            const double h = frac * (box.bounds[i].hi - box.bounds[i].lo);
            Candidate trial = best;
            for (int k = -2; k <= 2; ++k) {
                if (k == 0) continue;
                std::vector<double> x = best.x;
                x[i] = std::clamp(best.x[i] + k * h, box.bounds[i].lo, box.bounds[i].hi);
                const double v = box(x);
                if (v < trial.value) trial = {std::move(x), v};
            }
            best = std::move(trial);
        }
    }
}

}  // namespace

OptimizeResult minimize_in_box(const Objective& f, std::span<const Bound> bounds,
                               const OptimizerOptions& opt, std::uint64_t seed,
                               double penalty_threshold) {
    const std::size_t n = bounds.size();
    if (n == 0) throw InvalidParameter("optimizer needs at least one free parameter");
    for (const auto& b : bounds) {
        if (!(std::isfinite(b.lo) && std::isfinite(b.hi) && b.lo < b.hi)) {
            throw InvalidParameter("bound '" + b.name + "' must be finite with lo < hi");
        }
    }
    if (opt.starts < 1) throw InvalidParameter("optimizer needs at least one start");

    BoxObjective box{&f, bounds, 0, {}};
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unit(0.0, 1.0);

    // Latin hypercube: one stratum per start in every coordinate.
    const auto starts = static_cast<std::size_t>(opt.starts);
    std::vector<std::vector<std::size_t>> strata(n);
    for (auto& s : strata) {
        s.resize(starts);
        std::iota(s.begin(), s.end(), 0);
        std::shuffle(s.begin(), s.end(), rng);
    }

    Candidate best{{}, std::numeric_limits<double>::infinity()};
    for (std::size_t k = 0; k < starts; ++k) {
        Candidate c;
        c.x.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            const double u = (static_cast<double>(strata[i][k]) + unit(rng)) / static_cast<double>(starts);
            c.x[i] = bounds[i].lo + u * (bounds[i].hi - bounds[i].lo);
        }
        c.value = box(c.x);
        for (int attempt = 0; c.value >= penalty_threshold && attempt < opt.reseed_attempts; ++attempt) {
            std::vector<double> x(n);
            for (std::size_t i = 0; i < n; ++i) x[i] = bounds[i].lo + unit(rng) * (bounds[i].hi - bounds[i].lo);
            const double v = box(x);
            if (v < c.value) c = {std::move(x), v};
        }
        if (c.value >= penalty_threshold) {
            if (c.value < best.value) best = c;
            continue;
        }
        Candidate local = nelder_mead(box, c, opt);
        // Restart once from the converged point; NM often stalls on ridges.
        local = nelder_mead(box, local, opt);
        if (local.value < best.value) best = std::move(local);
    }
    if (best.value < penalty_threshold) grid_polish(box, best, opt.polish_rounds);

    return {best.x, best.value, box.evaluations};
}

}  // namespace sqzcool
