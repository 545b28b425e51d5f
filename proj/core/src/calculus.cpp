#include "jumprep/calculus.hpp"

#include "jumprep/errors.hpp"
#include "jumprep/parallel.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <set>

namespace jumprep {

namespace {

// Breakpoints for one path: grid nodes (only needed when a density part is
// present), event times, atom times, 0 and horizon.
std::vector<double> breakpoints(const JumpPath& path, const CompensatorSpec& comp,
                                const TimeGrid& grid) {
    std::set<double> pts;
    pts.insert(0.0);
    pts.insert(grid.horizon);
    if (comp.has_density())
        for (std::size_t i = 0; i <= grid.steps; ++i) pts.insert(grid.node(i));
    for (const auto& e : path.events)
        if (e.time <= grid.horizon) pts.insert(e.time);
    for (const auto& a : comp.atoms())
        if (a.time > 0.0 && a.time <= grid.horizon) pts.insert(a.time);
    return {pts.begin(), pts.end()};
}

} // namespace

MartingalePath stochastic_integral(const PredictableField& W, const JumpPath& path,
                                   const CompensatorSpec& comp, const TimeGrid& grid) {
    const auto pts = breakpoints(path, comp, grid);
    const std::size_t m = comp.num_marks();

    std::vector<PathPoint> out;
    out.reserve(pts.size());
    out.push_back({0.0, 0.0, 0.0});

    double value = 0.0;
    std::size_t ev_lt = 0; // events with time <  current point
    std::size_t ev_le = 0; // events with time <= current point
    const auto& events = path.events;
    auto view_lt = [&](double t) {
        while (ev_lt < events.size() && events[ev_lt].time < t) ++ev_lt;
        return PathView{std::span<const JumpEvent>(events.data(), ev_lt)};
    };
    auto view_le = [&](double t) {
        while (ev_le < events.size() && events[ev_le].time <= t) ++ev_le;
        return PathView{std::span<const JumpEvent>(events.data(), ev_le)};
    };

    std::size_t atom_idx = 0;
    const auto atoms = comp.atoms();

    for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
        const double a = pts[j];
        const double b = pts[j + 1];

        // density part on ]a, b]: left-point rule, past includes events at a
        if (comp.has_density()) {
            const PathView past = view_le(a);
            double rate_w = 0.0;
            for (std::size_t z = 0; z < m; ++z) {
                const double lambda = comp.hazard(a, z, past);
                if (lambda != 0.0) {
                    const double w = W(a, z, past);
                    if (!std::isfinite(w))
                        throw DiagnosticError("integrand not finite inside the support");
                    rate_w += w * lambda;
                }
            }
            value -= rate_w * (b - a);
        }

        // point contributions at b:  W(b,z) d(mu - mu_p)({b} x dz)
        double jump = 0.0;
        const PathView past_b = view_lt(b);
        auto ev = std::lower_bound(events.begin(), events.end(), b,
                                   [](const JumpEvent& e, double t) { return e.time < t; });
        if (ev != events.end() && ev->time == b) {
            const double w = W(b, ev->mark, past_b);
            if (!std::isfinite(w))
                throw DiagnosticError("integrand not finite at an event mark");
            jump += w;
        }
        while (atom_idx < atoms.size() && atoms[atom_idx].time < b) ++atom_idx;
        for (std::size_t k = atom_idx; k < atoms.size() && atoms[k].time == b; ++k) {
            const double mass = atoms[k].eval(past_b);
            if (mass != 0.0) jump -= W(b, atoms[k].mark, past_b) * mass;
        }

        value += jump;
        out.push_back({b, value, jump});
    }

    return MartingalePath(0.0, std::move(out));
}

QVMeasure optional_qv(const JumpPath& path, const CompensatorSpec& comp, const TimeGrid& grid) {
    QVMeasure qv;
    qv.kind_ = QvKind::optional_qv;
    qv.path_ = path;

    std::set<double> times;
    for (const auto& e : path.events)
        if (e.time > 0.0 && e.time <= grid.horizon) times.insert(e.time);
    for (const auto& a : comp.atoms())
        if (a.time > 0.0 && a.time <= grid.horizon) times.insert(a.time);

    for (double t : times) {
        QVMeasure::TimePoint pt;
        pt.time = t;
        const PathView past = strict_past(qv.path_, t);
        for (const auto& e : path.events)
            if (e.time == t) pt.mu.emplace_back(e.mark, 1.0);
        for (const auto& a : comp.atoms()) {
            if (a.time != t) continue;
            const double mass = a.eval(past);
            if (mass != 0.0) pt.mu_p.emplace_back(a.mark, mass);
        }
        if (!pt.mu.empty() || !pt.mu_p.empty()) qv.points_.push_back(std::move(pt));
    }
    return qv;
}

QVMeasure predictable_qv(const CompensatorSpec& comp, const JumpPath& path,
                         const TimeGrid& grid) {
    QVMeasure qv;
    qv.kind_ = QvKind::predictable_qv;
    qv.path_ = path;

    for (const auto& a : comp.atoms()) {
        if (!(a.time > 0.0) || a.time > grid.horizon) continue;
        const PathView past = strict_past(qv.path_, a.time);
        const double mass = a.eval(past);
        if (mass > 1.0 + 1e-12)
            throw ValidationError("compensator atom mass exceeds 1");
        if (mass == 0.0) continue;
        if (!qv.points_.empty() && qv.points_.back().time == a.time)
            qv.points_.back().mu_p.emplace_back(a.mark, mass);
        else {
            QVMeasure::TimePoint pt;
            pt.time = a.time;
            pt.mu_p.emplace_back(a.mark, mass);
            qv.points_.push_back(std::move(pt));
        }
    }

    if (comp.has_density()) {
        const auto pts = breakpoints(path, comp, grid);
        std::size_t ev_le = 0;
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            QVMeasure::Segment seg;
            seg.a = pts[j];
            seg.b = pts[j + 1];
            while (ev_le < path.events.size() && path.events[ev_le].time <= seg.a) ++ev_le;
            seg.past_events = ev_le;
            const PathView past{std::span<const JumpEvent>(qv.path_.events.data(), ev_le)};
            seg.rate.resize(comp.num_marks());
            for (std::size_t z = 0; z < comp.num_marks(); ++z)
                seg.rate[z] = comp.hazard(seg.a, z, past);
            qv.segments_.push_back(std::move(seg));
        }
    }
    return qv;
}

double QVMeasure::eval(double t, std::span<const std::size_t> subset) const {
    auto in_subset = [&](std::size_t z) {
        return std::find(subset.begin(), subset.end(), z) != subset.end();
    };
    double total = 0.0;
    if (kind_ == QvKind::predictable_qv) {
        for (const auto& seg : segments_) {
            if (seg.a >= t) break;
            const double len = std::min(seg.b, t) - seg.a;
            for (std::size_t z : subset) total += seg.rate[z] * len;
        }
    }
    for (const auto& pt : points_) {
        if (pt.time > t) break;
        double mu_b = 0.0;
        double mup_b = 0.0;
        for (const auto& [z, mass] : pt.mu)
            if (in_subset(z)) mu_b += mass;
        for (const auto& [z, mass] : pt.mu_p)
            if (in_subset(z)) mup_b += mass;
        if (kind_ == QvKind::optional_qv) {
            const double d = mu_b - mup_b;
            total += d * d;
        } else {
            total += mup_b - mup_b * mup_b;
        }
    }
    return total;
}

double QVMeasure::eval_all(double t) const {
    std::size_t m = 0;
    for (const auto& seg : segments_) m = std::max(m, seg.rate.size());
    for (const auto& pt : points_) {
        for (const auto& [z, mass] : pt.mu) m = std::max(m, z + 1);
        for (const auto& [z, mass] : pt.mu_p) m = std::max(m, z + 1);
    }
    std::vector<std::size_t> subset(m);
    for (std::size_t i = 0; i < m; ++i) subset[i] = i;
    return eval(t, subset);
}

double QVMeasure::weighted(const PredictableField& W, double t) const {
    double total = 0.0;
    if (kind_ == QvKind::predictable_qv) {
        for (const auto& seg : segments_) {
            if (seg.a >= t) break;
            const double len = std::min(seg.b, t) - seg.a;
            const PathView past{std::span<const JumpEvent>(path_.events.data(), seg.past_events)};
            for (std::size_t z = 0; z < seg.rate.size(); ++z) {
                if (seg.rate[z] == 0.0) continue;
                const double w = W(seg.a, z, past);
                total += w * w * seg.rate[z] * len;
            }
        }
    }
    for (const auto& pt : points_) {
        if (pt.time > t) break;
        const PathView past = strict_past(path_, pt.time);
        if (kind_ == QvKind::optional_qv) {
            double d = 0.0;
            for (const auto& [z, mass] : pt.mu) d += W(pt.time, z, past) * mass;
            for (const auto& [z, mass] : pt.mu_p) d -= W(pt.time, z, past) * mass;
            total += d * d;
        } else {
            double wq = 0.0;
            double w2q = 0.0;
            for (const auto& [z, mass] : pt.mu_p) {
                const double w = W(pt.time, z, past);
                wq += w * mass;
                w2q += w * w * mass;
            }
            total += w2q - wq * wq;
        }
    }
    return total;
}

QvCheckReport qv_pushforward_check(const PredictableField& W, const JumpPath& path,
                                   const CompensatorSpec& comp, const TimeGrid& grid) {
    QvCheckReport report;

    const MartingalePath integral = stochastic_integral(W, path, comp, grid);
    const QVMeasure opt = optional_qv(path, comp, grid);
    const QVMeasure pre = predictable_qv(comp, path, grid);

    // direct accumulation of <W*mu~> with the same left-point convention
    std::vector<double> checkpoints;
    for (std::size_t i = 0; i <= grid.steps; ++i) checkpoints.push_back(grid.node(i));

    for (double t : checkpoints) {
        const double lhs_opt = integral.quadratic_variation(t);
        const double rhs_opt = opt.weighted(W, t);
        report.max_optional_gap = std::max(report.max_optional_gap,
                                           std::fabs(lhs_opt - rhs_opt));
    }

    // predictable side: accumulate over the integral's breakpoints directly
    {
        const auto pts = breakpoints(path, comp, grid);
        std::size_t ev_le = 0;
        std::size_t ev_lt = 0;
        double running = 0.0;
        std::size_t check_idx = 0;
        auto compare_at = [&](std::size_t idx) {
            const double rhs = pre.weighted(W, checkpoints[idx]);
            report.max_predictable_gap =
                std::max(report.max_predictable_gap, std::fabs(running - rhs));
        };
        auto flush_before = [&](double t) {
            while (check_idx < checkpoints.size() && checkpoints[check_idx] < t)
                compare_at(check_idx++);
        };
        auto flush_through = [&](double t_done) {
            while (check_idx < checkpoints.size() && checkpoints[check_idx] <= t_done)
                compare_at(check_idx++);
        };
        flush_through(0.0);
        for (std::size_t j = 0; j + 1 < pts.size(); ++j) {
            const double a = pts[j];
            const double b = pts[j + 1];
            flush_before(b);
            if (comp.has_density()) {
                while (ev_le < path.events.size() && path.events[ev_le].time <= a) ++ev_le;
                const PathView past{std::span<const JumpEvent>(path.events.data(), ev_le)};
                for (std::size_t z = 0; z < comp.num_marks(); ++z) {
                    const double lambda = comp.hazard(a, z, past);
                    if (lambda != 0.0) {
                        const double w = W(a, z, past);
                        running += w * w * lambda * (b - a);
                    }
                }
            }
            while (ev_lt < path.events.size() && path.events[ev_lt].time < b) ++ev_lt;
            const PathView past_b{std::span<const JumpEvent>(path.events.data(), ev_lt)};
            double wq = 0.0;
            double w2q = 0.0;
            for (const auto& atom : comp.atoms()) {
                if (atom.time != b) continue;
                const double mass = atom.eval(past_b);
                if (mass == 0.0) continue;
                const double w = W(b, atom.mark, past_b);
                wq += w * mass;
                w2q += w * w * mass;
            }
            running += w2q - wq * wq;
            flush_through(b);
        }
        flush_through(grid.horizon);
    }

    return report;
}

bool IsometryEstimate::consistent(double se_band) const {
    const double combined = std::sqrt(lhs_se * lhs_se + rhs_se * rhs_se);
    return std::fabs(lhs - rhs) <= se_band * std::max(combined, 1e-300);
}

IsometryEstimate isometry_estimate(const PredictableField& W, const SimulableModel& model,
                                   std::size_t num_paths, std::uint64_t seed, int threads) {
    if (num_paths < 100)
        throw ValidationError("isometry_estimate needs at least 100 paths");

    const TimeGrid grid = model.grid();
    const CompensatorSpec& comp = model.compensator();

    // Fast path: a deterministic integrand against a history-free compensator
    // factors into "sum of W at events" minus a fixed drift curve.
    const bool fast = !W.history_dependent() && !comp.history_dependent();
    double fixed_drift = 0.0;
    double fixed_rhs = 0.0;
    std::vector<std::pair<double, double>> atom_terms; // (time, W*mass)
    if (fast) {
        if (comp.has_density()) {
            const double dt = grid.dt();
            for (std::size_t i = 0; i < grid.steps; ++i) {
                const double a = grid.node(i);
                for (std::size_t z = 0; z < comp.num_marks(); ++z) {
                    const double lambda = comp.hazard(a, z, {});
                    if (lambda != 0.0) {
                        const double w = W(a, z, {});
                        fixed_drift += w * lambda * dt;
                        fixed_rhs += w * w * lambda * dt;
                    }
                }
            }
        }
        for (const auto& atom : comp.atoms()) {
            if (!(atom.time > 0.0) || atom.time > grid.horizon) continue;
            const double mass = atom.eval({});
            const double w = W(atom.time, atom.mark, {});
            atom_terms.emplace_back(atom.time, w * mass);
            fixed_drift += w * mass;
            fixed_rhs += w * w * mass - w * mass * w * mass;
        }
    }

    std::vector<double> lhs(num_paths);
    std::vector<double> rhs(num_paths);
    parallel_for(num_paths, threads, [&](std::size_t i) {
        CounterStream rng(seed, i, stream_tag::events);
        const JumpPath path = model.sample_path(rng);
        if (fast) {
            double x = -fixed_drift;
            for (const auto& e : path.events)
                if (e.time > 0.0 && e.time <= grid.horizon) x += W(e.time, e.mark, {});
            lhs[i] = x * x;
            rhs[i] = fixed_rhs;
        } else {
            const MartingalePath integral = stochastic_integral(W, path, comp, grid);
            const QVMeasure pre = predictable_qv(comp, path, grid);
            const double x = integral.terminal();
            lhs[i] = x * x;
            rhs[i] = pre.weighted(W, grid.horizon);
        }
    });

    // crude divergence diagnostic on block means of the squared integral
    {
        const std::size_t blocks = 10;
        const std::size_t per = num_paths / blocks;
        double prev = 0.0;
        int growing = 0;
        for (std::size_t b = 0; b * per < num_paths && per > 0; ++b) {
            double s = 0.0;
            for (std::size_t i = b * per; i < std::min(num_paths, (b + 1) * per); ++i)
                s += lhs[i];
            s /= static_cast<double>(per);
            if (!std::isfinite(s))
                throw DiagnosticError("isometry estimator diverged (non-finite block mean)");
            if (b > 0 && s > 4.0 * prev && s > 1e6) ++growing;
            prev = s;
        }
        if (growing >= 8)
            throw DiagnosticError("isometry estimator diverged (running mean grows)");
    }

    const MeanSe l = mean_se(lhs);
    const MeanSe r = mean_se(rhs);
    IsometryEstimate est;
    est.lhs = l.mean;
    est.lhs_se = l.se;
    est.rhs = r.mean;
    est.rhs_se = r.se;
    est.num_paths = num_paths;
    return est;
}

} // namespace jumprep
