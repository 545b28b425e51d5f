#include "jumprep/law.hpp"

#include "jumprep/errors.hpp"
#include "jumprep/rng.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace jumprep {

namespace {
constexpr double kMassTolerance = 1e-12;
constexpr double kSupportFloor = 1e-14;
} // namespace

JumpLaw::JumpLaw(MarkSpace marks, TimeGrid grid, std::vector<DensityComponent> density,
                 std::vector<LawAtom> atoms, double mass_at_infinity)
    : marks_(std::move(marks)),
      grid_(grid),
      density_(std::move(density)),
      atoms_(std::move(atoms)),
      mass_at_infinity_(mass_at_infinity) {
    if (!(grid_.horizon > 0.0) || grid_.steps == 0)
        throw ValidationError("JumpLaw grid must have positive horizon and steps");
    if (mass_at_infinity_ < -kMassTolerance)
        throw ValidationError("mass_at_infinity must be nonnegative");
    for (const auto& c : density_) {
        if (c.mark >= marks_.size()) throw ValidationError("density component on unknown mark");
        if (!c.intensity) throw ValidationError("density component without intensity");
    }
    // Atom times nondecreasing, one atom per (time, mark), inside ]0, t_max].
    std::set<std::pair<double, std::size_t>> seen;
    double previous = 0.0;
    for (const auto& a : atoms_) {
        if (a.mark >= marks_.size()) throw ValidationError("atom on unknown mark");
        if (!(a.time > 0.0) || a.time > grid_.horizon)
            throw ValidationError("atom time must lie in ]0, t_max]");
        if (a.time < previous) throw ValidationError("atom times must be nondecreasing");
        if (!seen.insert({a.time, a.mark}).second)
            throw ValidationError("duplicate atom at one (time, mark)");
        if (a.mass < 0.0) throw ValidationError("atom mass must be nonnegative");
        previous = a.time;
    }

    density_cumulative_.resize(marks_.size());
    density_total_mass_.assign(marks_.size(), 0.0);
    for (std::size_t z = 0; z < marks_.size(); ++z) {
        auto f = [this, z](double t) { return this->density(t, z); };
        density_cumulative_[z] = cumulative_integral(f, grid_);
        density_total_mass_[z] = density_cumulative_[z].back();
        for (std::size_t i = 0; i + 1 < density_cumulative_[z].size(); ++i)
            if (density_cumulative_[z][i + 1] < density_cumulative_[z][i] - kSupportFloor)
                throw ValidationError("negative density mass on mark " + marks_.at(z).label);
    }

    double total = mass_at_infinity_;
    for (double m : density_total_mass_) total += m;
    for (const auto& a : atoms_) total += a.mass;
    if (std::fabs(total - 1.0) > kMassTolerance)
        throw ValidationError("JumpLaw total mass is " + std::to_string(total) +
                              ", expected 1 within 1e-12");

    // c = inf{t : F_t = 0}, located on the knot set (grid nodes and atom times).
    if (mass_at_infinity_ > kSupportFloor) {
        cutoff_ = std::numeric_limits<double>::infinity();
    } else {
        std::vector<double> knots;
        knots.reserve(grid_.steps + 1 + atoms_.size());
        for (std::size_t i = 0; i <= grid_.steps; ++i) knots.push_back(grid_.node(i));
        for (const auto& a : atoms_) knots.push_back(a.time);
        std::sort(knots.begin(), knots.end());
        cutoff_ = std::numeric_limits<double>::infinity();
        for (double t : knots) {
            if (survival_all(t) <= kSupportFloor) {
                cutoff_ = t;
                break;
            }
        }
    }
}

double JumpLaw::density(double t, std::size_t mark) const {
    if (t < 0.0 || t > grid_.horizon) return 0.0;
    double v = 0.0;
    for (const auto& c : density_)
        if (c.mark == mark) v += c.intensity(t);
    return v;
}

double JumpLaw::density_total(double t) const {
    double v = 0.0;
    for (std::size_t z = 0; z < marks_.size(); ++z) v += density(t, z);
    return v;
}

double JumpLaw::density_mass_upto(double t, std::size_t mark) const {
    auto f = [this, mark](double s) { return density(s, mark); };
    return jumprep::cumulative_at(density_cumulative_[mark], grid_, f, t);
}

double JumpLaw::mass_upto(double t, std::size_t mark) const {
    double m = density_mass_upto(t, mark);
    for (const auto& a : atoms_)
        if (a.time <= t && a.mark == mark) m += a.mass;
    return m;
}

double JumpLaw::mass_upto(double t) const {
    double m = 0.0;
    for (std::size_t z = 0; z < marks_.size(); ++z) m += density_mass_upto(t, z);
    for (const auto& a : atoms_)
        if (a.time <= t) m += a.mass;
    return m;
}

double JumpLaw::survival(double t, std::span<const std::size_t> mark_subset,
                         bool include_no_jump) const {
    double tail = include_no_jump ? mass_at_infinity_ : 0.0;
    for (std::size_t z : mark_subset) {
        if (z >= marks_.size()) throw ValidationError("survival: mark index out of range");
        tail += density_total_mass_[z] - density_mass_upto(t, z);
    }
    for (const auto& a : atoms_) {
        if (a.time <= t) continue;
        for (std::size_t z : mark_subset)
            if (a.mark == z) tail += a.mass;
    }
    return std::max(0.0, tail);
}

double JumpLaw::survival_left(double t, std::span<const std::size_t> mark_subset,
                              bool include_no_jump) const {
    double tail = survival(t, mark_subset, include_no_jump);
    for (const auto& a : atoms_) {
        if (a.time != t) continue;
        for (std::size_t z : mark_subset)
            if (a.mark == z) tail += a.mass;
    }
    return tail;
}

double JumpLaw::survival_all(double t) const {
    double tail = mass_at_infinity_;
    for (std::size_t z = 0; z < marks_.size(); ++z)
        tail += density_total_mass_[z] - density_mass_upto(t, z);
    for (const auto& a : atoms_)
        if (a.time > t) tail += a.mass;
    return std::max(0.0, tail);
}

double JumpLaw::survival_all_left(double t) const {
    double tail = survival_all(t);
    for (const auto& a : atoms_)
        if (a.time == t) tail += a.mass;
    return tail;
}

double JumpLaw::integrate(const std::function<double(double, std::size_t)>& f, double t) const {
    double total = 0.0;
    for (std::size_t z = 0; z < marks_.size(); ++z) {
        bool charged = false;
        for (const auto& c : density_) charged = charged || c.mark == z;
        if (!charged) continue;
        auto fz = [this, &f, z](double s) { return f(s, z) * density(s, z); };
        const double limit = std::min(t, grid_.horizon);
        if (limit > 0.0) {
            const std::size_t full_cells = grid_.cell_of(limit);
            for (std::size_t i = 0; i < full_cells; ++i)
                total += gauss3(fz, grid_.node(i), grid_.node(i + 1));
            if (limit > grid_.node(full_cells))
                total += gauss3(fz, grid_.node(full_cells), limit);
        }
    }
    for (const auto& a : atoms_)
        if (a.time <= t) total += f(a.time, a.mark) * a.mass;
    return total;
}

double JumpLaw::integrate(const std::function<double(double, std::size_t)>& f) const {
    return integrate(f, grid_.horizon);
}

std::vector<double> JumpLaw::cumulative(
    const std::function<double(double, std::size_t)>& f) const {
    std::vector<double> table(grid_.steps + 1, 0.0);
    for (std::size_t i = 0; i < grid_.steps; ++i) {
        const double a = grid_.node(i);
        const double b = grid_.node(i + 1);
        double cell = 0.0;
        for (std::size_t z = 0; z < marks_.size(); ++z) {
            bool charged = false;
            for (const auto& c : density_) charged = charged || c.mark == z;
            if (!charged) continue;
            auto fz = [this, &f, z](double s) { return f(s, z) * density(s, z); };
            cell += gauss3(fz, a, b);
        }
        for (const auto& atom : atoms_)
            if (atom.time > a && atom.time <= b) cell += f(atom.time, atom.mark) * atom.mass;
        table[i + 1] = table[i] + cell;
    }
    return table;
}

double JumpLaw::cumulative_at(const std::vector<double>& table,
                              const std::function<double(double, std::size_t)>& f,
                              double t) const {
    if (t <= 0.0) return 0.0;
    if (t >= grid_.horizon) return table.back();
    const std::size_t cell = grid_.cell_of(t);
    const double a = grid_.node(cell);
    double value = table[cell];
    if (t > a) {
        for (std::size_t z = 0; z < marks_.size(); ++z) {
            bool charged = false;
            for (const auto& c : density_) charged = charged || c.mark == z;
            if (!charged) continue;
            auto fz = [this, &f, z](double s) { return f(s, z) * density(s, z); };
            value += gauss3(fz, a, t);
        }
        for (const auto& atom : atoms_)
            if (atom.time > a && atom.time <= t) value += f(atom.time, atom.mark) * atom.mass;
    }
    return value;
}

double JumpLaw::invert_density_mass(std::size_t mark, double target) const {
    const auto& table = density_cumulative_[mark];
    auto it = std::upper_bound(table.begin(), table.end(), target);
    std::size_t cell = it == table.begin()
                           ? 0
                           : static_cast<std::size_t>(std::distance(table.begin(), it)) - 1;
    if (cell >= grid_.steps) cell = grid_.steps - 1;
    auto f = [this, mark](double s) { return density(s, mark); };
    double lo = grid_.node(cell);
    double hi = grid_.node(cell + 1);
    const double base = table[cell];
    for (int iter = 0; iter < 60; ++iter) {
        const double mid = 0.5 * (lo + hi);
        if (base + gauss3(f, grid_.node(cell), mid) < target)
            lo = mid;
        else
            hi = mid;
    }
    return 0.5 * (lo + hi);
}

JumpEvent JumpLaw::sample(CounterStream& rng) const {
    double total = mass_at_infinity_;
    for (double m : density_total_mass_) total += m;
    for (const auto& a : atoms_) total += a.mass;

    double u = rng.uniform01() * total;
    for (std::size_t z = 0; z < marks_.size(); ++z) {
        if (u < density_total_mass_[z])
            return JumpEvent{invert_density_mass(z, u), z};
        u -= density_total_mass_[z];
    }
    for (const auto& a : atoms_) {
        if (u < a.mass) return JumpEvent{a.time, a.mark};
        u -= a.mass;
    }
    return JumpEvent::none();
}

SurvivalCurve::SurvivalCurve(std::shared_ptr<const JumpLaw> law,
                             std::vector<std::size_t> subset, bool include_no_jump)
    : law_(std::move(law)), subset_(std::move(subset)), include_no_jump_(include_no_jump) {
    if (!law_) throw ValidationError("SurvivalCurve requires a law");
}

SurvivalCurve SurvivalCurve::all_marks(std::shared_ptr<const JumpLaw> law) {
    std::vector<std::size_t> subset(law->marks().size());
    for (std::size_t i = 0; i < subset.size(); ++i) subset[i] = i;
    return SurvivalCurve(std::move(law), std::move(subset), true);
}

double SurvivalCurve::operator()(double t) const {
    return law_->survival(t, subset_, include_no_jump_);
}

double SurvivalCurve::left(double t) const {
    return law_->survival_left(t, subset_, include_no_jump_);
}

double SurvivalCurve::cutoff() const { return law_->cutoff(); }

double survival(const JumpLaw& law, double t, std::span<const std::string> labels) {
    std::vector<std::size_t> subset;
    subset.reserve(labels.size());
    for (const auto& l : labels) subset.push_back(law.marks().index_of(l));
    const bool all = subset.size() == law.marks().size();
    return law.survival(t, subset, all);
}

double survival_left(const JumpLaw& law, double t, std::span<const std::string> labels) {
    std::vector<std::size_t> subset;
    subset.reserve(labels.size());
    for (const auto& l : labels) subset.push_back(law.marks().index_of(l));
    const bool all = subset.size() == law.marks().size();
    return law.survival_left(t, subset, all);
}

} // namespace jumprep
