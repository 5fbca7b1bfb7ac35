#include "varlat/infimizer.hpp"

#include "varlat/functional.hpp"
#include "varlat/parallel.hpp"

#include <cmath>
#include <numbers>
#include <optional>

namespace varlat {

namespace {

bool parallel_to(const Vector& a, const Vector& b)
{
    if (a.size() != b.size()) return false;
    const double na = a.norm(), nb = b.norm();
    if (na == 0 || nb == 0) return false;
    return (a / na - b / nb).norm() <= 1e-12 && a.dot(b) > 0;
}

} // namespace

const SolveReport* InfimizerSet::find(const Vector& zeta) const
{
    for (const auto& e : entries)
        if (parallel_to(e.zeta, zeta)) return &e;
    return nullptr;
}

bool InfimizerSet::all_converged() const
{
    if (!failures.empty()) return false;
    for (const auto& e : entries)
        if (!e.converged) return false;
    return true;
}

InfimizerSet assemble_infimizer(const Lagrangian& L, const Cone& cone, const Boundary& boundary, DualBase base,
                                std::vector<SolveReport> entries, std::vector<SolveFailure> failures,
                                bool convexified)
{
    if (cone.dim() != L.criteria()) throw Error("cone dimension does not match the Lagrangian");
    std::vector<UpperSet> images;
    for (const auto& e : entries) images.push_back(UpperSet::point(cone, e.J_value, convexified));
    UpperSet image = images.empty() ? UpperSet::empty(cone, convexified) : lattice_inf(images);
    if (image.kind() == UpperSet::Kind::generated && convexified) image = image.with_profile_directions(base.samples);
    return InfimizerSet{L, cone, boundary, std::move(base), std::move(entries), std::move(failures), std::move(image)};
}

InfimizerSet build_infimizer(const Lagrangian& L, const Cone& cone, const Boundary& boundary, const DualBase& base,
                             const InfimizerOptions& options)
{
    if (base.samples.empty()) throw Error("dual base has no samples");
    const std::size_t count = base.samples.size();
    std::vector<std::optional<SolveReport>> slots(count);
    std::vector<std::string> errors(count);
    parallel_for(count, [&](std::size_t i) {
        try {
            slots[i] = solve_zeta(L, base.samples[i], boundary, options.solve);
        } catch (const std::exception& e) {
            errors[i] = e.what();
        }
    });
    std::vector<SolveReport> entries;
    std::vector<SolveFailure> failures;
    for (std::size_t i = 0; i < count; ++i) {
        if (slots[i])
            entries.push_back(std::move(*slots[i]));
        else
            failures.push_back({base.samples[i], errors[i]});
    }
    return assemble_infimizer(L, cone, boundary, base, std::move(entries), std::move(failures), options.convexified);
}

double phi(const InfimizerSet& M, const Vector& zeta, const Perturbation& v)
{
    if (M.entries.empty()) throw Error("infimizer has no entries");
    double best = kInfinity;
    for (const auto& e : M.entries) best = std::min(best, functional_Jzeta(M.L, zeta, e.arc + v));
    return best;
}

DirectionalDerivative phi_directional_derivative(const InfimizerSet& M, const Vector& zeta, const Perturbation& v,
                                                 double step)
{
    DirectionalDerivative out;
    out.entry = M.find(zeta);
    if (!out.entry) throw Error("no infimizer entry for the requested zeta");
    out.integral = weak_EL_residual(M.L, zeta, out.entry->arc, v);
    out.finite_difference = (phi(M, zeta, step * v) - phi(M, zeta, -step * v)) / (2.0 * step);
    return out;
}

UpperSet set_derivative(const InfimizerSet& M, const Vector& zeta, const Perturbation& v)
{
    return scalar_map_S(phi_directional_derivative(M, zeta, v).integral, zeta, M.cone);
}

UpperSet InfTranslation::value(const Perturbation& y) const
{
    std::vector<UpperSet> images;
    for (const auto& e : M_.entries)
        images.push_back(UpperSet::point(M_.cone, functional_J(M_.L, e.arc + y), M_.image_inf.convexified()));
    return lattice_inf(images);
}

double InfTranslation::phi_at_zero(const Vector& zeta) const
{
    std::vector<double> key(zeta.data(), zeta.data() + zeta.size());
    {
        std::lock_guard lock(mutex_);
        if (auto it = cache_.find(key); it != cache_.end()) return it->second;
    }
    const Grid& grid = M_.entries.at(0).arc.grid();
    const double value = varlat::phi(M_, zeta, Perturbation::zero(grid, M_.L.state_dim()));
    std::lock_guard lock(mutex_);
    cache_.emplace(std::move(key), value);
    return value;
}

CertificationReport certify_infimizer(const InfimizerSet& M, const std::vector<Arc>& trials, double tol)
{
    CertificationReport report;
    report.trials.resize(trials.size());
    parallel_for(trials.size(), [&](std::size_t i) {
        const Arc& y = trials[i];
        if (y.state_dim() != M.boundary.state_dim() || (y.node(0) - M.boundary.start).norm() > 1e-12 ||
            (y.node(y.grid().nodes() - 1) - M.boundary.end).norm() > 1e-12)
            throw Error("trial arc violates the boundary conditions");
        TrialResult r;
        r.J = functional_J(M.L, y);
        const double scaled = tol * (1.0 + r.J.lpNorm<Eigen::Infinity>());
        r.witness = most_violated(M.image_inf, r.J);
        r.member = r.witness.margin >= -scaled;
        report.trials[i] = std::move(r);
    });
    for (const auto& r : report.trials)
        if (!r.member) ++report.failures;
    report.passed = report.failures == 0;
    report.note = "image test only; convexity of M as a set of arcs is not verified";
    return report;
}

std::vector<Arc> random_trial_arcs(const Boundary& boundary, int interior, int count, std::uint64_t seed,
                                   double amplitude)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> g;
    const int n = boundary.state_dim();
    const Arc line = Arc::straight(boundary, interior);
    std::vector<Arc> out;
    for (int k = 0; k < count; ++k) {
        Matrix c(4, n);
        for (int m = 0; m < 4; ++m)
            for (int j = 0; j < n; ++j) c(m, j) = amplitude * g(rng) / (m + 1);
        const double len = boundary.b - boundary.a;
        auto bump = Perturbation::sample(line.grid(), n, [&](double t) {
            Vector v = Vector::Zero(n);
            for (int m = 0; m < 4; ++m) v += c.row(m).transpose() * std::sin((m + 1) * std::numbers::pi * (t - boundary.a) / len);
            return v;
        });
        out.push_back(line + bump);
    }
    return out;
}

Perturbation random_perturbation(const Grid& grid, int state_dim, std::mt19937_64& rng, int modes)
{
    std::normal_distribution<double> g;
    Matrix c(modes, state_dim);
    for (int m = 0; m < modes; ++m)
        for (int j = 0; j < state_dim; ++j) c(m, j) = g(rng) / (m + 1);
    const double len = grid.b - grid.a;
    auto v = Perturbation::sample(grid, state_dim, [&](double t) {
        Vector out = Vector::Zero(state_dim);
        for (int m = 0; m < modes; ++m) out += c.row(m).transpose() * std::sin((m + 1) * std::numbers::pi * (t - grid.a) / len);
        return out;
    });
    const double norm = v.values().cwiseAbs().maxCoeff();
    return norm > 0 ? v * (1.0 / norm) : v;
}

} // namespace varlat
