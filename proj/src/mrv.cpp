#include "dqlab/mrv.hpp"

#include "dqlab/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace dqlab {

SpectralMeasure::SpectralMeasure(std::vector<SpectralAtom> atoms, double tail_index)
    : atoms_(std::move(atoms)), gamma_(tail_index) {
    if (!(gamma_ > 0.0))
        throw std::invalid_argument("SpectralMeasure: tail index must be positive");
    if (atoms_.empty()) throw std::invalid_argument("SpectralMeasure: no atoms");
    const std::size_t n = atoms_.front().direction.size();
    double total = 0.0;
    for (const auto& atom : atoms_) {
        if (atom.direction.size() != n)
            throw std::invalid_argument("SpectralMeasure: inconsistent atom dimensions");
        if (!(atom.weight > 0.0))
            throw std::invalid_argument("SpectralMeasure: atom weights must be positive");
        double l1 = 0.0;
        for (double s : atom.direction) l1 += std::fabs(s);
        if (std::fabs(l1 - 1.0) > 1e-12)
            throw std::invalid_argument("SpectralMeasure: atom directions must have L1 norm 1");
        total += atom.weight;
    }
    if (std::fabs(total - 1.0) > 1e-12)
        throw std::invalid_argument("SpectralMeasure: atom weights must sum to 1");
}

SpectralMeasure SpectralMeasure::iid(std::size_t n, double tail_index) {
    if (n == 0) throw std::invalid_argument("SpectralMeasure::iid: n must be positive");
    std::vector<SpectralAtom> atoms(n);
    for (std::size_t i = 0; i < n; ++i) {
        atoms[i].direction.assign(n, 0.0);
        atoms[i].direction[i] = 1.0;
        atoms[i].weight = 1.0 / static_cast<double>(n);
    }
    double total = 0.0;
    for (const auto& a : atoms) total += a.weight;
    atoms[0].weight += 1.0 - total;
    return SpectralMeasure(std::move(atoms), tail_index);
}

double eta(std::span<const double> x, const SpectralMeasure& psi) {
    if (x.size() != psi.dimension())
        throw std::invalid_argument("eta: dimension mismatch");
    const double gamma = psi.tail_index();
    const bool integer_gamma = gamma == std::floor(gamma);
    double total = 0.0;
    for (const auto& atom : psi.atoms()) {
        double proj = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) proj += x[i] * atom.direction[i];
        if (proj < 0.0 && !integer_gamma)
            throw std::invalid_argument(
                "eta: negative projection with non-integer tail index");
        total += atom.weight * std::pow(proj, gamma);
    }
    return total;
}

double dq_limit_mrv(std::span<const double> w, const SpectralMeasure& psi) {
    const std::size_t n = psi.dimension();
    if (w.size() != n) throw std::invalid_argument("dq_limit_mrv: dimension mismatch");
    const double gamma = psi.tail_index();

    bool any_positive = false;
    for (double wi : w) {
        if (wi < 0.0) throw std::invalid_argument("dq_limit_mrv: negative weight");
        if (wi > 0.0) any_positive = true;
    }
    if (!any_positive) throw std::invalid_argument("dq_limit_mrv: all-zero weights");

    std::vector<double> unit(n, 0.0);
    double denom = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        unit.assign(n, 0.0);
        unit[i] = 1.0;
        const double eta_i = eta(unit, psi);
        if (!(eta_i > 0.0))
            throw std::invalid_argument("dq_limit_mrv: marginal eta must be positive");
        denom += w[i] * std::pow(eta_i, 1.0 / gamma);
    }
    return eta(w, psi) / std::pow(denom, gamma);
}

double dq_limit_mrv(const Weights& w, const SpectralMeasure& psi) {
    return dq_limit_mrv(w.values(), psi);
}

double dq_limit_iid(std::size_t n, double gamma) {
    if (n == 0) throw std::invalid_argument("dq_limit_iid: n must be positive");
    if (!(gamma > 0.0)) throw std::invalid_argument("dq_limit_iid: gamma must be positive");
    return std::pow(static_cast<double>(n), 1.0 - gamma);
}

double example2_f(const Weights& w, double r, double nu) {
    if (w.size() != 2) throw std::invalid_argument("example2_f: needs two weights");
    if (!(r >= 0.0 && r < 1.0)) throw std::invalid_argument("example2_f: r must lie in [0,1)");
    if (!(nu > 1.0)) throw std::invalid_argument("example2_f: nu must exceed 1");
    const double w1 = w[0];
    const double w2 = w[1];
    // eta_w / eta_{e1} and eta_{e2} / eta_{e1} of the factor model.
    const double e = std::pow(w1 + w2 * r, nu) + std::pow(w2 * std::sqrt(1.0 - r * r), nu);
    const double g = std::pow(r, nu) + std::pow(1.0 - r * r, 0.5 * nu);
    return e / std::pow(w1 + w2 * std::pow(g, 1.0 / nu), nu);
}

SpectralMeasure example2_spectral(double r, double nu) {
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("example2_spectral: r must lie in [0,1)");
    if (!(nu > 0.0)) throw std::invalid_argument("example2_spectral: nu must be positive");
    const double gain1 = std::pow(1.0 + r, nu);
    const double gain2 = std::pow(1.0 - r * r, 0.5 * nu);
    const double z = gain1 + gain2;
    std::vector<SpectralAtom> atoms(2);
    atoms[0].direction = {1.0 / (1.0 + r), r / (1.0 + r)};
    atoms[0].weight = gain1 / z;
    atoms[1].direction = {0.0, 1.0};
    atoms[1].weight = gain2 / z;
    atoms[1].weight += 1.0 - atoms[0].weight - atoms[1].weight;
    return SpectralMeasure(std::move(atoms), nu);
}

ScenarioMatrix sample_example2(double r, double nu, std::size_t count, std::uint64_t seed) {
    if (!(r >= 0.0 && r < 1.0))
        throw std::invalid_argument("sample_example2: r must lie in [0,1)");
    if (!(nu > 0.0)) throw std::invalid_argument("sample_example2: nu must be positive");
    const double root = std::sqrt(1.0 - r * r);
    ScenarioMatrix out(count, 2);
    for (std::size_t j = 0; j < count; ++j) {
        CounterRng rng(seed, j);
        double y[2];
        for (double& yi : y) {
            const double z = rng.next_gaussian();
            const double q = rng.next_chi_square(nu);
            yi = z * std::sqrt(nu / q);
        }
        auto row = out.row(j);
        row[0] = y[0];
        row[1] = r * y[0] + root * y[1];
    }
    return out;
}

} // namespace dqlab
