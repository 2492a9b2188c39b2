#include "moskalloc/allocator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

#include "moskalloc/rng.hpp"

namespace moskalloc {

void OptimizationProblem::validate() const {
    if (users.size() < 2) throw std::invalid_argument("need at least two users");
    env.validate();
    for (const auto& u : users) u.validate();
    if (!(e_total > 0) || !std::isfinite(e_total))
        throw std::invalid_argument("e_total must be positive");
    if (!(ber_threshold > 0 && ber_threshold <= 1))
        throw std::invalid_argument("ber_threshold must lie in (0, 1]");
}

void GaSettings::validate() const {
    if (population_size < 4) throw std::invalid_argument("population_size must be >= 4");
    if (generations < 1) throw std::invalid_argument("generations must be >= 1");
    if (!(crossover_rate >= 0 && crossover_rate <= 1))
        throw std::invalid_argument("crossover_rate must lie in [0, 1]");
    if (!(mutation_rate >= 0 && mutation_rate <= 1))
        throw std::invalid_argument("mutation_rate must lie in [0, 1]");
    if (!(mutation_sigma >= 0)) throw std::invalid_argument("mutation_sigma must be >= 0");
    if (elite_count < 0 || elite_count >= population_size)
        throw std::invalid_argument("elite_count must lie in [0, population_size)");
    if (tournament_size < 1) throw std::invalid_argument("tournament_size must be >= 1");
    if (stagnation_window < 1) throw std::invalid_argument("stagnation_window must be >= 1");
    if (!(penalty_weight >= 0)) throw std::invalid_argument("penalty_weight must be >= 0");
}

namespace {

std::string fmt(double v) {
    std::ostringstream os;
    os.precision(12);
    os << v;
    return os.str();
}

std::vector<double> energy_caps(const OptimizationProblem& p) {
    std::vector<double> caps;
    caps.reserve(p.users.size());
    for (const auto& u : p.users) caps.push_back(max_valid_energy(u, p.env));
    return caps;
}

constexpr double kStallEpsilon = 1e-9;

} // namespace

ConstraintReport feasible(const OptimizationProblem& problem, const std::vector<double>& energies) {
    problem.validate();
    ConstraintReport rep;
    if (energies.size() != problem.users.size()) {
        rep.violations.push_back("allocation has " + std::to_string(energies.size()) +
                                 " entries for " + std::to_string(problem.users.size()) + " users");
        return rep;
    }
    const std::vector<double> caps = energy_caps(problem);
    double total = 0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
        const double e = energies[k];
        const std::string who = "user " + std::to_string(k + 1);
        if (!(e >= 0) || !std::isfinite(e)) {
            rep.violations.push_back(who + ": energy " + fmt(e) + " J is negative or non-finite");
            continue;
        }
        total += e;
        if (e >= caps[k]) {
            rep.violations.push_back(who + ": energy " + fmt(e) +
                                     " J outside the valid domain (limit " + fmt(caps[k]) + " J)");
            continue;
        }
        const double ber = transmitter_ber(problem.users[k], problem.env, e).ber;
        if (ber > problem.ber_threshold)
            rep.violations.push_back(who + ": ber " + fmt(ber) + " exceeds threshold " +
                                     fmt(problem.ber_threshold) + " by " +
                                     fmt(ber - problem.ber_threshold));
    }
    if (total > problem.e_total * (1.0 + 1e-12))
        rep.violations.push_back("budget exceeded: total " + fmt(total) + " J > " +
                                 fmt(problem.e_total) + " J");
    rep.ok = rep.violations.empty();
    return rep;
}

Allocation evaluate_allocation(const OptimizationProblem& problem,
                               const std::vector<double>& energies) {
    problem.validate();
    if (energies.size() != problem.users.size())
        throw std::invalid_argument("allocation size does not match user count");
    Allocation a;
    a.energies = energies;
    a.rho.reserve(energies.size());
    a.per_user_ber.reserve(energies.size());
    double total = 0;
    for (std::size_t k = 0; k < energies.size(); ++k) {
        a.rho.push_back(energies[k] / problem.e_total);
        const double ber = transmitter_ber(problem.users[k], problem.env, energies[k]).ber;
        a.per_user_ber.push_back(ber);
        total += ber;
    }
    a.total_ber = total;
    return a;
}

namespace {

template <typename F>
double golden_min(F&& f, double a, double b, double tol) {
    constexpr double invphi = 0.61803398874989484820458683436564;
    if (!(b - a > tol)) return 0.5 * (a + b);
    double x1 = b - invphi * (b - a);
    double x2 = a + invphi * (b - a);
    double f1 = f(x1), f2 = f(x2);
    while (b - a > tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - invphi * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + invphi * (b - a);
            f2 = f(x2);
        }
    }
    return 0.5 * (a + b);
}

// The feasible band in rho is an interval: user-1 BER falls and user-2 BER
// rises with rho, so each cap cuts off one side. Bisect an edge between a
// point violating it and a point satisfying it; returns the feasible side.
template <typename F>
double bisect_feasible_edge(F&& excess, double bad, double good) {
    for (int i = 0; i < 200 && std::abs(good - bad) > 1e-12; ++i) {
        const double mid = 0.5 * (bad + good);
        if (excess(mid) > 0)
            bad = mid;
        else
            good = mid;
    }
    return good;
}

} // namespace

Allocation optimize_two_user(const OptimizationProblem& problem) {
    problem.validate();
    if (problem.users.size() != 2)
        throw std::invalid_argument("optimize_two_user needs exactly two users");
    const TransmitterConfig& u1 = problem.users[0];
    const TransmitterConfig& u2 = problem.users[1];
    const double E = problem.e_total;
    const std::vector<double> caps = energy_caps(problem);

    const double lo = std::max(0.0, 1.0 - caps[1] / E);
    const double hi = std::min(1.0, caps[0] / E);
    if (!(lo < hi))
        throw std::domain_error("no thermodynamically valid split: every rho pushes a user "
                                "outside its energy domain");
    const double margin = (hi - lo) * 1e-9;

    const auto f = [&](double rho) { return two_user_total_ber(rho, E, u1, u2, problem.env); };
    const auto ber1 = [&](double rho) { return transmitter_ber(u1, problem.env, rho * E).ber; };
    const auto ber2 = [&](double rho) {
        return transmitter_ber(u2, problem.env, (1.0 - rho) * E).ber;
    };

    // coarse pass on the absolute millistep grid (hits 0.5 exactly when valid)
    double best_rho = std::numeric_limits<double>::quiet_NaN();
    double best_val = std::numeric_limits<double>::infinity();
    double best_feas_rho = std::numeric_limits<double>::quiet_NaN();
    double best_feas_val = std::numeric_limits<double>::infinity();
    const double thr = problem.ber_threshold;
    for (int k = 1; k <= 999; ++k) {
        const double rho = k * 1e-3;
        if (rho <= lo || rho >= hi) continue;
        const double b1 = ber1(rho), b2 = ber2(rho);
        const double val = b1 + b2;
        if (val < best_val) {
            best_val = val;
            best_rho = rho;
        }
        if (b1 <= thr && b2 <= thr && val < best_feas_val) {
            best_feas_val = val;
            best_feas_rho = rho;
        }
    }
    if (std::isnan(best_rho)) {
        const double mid = 0.5 * (lo + hi);
        best_rho = mid;
        best_val = f(mid);
        if (ber1(mid) <= thr && ber2(mid) <= thr) {
            best_feas_rho = mid;
            best_feas_val = best_val;
        }
    }

    double a = std::max(lo + margin, best_rho - 1e-3);
    double b = std::min(hi - margin, best_rho + 1e-3);
    bool clipped_by_threshold = false;

    if (std::isnan(best_feas_rho))
        throw InfeasibleError("no rho keeps both users at or under ber_threshold " + fmt(thr));
    if (best_feas_rho != best_rho) {
        // unconstrained optimum violates the cap: search inside the feasible
        // band [a_f, b_f] instead
        clipped_by_threshold = true;
        double a_f = lo + margin, b_f = hi - margin;
        if (ber1(a_f) > thr)
            a_f = bisect_feasible_edge([&](double r) { return ber1(r) - thr; }, a_f,
                                       best_feas_rho);
        if (ber2(b_f) > thr)
            b_f = bisect_feasible_edge([&](double r) { return ber2(r) - thr; }, b_f,
                                       best_feas_rho);
        a = std::max(a_f, best_feas_rho - 1e-3);
        b = std::min(b_f, best_feas_rho + 1e-3);
    }

    const double rho_star = golden_min(f, a, b, 1e-6);

    // closed-form derivative is available exactly in the regime the two-user
    // analysis assumes; use it to cross-check the bracketing result
    const bool derivative_applies = u1.c_init == 0.5 && u2.c_init == 0.5 &&
                                    u1.n_low == u1.n_high && u2.n_low == u2.n_high &&
                                    !clipped_by_threshold;
    if (derivative_applies) {
        const double h = 1e-4;
        if (rho_star - h > lo && rho_star + h < hi) {
            const double gl = two_user_ber_derivative(rho_star - h, E, u1, u2, problem.env);
            const double gr = two_user_ber_derivative(rho_star + h, E, u1, u2, problem.env);
            if (!(gl <= 0 && gr >= 0))
                throw std::runtime_error(
                    "two-user optimum failed the derivative cross-check: g(" +
                    fmt(rho_star - h) + ") = " + fmt(gl) + ", g(" + fmt(rho_star + h) +
                    ") = " + fmt(gr));
        }
    }

    return evaluate_allocation(problem, {rho_star * E, (1.0 - rho_star) * E});
}

std::vector<double> project_to_simplex(std::vector<double> v, double total) {
    // sort descending, take the last partial mean that keeps its own
    // coordinate positive, shift, clamp
    if (!(total > 0) || !std::isfinite(total))
        throw std::invalid_argument("projection total must be positive and finite");
    std::vector<double> u = v;
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0;
    double theta = 0;
    for (std::size_t j = 0; j < u.size(); ++j) {
        css += u[j];
        const double t = (css - total) / static_cast<double>(j + 1);
        if (u[j] - t > 0) theta = t;
    }
    for (double& x : v) x = std::max(0.0, x - theta);
    return v;
}

GaResult optimize_ga(const OptimizationProblem& problem, const GaSettings& settings) {
    problem.validate();
    settings.validate();
    const std::size_t K = problem.users.size();
    const std::size_t P = static_cast<std::size_t>(settings.population_size);
    const double E = problem.e_total;
    const std::vector<double> caps = energy_caps(problem);

    // fitness never throws: a share outside its user's valid domain behaves
    // like no energy at all (BER 1/2), which the search flees on its own
    const auto fitness = [&](const std::vector<double>& chrom) {
        double total = 0, penalty = 0;
        for (std::size_t k = 0; k < K; ++k) {
            const double e = chrom[k] * E;
            double ber = 0.5;
            if (e > 0 && e < caps[k]) ber = transmitter_ber(problem.users[k], problem.env, e).ber;
            total += ber;
            if (ber > problem.ber_threshold) penalty += ber - problem.ber_threshold;
        }
        return total + settings.penalty_weight * penalty;
    };

    std::vector<std::vector<double>> pop(P, std::vector<double>(K));
    for (std::size_t i = 0; i < P; ++i) {
        SplitMix64 rng = substream(settings.seed, 0, i);
        double sum = 0;
        for (double& g : pop[i]) {
            g = rng.next_unit();
            sum += g;
        }
        if (sum <= 0) sum = 1;
        for (double& g : pop[i]) g /= sum;
    }

    std::vector<double> fit(P);
    for (std::size_t i = 0; i < P; ++i) fit[i] = fitness(pop[i]);

    GaResult result;
    std::vector<double> best_history;
    std::vector<double> best_chrom;
    double best_fit = std::numeric_limits<double>::infinity();

    const auto record = [&](int gen) {
        double best = fit[0], sum = 0;
        for (double fv : fit) {
            best = std::min(best, fv);
            sum += fv;
        }
        result.trace.push_back({gen, best, sum / static_cast<double>(P)});
        best_history.push_back(best);
        for (std::size_t i = 0; i < P; ++i)
            if (fit[i] < best_fit) {
                best_fit = fit[i];
                best_chrom = pop[i];
            }
    };
    record(0);

    std::vector<std::size_t> order(P);
    int gen = 0;
    for (gen = 1; gen <= settings.generations; ++gen) {
        std::iota(order.begin(), order.end(), 0);
        std::stable_sort(order.begin(), order.end(),
                         [&](std::size_t a, std::size_t b) { return fit[a] < fit[b]; });

        std::vector<std::vector<double>> next(P);
        for (int e = 0; e < settings.elite_count; ++e)
            next[static_cast<std::size_t>(e)] = pop[order[static_cast<std::size_t>(e)]];

        for (std::size_t i = static_cast<std::size_t>(settings.elite_count); i < P; ++i) {
            SplitMix64 rng = substream(settings.seed, static_cast<std::uint64_t>(gen), i);
            const auto tournament = [&]() -> const std::vector<double>& {
                std::size_t winner = 0;
                double winner_fit = std::numeric_limits<double>::infinity();
                for (int t = 0; t < settings.tournament_size; ++t) {
                    const std::size_t idx =
                        std::min(P - 1, static_cast<std::size_t>(rng.next_unit() *
                                                                 static_cast<double>(P)));
                    if (fit[idx] < winner_fit) {
                        winner_fit = fit[idx];
                        winner = idx;
                    }
                }
                return pop[winner];
            };
            const std::vector<double>& pa = tournament();
            const std::vector<double>& pb = tournament();
            std::vector<double> child = pa;
            if (rng.next_unit() < settings.crossover_rate)
                for (std::size_t k = 0; k < K; ++k) {
                    const double lambda = rng.next_unit();
                    child[k] = lambda * pa[k] + (1.0 - lambda) * pb[k];
                }
            for (std::size_t k = 0; k < K; ++k)
                if (rng.next_unit() < settings.mutation_rate)
                    child[k] += settings.mutation_sigma * rng.next_normal();
            next[i] = project_to_simplex(std::move(child));
        }

        pop = std::move(next);
        for (std::size_t i = 0; i < P; ++i) fit[i] = fitness(pop[i]);
        record(gen);

        const std::size_t w = static_cast<std::size_t>(settings.stagnation_window);
        if (best_history.size() > w &&
            best_history[best_history.size() - 1 - w] - best_history.back() < kStallEpsilon) {
            result.stopped_early = true;
            break;
        }
    }
    result.generations_run = std::min(gen, settings.generations);

    std::vector<double> energies(K);
    for (std::size_t k = 0; k < K; ++k) energies[k] = best_chrom[k] * E;
    const ConstraintReport rep = feasible(problem, energies);
    if (!rep.ok) {
        std::string msg = "GA best individual violates hard constraints:";
        for (const auto& v : rep.violations) msg += "\n  " + v;
        throw InfeasibleError(msg);
    }
    result.allocation = evaluate_allocation(problem, energies);
    return result;
}

} // namespace moskalloc
