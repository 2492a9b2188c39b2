#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "moskalloc/allocator.hpp"
#include "moskalloc/ber.hpp"
#include "moskalloc/config.hpp"
#include "moskalloc/exact.hpp"
#include "moskalloc/thermo.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace moskalloc;

PYBIND11_MODULE(_moskalloc, m) {
    m.doc() = "fixed-budget energy allocation for two-reservoir molecular transmitters";

    py::register_exception<InfeasibleError>(m, "InfeasibleError", PyExc_RuntimeError);
    py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

    py::class_<Environment>(m, "Environment")
        .def(py::init<>())
        .def_readwrite("boltzmann_constant", &Environment::boltzmann_constant)
        .def_readwrite("temperature", &Environment::temperature)
        .def("kT", &Environment::kT);

    py::class_<TransmitterConfig>(m, "TransmitterConfig")
        .def(py::init<>())
        .def_readwrite("n_low", &TransmitterConfig::n_low)
        .def_readwrite("n_high", &TransmitterConfig::n_high)
        .def_readwrite("c_init", &TransmitterConfig::c_init)
        .def_readwrite("n_release", &TransmitterConfig::n_release)
        .def("n_total", &TransmitterConfig::n_total)
        .def("release_count_is_odd", &TransmitterConfig::release_count_is_odd);

    py::class_<ReservoirFractions>(m, "ReservoirFractions")
        .def(py::init<>())
        .def_readwrite("c_low", &ReservoirFractions::c_low)
        .def_readwrite("c_high", &ReservoirFractions::c_high)
        .def_readwrite("moved", &ReservoirFractions::moved)
        .def_readwrite("alpha", &ReservoirFractions::alpha)
        .def_readwrite("beta", &ReservoirFractions::beta)
        .def_readwrite("psi", &ReservoirFractions::psi)
        .def("within_small_move_domain", &ReservoirFractions::within_small_move_domain);

    m.def("energy_cost_exact", &energy_cost_exact, "cfg"_a, "env"_a, "moved"_a);
    m.def("moved_from_energy", &moved_from_energy, "cfg"_a, "env"_a, "energy"_a);
    m.def("fractions_after_energy", &fractions_after_energy, "cfg"_a, "env"_a, "energy"_a);
    m.def("max_valid_energy", &max_valid_energy, "cfg"_a, "env"_a);

    py::enum_<ThresholdMode>(m, "ThresholdMode")
        .value("continuous", ThresholdMode::continuous)
        .value("integer", ThresholdMode::integer);

    py::class_<SelectionStats>(m, "SelectionStats")
        .def(py::init<>())
        .def_readwrite("mu0", &SelectionStats::mu0)
        .def_readwrite("sigma0", &SelectionStats::sigma0)
        .def_readwrite("mu1", &SelectionStats::mu1)
        .def_readwrite("sigma1", &SelectionStats::sigma1);

    py::class_<BerReport>(m, "BerReport")
        .def(py::init<>())
        .def_readwrite("p_correct_0", &BerReport::p_correct_0)
        .def_readwrite("p_correct_1", &BerReport::p_correct_1)
        .def_readwrite("ber", &BerReport::ber);

    m.def("std_normal_cdf", &std_normal_cdf, "x"_a);
    m.def("selection_stats", &selection_stats, "cfg"_a, "fractions"_a);
    m.def("p_correct_bit0", &p_correct_bit0, "cfg"_a, "fractions"_a,
          "mode"_a = ThresholdMode::continuous);
    m.def("p_correct_bit1", &p_correct_bit1, "cfg"_a, "fractions"_a,
          "mode"_a = ThresholdMode::continuous);
    m.def("transmitter_ber", &transmitter_ber, "cfg"_a, "env"_a, "energy"_a,
          "mode"_a = ThresholdMode::continuous);
    m.def("two_user_total_ber", &two_user_total_ber, "rho"_a, "e_total"_a, "cfg1"_a, "cfg2"_a,
          "env"_a);
    m.def("two_user_ber_derivative", &two_user_ber_derivative, "rho"_a, "e_total"_a, "cfg1"_a,
          "cfg2"_a, "env"_a);

    py::class_<IntegerReservoirState>(m, "IntegerReservoirState")
        .def(py::init<>())
        .def_readwrite("k1_low", &IntegerReservoirState::k1_low)
        .def_readwrite("k2_low", &IntegerReservoirState::k2_low)
        .def_readwrite("k1_high", &IntegerReservoirState::k1_high)
        .def_readwrite("k2_high", &IntegerReservoirState::k2_high)
        .def("n_low", &IntegerReservoirState::n_low)
        .def("n_high", &IntegerReservoirState::n_high);

    m.def("build_state", &build_state, "cfg"_a, "env"_a, "energy"_a);
    m.def("hypergeom_sf", &hypergeom_sf, "population"_a, "successes"_a, "draws"_a, "threshold"_a);
    m.def("hypergeom_pmf", &hypergeom_pmf, "population"_a, "successes"_a, "draws"_a, "count"_a);
    m.def("hypergeom_tail_bit0", &hypergeom_tail_bit0, "state"_a, "cfg"_a);
    m.def("hypergeom_tail_bit1", &hypergeom_tail_bit1, "state"_a, "cfg"_a);

    py::class_<TrialStats>(m, "TrialStats")
        .def(py::init<>())
        .def_readwrite("trials", &TrialStats::trials)
        .def_readwrite("sent0", &TrialStats::sent0)
        .def_readwrite("sent1", &TrialStats::sent1)
        .def_readwrite("correct0", &TrialStats::correct0)
        .def_readwrite("correct1", &TrialStats::correct1)
        .def_readwrite("p_correct_0", &TrialStats::p_correct_0)
        .def_readwrite("p_correct_1", &TrialStats::p_correct_1)
        .def_readwrite("ber", &TrialStats::ber)
        .def_readwrite("ci_half_0", &TrialStats::ci_half_0)
        .def_readwrite("ci_half_1", &TrialStats::ci_half_1)
        .def_readwrite("ci_half_ber", &TrialStats::ci_half_ber)
        .def_readwrite("used_binomial_sampler", &TrialStats::used_binomial_sampler);

    m.def("run_trials", &run_trials, "state"_a, "cfg"_a, "n_trials"_a, "seed"_a, "threads"_a = 0,
          py::call_guard<py::gil_scoped_release>());

    py::class_<OptimizationProblem>(m, "OptimizationProblem")
        .def(py::init<>())
        .def_readwrite("users", &OptimizationProblem::users)
        .def_readwrite("env", &OptimizationProblem::env)
        .def_readwrite("e_total", &OptimizationProblem::e_total)
        .def_readwrite("ber_threshold", &OptimizationProblem::ber_threshold);

    py::class_<Allocation>(m, "Allocation")
        .def(py::init<>())
        .def_readwrite("energies", &Allocation::energies)
        .def_readwrite("rho", &Allocation::rho)
        .def_readwrite("per_user_ber", &Allocation::per_user_ber)
        .def_readwrite("total_ber", &Allocation::total_ber);

    py::class_<ConstraintReport>(m, "ConstraintReport")
        .def(py::init<>())
        .def_readwrite("ok", &ConstraintReport::ok)
        .def_readwrite("violations", &ConstraintReport::violations);

    py::class_<GaSettings>(m, "GaSettings")
        .def(py::init<>())
        .def_readwrite("population_size", &GaSettings::population_size)
        .def_readwrite("generations", &GaSettings::generations)
        .def_readwrite("crossover_rate", &GaSettings::crossover_rate)
        .def_readwrite("mutation_rate", &GaSettings::mutation_rate)
        .def_readwrite("mutation_sigma", &GaSettings::mutation_sigma)
        .def_readwrite("elite_count", &GaSettings::elite_count)
        .def_readwrite("tournament_size", &GaSettings::tournament_size)
        .def_readwrite("stagnation_window", &GaSettings::stagnation_window)
        .def_readwrite("penalty_weight", &GaSettings::penalty_weight)
        .def_readwrite("seed", &GaSettings::seed);

    py::class_<GenerationStats>(m, "GenerationStats")
        .def(py::init<>())
        .def_readwrite("generation", &GenerationStats::generation)
        .def_readwrite("best_fitness", &GenerationStats::best_fitness)
        .def_readwrite("mean_fitness", &GenerationStats::mean_fitness);

    py::class_<GaResult>(m, "GaResult")
        .def(py::init<>())
        .def_readwrite("allocation", &GaResult::allocation)
        .def_readwrite("trace", &GaResult::trace)
        .def_readwrite("generations_run", &GaResult::generations_run)
        .def_readwrite("stopped_early", &GaResult::stopped_early);

    m.def("feasible", &feasible, "problem"_a, "energies"_a);
    m.def("evaluate_allocation", &evaluate_allocation, "problem"_a, "energies"_a);
    m.def("optimize_two_user", &optimize_two_user, "problem"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("optimize_ga", &optimize_ga, "problem"_a, "settings"_a,
          py::call_guard<py::gil_scoped_release>());
    m.def("project_to_simplex", &project_to_simplex, "values"_a, "total"_a);

    py::class_<SweepSpec>(m, "SweepSpec")
        .def(py::init<>())
        .def_readwrite("variable", &SweepSpec::variable)
        .def_readwrite("start", &SweepSpec::start)
        .def_readwrite("stop", &SweepSpec::stop)
        .def_readwrite("step", &SweepSpec::step);

    py::class_<ExperimentConfig>(m, "ExperimentConfig")
        .def(py::init<>())
        .def_readwrite("env", &ExperimentConfig::env)
        .def_readwrite("users", &ExperimentConfig::users)
        .def_readwrite("energy_budget", &ExperimentConfig::energy_budget)
        .def_readwrite("ber_threshold", &ExperimentConfig::ber_threshold)
        .def_readwrite("sweep", &ExperimentConfig::sweep)
        .def_readwrite("ga", &ExperimentConfig::ga)
        .def_readwrite("seed", &ExperimentConfig::seed)
        .def_readwrite("trials", &ExperimentConfig::trials);

    m.def("load_config_file", &load_config_file, "path"_a);
    m.def("preset", &preset, "name"_a);
    m.def("preset_names", &preset_names);
}
