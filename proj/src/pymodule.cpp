#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "degseq/analysis.hpp"
#include "degseq/errors.hpp"
#include "degseq/multigraph.hpp"
#include "degseq/params.hpp"
#include "degseq/recurrence.hpp"
#include "degseq/rng.hpp"
#include "degseq/special.hpp"

namespace py = pybind11;
using namespace degseq;

PYBIND11_MODULE(_degseq, m) {
    m.doc() = "Evolving random graph process: preferential attachment with edge "
              "addition/deletion, its limiting degree sequences, and comparison tools";

    // base first: translators run newest-first, so derived types must come later
    py::register_exception<Error>(m, "DegseqError");
    py::register_exception<ConjecturedRegime>(m, "ConjecturedRegimeError");
    py::register_exception<DegenerateEpsilon>(m, "DegenerateEpsilonError");
    py::register_exception<UnstableEvaluation>(m, "UnstableEvaluationError");
    py::register_exception<QuadratureFailure>(m, "QuadratureFailureError");

    py::enum_<RegimeLabel>(m, "RegimeLabel")
        .value("PowerLaw", RegimeLabel::PowerLaw)
        .value("Exponential", RegimeLabel::Exponential)
        .value("Critical", RegimeLabel::Critical)
        .value("Conjectured", RegimeLabel::Conjectured);

    py::class_<ModelParams>(m, "ModelParams")
        .def_readonly("alpha", &ModelParams::alpha)
        .def_readonly("alpha1", &ModelParams::alpha1)
        .def_readonly("m", &ModelParams::m)
        .def_readonly("theorem_applicable", &ModelParams::theorem_applicable)
        .def("__repr__", [](const ModelParams& p) {
            return "ModelParams(alpha=" + std::to_string(p.alpha) +
                   ", alpha1=" + std::to_string(p.alpha1) + ", m=" + std::to_string(p.m) + ")";
        });

    py::class_<DerivedConstants>(m, "DerivedConstants")
        .def_readonly("alpha_c", &DerivedConstants::alpha_c)
        .def_readonly("eta", &DerivedConstants::eta)
        .def_readonly("epsilon", &DerivedConstants::epsilon)
        .def_readonly("rho_eps", &DerivedConstants::rho_eps)
        .def_property_readonly("beta",
                               [](const DerivedConstants& c) -> py::object {
                                   return c.beta ? py::cast(*c.beta) : py::none();
                               })
        .def_readonly("gamma", &DerivedConstants::gamma)
        .def_readonly("theta", &DerivedConstants::theta)
        .def_readonly("mu", &DerivedConstants::mu)
        .def_readonly("A0", &DerivedConstants::A0)
        .def_readonly("A1", &DerivedConstants::A1)
        .def_readonly("A2", &DerivedConstants::A2)
        .def_readonly("B0", &DerivedConstants::B0)
        .def_readonly("B1", &DerivedConstants::B1)
        .def_readonly("B2", &DerivedConstants::B2)
        .def_readonly("A", &DerivedConstants::A)
        .def_readonly("B", &DerivedConstants::B)
        .def_readonly("zeta", &DerivedConstants::zeta);

    m.def(
        "validate",
        [](double alpha, double alpha1, int mm) { return validate(alpha, alpha1, mm); },
        py::arg("alpha"), py::arg("alpha1"), py::arg("m"));
    m.def(
        "validate_exact",
        [](const std::string& alpha, const std::string& alpha1, int mm) {
            return validate(Rational::parse(alpha), Rational::parse(alpha1), mm);
        },
        py::arg("alpha"), py::arg("alpha1"), py::arg("m"),
        "validate with fractions like '3/5' so the critical line is exact");
    m.def("derive", &derive, py::arg("params"), py::arg("epsilon_fraction") = 0.1);
    m.def("classify", &classify, py::arg("params"));

    py::class_<RngStream>(m, "RngStream")
        .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("seed"), py::arg("stream"))
        .def("uniform01", &RngStream::uniform01);

    py::class_<MultigraphState>(m, "MultigraphState")
        .def_readonly("step", &MultigraphState::step)
        .def_property_readonly("edges", [](const MultigraphState& s) { return s.edges; })
        .def_property_readonly("degree", [](const MultigraphState& s) { return s.degree; })
        .def_property_readonly("vertices", &MultigraphState::vertex_count)
        .def_property_readonly("edge_count", &MultigraphState::edge_count)
        .def("max_degree", &MultigraphState::max_degree);

    py::class_<Edge>(m, "Edge")
        .def_readonly("u", &Edge::u)
        .def_readonly("v", &Edge::v)
        .def("__repr__", [](const Edge& e) {
            return "(" + std::to_string(e.u) + "," + std::to_string(e.v) + ")";
        });

    py::class_<StepOutcome> outcome(m, "StepOutcome");
    py::enum_<StepOutcome::Kind>(outcome, "Kind")
        .value("VertexAdded", StepOutcome::Kind::VertexAdded)
        .value("EdgesAdded", StepOutcome::Kind::EdgesAdded)
        .value("EdgesDeleted", StepOutcome::Kind::EdgesDeleted)
        .value("NoOp", StepOutcome::Kind::NoOp);
    outcome.def_readonly("kind", &StepOutcome::kind).def_readonly("count", &StepOutcome::count);

    py::class_<DegreeHistogram>(m, "DegreeHistogram")
        .def_readonly("t", &DegreeHistogram::t)
        .def_readonly("trial_id", &DegreeHistogram::trial_id)
        .def_readonly("counts", &DegreeHistogram::counts)
        .def("vertex_total", &DegreeHistogram::vertex_total)
        .def("degree_mass", &DegreeHistogram::degree_mass);

    py::class_<TrajectorySample>(m, "TrajectorySample")
        .def_readonly("t", &TrajectorySample::t)
        .def_readonly("edges", &TrajectorySample::edges)
        .def_readonly("vertices", &TrajectorySample::vertices)
        .def_readonly("max_degree", &TrajectorySample::max_degree);

    py::class_<TrialResult>(m, "TrialResult")
        .def_readonly("trial_id", &TrialResult::trial_id)
        .def_readonly("histograms", &TrialResult::histograms)
        .def_readonly("trajectory", &TrialResult::trajectory);

    m.def("init", &init);
    m.def("sample_preferential", &sample_preferential, py::arg("state"), py::arg("rng"));
    m.def(
        "advance",
        [](MultigraphState& s, const ModelParams& p, RngStream& r, int cold_start_edges) {
            SimOptions opts;
            opts.cold_start_edges = cold_start_edges;
            return advance(s, p, r, opts);
        },
        py::arg("state"), py::arg("params"), py::arg("rng"), py::arg("cold_start_edges") = 1);
    m.def(
        "run_trials",
        [](const ModelParams& p, std::int64_t horizon, int trials, std::uint64_t seed,
           const std::vector<std::int64_t>& snapshots, int cold_start_edges, int threads,
           std::int64_t trajectory_stride) {
            SimOptions opts;
            opts.cold_start_edges = cold_start_edges;
            opts.trajectory_stride = trajectory_stride;
            return run_trials(p, horizon, trials, seed, snapshots, opts, threads);
        },
        py::arg("params"), py::arg("horizon"), py::arg("trials"), py::arg("seed"),
        py::arg("snapshots"), py::arg("cold_start_edges") = 1, py::arg("threads") = 0,
        py::arg("trajectory_stride") = 0,
        py::call_guard<py::gil_scoped_release>());

    py::class_<KernelSpec> kernel(m, "KernelSpec");
    kernel.def_static("u1", &KernelSpec::u1, py::arg("beta"), py::arg("zeta"))
        .def_static("u2", &KernelSpec::u2, py::arg("beta"), py::arg("gamma"))
        .def_static("uc", &KernelSpec::uc, py::arg("mu"))
        .def_static("for_regime", &KernelSpec::for_regime, py::arg("regime"),
                    py::arg("constants"));
    m.def("eval_u", &eval_u, py::arg("kernel"), py::arg("k"), py::arg("rel_tol") = 1e-10);
    m.def("uc_closed_form", &uc_closed_form, py::arg("mu"), py::arg("k"),
          py::arg("k_ceiling") = 15);
    m.def("exponential_integral_e2", &exponential_integral_e2, py::arg("mu"),
          py::arg("rel_tol") = 1e-12);

    py::class_<AsymptoticEstimate>(m, "AsymptoticEstimate")
        .def_readonly("constant", &AsymptoticEstimate::constant)
        .def_readonly("convergence_rate", &AsymptoticEstimate::convergence_rate);
    m.def("estimate_asymptotic_constant", &estimate_asymptotic_constant, py::arg("kernel"),
          py::arg("k_grid"), py::arg("rel_tol") = 1e-10);

    py::class_<TheoreticalSequence>(m, "TheoreticalSequence")
        .def_readonly("regime", &TheoreticalSequence::regime)
        .def_readonly("kmax", &TheoreticalSequence::kmax)
        .def_readonly("D", &TheoreticalSequence::D)
        .def_readonly("d0", &TheoreticalSequence::d0)
        .def_readonly("C", &TheoreticalSequence::C)
        .def("dk", &TheoreticalSequence::dk, py::arg("k"))
        .def("residual", &TheoreticalSequence::residual, py::arg("k"))
        .def("tail_form", &TheoreticalSequence::tail_form, py::arg("k"))
        .def_property_readonly("d", [](const TheoreticalSequence& s) { return s.d; });
    m.def(
        "build_sequence",
        [](const ModelParams& p, const DerivedConstants& c, std::int64_t kmax, double tol) {
            TheoreticalSequence seq = build_sequence(p, c, kmax, tol);
            seq.C = leading_constant(seq);
            return seq;
        },
        py::arg("params"), py::arg("constants"), py::arg("kmax"), py::arg("quad_tol") = 1e-10);
    m.def("leading_constant", &leading_constant, py::arg("sequence"));

    py::class_<SequenceMass>(m, "SequenceMass")
        .def_readonly("vertex_mass", &SequenceMass::vertex_mass)
        .def_readonly("degree_mass", &SequenceMass::degree_mass);
    m.def("sequence_mass", &sequence_mass, py::arg("sequence"));

    m.def("evolve_mean_field", &evolve_mean_field, py::arg("params"), py::arg("constants"),
          py::arg("t0"), py::arg("horizon"), py::arg("init"),
          py::call_guard<py::gil_scoped_release>());
    m.def("warm_start", &warm_start, py::arg("sequence"), py::arg("t0"), py::arg("kmax"),
          py::arg("seed"));
    m.def("cold_start", &cold_start, py::arg("params"), py::arg("t0"), py::arg("kmax"));

    py::class_<MeanProfile>(m, "MeanProfile")
        .def_readonly("t", &MeanProfile::t)
        .def_readonly("trials", &MeanProfile::trials)
        .def_readonly("mean", &MeanProfile::mean)
        .def_readonly("se", &MeanProfile::se)
        .def_readonly("mean_count", &MeanProfile::mean_count);
    m.def(
        "aggregate",
        [](const std::vector<DegreeHistogram>& hs) {
            return aggregate(std::span<const DegreeHistogram>(hs.data(), hs.size()));
        },
        py::arg("histograms"));

    py::enum_<TailModel>(m, "TailModel")
        .value("PowerLawSlope", TailModel::PowerLawSlope)
        .value("ExponentialRate", TailModel::ExponentialRate);
    py::enum_<FitStyle>(m, "FitStyle")
        .value("Plain", FitStyle::Plain)
        .value("Corrected", FitStyle::Corrected);
    py::class_<TailFit>(m, "TailFit")
        .def_readonly("value", &TailFit::value)
        .def_readonly("se", &TailFit::se)
        .def_readonly("intercept", &TailFit::intercept)
        .def_readonly("sse", &TailFit::sse)
        .def_readonly("points", &TailFit::points);
    m.def("fit_tail", &fit_tail, py::arg("profile"), py::arg("model"), py::arg("k_lo"),
          py::arg("k_hi"), py::arg("m"), py::arg("beta") = 0.0, py::arg("min_count") = 10.0,
          py::arg("style") = FitStyle::Plain);

    py::class_<ConcentrationReport>(m, "ConcentrationReport")
        .def_readonly("trials", &ConcentrationReport::trials)
        .def_readonly("eta", &ConcentrationReport::eta)
        .def_readonly("e_band", &ConcentrationReport::e_band)
        .def_readonly("max_degree_bound", &ConcentrationReport::max_degree_bound)
        .def_readonly("frac_e_within", &ConcentrationReport::frac_e_within)
        .def_readonly("frac_delta_within", &ConcentrationReport::frac_delta_within);
    m.def(
        "check_concentration",
        [](const std::vector<TrialResult>& trials, const DerivedConstants& c, double band) {
            return check_concentration(std::span<const TrialResult>(trials.data(), trials.size()),
                                       c, band);
        },
        py::arg("trials"), py::arg("constants"), py::arg("band_fraction") = 0.05);

    py::class_<ComparisonReport>(m, "ComparisonReport")
        .def_readonly("declared", &ComparisonReport::declared)
        .def_readonly("detected", &ComparisonReport::detected)
        .def_readonly("k_report", &ComparisonReport::k_report)
        .def_readonly("fitted_value", &ComparisonReport::fitted_value)
        .def_readonly("fitted_se", &ComparisonReport::fitted_se)
        .def_readonly("sup_dist", &ComparisonReport::sup_dist)
        .def_readonly("tv", &ComparisonReport::tv)
        .def_readonly("pass_", &ComparisonReport::pass)
        .def_readonly("pointwise_ok", &ComparisonReport::pointwise_ok)
        .def_readonly("max_z", &ComparisonReport::max_z);
    m.def(
        "compare",
        [](const MeanProfile& p, const TheoreticalSequence& t, std::int64_t k) {
            return compare(p, t, k);
        },
        py::arg("profile"), py::arg("theory"), py::arg("k_report"));

#ifdef DEGSEQ_VERSION
    m.attr("__version__") = DEGSEQ_VERSION;
#else
    m.attr("__version__") = "0.1.0";
#endif
}
