// Python bindings for the eigenchaos core. The surface mirrors the C++
// headers: samplers, eigendecomposition, partitions, the two matrix dynamics,
// spectral statistics, identity checks, and the experiment driver. Matrices
// implement the buffer protocol, so numpy.array(X) views the underlying
// storage without a copy.
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <utility>

#include "eigenchaos/common.hpp"
#include "eigenchaos/dynamics.hpp"
#include "eigenchaos/experiments.hpp"
#include "eigenchaos/identities.hpp"
#include "eigenchaos/matrix.hpp"
#include "eigenchaos/oracle.hpp"
#include "eigenchaos/partitions.hpp"
#include "eigenchaos/paths.hpp"
#include "eigenchaos/rng.hpp"
#include "eigenchaos/spectral.hpp"
#include "eigenchaos/stats.hpp"
#include "eigenchaos/threads.hpp"
#include "eigenchaos/version.hpp"

namespace py = pybind11;
using namespace eigenchaos;

namespace {

// Build a SymmetricMatrix from any square, C-ordered float64 buffer.
// Symmetry must hold bit-exactly, matching the text reader.
SymmetricMatrix matrix_from_buffer(const py::buffer& b) {
  py::buffer_info info = b.request();
  if (info.format != py::format_descriptor<double>::format())
    throw ValidationError("matrix buffer must be float64");
  if (info.ndim != 2 || info.shape[0] != info.shape[1])
    throw ValidationError("matrix buffer must be square and 2-d");
  const int n = static_cast<int>(info.shape[0]);
  const char* base = static_cast<const char*>(info.ptr);
  auto at = [&](int i, int j) {
    double v;
    std::memcpy(&v, base + i * info.strides[0] + j * info.strides[1], sizeof(double));
    return v;
  };
  SymmetricMatrix X(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      const double v = at(i, j);
      const double w = at(j, i);
      if (std::memcmp(&v, &w, sizeof(double)) != 0)
        throw ValidationError("matrix buffer is not bit-exactly symmetric at (" +
                              std::to_string(i) + "," + std::to_string(j) + ")");
      X.set(i, j, v);
    }
  X.check_finite();
  return X;
}

std::vector<double> spectrum_vector(const Spectrum& s, int alpha) {
  if (alpha < 1 || alpha > s.n) throw ValidationError("alpha out of range");
  std::vector<double> v(static_cast<std::size_t>(s.n));
  for (int i = 0; i < s.n; ++i) v[static_cast<std::size_t>(i)] = s.vec(i, alpha);
  return v;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "eigenchaos core bindings";
  m.attr("__version__") = EIGENCHAOS_VERSION;
  m.attr("GIT_HASH") = EIGENCHAOS_GIT_HASH;
  m.attr("CONFIG_FORMAT") = EIGENCHAOS_CONFIG_FORMAT;

  // Exception mapping: bad inputs become ValueError subclasses, substantive
  // check failures and near-degenerate spectra get their own types.
  py::register_exception<ValidationError>(m, "ValidationError", PyExc_ValueError);
  py::register_exception<EighError>(m, "EighError", PyExc_RuntimeError);
  py::register_exception<CheckFailure>(m, "CheckFailure", PyExc_RuntimeError);
  py::register_exception<NearDegenerateError>(m, "NearDegenerateError", PyExc_RuntimeError);

  // ---- rng ----
  py::class_<Rng>(m, "Rng")
      .def(py::init<std::uint64_t, std::uint64_t>(), py::arg("master_seed"),
           py::arg("stream_id") = 0)
      .def("next_u64", &Rng::next_u64)
      .def("uniform01", &Rng::uniform01)
      .def("normal", &Rng::normal)
      .def("uniform_below", &Rng::uniform_below, py::arg("bound"))
      .def("poisson", &Rng::poisson, py::arg("mean"))
      .def("fork", &Rng::fork, py::arg("salt"));

  // ---- matrices and spectra ----
  py::class_<SymmetricMatrix>(m, "SymmetricMatrix", py::buffer_protocol())
      .def(py::init<int>(), py::arg("n"))
      .def(py::init(&matrix_from_buffer), py::arg("buffer"),
           "Copy a square float64 array; symmetry must hold bit-exactly.")
      .def_property_readonly("n", &SymmetricMatrix::n)
      .def("get", &SymmetricMatrix::operator(), py::arg("i"), py::arg("j"))
      .def("set", &SymmetricMatrix::set, py::arg("i"), py::arg("j"), py::arg("value"))
      .def("max_abs", &SymmetricMatrix::max_abs)
      .def("frobenius_norm", &SymmetricMatrix::frobenius_norm)
      .def("same_bits", &SymmetricMatrix::same_bits, py::arg("other"))
      .def_buffer([](SymmetricMatrix& X) {
        const auto n = static_cast<std::size_t>(X.n());
        return py::buffer_info(const_cast<double*>(X.data().data()), sizeof(double),
                               py::format_descriptor<double>::format(), 2, {n, n},
                               {sizeof(double) * n, sizeof(double)}, /*readonly=*/true);
      });

  py::class_<VarianceProfile>(m, "VarianceProfile")
      .def_static("goe", &VarianceProfile::goe, py::arg("n"))
      .def_static("wigner", &VarianceProfile::wigner, py::arg("n"))
      .def_static("checkerboard", &VarianceProfile::checkerboard, py::arg("n"),
                  py::arg("lo") = 0.5, py::arg("hi") = 1.5)
      .def_readonly("n", &VarianceProfile::n)
      .def_readonly("c1", &VarianceProfile::c1)
      .def_readonly("c2", &VarianceProfile::c2)
      .def_readonly("normalized", &VarianceProfile::normalized)
      .def("at", &VarianceProfile::at, py::arg("i"), py::arg("j"))
      .def("validate", &VarianceProfile::validate);

  py::class_<EntryLaw>(m, "EntryLaw")
      .def(py::init([](const std::string& name) { return EntryLaw::parse(name); }),
           py::arg("name") = "gaussian")
      .def_readwrite("separation", &EntryLaw::separation)
      .def_property_readonly("name", &EntryLaw::name)
      .def("sample", &EntryLaw::sample, py::arg("rng"))
      .def("validate", &EntryLaw::validate);

  py::class_<Spectrum>(m, "Spectrum")
      .def_readonly("n", &Spectrum::n)
      .def_readonly("eigenvalues", &Spectrum::eigenvalues)
      .def("vec", &Spectrum::vec, py::arg("i"), py::arg("alpha"))
      .def("vector", &spectrum_vector, py::arg("alpha"),
           "Components of the alpha-th eigenvector (alpha 1-based, 1 = largest).")
      .def("operator_norm", &Spectrum::operator_norm);

  m.def("sample_goe", &sample_goe, py::arg("n"), py::arg("rng"));
  m.def("sample_generalized_wigner", &sample_generalized_wigner, py::arg("profile"),
        py::arg("law"), py::arg("rng"));
  m.def("eigh", &eigh, py::arg("X"));
  m.def("eigh_values", &eigh_values, py::arg("X"));
  m.def("operator_norm", py::overload_cast<const SymmetricMatrix&>(&operator_norm), py::arg("X"));
  m.def("write_matrix_text", &write_matrix_text, py::arg("path"), py::arg("X"));
  m.def("read_matrix_text", &read_matrix_text, py::arg("path"));

  // ---- partitions ----
  py::class_<Block>(m, "Block")
      .def(py::init([](std::vector<std::pair<int, int>> positions) {
             return Block{std::move(positions)};
           }),
           py::arg("positions"))
      .def_readwrite("positions", &Block::positions);
  m.def("nu", &nu, py::arg("block"), "Size parameter: positions plus diagonal positions.");

  py::class_<PartitionViolation>(m, "PartitionViolation")
      .def_readonly("condition", &PartitionViolation::condition)
      .def_readonly("message", &PartitionViolation::message);

  py::class_<AdmissiblePartition>(m, "AdmissiblePartition")
      .def(py::init([](int n, std::vector<Block> blocks) {
             AdmissiblePartition p;
             p.n = n;
             p.blocks = std::move(blocks);
             p.finalize();
             return p;
           }),
           py::arg("n"), py::arg("blocks"))
      .def_readonly("n", &AdmissiblePartition::n)
      .def_readonly("nu", &AdmissiblePartition::nu)
      .def_property_readonly("m", &AdmissiblePartition::m)
      .def("block_of", &AdmissiblePartition::block_of, py::arg("i"), py::arg("j"))
      .def("upper_reps", &AdmissiblePartition::upper_reps, py::arg("block_id"));

  m.def("validate_partition", &validate_partition, py::arg("p"));
  m.def("entries_partition", &entries_partition, py::arg("n"));
  m.def("band_partition", &band_partition, py::arg("n"), py::arg("width"));
  m.def("write_partition_text", &write_partition_text, py::arg("path"), py::arg("p"));
  m.def("read_partition_text", &read_partition_text, py::arg("path"));

  py::class_<UnionSet>(m, "UnionSet")
      .def_readonly("indices", &UnionSet::indices)
      .def_readonly("k", &UnionSet::k)
      .def_readonly("block_ids", &UnionSet::block_ids);
  m.def("sample_union", &sample_union, py::arg("p"), py::arg("k"), py::arg("rng"));

  // ---- dynamics ----
  py::class_<RingCounts>(m, "RingCounts")
      .def(py::init([](const AdmissiblePartition& p, std::vector<int> per_block) {
             if (static_cast<int>(per_block.size()) != p.m())
               throw ValidationError("per_block length must equal the block count");
             return RingCounts{&p, std::move(per_block)};
           }),
           py::arg("partition"), py::arg("per_block"), py::keep_alive<1, 2>())
      .def_readonly("per_block", &RingCounts::per_block)
      .def("k_bar", &RingCounts::k_bar, py::arg("i"), py::arg("j"))
      .def("all_zero", &RingCounts::all_zero);

  m.def("ou_advance", &ou_advance, py::arg("X"), py::arg("dt"), py::arg("tau"),
        py::arg("profile"), py::arg("rng"));
  m.def("ou_advance_on",
        py::overload_cast<const SymmetricMatrix&, const std::vector<std::pair<int, int>>&, double,
                          double, const VarianceProfile&, Rng&>(&ou_advance_on),
        py::arg("X"), py::arg("upper_reps"), py::arg("dt"), py::arg("tau"), py::arg("profile"),
        py::arg("rng"));
  m.def("ou_advance_on",
        py::overload_cast<const SymmetricMatrix&, const UnionSet&, double, double,
                          const VarianceProfile&, Rng&>(&ou_advance_on),
        py::arg("X"), py::arg("indices"), py::arg("dt"), py::arg("tau"), py::arg("profile"),
        py::arg("rng"));
  m.def("ou_advance_on",
        py::overload_cast<const SymmetricMatrix&, const Block&, double, double,
                          const VarianceProfile&, Rng&>(&ou_advance_on),
        py::arg("X"), py::arg("block"), py::arg("dt"), py::arg("tau"), py::arg("profile"),
        py::arg("rng"));

  m.def("pdbou_ring_counts", &pdbou_ring_counts, py::arg("p"), py::arg("eta"), py::arg("t"),
        py::arg("rng"), py::keep_alive<0, 1>());

  py::class_<PdbouHandle>(m, "PdbouHandle")
      .def("extend", &PdbouHandle::extend, py::arg("block_id"));
  py::class_<PdbouPair>(m, "PdbouPair")
      .def_readonly("g_k", &PdbouPair::g_k)
      .def_readonly("handle", &PdbouPair::handle);
  // The handle keeps raw pointers into the ring counts' partition, the
  // profile, and the rng; tie their lifetimes to the returned pair.
  m.def("pdbou_sample_pair", &pdbou_sample_pair, py::arg("G"), py::arg("K"), py::arg("tau"),
        py::arg("profile"), py::arg("rng"), py::keep_alive<0, 2>(), py::keep_alive<0, 4>(),
        py::keep_alive<0, 5>());

  m.def("block_resample", &block_resample, py::arg("X"), py::arg("Y"), py::arg("A"));

  py::class_<CoupledPair>(m, "CoupledPair")
      .def_readonly("first", &CoupledPair::first)
      .def_readonly("second", &CoupledPair::second)
      .def_readonly("acted", &CoupledPair::acted)
      .def_readonly("description", &CoupledPair::description);
  m.def("resample_draw", &resample_draw, py::arg("sampler"), py::arg("p"), py::arg("k"),
        py::arg("rng"));

  // ---- spectral statistics ----
  m.def("hat_index", &hat_index, py::arg("alpha"), py::arg("n"));
  py::class_<FConstants>(m, "FConstants")
      .def(py::init<>())
      .def_readwrite("A1", &FConstants::A1)
      .def_readwrite("A2", &FConstants::A2);
  m.def("f_factor", &f_factor, py::arg("n"), py::arg("alpha"),
        py::arg("consts") = FConstants{});
  m.def("gap_tol", py::overload_cast<double>(&gap_tol), py::arg("operator_norm"));
  m.def("gap_tol", py::overload_cast<const Spectrum&>(&gap_tol), py::arg("spectrum"));
  m.def("min_gap", &min_gap, py::arg("spectrum"), py::arg("alpha"));
  m.def("overlap_sq",
        py::overload_cast<const SymmetricMatrix&, const SymmetricMatrix&, int>(&overlap_sq),
        py::arg("X"), py::arg("Y"), py::arg("alpha"));
  m.def("overlap_sq", py::overload_cast<const Spectrum&, const Spectrum&, int>(&overlap_sq),
        py::arg("sx"), py::arg("sy"), py::arg("alpha"));
  m.def("eig_grad", &eig_grad, py::arg("spectrum"), py::arg("alpha"));
  m.def("eig_hess", &eig_hess, py::arg("spectrum"), py::arg("alpha"), py::arg("i"), py::arg("j"),
        py::arg("a"), py::arg("b"));

  py::class_<SpacingStats>(m, "SpacingStats")
      .def_readonly("s_alpha", &SpacingStats::s_alpha)
      .def_readonly("m", &SpacingStats::m)
      .def_readonly("delta_alpha", &SpacingStats::delta_alpha);
  m.def("spacing_stats", &spacing_stats, py::arg("spectrum"), py::arg("alpha"));

  m.def("resolvent_diag_max",
        py::overload_cast<const SymmetricMatrix&, double, double, int>(&resolvent_diag_max),
        py::arg("X"), py::arg("C"), py::arg("eta"), py::arg("w_grid") = 512);
  m.def("resolvent_diag_max",
        py::overload_cast<const Spectrum&, double, double, int>(&resolvent_diag_max),
        py::arg("spectrum"), py::arg("C"), py::arg("eta"), py::arg("w_grid") = 512);
  m.def("semicircle_tail_mass", &semicircle_tail_mass, py::arg("gamma"));
  m.def("classical_position", &classical_position, py::arg("n"), py::arg("beta"));

  // ---- paths ----
  py::class_<PathGrid>(m, "PathGrid")
      .def(py::init([](std::vector<double> points) {
             PathGrid g{std::move(points)};
             g.validate();
             return g;
           }),
           py::arg("points"))
      .def_static("uniform", &PathGrid::uniform, py::arg("q"))
      .def_readonly("points", &PathGrid::points)
      .def_property_readonly("q", &PathGrid::q);
  m.def("path_point", &path_point, py::arg("X"), py::arg("Y"), py::arg("s"));

  py::class_<SweepRow>(m, "SweepRow")
      .def_readonly("s", &SweepRow::s)
      .def_readonly("lambda_alpha", &SweepRow::lambda_alpha)
      .def_readonly("delta_alpha", &SweepRow::delta_alpha)
      .def_readonly("s_alpha", &SweepRow::s_alpha)
      .def_readonly("m_infty", &SweepRow::m_infty)
      .def_readonly("degenerate", &SweepRow::degenerate);
  py::class_<SweepTable>(m, "SweepTable")
      .def_readonly("alpha", &SweepTable::alpha)
      .def_readonly("rows", &SweepTable::rows)
      .def_readonly("sup_m", &SweepTable::sup_m)
      .def_readonly("sup_s_alpha", &SweepTable::sup_s_alpha)
      .def_readonly("inf_delta", &SweepTable::inf_delta)
      .def_readonly("first_degenerate_s", &SweepTable::first_degenerate_s);
  m.def("path_spectrum_sweep", &path_spectrum_sweep, py::arg("X"), py::arg("Y"), py::arg("grid"),
        py::arg("alpha"));
  m.def("write_sweep_csv", &write_sweep_csv, py::arg("path"), py::arg("table"));

  py::class_<TaylorReport>(m, "TaylorReport")
      .def_readonly("alpha", &TaylorReport::alpha)
      .def_readonly("lhs0", &TaylorReport::lhs0)
      .def_readonly("bound0", &TaylorReport::bound0)
      .def_readonly("lhs1", &TaylorReport::lhs1)
      .def_readonly("bound1", &TaylorReport::bound1)
      .def_readonly("fprime0", &TaylorReport::fprime0);
  m.def("taylor_residual", &taylor_residual, py::arg("X"), py::arg("Y"), py::arg("alpha"),
        py::arg("nu_B"), py::arg("grid"));

  // ---- statistics helpers ----
  py::class_<MCEstimate>(m, "MCEstimate")
      .def_readonly("mean", &MCEstimate::mean)
      .def_readonly("std_error", &MCEstimate::std_error)
      .def_readonly("trials", &MCEstimate::trials)
      .def("__repr__", [](const MCEstimate& e) {
        return "MCEstimate(mean=" + std::to_string(e.mean) +
               ", std_error=" + std::to_string(e.std_error) +
               ", trials=" + std::to_string(e.trials) + ")";
      });
  m.def("mc_estimate",
        [](const std::vector<double>& v) { return mc_estimate(v); }, py::arg("values"));
  m.def("variance_estimate",
        [](const std::vector<double>& v) { return variance_estimate(v); }, py::arg("values"));
  m.def("difference_estimate",
        [](const std::vector<double>& a, const std::vector<double>& b) {
          return difference_estimate(a, b);
        },
        py::arg("a"), py::arg("b"));
  m.def("quantile", &quantile, py::arg("values"), py::arg("p"));
  m.def("quantile_estimate", &quantile_estimate, py::arg("values"), py::arg("p"));
  m.def("pairwise_sum",
        [](const std::vector<double>& v) { return pairwise_sum(v); }, py::arg("values"));

  // ---- identity checks ----
  py::class_<IdentityReport>(m, "IdentityReport")
      .def_readonly("lhs", &IdentityReport::lhs)
      .def_readonly("rhs", &IdentityReport::rhs)
      .def_readonly("z_score", &IdentityReport::z_score)
      .def_readonly("trials", &IdentityReport::trials)
      .def_readonly("seed", &IdentityReport::seed)
      .def_readonly("degenerate_redraws", &IdentityReport::degenerate_redraws)
      .def_readonly("params", &IdentityReport::params)
      .def("to_json", &IdentityReport::to_json);

  m.def("ou_variance_identity_check", &ou_variance_identity_check, py::arg("n"), py::arg("alpha"),
        py::arg("tau"), py::arg("t_max"), py::arg("time_grid"), py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());
  m.def("pdbr_variance_identity_check",
        py::overload_cast<const AdmissiblePartition&, int, const VarianceProfile&, const EntryLaw&,
                          long long, std::uint64_t>(&pdbr_variance_identity_check),
        py::arg("p"), py::arg("alpha"), py::arg("profile"), py::arg("law"), py::arg("trials"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("pdbr_variance_identity_check",
        py::overload_cast<const AdmissiblePartition&, int, long long, std::uint64_t>(
            &pdbr_variance_identity_check),
        py::arg("p"), py::arg("alpha"), py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<TkLadderReport>(m, "TkLadderReport")
      .def_readonly("t_k", &TkLadderReport::t_k)
      .def_readonly("variance", &TkLadderReport::variance)
      .def_readonly("step", &TkLadderReport::step)
      .def_readonly("step_violation", &TkLadderReport::step_violation)
      .def_readonly("nonneg_ok", &TkLadderReport::nonneg_ok)
      .def_readonly("bound_violation", &TkLadderReport::bound_violation)
      .def_readonly("all_ok", &TkLadderReport::all_ok)
      .def_readonly("trials", &TkLadderReport::trials)
      .def_readonly("seed", &TkLadderReport::seed)
      .def("to_json", &TkLadderReport::to_json);
  m.def("t_k_ladder",
        py::overload_cast<const AdmissiblePartition&, int, const VarianceProfile&, const EntryLaw&,
                          long long, std::uint64_t>(&t_k_ladder),
        py::arg("p"), py::arg("alpha"), py::arg("profile"), py::arg("law"), py::arg("trials"),
        py::arg("seed"), py::call_guard<py::gil_scoped_release>());
  m.def("t_k_ladder",
        py::overload_cast<const AdmissiblePartition&, int, long long, std::uint64_t>(&t_k_ladder),
        py::arg("p"), py::arg("alpha"), py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  m.def("pdbou_diff_cov", &pdbou_diff_cov, py::arg("tau"), py::arg("k_b"), py::arg("sigma2"));
  m.def("pdbou_diff_cov_mc", &pdbou_diff_cov_mc, py::arg("p"), py::arg("tau"), py::arg("K"),
        py::arg("block_id"), py::arg("trials"), py::arg("seed"),
        py::arg("entry") = std::nullopt, py::arg("profile") = std::nullopt,
        py::call_guard<py::gil_scoped_release>());
  m.def("pdbou_dominance_time_cap", &pdbou_dominance_time_cap, py::arg("tau"), py::arg("eta"));

  py::class_<TPlusMinusReport>(m, "TPlusMinusReport")
      .def_readonly("t_plus", &TPlusMinusReport::t_plus)
      .def_readonly("t_minus", &TPlusMinusReport::t_minus)
      .def_readonly("half_diff", &TPlusMinusReport::half_diff)
      .def_readonly("t_cap", &TPlusMinusReport::t_cap)
      .def_readonly("t_in_range", &TPlusMinusReport::t_in_range)
      .def_readonly("dominance_ok", &TPlusMinusReport::dominance_ok)
      .def_readonly("k_bucket_alignment", &TPlusMinusReport::k_bucket_alignment)
      .def_readonly("k_bucket_counts", &TPlusMinusReport::k_bucket_counts)
      .def_readonly("positivity_ok", &TPlusMinusReport::positivity_ok)
      .def_readonly("monitored_block", &TPlusMinusReport::monitored_block)
      .def_readonly("monitored_entry", &TPlusMinusReport::monitored_entry)
      .def_readonly("degenerate_redraws", &TPlusMinusReport::degenerate_redraws)
      .def_readonly("trials", &TPlusMinusReport::trials)
      .def_readonly("seed", &TPlusMinusReport::seed)
      .def("to_json", &TPlusMinusReport::to_json);
  m.def("t_plus_minus", &t_plus_minus, py::arg("p"), py::arg("alpha"), py::arg("eta"),
        py::arg("tau"), py::arg("t"), py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  py::class_<OverlapCurveReport>(m, "OverlapCurveReport")
      .def_readonly("times", &OverlapCurveReport::times)
      .def_readonly("overlap", &OverlapCurveReport::overlap)
      .def_readonly("step", &OverlapCurveReport::step)
      .def_readonly("step_violation", &OverlapCurveReport::step_violation)
      .def_readonly("all_ok", &OverlapCurveReport::all_ok)
      .def_readonly("degenerate_redraws", &OverlapCurveReport::degenerate_redraws)
      .def_readonly("trials", &OverlapCurveReport::trials)
      .def_readonly("seed", &OverlapCurveReport::seed)
      .def("to_json", &OverlapCurveReport::to_json);
  m.def("ou_overlap_monotonicity", &ou_overlap_monotonicity, py::arg("n"), py::arg("alpha"),
        py::arg("tau"), py::arg("time_grid"), py::arg("trials"), py::arg("seed"),
        py::call_guard<py::gil_scoped_release>());

  // ---- experiments ----
  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static("from_json_text", &ExperimentConfig::from_json_text, py::arg("text"))
      .def_static("from_json_file", &ExperimentConfig::from_json_file, py::arg("path"))
      .def_readwrite("kind", &ExperimentConfig::kind)
      .def_readwrite("n_list", &ExperimentConfig::n_list)
      .def_readwrite("trials", &ExperimentConfig::trials)
      .def_readwrite("master_seed", &ExperimentConfig::master_seed)
      .def_readwrite("output", &ExperimentConfig::output)
      .def("to_json", &ExperimentConfig::to_json)
      .def("validate", &ExperimentConfig::validate);

  py::class_<ResultRow>(m, "ResultRow")
      .def_readonly("kind", &ResultRow::kind)
      .def_readonly("n", &ResultRow::n)
      .def_readonly("alpha", &ResultRow::alpha)
      .def_readonly("control_name", &ResultRow::control_name)
      .def_readonly("control_value", &ResultRow::control_value)
      .def_readonly("mean", &ResultRow::mean)
      .def_readonly("std_error", &ResultRow::std_error)
      .def_readonly("trials", &ResultRow::trials)
      .def_readonly("wall_ms", &ResultRow::wall_ms);

  py::class_<ExperimentResult>(m, "ExperimentResult")
      .def_readonly("kind", &ExperimentResult::kind)
      .def_readonly("rows", &ExperimentResult::rows)
      .def_readonly("metadata_json", &ExperimentResult::metadata_json)
      .def("csv", &ExperimentResult::csv)
      .def("write", &ExperimentResult::write, py::arg("csv_path"))
      .def("find", &ExperimentResult::find, py::arg("n"), py::arg("control_name"),
           py::arg("control_value"), py::return_value_policy::reference_internal);

  m.def("run_experiment", &run_experiment, py::arg("config"),
        py::call_guard<py::gil_scoped_release>());

  // Control-variable mappings shared with the CLI and acceptance suite.
  m.def("decorrelation_scale", &decorrelation_scale, py::arg("n"), py::arg("alpha"));
  m.def("ou_time_for_control", &ou_time_for_control, py::arg("u"), py::arg("scale"));
  m.def("pdbou_control", &pdbou_control, py::arg("t"), py::arg("eta"), py::arg("tau"),
        py::arg("scale"));
  m.def("pdbou_horizon_cap", &pdbou_horizon_cap, py::arg("tau"), py::arg("eta"));
  m.def("resample_count_for_control", &resample_count_for_control, py::arg("c"), py::arg("nu"),
        py::arg("n"), py::arg("alpha"));
  m.def("resample_control", &resample_control, py::arg("k"), py::arg("nu"), py::arg("n"),
        py::arg("alpha"));

  // ---- oracle suite ----
  py::class_<OracleCheck>(m, "OracleCheck")
      .def_readonly("name", &OracleCheck::name)
      .def_readonly("passed", &OracleCheck::passed)
      .def_readonly("observed", &OracleCheck::observed)
      .def_readonly("limit", &OracleCheck::limit)
      .def_readonly("detail", &OracleCheck::detail);
  py::class_<OracleReport>(m, "OracleReport")
      .def_readonly("checks", &OracleReport::checks)
      .def("all_passed", &OracleReport::all_passed)
      .def("summary", &OracleReport::summary);
  py::class_<FdDerivativeReport>(m, "FdDerivativeReport")
      .def_readonly("n", &FdDerivativeReport::n)
      .def_readonly("alpha", &FdDerivativeReport::alpha)
      .def_readonly("draws", &FdDerivativeReport::draws)
      .def_readonly("redraws", &FdDerivativeReport::redraws)
      .def_readonly("max_grad_err", &FdDerivativeReport::max_grad_err)
      .def_readonly("max_hess_err", &FdDerivativeReport::max_hess_err)
      .def_readonly("grad_tol", &FdDerivativeReport::grad_tol)
      .def_readonly("hess_tol", &FdDerivativeReport::hess_tol)
      .def_readonly("passed", &FdDerivativeReport::passed);
  m.def("fd_derivative_check", &fd_derivative_check, py::arg("n"), py::arg("alpha"),
        py::arg("draws"), py::arg("seed"), py::arg("grad_rel_tol") = 1e-5,
        py::arg("hess_rel_tol") = 1e-3, py::arg("gap_guard") = 0.01,
        py::call_guard<py::gil_scoped_release>());
  m.def("oracle_suite", &oracle_suite, py::arg("seed") = 1,
        py::call_guard<py::gil_scoped_release>());

  // ---- threading ----
  m.def("thread_budget", &thread_budget);
  m.def("set_thread_budget", &set_thread_budget, py::arg("n"));
}
