#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <string>
#include <vector>

#include "geodetect/detector.hpp"
#include "geodetect/runner.hpp"
#include "geodetect/signal.hpp"

namespace py = pybind11;

namespace {

using geodetect::HpdMatrix;
using geodetect::Matrix;
using geodetect::MeasureKind;
using geodetect::RealVector;
using geodetect::Vector;

MeasureKind kind_of(const std::string& name) {
  return geodetect::measure_kind_from_string(name);
}

std::vector<HpdMatrix> wrap_all(const std::vector<Matrix>& mats) {
  std::vector<HpdMatrix> out;
  out.reserve(mats.size());
  for (const Matrix& m : mats) {
    out.emplace_back(m);
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "covariance-manifold detection core";

  // translators run newest-first, so the base class has to go in first or it
  // would shadow the derived registrations
  py::register_exception<geodetect::Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<geodetect::DimensionError>(m, "DimensionError",
                                                    PyExc_ValueError);
  py::register_exception<geodetect::DomainError>(m, "DomainError",
                                                 PyExc_ValueError);
  py::register_exception<geodetect::ConfigError>(m, "ConfigError",
                                                 PyExc_ValueError);

  m.def(
      "correlation_lags",
      [](const Vector& x, bool normalize) {
        return geodetect::correlation_lags(x, normalize);
      },
      py::arg("x"), py::arg("normalize") = true);

  m.def(
      "toeplitz_covariance",
      [](const Vector& x, bool normalize) {
        return geodetect::toeplitz_covariance(x, normalize).mat();
      },
      py::arg("x"), py::arg("normalize") = true);

  m.def("dft_power_spectrum", &geodetect::dft_power_spectrum, py::arg("x"));
  m.def("spectrum_from_lags", &geodetect::spectrum_from_lags, py::arg("lags"));

  m.def(
      "measure",
      [](const std::string& kind, const Matrix& c1, const Matrix& c2) {
        return geodetect::measure(kind_of(kind), HpdMatrix(c1), HpdMatrix(c2));
      },
      py::arg("kind"), py::arg("c1"), py::arg("c2"));

  m.def(
      "check_affine_invariance",
      [](const std::string& kind, const Matrix& c1, const Matrix& c2,
         const Matrix& w) {
        return geodetect::check_affine_invariance(kind_of(kind), HpdMatrix(c1),
                                                  HpdMatrix(c2), w);
      },
      py::arg("kind"), py::arg("c1"), py::arg("c2"), py::arg("w"));

  m.def(
      "whitening_spectrum",
      [](const Matrix& c1, const Matrix& c2) {
        return geodetect::whitening_spectrum(HpdMatrix(c1), HpdMatrix(c2))
            .values;
      },
      py::arg("c1"), py::arg("c2"));

  m.def(
      "potential",
      [](const std::string& kind, const RealVector& eigenvalues) {
        return geodetect::potential(kind_of(kind), eigenvalues);
      },
      py::arg("kind"), py::arg("eigenvalues"));

  m.def(
      "check_equivalence",
      [](const std::string& kind, const Matrix& c1, const Matrix& c2) {
        return geodetect::check_equivalence(kind_of(kind), HpdMatrix(c1),
                                            HpdMatrix(c2));
      },
      py::arg("kind"), py::arg("c1"), py::arg("c2"));

  m.def(
      "adjusted_potential",
      [](const std::string& kind, const RealVector& lambda, double sigma2,
         int dim) {
        geodetect::AdjustedSpectrumPoint p;
        p.lambda = lambda;
        p.sigma2 = sigma2;
        p.dim = dim;
        return geodetect::adjusted_potential(kind_of(kind), p);
      },
      py::arg("kind"), py::arg("lambda_free"), py::arg("sigma2"),
      py::arg("dim"));

  m.def(
      "adjusted_gradient",
      [](const std::string& kind, const RealVector& lambda, double sigma2,
         int dim) {
        geodetect::AdjustedSpectrumPoint p;
        p.lambda = lambda;
        p.sigma2 = sigma2;
        p.dim = dim;
        return geodetect::adjusted_gradient(kind_of(kind), p);
      },
      py::arg("kind"), py::arg("lambda_free"), py::arg("sigma2"),
      py::arg("dim"));

  m.def(
      "extremal_spectra",
      [](const std::string& kind, int m, double sigma2) {
        const geodetect::ExtremalSpectra s =
            geodetect::extremal_spectra(kind_of(kind), m, sigma2);
        py::list candidates;
        for (const geodetect::ExtremalCandidate& c : s.candidates) {
          py::dict d;
          d["k"] = c.k;
          d["spectrum"] = c.spectrum;
          d["value"] = c.value;
          candidates.append(d);
        }
        py::dict out;
        out["candidates"] = candidates;
        out["argmax_k"] = s.candidates[s.argmax].k;
        return out;
      },
      py::arg("kind"), py::arg("m"), py::arg("sigma2"));

  m.def("optimal_enhancement_dimension",
        &geodetect::optimal_enhancement_dimension, py::arg("bandwidth"));

  m.def(
      "mean_matrix",
      [](const std::string& kind, const std::vector<Matrix>& members,
         int max_iterations, double tolerance) {
        geodetect::MeanConfig config;
        config.kind = kind_of(kind);
        config.max_iterations = max_iterations;
        config.tolerance = tolerance;
        const geodetect::MeanResult r =
            geodetect::mean_matrix(wrap_all(members), config);
        return py::make_tuple(r.mean.mat(), r.converged, r.iterations,
                              r.objective);
      },
      py::arg("kind"), py::arg("members"), py::arg("max_iterations") = 200,
      py::arg("tolerance") = 1e-8);

  m.def(
      "interlace_bounds",
      [](const RealVector& spectrum, int n) {
        geodetect::WhitenedSpectrum s;
        s.values = spectrum;
        std::vector<std::pair<double, double>> out;
        for (const geodetect::Interval& iv :
             geodetect::interlace_bounds(s, n)) {
          out.emplace_back(iv.lower, iv.upper);
        }
        return out;
      },
      py::arg("spectrum"), py::arg("n"));

  m.def(
      "optimal_reduced_spectrum",
      [](const std::string& kind, const RealVector& spectrum, int n) {
        geodetect::WhitenedSpectrum s;
        s.values = spectrum;
        return geodetect::optimal_reduced_spectrum(kind_of(kind), s, n);
      },
      py::arg("kind"), py::arg("spectrum"), py::arg("n"));

  py::class_<geodetect::EnhancementResult>(m, "EnhancementResult")
      .def_readonly("n", &geodetect::EnhancementResult::n)
      .def_readonly("spectrum", &geodetect::EnhancementResult::spectrum)
      .def_readonly("mapping", &geodetect::EnhancementResult::mapping)
      .def_readonly("objective", &geodetect::EnhancementResult::objective);

  m.def(
      "enhanced_mapping",
      [](const std::string& kind, const Matrix& c1, const Matrix& c2, int n) {
        return geodetect::enhanced_mapping(kind_of(kind), HpdMatrix(c1),
                                           HpdMatrix(c2), n);
      },
      py::arg("kind"), py::arg("c1"), py::arg("c2"), py::arg("n"));

  m.def(
      "enhanced_measure",
      [](const std::string& kind, const Matrix& c1, const Matrix& c2,
         const Matrix& w) {
        return geodetect::enhanced_measure(kind_of(kind), HpdMatrix(c1),
                                           HpdMatrix(c2), w);
      },
      py::arg("kind"), py::arg("c1"), py::arg("c2"), py::arg("w"));

  m.def(
      "generate_clutter",
      [](double shape, double scale, double speckle_ar1, int num_pulses,
         std::uint64_t seed) {
        geodetect::KClutterParams params;
        params.shape = shape;
        params.scale = scale;
        params.speckle_ar1 = speckle_ar1;
        geodetect::Rng rng(seed);
        return geodetect::generate_clutter(params, num_pulses, rng);
      },
      py::arg("shape"), py::arg("scale"), py::arg("speckle_ar1"),
      py::arg("num_pulses"), py::arg("seed"));

  m.def(
      "generate_target",
      [](const std::string& kind, int num_pulses, double prf_hz,
         double doppler_hz, int bandwidth, double amplitude) {
        geodetect::TargetSpec spec;
        if (kind == "doppler") {
          spec.kind = geodetect::TargetSpec::Kind::Doppler;
        } else if (kind == "bandlimited") {
          spec.kind = geodetect::TargetSpec::Kind::Bandlimited;
        } else {
          throw geodetect::ConfigError("target kind must be doppler or bandlimited");
        }
        spec.doppler_hz = doppler_hz;
        spec.bandwidth = bandwidth;
        spec.amplitude = amplitude;
        return geodetect::generate_target(spec, num_pulses, prf_hz);
      },
      py::arg("kind"), py::arg("num_pulses"), py::arg("prf_hz") = 1000.0,
      py::arg("doppler_hz") = 135.0, py::arg("bandwidth") = 1,
      py::arg("amplitude") = 1.0);

  m.def("scale_to_scr", &geodetect::scale_to_scr, py::arg("target"),
        py::arg("clutter_power"), py::arg("scr_db"));

  m.def(
      "test_statistic",
      [](const std::string& kind, const Vector& primary,
         const std::vector<Vector>& secondary, bool enhanced, int n) {
        geodetect::DetectorConfig config;
        config.kind = kind_of(kind);
        config.enhanced = enhanced;
        config.reduced_dim = n;
        geodetect::Scene scene;
        scene.primary = primary;
        scene.secondary = secondary;
        return geodetect::test_statistic(config, scene);
      },
      py::arg("kind"), py::arg("primary"), py::arg("secondary"),
      py::arg("enhanced") = false, py::arg("n") = 1);

  m.def(
      "asymptotic_spectrum_gap",
      [](const std::string& process, double rho, int m, int trials,
         std::uint64_t seed) {
        geodetect::ProcessId id;
        if (process == "white") {
          id = geodetect::ProcessId::white();
        } else if (process == "ar1") {
          id = geodetect::ProcessId::ar1(rho);
        } else if (process == "impulse") {
          id = geodetect::ProcessId::impulse();
        } else {
          throw geodetect::ConfigError(
              "process must be white, ar1 or impulse");
        }
        return geodetect::asymptotic_spectrum_gap(id, m, trials, seed);
      },
      py::arg("process"), py::arg("rho"), py::arg("m"), py::arg("trials"),
      py::arg("seed"));

  m.attr("__version__") = "0.1.0";
}
