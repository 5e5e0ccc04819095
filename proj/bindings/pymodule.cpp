// Python bindings: thin JSON-bridged wrappers over the main operations.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "momentdet/gns.hpp"
#include "momentdet/piecewise.hpp"
#include "momentdet/qa_conditions.hpp"
#include "momentdet/report.hpp"
#include "momentdet/tensorseq.hpp"

namespace py = pybind11;
using namespace momentdet;

namespace {

py::object to_py(const nlohmann::json& j) {
  py::module_ json = py::module_::import("json");
  return json.attr("loads")(j.dump());
}

nlohmann::json from_py(const py::object& obj) {
  py::module_ json = py::module_::import("json");
  std::string dumped = py::cast<std::string>(json.attr("dumps")(obj));
  return nlohmann::json::parse(dumped);
}

ScalarMode mode_of(const std::string& mode) {
  if (mode == "rational") return ScalarMode::kRational;
  if (mode == "float") return ScalarMode::kFloat;
  throw std::invalid_argument("mode must be 'rational' or 'float'");
}

PositiveSequence sequence_from(const py::object& source, std::size_t window,
                               const std::string& mode, unsigned bits) {
  if (py::isinstance<py::str>(source))
    return PositiveSequence::builtin(py::cast<std::string>(source), window,
                                     mode_of(mode), bits);
  nlohmann::json j = from_py(source);
  if (j.is_array())
    j = nlohmann::json{{"values", j}, {"mode", mode},
                       {"precision_bits", bits}};
  return PositiveSequence::from_json(j);
}

MomentSequence1D moments_from(const py::object& source,
                              const std::string& mode, unsigned bits) {
  if (py::isinstance<py::str>(source))
    return MomentSequence1D::builtin(py::cast<std::string>(source),
                                     mode_of(mode), bits);
  nlohmann::json j = from_py(source);
  if (j.is_array())
    j = nlohmann::json{{"moments", j}, {"mode", mode},
                       {"precision_bits", bits}};
  return MomentSequence1D::from_json(j);
}

}  // namespace

PYBIND11_MODULE(_momentdet, m) {
  m.doc() =
      "Quasi-analytic class conditions, moment determinacy checks and "
      "measure reconstruction from windowed moment data.";

  m.def("version", [] { return std::string(kVersion); });

  m.def(
      "is_log_convex",
      [](const py::object& seq, std::size_t N, const std::string& mode,
         unsigned bits) {
        auto s = sequence_from(seq, N, mode, bits);
        auto rep = is_log_convex(s, N);
        py::dict out;
        out["log_convex"] = rep.log_convex;
        out["first_violation"] =
            rep.first_violation ? py::object(py::int_(*rep.first_violation))
                                : py::object(py::none());
        return out;
      },
      py::arg("seq"), py::arg("N"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "regularize",
      [](const py::object& seq, std::size_t N, const std::string& mode,
         unsigned bits) {
        auto s = sequence_from(seq, N, mode, bits);
        PrecisionGuard guard(bits);
        auto reg = log_convex_regularize(s, N);
        auto leg = regularize_via_legendre(s, N);
        py::dict out;
        out["support_indices"] = reg.support();
        py::list values;
        for (std::size_t n = 1; n <= N; ++n)
          values.append(reg.is_exact()
                            ? reg.exact_value(n).to_string()
                            : Scalar(reg.value_real(n)).to_string());
        out["values"] = values;
        out["routes_agree"] = reg.equals(leg, reg.is_exact() ? 0.0 : 1e-12);
        return out;
      },
      py::arg("seq"), py::arg("N"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "qa_conditions",
      [](const py::object& seq, std::size_t N, const std::string& mode,
         unsigned bits) {
        auto s = sequence_from(seq, N, mode, bits);
        auto rep = verdict_consistency(s, N);
        return to_py(rep.to_json());
      },
      py::arg("seq"), py::arg("N"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "integral_identity",
      [](const py::object& seq, std::size_t N, const std::string& mode,
         unsigned bits) {
        auto s = sequence_from(seq, N, mode, bits);
        auto r = mandelbrojt_identity_check(s, N);
        py::dict out;
        out["residual"] = static_cast<double>(r.residual);
        out["lhs"] = static_cast<double>(r.lhs_quadrature);
        out["rhs"] = static_cast<double>(r.rhs_sum);
        out["tau"] = static_cast<double>(r.tau);
        return out;
      },
      py::arg("seq"), py::arg("N"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "carleman_check",
      [](const py::object& moments, std::size_t N, const std::string& mode,
         unsigned bits) {
        auto mm = moments_from(moments, mode, bits);
        return to_py(carleman_check(mm, N).to_json());
      },
      py::arg("moments"), py::arg("N"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "stieltjes_check",
      [](const py::object& moments, std::size_t N, const std::string& mode,
         unsigned bits) {
        auto mm = moments_from(moments, mode, bits);
        return to_py(stieltjes_check(mm, N).to_json());
      },
      py::arg("moments"), py::arg("N"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "hankel_psd",
      [](const py::object& moments, std::size_t order,
         const std::string& variant, const std::string& mode, unsigned bits) {
        auto mm = moments_from(moments, mode, bits);
        auto rep = hankel_psd(mm, order,
                              variant == "stieltjes"
                                  ? HankelVariant::kStieltjes
                                  : HankelVariant::kHamburger);
        py::dict out;
        out["psd"] = rep.psd;
        out["rank"] = rep.rank;
        if (!rep.psd) {
          py::list w;
          for (const Scalar& x : rep.witness) w.append(x.to_string());
          out["witness"] = w;
        }
        return out;
      },
      py::arg("moments"), py::arg("order"), py::arg("variant") = "hamburger",
      py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "quadrature_from_moments",
      [](const py::object& moments, std::size_t k, const std::string& mode,
         unsigned bits) {
        auto mm = moments_from(moments, mode, bits);
        auto q = quadrature_from_moments(mm, k);
        py::list out;
        for (const auto& a : q.atoms)
          out.append(py::make_tuple(a.node.to_string(),
                                    a.weight.to_string()));
        return out;
      },
      py::arg("moments"), py::arg("k"), py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "bump_witness",
      [](const py::object& seq, std::size_t count, unsigned bits) {
        auto s = sequence_from(seq, count, "rational", bits);
        auto rep = witness_from_class(s, count);
        py::dict out;
        out["feasible"] = rep.feasible;
        out["diagnosis"] = rep.diagnosis;
        out["ratio_verdict"] = to_py(rep.ratio_verdict.to_json());
        if (rep.feasible) {
          py::list rows;
          for (const auto& b : rep.bounds)
            rows.append(py::make_tuple(b.order,
                                       rational_to_string(b.sup_upper),
                                       rational_to_string(b.bound),
                                       b.verified));
          out["bounds"] = rows;
          out["psi"] = to_py(rep.psi->to_json());
          out["psi_at_0"] = rational_to_string(rep.psi->eval(Rational(0)));
        }
        return out;
      },
      py::arg("seq"), py::arg("count") = 8,
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "analyze_multi",
      [](const py::object& atoms, std::size_t order, std::size_t terms,
         const std::string& mode, unsigned bits) {
        auto mu = AtomicMeasureD::from_json(from_py(atoms));
        std::size_t degree = std::max(2 * order, 2 * terms);
        auto m = Multisequence::from_measure(mu, degree, mode_of(mode), bits);
        auto psd = moment_matrix_psd(m, order);
        py::dict out;
        out["psd"] = psd.psd;
        out["rank"] = psd.rank;
        out["carleman"] = to_py(multivariate_carleman(m, terms).to_json());
        if (psd.psd) {
          auto g = gns_build(m, order);
          py::dict gd;
          gd["quotient_dimension"] = g.quotient_dimension();
          gd["kernel_rank"] = g.kernel_rank;
          if (order >= 2)
            gd["commutation"] = to_py(commutation_residual(g).to_json());
          out["gns"] = gd;
        }
        return out;
      },
      py::arg("atoms"), py::arg("order") = 3, py::arg("terms") = 16,
      py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);

  m.def(
      "realize",
      [](const py::object& atoms, std::size_t order, std::size_t N,
         const std::string& mode, unsigned bits) {
        auto mu = AtomicMeasureD::from_json(from_py(atoms));
        auto m = TensorSequence::from_measure(mu, order, mode_of(mode), bits);
        auto E = DirectionSet::canonical(m.dimension());
        auto verdict = determining_verdict(m, E, N);
        auto bounds = d_bound_check(m, E, N, &verdict.sequence);
        py::dict out;
        out["verdict"] = to_py(verdict.to_json());
        out["d_bound_ok"] = bounds;
        return out;
      },
      py::arg("atoms"), py::arg("order") = 8, py::arg("N") = 4,
      py::arg("mode") = "rational",
      py::arg("precision_bits") = kDefaultPrecisionBits);
}
