// Command-line front end: ingest moment data or builtin generators, run the
// analysis pipelines, emit JSON reports and plot-ready CSV series.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "momentdet/gns.hpp"
#include "momentdet/piecewise.hpp"
#include "momentdet/qa_conditions.hpp"
#include "momentdet/report.hpp"
#include "momentdet/tensorseq.hpp"

namespace fs = std::filesystem;
using namespace momentdet;

namespace {

struct CommonOpts {
  std::string config_path;
  std::string mode;
  unsigned precision = 0;
  std::size_t window = 0;
  std::string gen;
  std::string file;
  std::string out_dir;
  bool csv = false;
};

void add_common(CLI::App* cmd, CommonOpts& o, bool with_input = true) {
  cmd->add_option("--config", o.config_path, "configuration file (JSON)");
  cmd->add_option("--mode", o.mode, "rational|float")
      ->check(CLI::IsMember({"rational", "float"}));
  cmd->add_option("--precision", o.precision, "float precision in bits");
  cmd->add_option("--N", o.window, "window size");
  if (with_input) {
    cmd->add_option("--gen", o.gen, "builtin generator name:params");
    cmd->add_option("--file", o.file, "input JSON file");
  }
  auto* out = cmd->add_option("--out", o.out_dir, "output directory");
  cmd->add_flag("--csv", o.csv, "write CSV traces (needs --out)")
      ->needs(out);
}

AnalysisConfig resolve(const CommonOpts& o) {
  AnalysisConfig c = AnalysisConfig::load(
      o.config_path.empty() ? std::nullopt
                            : std::optional<std::string>(o.config_path));
  if (!o.mode.empty())
    c.mode = o.mode == "float" ? ScalarMode::kFloat : ScalarMode::kRational;
  if (o.precision) c.precision_bits = o.precision;
  if (o.window) c.window = o.window;
  return c;
}

nlohmann::json read_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open input file: " + path);
  nlohmann::json j;
  in >> j;
  return j;
}

std::string input_descriptor(const CommonOpts& o) {
  if (!o.gen.empty()) return "gen:" + o.gen;
  if (!o.file.empty()) return "file:" + fs::path(o.file).filename().string();
  throw CLI::ValidationError("provide --gen or --file");
}

struct Emitter {
  fs::path dir;
  bool enabled = false;
  bool csv = false;

  explicit Emitter(const CommonOpts& o) : csv(o.csv) {
    if (!o.out_dir.empty()) {
      dir = o.out_dir;
      fs::create_directories(dir);
      enabled = true;
    }
  }
  void report(const AnalysisReport& rep) const {
    if (enabled) {
      std::ofstream out(dir / "report.json");
      out << rep.dump();
    }
    std::cout << rep.dump();
  }
  void trace(const std::string& name, const Verdict& v) const {
    if (!enabled || !csv) return;
    std::ofstream out(dir / (name + ".csv"));
    write_trace_csv(out, v);
  }
  void file(const std::string& name, const std::string& content) const {
    if (!enabled) return;
    std::ofstream out(dir / name);
    out << content;
  }
};

PositiveSequence load_sequence(const CommonOpts& o, const AnalysisConfig& c) {
  if (!o.gen.empty())
    return PositiveSequence::builtin(o.gen, c.window, c.mode,
                                     c.precision_bits);
  nlohmann::json j = read_json_file(o.file);
  return PositiveSequence::from_json(j);
}

MomentSequence1D load_moments(const CommonOpts& o, const AnalysisConfig& c) {
  if (!o.gen.empty())
    return MomentSequence1D::builtin(o.gen, c.mode, c.precision_bits);
  return MomentSequence1D::from_json(read_json_file(o.file));
}

int cmd_analyze_1d(const CommonOpts& o, std::size_t hankel_order,
                   std::size_t quad_nodes, const std::string& support) {
  AnalysisConfig cfg = resolve(o);
  PrecisionGuard guard(cfg.precision_bits);
  MomentSequence1D m = load_moments(o, cfg);
  std::string hint = support;
  if (hint.empty() && m.support_hint()) hint = *m.support_hint();

  AnalysisReport rep("analyze-1d", input_descriptor(o), cfg);
  Emitter emit(o);

  auto hankel = hankel_psd(m, hankel_order, HankelVariant::kHamburger);
  nlohmann::json hj = {{"order", hankel_order},
                       {"psd", hankel.psd},
                       {"psd_within_tolerance", hankel.within_tolerance},
                       {"rank", hankel.rank}};
  if (!hankel.psd) {
    nlohmann::json w = nlohmann::json::array();
    for (const Scalar& x : hankel.witness) w.push_back(x.to_string());
    hj["witness"] = w;
    hj["witness_value"] = hankel.witness_value.to_string();
  }
  rep.add("hankel", hj);

  if (hankel.psd) {
    auto carleman = carleman_check(m, cfg.window, cfg.series);
    rep.add("carleman", carleman.to_json());
    emit.trace("carleman", carleman.verdict);

    if (hint == "R+" || (!hint.empty() && hint != "R")) {
      auto shifted = hankel_psd(m, hankel_order, HankelVariant::kStieltjes);
      rep.add("hankel_stieltjes",
              {{"psd", shifted.psd}, {"on_shifted", shifted.witness_on_shifted}});
      if (shifted.psd) {
        auto st = stieltjes_check(m, cfg.window, cfg.series);
        rep.add("stieltjes", st.to_json());
        emit.trace("stieltjes", st.verdict);
      }
    }
    if (!hint.empty() && hint != "R" && hint != "R+") {
      std::string iv = hint;
      if (iv.size() >= 2 && iv.front() == '[' && iv.back() == ']')
        iv = iv.substr(1, iv.size() - 2);
      auto comma = iv.find(',');
      if (comma == std::string::npos)
        throw CLI::ValidationError("interval hint must be 'a,b'");
      Scalar lo{parse_rational(iv.substr(0, comma))};
      Scalar hi{parse_rational(iv.substr(comma + 1))};
      auto cs = compact_support_check(m, lo, hi, cfg.window);
      nlohmann::json cj = {{"consistent", cs.consistent},
                           {"certificate", cs.certificate}};
      if (cs.first_violation) cj["first_violation"] = *cs.first_violation;
      rep.add("compact_support", cj);
    }
    if (quad_nodes > 0) {
      auto q = quadrature_from_moments(m, quad_nodes);
      rep.add("quadrature", q.to_json());
    }
  }
  emit.report(rep);
  return 0;
}

int cmd_qa(const CommonOpts& o, double R_opt) {
  AnalysisConfig cfg = resolve(o);
  PrecisionGuard guard(cfg.precision_bits);
  PositiveSequence seq = load_sequence(o, cfg);
  std::optional<Real> R;
  if (R_opt > 0) R = Real(R_opt);

  AnalysisReport rep("qa", input_descriptor(o), cfg);
  Emitter emit(o);

  auto cons = verdict_consistency(seq, cfg.window, R, cfg.series);
  rep.add("conditions", cons.to_json());
  emit.trace("condition_b", cons.b);
  emit.trace("condition_c", cons.c);
  emit.trace("condition_e", cons.e);
  if (emit.enabled && emit.csv) {
    std::ostringstream os;
    os << "r,lnT_over_r2,cumulative_integral\n";
    for (const auto& row : cons.d.integrand_trace)
      os << row[0].str(17, std::ios_base::scientific) << ","
         << row[1].str(17, std::ios_base::scientific) << ","
         << row[2].str(17, std::ios_base::scientific) << "\n";
    emit.file("condition_d.csv", os.str());
  }

  auto identity = mandelbrojt_identity_check(seq, cfg.window, R);
  rep.add("integral_identity",
          {{"residual", identity.residual.str(17, std::ios_base::scientific)},
           {"lhs_quadrature",
            identity.lhs_quadrature.str(17, std::ios_base::scientific)},
           {"lhs_segment",
            identity.lhs_segment.str(17, std::ios_base::scientific)},
           {"rhs_sum", identity.rhs_sum.str(17, std::ios_base::scientific)},
           {"tau", identity.tau.str(17, std::ios_base::scientific)},
           {"vertex_count", identity.vertex_count}});
  emit.report(rep);
  return 0;
}

int cmd_regularize(const CommonOpts& o) {
  AnalysisConfig cfg = resolve(o);
  PrecisionGuard guard(cfg.precision_bits);
  PositiveSequence seq = load_sequence(o, cfg);

  auto reg = log_convex_regularize(seq, cfg.window);
  auto leg = regularize_via_legendre(seq, cfg.window);
  AnalysisReport rep("regularize", input_descriptor(o), cfg);
  Emitter emit(o);

  rep.add("log_convex", is_log_convex(seq, cfg.window).log_convex);
  rep.add("support_indices", reg.support());
  rep.add("routes_agree",
          reg.equals(leg, reg.is_exact() ? 0.0 : 1e-12));

  std::ostringstream csv;
  csv << "n,M_n,M_n_c\n";
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t n = 1; n <= cfg.window; ++n) {
    std::string mn = seq.at(n).to_string();
    std::string mc = reg.is_exact() ? reg.exact_value(n).to_string()
                                    : Scalar(reg.value_real(n)).to_string();
    rows.push_back({{"n", n}, {"M_n", mn}, {"M_n_c", mc}});
    csv << n << "," << seq.at_real(n).str(17, std::ios_base::scientific)
        << "," << reg.value_real(n).str(17, std::ios_base::scientific) << "\n";
  }
  rep.add("values", rows);
  emit.file("regularized.csv", csv.str());
  emit.report(rep);
  return 0;
}

int cmd_bump(const CommonOpts& o, std::size_t count, std::size_t samples) {
  AnalysisConfig cfg = resolve(o);
  cfg.mode = ScalarMode::kRational;  // exact pipeline
  if (count) cfg.window = count;
  PrecisionGuard guard(cfg.precision_bits);
  PositiveSequence seq = load_sequence(o, cfg);

  AnalysisReport rep("bump", input_descriptor(o), cfg);
  Emitter emit(o);

  auto witness = witness_from_class(seq, cfg.window, cfg.series);
  rep.add("feasible", witness.feasible);
  rep.add("ratio_verdict", witness.ratio_verdict.to_json());
  rep.add("diagnosis", witness.diagnosis);
  if (witness.feasible) {
    nlohmann::json bounds = nlohmann::json::array();
    for (const auto& row : witness.bounds)
      bounds.push_back({{"order", row.order},
                        {"sup_upper", rational_to_string(row.sup_upper)},
                        {"bound", rational_to_string(row.bound)},
                        {"verified", row.verified}});
    rep.add("bound_table", bounds);
    rep.add("psi_value_at_0",
            rational_to_string(witness.psi->eval(Rational(0))));
    auto [lo, hi] = witness.psi->support();
    rep.add("support",
            {rational_to_string(lo), rational_to_string(hi)});
    rep.add("piece_count", witness.psi->piece_count());
    emit.file("psi.json", witness.psi->to_json().dump(2) + "\n");
    if (emit.csv) {
      std::ostringstream os;
      witness.psi->write_samples_csv(os, samples);
      emit.file("psi_samples.csv", os.str());
      std::ostringstream bs;
      bs << "index,breakpoint\n";
      const auto& breaks = witness.psi->breakpoints();
      for (std::size_t i = 0; i < breaks.size(); ++i)
        bs << i << "," << rational_to_string(breaks[i]) << "\n";
      emit.file("psi_breakpoints.csv", bs.str());
    }
  }
  emit.report(rep);
  return 0;
}

Multisequence load_multi(const CommonOpts& o, const std::string& product,
                         const std::string& atoms, std::size_t degree,
                         const AnalysisConfig& cfg) {
  if (!product.empty()) {
    std::vector<MomentSequence1D> factors;
    std::stringstream ss(product);
    std::string tok;
    while (std::getline(ss, tok, ';'))
      factors.push_back(
          MomentSequence1D::builtin(tok, cfg.mode, cfg.precision_bits));
    return Multisequence::from_product(factors, degree);
  }
  if (!atoms.empty())
    return Multisequence::from_measure(
        AtomicMeasureD::from_json(read_json_file(atoms)), degree, cfg.mode,
        cfg.precision_bits);
  if (!o.file.empty()) return Multisequence::from_json(read_json_file(o.file));
  throw CLI::ValidationError("provide --file, --product or --atoms");
}

int cmd_analyze_multi(const CommonOpts& o, const std::string& product,
                      const std::string& atoms, std::size_t order,
                      std::size_t terms) {
  AnalysisConfig cfg = resolve(o);
  PrecisionGuard guard(cfg.precision_bits);
  if (terms == 0) terms = 16;
  std::size_t degree = std::max(2 * order, 2 * terms);
  Multisequence m = load_multi(o, product, atoms, degree, cfg);

  std::string desc = !product.empty() ? "product:" + product
                     : !atoms.empty() ? "atoms:" + atoms
                                      : input_descriptor(o);
  AnalysisReport rep("analyze-multi", desc, cfg);
  Emitter emit(o);

  auto psd = moment_matrix_psd(m, order);
  nlohmann::json pj = {{"order", order},
                       {"psd", psd.psd},
                       {"rank", psd.rank},
                       {"basis_size", psd.basis.size()}};
  if (!psd.psd && psd.witness) pj["witness"] = psd.witness->to_json();
  rep.add("moment_matrix", pj);

  nlohmann::json marginals = nlohmann::json::array();
  for (std::size_t j = 1; j <= m.dimension(); ++j) {
    auto mj = marginal(m, j);
    nlohmann::json row = {{"axis", j}};
    nlohmann::json vals = nlohmann::json::array();
    for (std::size_t n = 0; n <= std::min<std::size_t>(degree, 8); ++n)
      vals.push_back(mj.at(n).to_string());
    row["first_moments"] = vals;
    marginals.push_back(row);
  }
  rep.add("marginals", marginals);

  auto carl = multivariate_carleman(m, terms, cfg.series);
  rep.add("multivariate_carleman", carl.to_json());
  for (std::size_t j = 0; j < carl.per_axis.size(); ++j)
    emit.trace("carleman_axis" + std::to_string(j + 1),
               carl.per_axis[j].verdict);

  if (psd.psd) {
    auto g = gns_build(m, order);
    nlohmann::json gj = {{"quotient_dimension", g.quotient_dimension()},
                         {"kernel_rank", g.kernel_rank}};
    if (order >= 2) {
      auto comm = commutation_residual(g);
      gj["commutation"] = comm.to_json();
    }
    bool fidelity = true;
    for (const auto& alpha : monomials_up_to(m.dimension(), order)) {
      Scalar lhs = gns_pairing(g, alpha);
      Scalar rhs = m.at(alpha);
      if (m.mode() == ScalarMode::kRational) {
        if (!(lhs == rhs)) fidelity = false;
      } else {
        Real scale = std::max(Real(abs(rhs.real())), Real(1));
        if (abs(lhs.real() - rhs.real()) > Real("1e-20") * scale)
          fidelity = false;
      }
    }
    gj["fidelity"] = fidelity;
    rep.add("gns", gj);
  }
  emit.report(rep);
  return 0;
}

int cmd_gns(const CommonOpts& o, const std::string& product,
            const std::string& atoms, std::size_t order) {
  AnalysisConfig cfg = resolve(o);
  PrecisionGuard guard(cfg.precision_bits);
  Multisequence m = load_multi(o, product, atoms, 2 * order, cfg);

  std::string desc = !product.empty() ? "product:" + product
                     : !atoms.empty() ? "atoms:" + atoms
                                      : input_descriptor(o);
  AnalysisReport rep("gns", desc, cfg);
  Emitter emit(o);

  auto g = gns_build(m, order);
  rep.add("model", g.to_json());
  if (order >= 2) rep.add("commutation", commutation_residual(g).to_json());
  emit.report(rep);
  return 0;
}

int cmd_realize(const CommonOpts& o, const std::string& atoms,
                std::size_t order, const std::string& directions,
                std::size_t budget, bool heuristic) {
  AnalysisConfig cfg = resolve(o);
  PrecisionGuard guard(cfg.precision_bits);

  TensorSequence m = [&]() {
    if (!atoms.empty()) {
      auto mu = AtomicMeasureD::from_json(read_json_file(atoms));
      return TensorSequence::from_measure(mu, order, cfg.mode,
                                          cfg.precision_bits);
    }
    if (!o.file.empty())
      return TensorSequence::from_json(read_json_file(o.file));
    throw CLI::ValidationError("provide --file or --atoms");
  }();

  DirectionSet E = directions.empty()
                       ? DirectionSet::canonical(m.dimension())
                       : DirectionSet::from_json(read_json_file(directions));
  E.validate(m.dimension());

  std::size_t N = std::min(cfg.window, m.max_order() / 2);
  std::string desc = !atoms.empty() ? "atoms:" + atoms : input_descriptor(o);
  AnalysisReport rep("realize", desc, cfg);
  Emitter emit(o);

  rep.add("direction_set",
          {{"size", E.vectors.size()}, {"spanning", E.spanning(m.dimension())}});

  auto seq = determining_sequence(m, E, N, budget ? budget
                                                  : kDefaultPairingBudget,
                                  heuristic);
  nlohmann::json sj = nlohmann::json::array();
  for (std::size_t n = 0; n <= N; ++n)
    sj.push_back({{"n", n},
                  {"m_n", seq.values[n].to_string()},
                  {"lower_bound_only", bool(seq.lower_bound_only[n])}});
  rep.add("determining_sequence", sj);
  rep.add("pairing_evaluations", seq.evaluations);

  auto bounds = d_bound_check(m, E, N, &seq);
  rep.add("d_bound_ok", bounds);

  auto verdict = determining_verdict(m, E, N, cfg.series);
  rep.add("determining_verdict", verdict.to_json());

  nlohmann::json per_dir = nlohmann::json::array();
  for (std::size_t i = 0; i < E.vectors.size(); ++i) {
    auto md = per_direction_sequence(m, E.vectors[i]);
    auto check = carleman_check(md, m.max_order() / 2, cfg.series);
    per_dir.push_back({{"direction", i},
                       {"carleman", check.to_json()}});
  }
  rep.add("per_direction", per_dir);

  auto gs = generalized_stieltjes_check(m, E, N, cfg.series);
  rep.add("generalized_stieltjes", gs.to_json());
  emit.report(rep);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"moment determinacy analysis from windowed data"};
  app.require_subcommand(1);

  CommonOpts o1, oqa, oreg, obump, omulti, ogns, oreal;
  std::size_t hankel_order = 8, quad_nodes = 0;
  std::string support;
  auto* c1 = app.add_subcommand("analyze-1d", "one-dimensional moment checks");
  add_common(c1, o1);
  c1->add_option("--hankel-order", hankel_order, "Hankel matrix order");
  c1->add_option("--quadrature", quad_nodes, "Gauss rule node count");
  c1->add_option("--support", support, "support hint: R, R+ or a,b");

  double R = 0;
  auto* cqa = app.add_subcommand("qa", "series conditions and consistency");
  add_common(cqa, oqa);
  cqa->add_option("--R", R, "upper integration limit for the integral check");

  auto* creg = app.add_subcommand("regularize", "log-convex envelope");
  add_common(creg, oreg);

  std::size_t count = 8, samples = 256;
  auto* cbump = app.add_subcommand("bump", "compactly supported witness");
  add_common(cbump, obump);
  cbump->add_option("--count", count, "number of averagings");
  cbump->add_option("--samples", samples, "CSV sample count");
  cbump->add_option("--class", obump.gen, "sequence class generator")
      ->excludes("--gen");

  std::string product, atoms;
  std::size_t order = 3, terms = 0;
  auto* cmulti = app.add_subcommand("analyze-multi",
                                    "d-dimensional moment checks");
  add_common(cmulti, omulti);
  cmulti->add_option("--product", product,
                     "semicolon-separated 1-D factor generators");
  cmulti->add_option("--atoms", atoms, "atomic measure JSON file");
  cmulti->add_option("--order", order, "moment matrix / GNS order");
  cmulti->add_option("--terms", terms, "series terms per axis");

  std::string gproduct, gatoms;
  std::size_t gorder = 3;
  auto* cgns = app.add_subcommand("gns", "truncated GNS model");
  add_common(cgns, ogns);
  cgns->add_option("--product", gproduct, "factor generators");
  cgns->add_option("--atoms", gatoms, "atomic measure JSON file");
  cgns->add_option("--order", gorder, "truncation degree");

  std::string ratoms, rdirs;
  std::size_t rorder = 8, rbudget = 0;
  bool rheur = false;
  auto* creal = app.add_subcommand("realize", "tensor determining analysis");
  add_common(creal, oreal);
  creal->add_option("--atoms", ratoms, "atomic measure JSON file");
  creal->add_option("--order", rorder, "max tensor order (2N)");
  creal->add_option("--E", rdirs, "direction set JSON file");
  creal->add_option("--budget", rbudget, "pairing enumeration budget");
  creal->add_flag("--heuristic", rheur,
                  "allow the lower-bound search past the budget");

  CLI11_PARSE(app, argc, argv);

  try {
    if (c1->parsed()) return cmd_analyze_1d(o1, hankel_order, quad_nodes, support);
    if (cqa->parsed()) return cmd_qa(oqa, R);
    if (creg->parsed()) return cmd_regularize(oreg);
    if (cbump->parsed()) return cmd_bump(obump, count, samples);
    if (cmulti->parsed())
      return cmd_analyze_multi(omulti, product, atoms, order, terms);
    if (cgns->parsed()) return cmd_gns(ogns, gproduct, gatoms, gorder);
    if (creal->parsed())
      return cmd_realize(oreal, ratoms, rorder, rdirs, rbudget, rheur);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
