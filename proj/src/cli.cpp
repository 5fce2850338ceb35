#include "ptsusy/cli.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <unistd.h>

#include <CLI11.hpp>

#include "ptsusy/numerics.hpp"
#include "ptsusy/operators.hpp"
#include "ptsusy/symmetry.hpp"
#include "ptsusy/version.hpp"

namespace ptsusy::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

const std::vector<std::pair<Command, std::string>> kCommands = {
    {Command::Figures, "figures"},
    {Command::Spectrum, "spectrum"},
    {Command::VerifySymmetry, "verify-symmetry"},
    {Command::VerifyShapeInvariance, "verify-shape-invariance"},
    {Command::VerifyFactorization, "verify-factorization"},
    {Command::Gram, "gram"},
    {Command::Hierarchy, "hierarchy"},
};

json complex_json(cplx z) { return {{"re", json_number(z.real())}, {"im", json_number(z.imag())}}; }

json complex_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (cplx z : v) a.push_back(complex_json(z));
  return a;
}

json real_list(const std::vector<double>& v) {
  json a = json::array();
  for (double x : v) a.push_back(json_number(x));
  return a;
}

json matrix_json(const Eigen::MatrixXcd& m) {
  json re = json::array(), im = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json rr = json::array(), ri = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      rr.push_back(json_number(m(i, j).real()));
      ri.push_back(json_number(m(i, j).imag()));
    }
    re.push_back(rr);
    im.push_back(ri);
  }
  return {{"re", re}, {"im", im}};
}

FamilyParams params(const RunConfig& cfg) { return family(cfg.variant, cfg.k, cfg.q, cfg.n); }

Grid symmetric_grid(const RunConfig& cfg) {
  return Grid::symmetric(well_half_width(params(cfg)), cfg.grid_size);
}

// sup_j |a_j - b_j| / max(1, |scale_j|)
double relative_gap(const ComplexGridFunction& a, const ComplexGridFunction& b,
                    const ComplexGridFunction& scale) {
  double worst = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    worst = std::max(worst, std::abs(a[j] - b[j]) / std::max(1.0, std::abs(scale[j])));
  }
  return worst;
}

json symmetry_json(const SymmetryReport& s) {
  return {{"pt_defect", json_number(s.pt_defect)},   {"apt_defect", json_number(s.apt_defect)},
          {"is_pt_symmetric", s.is_pt_symmetric},    {"is_apt_symmetric", s.is_apt_symmetric},
          {"tolerance", json_number(s.tolerance)},   {"real_even", json_number(s.real_even)},
          {"real_odd", json_number(s.real_odd)},     {"imag_even", json_number(s.imag_even)},
          {"imag_odd", json_number(s.imag_odd)}};
}

Adjoint adjoint_for(const std::string& strategy) {
  const ConjugationStrategy s = parse_conjugation(strategy);
  if (s == ConjugationStrategy::PT) {
    throw ConfigError("verify-factorization takes --strategy apt or hermitian");
  }
  return s == ConjugationStrategy::APT ? Adjoint::APT : Adjoint::Hermitian;
}

}  // namespace

std::string to_string(Command c) {
  for (const auto& [cmd, name] : kCommands) {
    if (cmd == c) return name;
  }
  return "unknown";
}

std::string to_string(Format f) { return f == Format::Csv ? "csv" : "json"; }

Command parse_command(const std::string& name) {
  for (const auto& [cmd, n] : kCommands) {
    if (n == name) return cmd;
  }
  throw ConfigError("unknown command '" + name + "'");
}

void validate(const RunConfig& cfg) {
  if (cfg.grid_size < 201 || cfg.grid_size % 2 == 0) {
    throw ConfigError("--grid-size must be odd and >= 201 (got " + std::to_string(cfg.grid_size) + ")");
  }
  if (!std::isfinite(cfg.q)) throw ConfigError("--q must be finite");
  if (!(cfg.k > 0.0) || !std::isfinite(cfg.k)) throw ConfigError("--k must be positive");
  if (cfg.n < 1) throw ConfigError("--n must be >= 1");
  if (cfg.m < 1 || cfg.m > 8) throw ConfigError("--m must be in 1..8");
  if (cfg.depth < 1 || cfg.depth > 10) throw ConfigError("--depth must be in 1..10");
  if (!(cfg.plot_ceiling > 0.0) || !std::isfinite(cfg.plot_ceiling)) {
    throw ConfigError("--plot-ceiling must be positive");
  }
  try {
    parse_conjugation(cfg.strategy);
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (!cfg.output_path.empty()) {
    const fs::path out(cfg.output_path);
    if (cfg.command == Command::Figures) {
      if (!fs::is_directory(out)) throw ConfigError("figure directory does not exist: " + cfg.output_path);
    } else {
      const fs::path parent = out.has_parent_path() ? out.parent_path() : fs::path(".");
      if (!fs::is_directory(parent)) {
        throw ConfigError("output directory does not exist: " + parent.string());
      }
    }
  }
}

json config_json(const RunConfig& cfg) {
  return {{"command", to_string(cfg.command)},
          {"variant", to_string(cfg.variant)},
          {"k", json_number(cfg.k)},
          {"q", json_number(cfg.q)},
          {"n", cfg.n},
          {"m", cfg.m},
          {"grid_size", cfg.grid_size},
          {"depth", cfg.depth},
          {"strategy", cfg.strategy},
          {"mode", to_string(cfg.mode)},
          {"format", to_string(cfg.format)},
          {"output_path", cfg.output_path},
          {"plot_ceiling", json_number(cfg.plot_ceiling)}};
}

Check check_le(std::string name, double measured, double tolerance, bool asserted) {
  return {std::move(name), measured, tolerance, "<=", asserted, measured <= tolerance};
}

Check check_gt(std::string name, double measured, double tolerance, bool asserted) {
  return {std::move(name), measured, tolerance, ">", asserted, measured > tolerance};
}

bool Report::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const Check& c) { return !c.asserted || c.passed; });
}

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (v == 0.0) return "0";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

json json_number(double v) {
  if (std::isfinite(v)) return v == 0.0 ? json(0.0) : json(v);
  return format_number(v);
}

std::vector<FigureCurve> figure_curves(const RunConfig& cfg) {
  const auto tan_p = family(Variant::Tangent, cfg.k, cfg.q, cfg.n);
  const auto cot_p = family(Variant::Cotangent, cfg.k, cfg.q, cfg.n);
  const auto tan_0 = family(Variant::Tangent, cfg.k, 0.0, cfg.n);
  const auto cot_0 = family(Variant::Cotangent, cfg.k, 0.0, cfg.n);
  const double hw = well_half_width(tan_p);
  const double t_lo = -hw, t_hi = hw, c_lo = 0.0, c_hi = 2.0 * hw;
  return {
      {"fig1_w1c.csv", build_superpotential(cot_p), c_lo, c_hi},
      {"fig1_w1t.csv", build_superpotential(tan_p), t_lo, t_hi},
      {"fig2_v1_baseline.csv", closed_form_potentials(tan_0).v1, t_lo, t_hi},
      {"fig2_v1c.csv", closed_form_potentials(cot_p).v1, c_lo, c_hi},
      {"fig2_v1t.csv", closed_form_potentials(tan_p).v1, t_lo, t_hi},
      {"fig3_v2c_q0.csv", closed_form_potentials(cot_0).v2, c_lo, c_hi},
      {"fig3_v2t_q0.csv", closed_form_potentials(tan_0).v2, t_lo, t_hi},
      {"fig3_v2c.csv", closed_form_potentials(cot_p).v2, c_lo, c_hi},
      {"fig3_v2t.csv", closed_form_potentials(tan_p).v2, t_lo, t_hi},
  };
}

std::string figure_csv(const ClosedFormFunction& f, const Grid& g, double ceiling) {
  auto clamp = [ceiling](double v, bool& clipped) {
    if (std::isnan(v) || std::abs(v) > ceiling) {
      clipped = true;
      return std::isnan(v) ? ceiling : std::copysign(ceiling, v);
    }
    return v;
  };
  std::string out = "x,re,im,clipped\n";
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const cplx v = f.eval(x);
    bool clipped = false;
    const double re = clamp(v.real(), clipped);
    const double im = clamp(v.imag(), clipped);
    out += format_number(x) + ',' + format_number(re) + ',' + format_number(im) + ',' + (clipped ? "1" : "0") + '\n';
  }
  return out;
}

void write_atomic(const std::string& path, const std::string& contents) {
  const fs::path target(path);
  fs::path tmp = target;
  tmp += ".tmp." + std::to_string(::getpid());
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw ConfigError("cannot open " + tmp.string() + " for writing");
    f << contents;
    f.flush();
    if (!f) throw ConfigError("write failed: " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, target, ec);
  if (ec) {
    fs::remove(tmp);
    throw ConfigError("cannot move output into place: " + ec.message());
  }
}

Report cmd_figures(const RunConfig& cfg) {
  Report r;
  r.command = Command::Figures;
  const fs::path dir = cfg.output_path.empty() ? fs::path(".") : fs::path(cfg.output_path);
  json curves = json::array();
  for (const auto& c : figure_curves(cfg)) {
    const Grid g(c.lo, c.hi, kFigureRows);
    const std::string body = figure_csv(c.f, g, cfg.plot_ceiling);
    const fs::path file = dir / c.file;
    write_atomic(file.string(), body);
    r.files.push_back(file.string());
    const double xc = g.node(kFigureRows / 2);
    curves.push_back({{"file", c.file},
                      {"rows", kFigureRows},
                      {"x_center", json_number(xc)},
                      {"value_center", complex_json(c.f.eval(xc))}});
  }
  r.data["curves"] = curves;
  return r;
}

Report cmd_spectrum(const RunConfig& cfg) {
  Report r;
  r.command = Command::Spectrum;
  const SpectrumReport s = spectrum_report(params(cfg), cfg.m, cfg.grid_size, cfg.mode);

  double worst_estimate = 0.0;
  for (double e : s.consistent.error_estimates) worst_estimate = std::max(worst_estimate, e);
  r.checks.push_back(check_le("refinement_error_estimate", worst_estimate, s.stability_tolerance));
  for (std::size_t j = 0; j < s.eigenvalues.size(); ++j) {
    const std::string id = std::to_string(j);
    r.checks.push_back(check_le("abs_error_" + id, s.abs_errors[j], 1e-3, !s.unstable));
    r.checks.push_back(check_le("imag_part_" + id, std::abs(s.consistent.fine[j].imag()),
                                1e-6 * std::max(1.0, std::abs(s.eigenvalues[j].real())), !s.unstable));
  }
  r.checks.push_back(check_le("backward_error", s.max_backward_error, 1e-8));
  r.checks.push_back(check_le("solver_agreement", s.solver_agreement, 1e-8));
  r.checks.push_back(check_le("unpaired_complex_eigenvalues", s.pt_paired ? 0.0 : 1.0, 0.0));
  for (std::size_t j = 0; j < s.isospectral_defects.size() && j < 3; ++j) {
    r.checks.push_back(check_le("isospectral_" + std::to_string(j), s.isospectral_defects[j], 2e-3));
  }
  double pointwise_estimate = s.pointwise.error_estimates.empty() ? INFINITY : 0.0;
  for (double e : s.pointwise.error_estimates) pointwise_estimate = std::max(pointwise_estimate, e);
  r.checks.push_back(check_le("pointwise_refinement_error_estimate", pointwise_estimate, s.stability_tolerance, false));

  auto scheme = [](const SchemeResult& sr) {
    return json{{"coarse", complex_list(sr.coarse)},
                {"fine", complex_list(sr.fine)},
                {"extrapolated", real_list(sr.extrapolated)},
                {"error_estimates", real_list(sr.error_estimates)},
                {"observed_order", real_list(sr.observed_order)},
                {"unstable", sr.unstable}};
  };
  json sizes = json::array();
  for (std::size_t n : s.grid_sizes) sizes.push_back(n);
  r.data = {{"eigenvalues", complex_list(s.eigenvalues)},
            {"target", real_list(s.target)},
            {"abs_errors", real_list(s.abs_errors)},
            {"imag_max", json_number(s.imag_max)},
            {"grid_sizes", sizes},
            {"extrapolated", s.extrapolated},
            {"stability", s.unstable ? "UNSTABLE" : "STABLE"},
            {"discretization", "ground-state-consistent"},
            {"consistent", scheme(s.consistent)},
            {"pointwise", scheme(s.pointwise)},
            {"isospectrality",
             {{"partner", scheme(s.partner)}, {"defects", real_list(s.isospectral_defects)}}},
            {"solver_agreement", json_number(s.solver_agreement)},
            {"max_backward_error", json_number(s.max_backward_error)},
            {"pt_paired", s.pt_paired}};
  return r;
}

Report cmd_verify_symmetry(const RunConfig& cfg) {
  Report r;
  r.command = Command::VerifySymmetry;
  const auto p = params(cfg);
  const Grid g = symmetric_grid(cfg);
  const PartnerPair pair = closed_form_potentials(p);
  constexpr double tol = 1e-10;
  // Defects relative to the function's own scale; the potentials reach
  // ~1/h^2 next to the walls.
  auto scaled = [&](const ClosedFormFunction& f) {
    const ComplexGridFunction u = sample(on_symmetric_domain(f, p), g);
    return cplx(1.0 / std::max(1.0, u.sup_norm())) * u;
  };
  struct Item {
    std::string name;
    ClosedFormFunction f;
    bool expect_pt, expect_apt;
  };
  const std::vector<Item> items = {
      {"v1", pair.v1, true, false},
      {"v2", pair.v2, true, false},
      {"w", build_superpotential(p), false, true},
      {"ground_state", ground_state_wavefunction(p), true, false},
  };
  for (const auto& it : items) {
    const SymmetryReport s = classify(scaled(it.f), tol);
    r.data[it.name] = symmetry_json(s);
    if (it.expect_pt) {
      r.checks.push_back(check_le(it.name + "_pt_symmetric", s.pt_defect, tol));
    } else {
      r.checks.push_back(check_gt(it.name + "_not_pt_symmetric", s.pt_defect, tol));
    }
    if (it.expect_apt) r.checks.push_back(check_le(it.name + "_apt_symmetric", s.apt_defect, tol));
  }
  r.data["defect_scale"] = "relative to max(1, sup |u|)";
  return r;
}

Report cmd_verify_shape_invariance(const RunConfig& cfg) {
  Report r;
  r.command = Command::VerifyShapeInvariance;
  const auto p = params(cfg);
  const Grid g = symmetric_grid(cfg);
  const double expected = p.alpha * (p.alpha + 2.0 * p.n * p.k);
  const ComplexGridFunction rem = sample(on_symmetric_domain(shape_invariance_remainder(p), p), g);
  const ComplexGridFunction scale =
      sample(on_symmetric_domain(closed_form_potentials(family(p.variant, p.k, p.q, p.n + 1)).v1, p), g);

  double lo = INFINITY, hi = -INFINITY, imag = 0.0;
  for (std::size_t j = 0; j < rem.size(); ++j) {
    lo = std::min(lo, rem[j].real());
    hi = std::max(hi, rem[j].real());
    imag = std::max(imag, std::abs(rem[j].imag()));
  }
  const ComplexGridFunction target(g, Eigen::VectorXcd::Constant(Eigen::Index(g.size()), expected));
  const ComplexGridFunction center(g, Eigen::VectorXcd::Constant(Eigen::Index(g.size()), rem[g.size() / 2]));
  r.checks.push_back(check_le("remainder_constant", relative_gap(rem, center, scale), 1e-10));
  r.checks.push_back(check_le("remainder_value", relative_gap(rem, target, scale), 1e-10));

  json sums = json::array();
  double worst = 0.0;
  double total = 0.0;
  for (int n = 1; n <= 10; ++n) {
    total += remainder_value(n, p.k);
    const double want = p.k * p.k * double(n) * double(n + 2);
    worst = std::max(worst, std::abs(total - want));
    sums.push_back({{"n", n}, {"sum", json_number(total)}, {"energy", json_number(want)}});
  }
  r.checks.push_back(check_le("telescoped_spectrum", worst, 0.0));
  r.data = {{"expected", json_number(expected)},
            {"min", json_number(lo)},
            {"max", json_number(hi)},
            {"spread", json_number(hi - lo)},
            {"max_abs_imag", json_number(imag)},
            {"defect_scale", "relative to max(1, |V1(a + alpha, x)|) per node"},
            {"telescoping", sums}};
  return r;
}

Report cmd_verify_factorization(const RunConfig& cfg) {
  Report r;
  r.command = Command::VerifyFactorization;
  const Adjoint adjoint = adjoint_for(cfg.strategy);
  const auto p = params(cfg);
  const double k = p.k;
  const ClosedFormFunction w = on_symmetric_domain(build_superpotential(p), p);
  PartnerPair pair = closed_form_potentials(p);
  pair.v1 = on_symmetric_domain(pair.v1, p);
  pair.v2 = on_symmetric_domain(pair.v2, p);
  const auto test_fn = ClosedFormFunction::from([k](auto x) { return cos(k * x) * cos(k * x); });

  auto residual = [&](std::size_t n) {
    const Grid g = Grid::symmetric(well_half_width(p), n);
    return factorization_residual(w, pair, sample(test_fn, g), adjoint);
  };
  const FactorizationResidual main = residual(cfg.grid_size);
  r.checks.push_back(check_le("h1_residual", main.h1, 1e-5));
  r.checks.push_back(check_le("h2_residual", main.h2, 1e-5));

  json decay = json::array();
  std::vector<double> seq;
  for (std::size_t n : {101u, 201u, 401u}) {
    const FactorizationResidual fr = residual(n);
    seq.push_back(fr.h1);
    decay.push_back({{"grid_size", n}, {"h1", json_number(fr.h1)}, {"h2", json_number(fr.h2)}});
  }
  const double order = std::log2(seq[1] / seq[2]);
  r.checks.push_back(check_gt("h1_observed_order", order, 3.5, adjoint == Adjoint::APT));

  const Grid g = symmetric_grid(cfg);
  const ComplexGridFunction psi = sample(test_fn, g);
  const auto gap = (apply_ladder(LadderOperator::hermitian_adjoint(w), psi) -
                    apply_ladder(LadderOperator::apt_conjugate(w), psi))
                       .sup_norm();
  Eigen::VectorXcd im_w(Eigen::Index(g.size()));
  const ComplexGridFunction ws = sample(w, g);
  for (Eigen::Index j = 0; j < im_w.size(); ++j) im_w[j] = 2.0 * ws.values()[j].imag() * psi.values()[j];
  const double predicted_gap = ComplexGridFunction(g, im_w).sup_norm();
  r.checks.push_back(check_le("adjoint_gap_identity", std::abs(gap - predicted_gap), 1e-8));

  // Reported without assertion: for APT-symmetric W this evaluates to
  // sup |(conj V2(-x) - V1(x)) psi| rather than 0.
  const double partner = apt_partner_relation_check(w, psi);
  const ComplexGridFunction v1s = sample(pair.v1, g);
  const ComplexGridFunction v2s = sample(pair.v2, g);
  const ComplexGridFunction v2_pt = apply_conjugation(ConjugationStrategy::PT, v2s);
  const double partner_predicted = ((v2_pt - v1s) * psi).sup_norm();
  r.checks.push_back(check_le("apt_partner_relation", partner, 1e-5, false));

  r.data = {{"adjoint", cfg.strategy},
            {"test_function", "cos^2(kx)"},
            {"h1_residual", json_number(main.h1)},
            {"h2_residual", json_number(main.h2)},
            {"refinement", decay},
            {"h1_observed_order", json_number(order)},
            {"adjoint_gap", json_number(gap)},
            {"adjoint_gap_predicted", json_number(predicted_gap)},
            {"apt_partner_relation", json_number(partner)},
            {"apt_partner_relation_predicted", json_number(partner_predicted)}};
  return r;
}

Report cmd_gram(const RunConfig& cfg) {
  Report r;
  r.command = Command::Gram;
  const auto p = params(cfg);
  const Grid g = symmetric_grid(cfg);
  const ComplexGridFunction psi0 = sample(on_symmetric_domain(ground_state_wavefunction(p), p), g);
  const auto m = discretize_consistent(psi0, closed_form_potentials(p).e0);
  EigenOptions opts;
  for (int j = 0; j < cfg.m; ++j) {
    const double level = double(p.n + j);
    opts.seeds.emplace_back(p.k * p.k * (level * level - 1.0));
  }
  const auto pairs = eigenpairs_lowest(m, cfg.m, opts);
  std::vector<ComplexGridFunction> states;
  for (const auto& e : pairs) states.push_back(normalize_state(ComplexGridFunction(g, e.vector)));

  std::vector<ComplexGridFunction> grounds;
  for (const auto& level : hierarchy(p, cfg.m, HierarchyMode::FixedK)) {
    const auto lp = family(p.variant, p.k, p.q, level.level);
    grounds.push_back(normalize_state(sample(on_symmetric_domain(level.ground_state, lp), g)));
  }

  const bool assertive = cfg.q == 0.0;
  json eig = json::object(), hier = json::object();
  for (const auto s : {ConjugationStrategy::Hermitian, ConjugationStrategy::PT, ConjugationStrategy::APT}) {
    const GramMatrix gm = gram_matrix(states, s);
    const GramMatrix gh = gram_matrix(grounds, s);
    const std::string name = to_string(s);
    eig[name] = {{"entries", matrix_json(gm.entries)},
                 {"max_off_diagonal", json_number(gm.max_off_diagonal)},
                 {"max_diagonal_defect", json_number(gm.max_diagonal_defect)}};
    hier[name] = {{"entries", matrix_json(gh.entries)},
                  {"max_off_diagonal", json_number(gh.max_off_diagonal)},
                  {"max_diagonal_defect", json_number(gh.max_diagonal_defect)}};
    const bool asserted = assertive && s == ConjugationStrategy::Hermitian;
    r.checks.push_back(check_le("eigenvectors_" + name + "_off_diagonal", gm.max_off_diagonal, 1e-6, asserted));
  }
  r.data = {{"mode", assertive ? "assertive" : "exploratory"},
            {"eigenvalues", complex_list([&] {
               std::vector<cplx> v;
               for (const auto& e : pairs) v.push_back(e.value);
               return v;
             }())},
            {"eigenvectors", eig},
            {"hierarchy_ground_states", hier},
            {"note",
             "Identity is asserted only for real potentials under the Hermitian product. "
             "For q != 0 the three Gram matrices are evidence: which product should make "
             "the states orthonormal is not settled."}};
  return r;
}

Report cmd_hierarchy(const RunConfig& cfg) {
  Report r;
  r.command = Command::Hierarchy;
  const auto p = params(cfg);
  const auto levels = hierarchy(p, cfg.depth + 1, cfg.mode);
  const bool fixed = cfg.mode == HierarchyMode::FixedK;
  const Grid g = symmetric_grid(cfg);

  json out = json::array();
  for (int j = 0; j < cfg.depth; ++j) {
    const HierarchyLevel& L = levels[std::size_t(j)];
    const HierarchyLevel& next = levels[std::size_t(j + 1)];
    double chain = INFINITY;
    try {
      const ComplexGridFunction a = sample(on_symmetric_domain(L.potentials.v2, p), g);
      const ComplexGridFunction b = sample(on_symmetric_domain(next.potentials.v1, p), g);
      chain = relative_gap(a, b, a);
    } catch (const NonFiniteSample&) {
      // A pole on a node: the level pair is reported with an infinite gap.
    }
    r.checks.push_back(check_le("chain_" + std::to_string(L.level), chain, 1e-10, fixed));
    out.push_back({{"level", L.level},
                   {"k", json_number(L.k)},
                   {"e0", json_number(L.e0)},
                   {"interior_poles", real_list(L.interior_poles)},
                   {"poles_inside_domain", L.poles_inside_domain()},
                   {"chain_gap", json_number(chain)}});
  }
  r.data = {{"levels", out},
            {"chain_gap_definition", "sup |V2(level j) - V1(level j+1)| / max(1, |V2|)"}};
  return r;
}

Report execute(const RunConfig& cfg) {
  validate(cfg);
  switch (cfg.command) {
    case Command::Figures:
      return cmd_figures(cfg);
    case Command::Spectrum:
      return cmd_spectrum(cfg);
    case Command::VerifySymmetry:
      return cmd_verify_symmetry(cfg);
    case Command::VerifyShapeInvariance:
      return cmd_verify_shape_invariance(cfg);
    case Command::VerifyFactorization:
      return cmd_verify_factorization(cfg);
    case Command::Gram:
      return cmd_gram(cfg);
    case Command::Hierarchy:
      return cmd_hierarchy(cfg);
  }
  throw ConfigError("unhandled command");
}

std::string render_json(const RunConfig& cfg, const Report& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    checks.push_back({{"name", c.name},
                      {"measured", json_number(c.measured)},
                      {"tolerance", json_number(c.tolerance)},
                      {"relation", c.relation},
                      {"asserted", c.asserted},
                      {"passed", c.passed}});
  }
  json files = json::array();
  for (const auto& f : r.files) files.push_back(f);
  const json doc = {{"version", kVersion}, {"command", to_string(r.command)},
                    {"config", config_json(cfg)}, {"status", r.passed() ? "pass" : "fail"},
                    {"checks", checks},          {"files", files},
                    {"data", r.data}};
  return doc.dump(2) + "\n";
}

std::string render_csv(const Report& r) {
  std::string out = "check,measured,tolerance,relation,asserted,passed\n";
  for (const auto& c : r.checks) {
    out += c.name + ',' + format_number(c.measured) + ',' + format_number(c.tolerance) + ',' + c.relation + ',' +
           (c.asserted ? "1" : "0") + ',' + (c.passed ? "1" : "0") + '\n';
  }
  return out;
}

namespace {

void emit_error(std::ostream& err, const std::string& reason, const std::string& message) {
  err << json{{"status", "error"}, {"reason", reason}, {"message", message}, {"version", kVersion}}.dump()
      << "\n";
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Complex PT-symmetric square-well superpartners: spectra, checks and figure data", "ptsusy"};
  RunConfig cfg;
  std::string command, variant = "tangent", strategy = "apt", mode = "fixed-k", format;

  std::vector<std::string> names;
  for (const auto& c : kCommands) names.push_back(c.second);
  app.add_option("command", command, "What to run")->required()->check(CLI::IsMember(names));
  app.add_option("--variant", variant, "tangent | cotangent")->check(CLI::IsMember({"tangent", "cotangent"}));
  app.add_option("--k", cfg.k, "Wave number (> 0)");
  app.add_option("--q", cfg.q, "Imaginary coupling");
  app.add_option("--n", cfg.n, "Hierarchy level (>= 1)");
  app.add_option("--m", cfg.m, "Number of levels / states (1..8)");
  app.add_option("--grid-size", cfg.grid_size, "Interior nodes (odd, >= 201)");
  app.add_option("--depth", cfg.depth, "Hierarchy depth");
  app.add_option("--strategy", strategy, "hermitian | pt | apt");
  app.add_option("--mode", mode, "fixed-k | paper-k")->check(CLI::IsMember({"fixed-k", "paper-k"}));
  app.add_option("--format", format, "csv | json")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--out", cfg.output_path, "Report file (figures: directory)");
  app.add_option("--plot-ceiling", cfg.plot_ceiling, "Clip figure values beyond this magnitude");
  app.set_version_flag("--version", kVersion);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kPass;
    }
    emit_error(err, "config_error", e.what());
    return kConfigError;
  }

  try {
    cfg.command = parse_command(command);
    cfg.variant = variant == "cotangent" ? Variant::Cotangent : Variant::Tangent;
    cfg.strategy = strategy;
    cfg.mode = mode == "paper-k" ? HierarchyMode::PaperK : HierarchyMode::FixedK;
    if (format.empty()) format = cfg.command == Command::Figures ? "csv" : "json";
    cfg.format = format == "csv" ? Format::Csv : Format::Json;

    const Report r = execute(cfg);
    const std::string body = cfg.format == Format::Json ? render_json(cfg, r) : render_csv(r);
    if (cfg.command == Command::Figures || cfg.output_path.empty()) {
      out << body;
    } else {
      write_atomic(cfg.output_path, body);
    }
    return r.passed() ? kPass : kPhysicsFail;
  } catch (const ConfigError& e) {
    emit_error(err, "config_error", e.what());
    return kConfigError;
  } catch (const UnsupportedParameters& e) {
    emit_error(err, "unsupported_parameters", e.what());
    return kConfigError;
  } catch (const UnsupportedMode& e) {
    emit_error(err, "unsupported_mode", e.what());
    return kConfigError;
  } catch (const PoleOnGrid& e) {
    emit_error(err, "pole_on_grid", e.what());
    return kConfigError;
  } catch (const NonFiniteSample& e) {
    emit_error(err, "pole_on_grid", e.what());
    return kConfigError;
  } catch (const std::invalid_argument& e) {
    emit_error(err, "config_error", e.what());
    return kConfigError;
  } catch (const NoConvergence& e) {
    emit_error(err, "no_convergence", e.what());
    return kNoConvergence;
  } catch (const Error& e) {
    emit_error(err, "physics_error", e.what());
    return kPhysicsFail;
  }
}

}  // namespace ptsusy::cli
