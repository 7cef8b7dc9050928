#include "symspace/cli.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iterator>
#include <numbers>
#include <ostream>
#include <sstream>

#include <CLI11.hpp>

#include "symspace/calculus.hpp"
#include "symspace/contour.hpp"
#include "symspace/growth.hpp"
#include "symspace/matrix_market.hpp"
#include "symspace/testgen.hpp"
#include "symspace/twopoint.hpp"

namespace symspace::cli {

using nlohmann::json;

namespace {

constexpr double kInvarianceThreshold = 1e-8;
constexpr double kSymmetryTol = 1e-8;
constexpr Index kOracleMaxDim = 64;

json to_json(Complex z) { return json::array({z.real(), z.imag()}); }

json to_json(const std::vector<Complex>& zs) {
  json a = json::array();
  for (const Complex z : zs) a.push_back(to_json(z));
  return a;
}

// Non-finite values serialize as null.
json number(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

std::string timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

json base_report(const std::string& command) {
  json r;
  r["schema"] = kSchemaVersion;
  r["tool"] = "symspace";
  r["version"] = kToolVersion;
  r["command"] = command;
  r[kTimestampKey] = timestamp();
  r["error"] = nullptr;
  return r;
}

RealOperator load_input(const std::string& path, json& report) {
  if (path.empty()) throw Error(ErrorCode::InvalidArgument, "--input is required");
  RealOperator t = mm::read_operator_file(path);
  report["input"] = {{"file", path}, {"dimension", t.dim()}, {"checksum", file_checksum(path)}};
  return t;
}

// Runs `body`, turning a thrown Error into an error verdict on the same report.
CommandResult execute(const std::string& command, const std::function<void(CommandResult&)>& body) {
  CommandResult result;
  result.report = base_report(command);
  try {
    body(result);
    result.exit_code = 0;
  } catch (const Error& e) {
    result.report["verdict"] = std::string(error_name(e.code()));
    json err = {{"code", std::string(error_name(e.code()))}, {"message", e.what()}};
    if (const auto* r = dynamic_cast<const ResidualError*>(&e)) err["residual"] = number(r->residual());
    if (const auto* s = dynamic_cast<const SingularShiftError*>(&e)) err["shift"] = to_json(s->shift());
    if (e.code() == ErrorCode::PencilFullRank) err["advice"] = "use split-arc";
    result.report["error"] = std::move(err);
    result.exit_code = exit_code(e.code());
  }
  return result;
}

std::string join_path(const std::string& dir, const std::string& name) {
  if (dir.empty()) return name;
  std::filesystem::create_directories(dir);
  return (std::filesystem::path(dir) / name).string();
}

json oracle_section(const RealOperator& t, std::vector<Complex>* eigenvalues_out) {
  if (t.dim() > kOracleMaxDim) return nullptr;
  std::vector<Complex> eig = testgen::oracle_eigen(t);
  std::sort(eig.begin(), eig.end(), [](Complex p, Complex q) {
    return std::arg(p) != std::arg(q) ? std::arg(p) < std::arg(q) : std::abs(p) < std::abs(q);
  });
  json o;
  o["eigenvalues"] = to_json(eig);
  o["conjugation_gap"] = testgen::conjugation_gap(eig);
  if (eigenvalues_out) *eigenvalues_out = std::move(eig);
  return o;
}

json growth_section(const RealOperator& t, int horizon, BaseNormKind norm, GrowthProfile* profile_out) {
  GrowthProfile p = power_norms(t, horizon, norm);
  json g;
  g["horizon"] = horizon;
  g["base_norm"] = std::string(to_string(norm));
  json fwd = json::array();
  for (const double v : p.forward_log_norms) fwd.push_back(number(std::exp(v)));
  g["forward_norms"] = std::move(fwd);
  if (p.backward_log_norms) {
    json bwd = json::array();
    for (const double v : *p.backward_log_norms) bwd.push_back(number(std::exp(v)));
    g["backward_norms"] = std::move(bwd);
  } else {
    g["backward_norms"] = nullptr;
    g["backward_note"] = p.backward_note;
  }
  g["submultiplicativity_excess"] = number(submultiplicativity_excess(p));
  if (horizon >= 16) {
    const GrowthFit fit = growth_exponent(p);
    g["k_estimate"] = number(fit.k_estimate);
    g["forward_slope"] = number(fit.forward_slope);
    g["backward_slope"] = fit.backward_slope ? number(*fit.backward_slope) : json(nullptr);
    g["fit_residual"] = number(fit.fit_residual);
    g["non_polynomial"] = fit.non_polynomial;
  } else {
    g["k_estimate"] = nullptr;
  }
  if (p.backward_log_norms) {
    const NonQuasianalyticSum nq = nonquasianalytic_sum(p);
    g["nonquasianalytic"] = {{"partial_sum", number(nq.partial_sum)},
                             {"converging", nq.converging},
                             {"tail_slope", number(nq.tail_slope)}};
  } else {
    g["nonquasianalytic"] = nullptr;
  }
  const IsometryReport iso = isometry_check(t);
  g["isometry"] = {{"is_isometry", iso.is_isometry}, {"is_surjective", iso.is_surjective}, {"note", iso.note}};
  if (profile_out) *profile_out = std::move(p);
  return g;
}

json basis_section(const RealSubspace& q, const std::string& file) {
  json b;
  b["rank"] = q.rank();
  b["invariance_residual"] = q.invariance_residual ? number(*q.invariance_residual) : json(nullptr);
  b["symmetry_residual"] = q.symmetry_residual ? number(*q.symmetry_residual) : json(nullptr);
  b["file"] = file;
  return b;
}

}  // namespace

std::string canonical_dump(const json& report) {
  json copy = report;
  copy.erase(kTimestampKey);
  return copy.dump(2);
}

std::string file_checksum(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open '" + path + "' for checksum");
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (std::istreambuf_iterator<char> it(in), end; it != end; ++it) {
    h ^= static_cast<unsigned char>(*it);
    h *= 0x100000001b3ULL;
  }
  char buf[40];
  std::snprintf(buf, sizeof buf, "fnv1a64:%016llx", static_cast<unsigned long long>(h));
  return buf;
}

CommandResult cmd_analyze(const AnalyzeOptions& opt) {
  return execute("analyze", [&](CommandResult& res) {
    json& r = res.report;
    r["parameters"] = {{"horizon", opt.horizon}, {"base_norm", std::string(to_string(opt.base_norm))}};
    const RealOperator t = load_input(opt.input, r);
    const Index n = t.dim();

    r["hypothesis"] = {{"dimension_gt_2", n > 2},
                       {"note", n > 2 ? "dim > 2: a nontrivial invariant subspace is guaranteed"
                                      : "dim <= 2: outside the dim > 2 hypothesis; a real rotation "
                                        "plane may have no nontrivial invariant subspace"}};

    std::vector<Complex> eig;
    r["oracle"] = oracle_section(t, &eig);

    json strategy;
    if (r["oracle"].is_null()) {
      strategy["suggestion"] = nullptr;
      strategy["note"] = "oracle disabled for n > 64; supply --arc or --eta explicitly";
    } else {
      double radius = 0.0;
      for (const Complex mu : eig) radius = std::max(radius, std::abs(mu));
      const double tol = testgen::kClusterRelTol * std::max(1.0, radius);
      const auto clusters = testgen::cluster_eigenvalues(eig, tol);
      json cl = json::array();
      int groups = 0;
      std::optional<Complex> eta;
      for (const auto& c : clusters) {
        cl.push_back({{"center", to_json(c.center)},
                      {"multiplicity", c.members.size()},
                      {"modulus", std::abs(c.center)},
                      {"argument", std::arg(c.center)}});
        // one group per conjugate pair: count the upper member or the real cluster
        if (c.center.imag() >= -tol) {
          ++groups;
          if (!eta) eta = Complex(c.center.real(), std::abs(c.center.imag()) <= tol ? 0.0 : c.center.imag());
        }
      }
      r["oracle"]["clusters"] = std::move(cl);
      strategy["conjugate_groups"] = groups;
      if (groups >= 2) {
        strategy["suggestion"] = "contour_split";
      } else if (groups == 1 && n >= 3) {
        strategy["suggestion"] = "two_point";
        strategy["eta"] = to_json(*eta);
      } else {
        strategy["suggestion"] = "cyclic";
      }
    }
    r["strategy"] = std::move(strategy);
    r["growth"] = growth_section(t, opt.horizon, opt.base_norm, nullptr);
    r["verdict"] = "analyzed";
  });
}

CommandResult cmd_split_arc(const SplitArcOptions& opt) {
  return execute("split-arc", [&](CommandResult& res) {
    json& r = res.report;
    r["parameters"] = {{"arc", {opt.theta_lo, opt.theta_hi}}, {"delta", opt.delta}, {"tol", opt.tol},
                       {"initial_nodes", opt.nodes}, {"max_nodes", opt.max_nodes}};
    const RealOperator t = load_input(opt.input, r);
    const Index n = t.dim();
    const ComplexOperator tc = complexify(t);

    const Contour contour = Contour::arc_stadium(opt.theta_lo, opt.theta_hi, opt.delta, true);
    const AdaptiveProjection proj = adaptive_projection(tc, contour, opt.tol, opt.max_nodes, opt.nodes);
    const QuadratureRule rule = build_rule(contour, proj.nodes_per_loop);
    r["contour"] = contour_to_json(contour, proj.nodes_per_loop);
    r["contour"]["loops"] = rule.loops;
    r["contour"]["symmetry_check"] = symmetrize_check(rule);

    const ProjectionDiagnostics d = diagnose_projection(tc, proj.projection);
    json pj = {{"nodes_per_loop", proj.nodes_per_loop},
               {"last_difference", proj.last_difference},
               {"trace", to_json(d.trace)},
               {"idempotency_residual", d.idempotency},
               {"commutation_residual", d.commutation},
               {"imag_max", d.imag_max},
               {"imag_relative", d.max_entry > 0.0 ? d.imag_max / d.max_entry : 0.0}};
    r["oracle"] = oracle_section(t, nullptr);
    if (!r["oracle"].is_null()) {
      int enclosed = 0;
      for (const auto& e : r["oracle"]["eigenvalues"])
        enclosed += winding_number(rule, Complex(e[0].get<double>(), e[1].get<double>())).winding == 1;
      pj["oracle_enclosed"] = enclosed;
    }

    const ComplexSubspace z = projection_range(proj.projection);
    pj["rank"] = z.rank();
    r["projection"] = std::move(pj);
    if (z.rank() == 0 || z.rank() == n) {
      std::ostringstream os;
      os << "projection has rank " << z.rank() << " of " << n
         << (z.rank() == 0 ? ": the contour encloses no eigenvalue" : ": the contour encloses the whole spectrum");
      throw Error(ErrorCode::TrivialSplit, os.str());
    }

    const RealSubspace inv = real_part_subspace(z, kSymmetryTol, &t);
    const RealSubspace comp = real_part_subspace(projection_kernel(proj.projection), kSymmetryTol, &t);
    const std::string inv_file = join_path(opt.output_dir, "invariant_basis.mtx");
    const std::string comp_file = join_path(opt.output_dir, "complement_basis.mtx");
    r["invariant_subspace"] = basis_section(inv, inv_file);
    r["complement_subspace"] = basis_section(comp, comp_file);
    for (const RealSubspace* q : {&inv, &comp})
      if (*q->invariance_residual > kInvarianceThreshold) {
        std::ostringstream os;
        os << "invariance residual " << *q->invariance_residual << " exceeds " << kInvarianceThreshold;
        throw ResidualError(ErrorCode::ResidualTooLarge, *q->invariance_residual, os.str());
      }
    mm::write_real_file(inv_file, inv.columns);
    mm::write_real_file(comp_file, comp.columns);
    res.written_files = {inv_file, comp_file};
    r["verdict"] = "invariant_subspace_found";
  });
}

CommandResult cmd_two_point(const TwoPointOptions& opt) {
  return execute("two-point", [&](CommandResult& res) {
    json& r = res.report;
    r["parameters"] = {{"eta", opt.eta ? to_json(*opt.eta) : json(nullptr)},
                       {"k", opt.k ? json(*opt.k) : json(nullptr)},
                       {"tol", opt.tol}};
    const RealOperator t = load_input(opt.input, r);
    const Index n = t.dim();
    if (n < 3) throw Error(ErrorCode::InvalidArgument, "two-point branch needs dim > 2");
    if (!opt.eta && n > kOracleMaxDim)
      throw Error(ErrorCode::InvalidArgument, "oracle disabled for n > 64: pass --eta");

    json tp;
    const int k_max = opt.k ? *opt.k : static_cast<int>(n);
    Complex eta;
    if (n <= kOracleMaxDim) {
      const TwoPointSpectrum s = estimate_two_point(t, opt.eta, k_max);
      eta = s.eta;
      tp["cluster_radius"] = s.cluster_radius;
    } else {
      eta = opt.eta->imag() < 0.0 ? std::conj(*opt.eta) : *opt.eta;
      tp["cluster_radius"] = nullptr;
    }
    tp["eta"] = to_json(eta);
    tp["k"] = k_max;
    tp["eta_source"] = opt.eta ? "caller" : "oracle";

    const RealMatrix m = quadratic_pencil(t, eta);
    const PencilCoefficients coef = pencil_coefficients(eta);
    tp["a"] = coef.a;
    tp["b"] = coef.b;
    tp["factorization_residual"] = pencil_factorization_residual(t, eta);
    tp["commutation_residual"] = norm2(RealMatrix(m * t.matrix() - t.matrix() * m));
    const auto nil = nilpotency_index(m, k_max);
    tp["nilpotency_index"] = nil ? json(*nil) : json(nullptr);
    r["two_point"] = tp;

    const PencilSubspace ps = invariant_from_pencil(t, eta, opt.tol);
    tp["pencil_norm"] = ps.pencil_norm;
    tp["pencil_scale"] = ps.pencil_scale;
    tp["pencil_rank"] = ps.pencil_rank;
    tp["branch"] = std::string(to_string(ps.branch));
    tp["fallback_seed"] = ps.fallback_seed;
    const std::string file = join_path(opt.output_dir, "invariant_basis.mtx");
    tp["basis"] = basis_section(ps.basis, file);
    r["two_point"] = tp;
    if (*ps.basis.invariance_residual > kInvarianceThreshold) {
      std::ostringstream os;
      os << "invariance residual " << *ps.basis.invariance_residual << " exceeds " << kInvarianceThreshold;
      throw ResidualError(ErrorCode::ResidualTooLarge, *ps.basis.invariance_residual, os.str());
    }
    mm::write_real_file(file, ps.basis.columns);
    res.written_files = {file};
    r["verdict"] = "invariant_subspace_found";
  });
}

CommandResult cmd_growth(const GrowthOptions& opt) {
  return execute("growth", [&](CommandResult& res) {
    json& r = res.report;
    r["parameters"] = {{"horizon", opt.horizon}, {"base_norm", std::string(to_string(opt.base_norm))}};
    const RealOperator t = load_input(opt.input, r);
    GrowthProfile p;
    r["growth"] = growth_section(t, opt.horizon, opt.base_norm, &p);
    if (!opt.output_dir.empty()) {
      const std::string csv = join_path(opt.output_dir, "growth.csv");
      std::ofstream out(csv);
      if (!out) throw Error(ErrorCode::IoError, "cannot write '" + csv + "'");
      out << "n,forward_norm,backward_norm\n";
      char buf[96];
      for (int k = 1; k <= p.horizon; ++k) {
        const auto b = p.backward_norm(k);
        std::snprintf(buf, sizeof buf, "%d,%.17g,", k, p.forward_norm(k));
        out << buf;
        if (b) {
          std::snprintf(buf, sizeof buf, "%.17g", *b);
          out << buf;
        }
        out << '\n';
      }
      r["growth"]["csv"] = csv;
      res.written_files = {csv};
    }
    r["verdict"] = "profiled";
  });
}

CommandResult cmd_gen(const GenOptions& opt) {
  return execute("gen", [&](CommandResult& res) {
    json& r = res.report;
    if (opt.output.empty()) throw Error(ErrorCode::InvalidArgument, "--output is required");
    std::optional<RealOperator> t;
    json params;
    if (opt.generator == "rotation") {
      t = testgen::rotation_block(opt.theta);
      params = {{"theta", opt.theta}};
    } else if (opt.generator == "jordan-companion") {
      t = testgen::jordan_companion(opt.theta, opt.m);
      params = {{"theta", opt.theta}, {"m", opt.m}};
    } else if (opt.generator == "volterra") {
      t = testgen::volterra_matrix(opt.n);
      params = {{"n", opt.n}};
    } else if (opt.generator == "direct-sum") {
      std::vector<RealOperator> blocks;
      for (const auto& path : opt.inputs) blocks.push_back(mm::read_operator_file(path));
      t = testgen::direct_sum(blocks);
      params = {{"inputs", opt.inputs}};
    } else {
      throw Error(ErrorCode::InvalidArgument, "unknown generator '" + opt.generator +
                                                  "' (rotation, direct-sum, jordan-companion, volterra)");
    }
    mm::write_real_file(opt.output, t->matrix());
    res.written_files = {opt.output};
    r["generator"] = opt.generator;
    r["parameters"] = std::move(params);
    r["output"] = {{"file", opt.output}, {"dimension", t->dim()}, {"checksum", file_checksum(opt.output)}};
    r["verdict"] = "generated";
  });
}

namespace {

void print_summary(const CommandResult& res, std::ostream& out) {
  const json& r = res.report;
  out << r.value("command", "") << ": " << r.value("verdict", "") << '\n';
  if (!r["error"].is_null()) out << "  error: " << r["error"].value("message", "") << '\n';
  auto line = [&out](const char* label, const json& v) {
    if (!v.is_null()) out << "  " << label << ": " << v.dump() << '\n';
  };
  if (r.contains("strategy")) line("strategy", r["strategy"]);
  if (r.contains("projection")) {
    line("rank", r["projection"]["rank"]);
    line("trace", r["projection"]["trace"]);
  }
  if (r.contains("invariant_subspace")) line("invariant subspace", r["invariant_subspace"]);
  if (r.contains("two_point")) {
    line("branch", r["two_point"].value("branch", json(nullptr)));
    line("nilpotency index", r["two_point"]["nilpotency_index"]);
  }
  if (r.contains("growth")) {
    line("k estimate", r["growth"]["k_estimate"]);
    line("non-quasianalytic sum", r["growth"]["nonquasianalytic"]);
  }
  for (const auto& f : res.written_files) out << "  wrote " << f << '\n';
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Symmetric invariant subspaces of real operators via contour projections"};
  app.require_subcommand(1);

  bool as_json = false;
  std::string report_dir;
  AnalyzeOptions analyze;
  SplitArcOptions split;
  TwoPointOptions two;
  GrowthOptions growth;
  GenOptions gen;
  std::string base_norm = "euclidean";
  std::vector<double> arc;
  std::vector<double> eta;
  int k = -1;

  auto common = [&](CLI::App* sub, std::string* input) {
    sub->add_option("--input", *input, "Matrix Market array file (real, square)")->required();
    sub->add_flag("--json", as_json, "print the JSON report to stdout");
  };

  auto* a = app.add_subcommand("analyze", "oracle spectrum, growth profile and suggested strategy");
  common(a, &analyze.input);
  a->add_option("--horizon", analyze.horizon, "power horizon N")->check(CLI::Range(4, 1 << 20));
  a->add_option("--base-norm", base_norm, "euclidean | sup | one")->check(CLI::IsMember({"euclidean", "sup", "one"}));
  a->add_option("--output-dir", report_dir, "directory for report.json");

  auto* s = app.add_subcommand("split-arc", "real invariant subspace from a symmetric arc of the unit circle");
  common(s, &split.input);
  s->add_option("--arc", arc, "theta_lo theta_hi")->expected(2)->required();
  s->add_option("--delta", split.delta, "contour margin around the arc");
  s->add_option("--tol", split.tol, "adaptive quadrature tolerance (>= 1e-13)");
  s->add_option("--nodes", split.nodes, "initial nodes per loop");
  s->add_option("--output-dir", split.output_dir, "directory for basis files and report.json");

  auto* t = app.add_subcommand("two-point", "invariant subspace from the real quadratic pencil");
  common(t, &two.input);
  t->add_option("--eta", eta, "re im")->expected(2);
  t->add_option("--k", k, "growth exponent bound (nilpotency checked up to k+1)")->check(CLI::NonNegativeNumber);
  t->add_option("--tol", two.tol, "relative rank tolerance");
  t->add_option("--output-dir", two.output_dir, "directory for the basis file and report.json");

  auto* g = app.add_subcommand("growth", "power-norm profile and growth diagnostics");
  common(g, &growth.input);
  g->add_option("--horizon", growth.horizon, "power horizon N")->check(CLI::Range(4, 1 << 20));
  g->add_option("--base-norm", base_norm, "euclidean | sup | one")->check(CLI::IsMember({"euclidean", "sup", "one"}));
  g->add_option("--output-dir", growth.output_dir, "directory for growth.csv and report.json");

  auto* gn = app.add_subcommand("gen", "write a test operator as Matrix Market");
  gn->add_option("generator", gen.generator, "rotation | direct-sum | jordan-companion | volterra")->required();
  gn->add_option("--theta", gen.theta, "rotation angle");
  gn->add_option("--m", gen.m, "multiplicity for jordan-companion");
  gn->add_option("--n", gen.n, "dimension for volterra");
  gn->add_option("--inputs", gen.inputs, "block files for direct-sum");
  gn->add_option("--output", gen.output, "output file")->required();
  gn->add_flag("--json", as_json, "print the JSON report to stdout");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err) == 0 ? 0 : 1;
  }

  CommandResult res;
  if (a->parsed()) {
    analyze.base_norm = parse_base_norm(base_norm);
    res = cmd_analyze(analyze);
  } else if (s->parsed()) {
    split.theta_lo = arc.at(0);
    split.theta_hi = arc.at(1);
    report_dir = split.output_dir;
    res = cmd_split_arc(split);
  } else if (t->parsed()) {
    if (!eta.empty()) two.eta = Complex(eta.at(0), eta.at(1));
    if (k >= 0) two.k = k;
    report_dir = two.output_dir;
    res = cmd_two_point(two);
  } else if (g->parsed()) {
    growth.base_norm = parse_base_norm(base_norm);
    report_dir = growth.output_dir;
    res = cmd_growth(growth);
  } else {
    res = cmd_gen(gen);
  }

  if (!report_dir.empty()) {
    try {
      const std::string path = join_path(report_dir, "report.json");
      std::ofstream f(path);
      f << res.report.dump(2) << '\n';
      if (!f) throw Error(ErrorCode::IoError, "cannot write '" + path + "'");
    } catch (const std::exception& e) {
      err << "error: " << e.what() << '\n';
      return exit_code(ErrorCode::IoError);
    }
  }
  if (as_json)
    out << res.report.dump(2) << '\n';
  else
    print_summary(res, out);
  if (res.exit_code != 0 && !as_json) err << "error: " << res.report["error"].value("message", "") << '\n';
  return res.exit_code;
}

}  // namespace symspace::cli
