// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any FAIL.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "symspace/calculus.hpp"
#include "symspace/cli.hpp"
#include "symspace/contour.hpp"
#include "symspace/growth.hpp"
#include "symspace/matrix_market.hpp"
#include "symspace/testgen.hpp"
#include "symspace/twopoint.hpp"

using namespace symspace;
using std::numbers::pi;

namespace {

int failures = 0;

void report(int id, bool ok, const std::string& detail) {
  std::printf("criterion %2d: %s  %s\n", id, ok ? "PASS" : "FAIL", detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* f, double a, double b = 0.0, double c = 0.0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c);
  return buf;
}

// One block of a corpus operator: rotation (m = 1) or jordan_companion (m ≥ 2).
struct Block {
  double theta = 0.0;
  int m = 1;
  RealOperator op() const { return m == 1 ? testgen::rotation_block(theta) : testgen::jordan_companion(theta, m); }
  Index size() const { return 2 * m; }
};

struct Case {
  std::vector<Block> blocks;
  RealMatrix q;        // orthogonal similarity
  RealOperator t = RealOperator::zero(1);  // q · (⊕ blocks) · qᵀ
  int target = 0;      // enclosed block
  Complex mu;          // e^{iθ} of the target block
  double gap = 0.0;    // distance from mu to the nearest other eigenvalue
  double outer_gap = 0.0;  // same, excluding conj(mu)
  Contour circle = Contour::circle(0.0, 1.0);
};

std::vector<Case> corpus() {
  testgen::SeededStream rng(20240611);
  std::vector<Case> out;
  while (out.size() < 20) {
    Case c;
    Index n = 0;
    const int want = 2 + static_cast<int>(std::abs(rng.next()) * 3.0);  // 2..4 blocks
    for (int tries = 0; tries < 200 && static_cast<int>(c.blocks.size()) < want; ++tries) {
      const double theta = 0.45 + 0.5 * (rng.next() + 1.0) * 2.2;
      const int m = 1 + static_cast<int>(0.5 * (rng.next() + 1.0) * 3.0);
      if (n + 2 * m > 16) continue;
      bool apart = true;
      for (const Block& b : c.blocks) apart = apart && std::abs(b.theta - theta) > 0.35;
      if (!apart) continue;
      c.blocks.push_back({theta, m});
      n += 2 * m;
    }
    if (n < 4) continue;
    std::vector<RealOperator> ops;
    for (const Block& b : c.blocks) ops.push_back(b.op());
    const RealMatrix d = testgen::direct_sum(ops).matrix();
    c.q = out.size() % 2 == 0 ? RealMatrix(RealMatrix::Identity(n, n))
                              : testgen::random_orthogonal(n, 100 + out.size());
    c.t = RealOperator(RealMatrix(c.q * d * c.q.transpose()));
    c.target = static_cast<int>(out.size() % c.blocks.size());
    c.mu = std::polar(1.0, c.blocks[c.target].theta);
    c.gap = std::abs(c.mu - std::conj(c.mu));
    c.outer_gap = 1e9;
    for (std::size_t j = 0; j < c.blocks.size(); ++j) {
      if (static_cast<int>(j) == c.target) continue;
      for (const double s : {1.0, -1.0}) {
        const double dist = std::abs(c.mu - std::polar(1.0, s * c.blocks[j].theta));
        c.gap = std::min(c.gap, dist);
        c.outer_gap = std::min(c.outer_gap, dist);
      }
    }
    c.circle = Contour::circle(c.mu, 0.75 * c.gap);
    out.push_back(std::move(c));
  }
  return out;
}

// Spectral projector of the target cluster from the block decomposition.
ComplexMatrix exact_projector(const Case& c) {
  const Index n = c.t.dim();
  ComplexMatrix p = ComplexMatrix::Zero(n, n);
  Index at = 0;
  for (std::size_t j = 0; j < c.blocks.size(); ++j) {
    const Block& b = c.blocks[j];
    if (static_cast<int>(j) == c.target)
      p.block(at, at, b.size(), b.size()) = test::hermite_projector(b.op().matrix(), c.mu, b.m);
    at += b.size();
  }
  const ComplexMatrix q = c.q.cast<Complex>();
  return q * p * q.transpose();
}

int oracle_count(const Case& c) {
  const Circle& circ = std::get<Circle>(c.circle.shape());
  int k = 0;
  for (const Complex z : testgen::oracle_eigen(c.t))
    if (std::abs(z - circ.center) < circ.radius) ++k;
  return k;
}

void criterion1(const std::vector<Case>& cases) {
  const auto start = std::chrono::steady_clock::now();
  double idem = 0.0, trace_err = 0.0, comm = 0.0;
  for (const Case& c : cases) {
    const ComplexOperator a = complexify(c.t);
    const ComplexMatrix p = riesz_projection(a, build_rule(c.circle, 128));
    const ProjectionDiagnostics d = diagnose_projection(a, p);
    idem = std::max(idem, d.idempotency);
    trace_err = std::max(trace_err, std::abs(d.trace - double(oracle_count(c))));
    comm = std::max(comm, d.commutation / norm2(a.matrix()));
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report(1, idem <= 1e-9 && trace_err <= 1e-6 && comm <= 1e-9 && secs <= 10.0,
         fmt("max |P^2-P| %.2e, max |tr P - count| %.2e, max |AP-PA|/|A| %.2e", idem, trace_err, comm) +
             fmt(", %.2f s", secs));
}

void criterion2(const std::vector<Case>& cases) {
  const WeightFunction weights[] = {WeightFunction::one(), WeightFunction::polynomial({0.0, 1.0}),
                                    WeightFunction::polynomial({-1.0, 0.0, 1.0})};
  double worst = 0.0;
  bool closed = true;
  for (const Case& c : cases) {
    const double theta = c.blocks[c.target].theta;
    const double h = 0.02;
    // Keep the log-ellipse bulge sqrt(delta(delta + 2h)) inside 0.4 of the gap.
    const double r = 0.4 * c.outer_gap;
    const double delta = -h + std::sqrt(h * h + r * r);
    const Contour s = Contour::arc_stadium(theta - h, theta + h, delta, true);
    const QuadratureRule rule = build_rule(s, 128);
    closed = closed && symmetrize_check(rule) == 0.0;
    const ComplexOperator a = complexify(c.t);
    for (const WeightFunction& g : weights) {
      const ComplexMatrix f = weighted_calculus(a, rule, g);
      worst = std::max(worst, max_abs(f.imag()) / max_abs(f));
    }
  }
  report(2, closed && worst <= 1e-10, fmt("max |Im f|/|f| %.2e over 20 operators x 3 weights", worst));
}

void criterion3() {
  const auto dir = test::scratch_dir("acceptance_c3");
  const RealOperator t =
      testgen::direct_sum({testgen::rotation_block(pi / 3), testgen::rotation_block(2 * pi / 3)});
  const std::string input = (dir / "t.mtx").string();
  mm::write_real_file(input, t.matrix());
  cli::SplitArcOptions opt;
  opt.input = input;
  opt.theta_lo = pi / 3 - 0.1;
  opt.theta_hi = pi / 3 + 0.1;
  opt.delta = 0.1;
  opt.output_dir = (dir / "out").string();
  const cli::CommandResult r = cli::cmd_split_arc(opt);
  if (r.exit_code != 0) {
    report(3, false, "split-arc exited with " + std::to_string(r.exit_code));
    return;
  }
  const RealMatrix basis = mm::read_real_file((dir / "out" / "invariant_basis.mtx").string());
  const double residual = invariance_residual(t.matrix(), basis);
  ComplexMatrix eig(4, 2);
  eig.col(0) = testgen::oracle_eigenvector(complexify(t).matrix(), std::polar(1.0, pi / 3));
  eig.col(1) = testgen::oracle_eigenvector(complexify(t).matrix(), std::polar(1.0, -pi / 3));
  const ComplexMatrix oracle = Eigen::HouseholderQR<ComplexMatrix>(eig).householderQ() * ComplexMatrix::Identity(4, 2);
  const double angle = max_principal_angle(basis.cast<Complex>(), oracle);
  report(3, basis.cols() == 2 && residual <= 1e-9 && angle <= 1e-8,
         fmt("rank %.0f, invariance %.2e, principal angle %.2e", double(basis.cols()), residual, angle));
}

void criterion4() {
  const Complex eta = std::polar(1.0, pi / 3);
  const RealOperator comp = testgen::jordan_companion(pi / 3, 2);
  const TwoPointSpectrum est = estimate_two_point(comp, std::nullopt, 2);
  const RealMatrix m = quadratic_pencil(comp, est.eta);
  const double mn = norm2(m);
  const double nil = norm2(RealMatrix(m * m)) / (mn * mn);
  const PencilSubspace ps = invariant_from_pencil(comp, est.eta);
  const double res1 = invariance_residual(comp.matrix(), ps.basis.columns);
  const bool ok1 = mn > 1e-6 * ps.pencil_scale && nil <= 1e-10 && ps.branch == PencilBranch::pencil_range &&
                   ps.basis.rank() == 2 && res1 <= 1e-9;

  const RealOperator rot = testgen::direct_sum({testgen::rotation_block(pi / 3), testgen::rotation_block(pi / 3)});
  const PencilSubspace pr = invariant_from_pencil(rot, eta);
  const double res2 = invariance_residual(rot.matrix(), pr.basis.columns);
  const bool ok2 = pr.pencil_norm <= 1e-12 && pr.branch == PencilBranch::cyclic_plane && pr.basis.rank() == 2 &&
                   res2 <= 1e-12;
  report(4, ok1 && ok2,
         fmt("companion: |M| %.2e, |M^2|/|M|^2 %.2e, residual %.2e", mn, nil, res1) +
             fmt("; rotations: |M| %.2e, cyclic residual %.2e", pr.pencil_norm, res2));
}

void criterion5() {
  testgen::SeededStream rng(5150);
  double worst = 0.0, gap = 0.0;
  for (int trial = 0; trial < 10; ++trial) {
    const RealOperator t(rng.matrix(8, 8));
    for (int k = 0; k < 10; ++k) {
      const Complex lambda(2.0 * rng.next(), 2.0 * rng.next());
      worst = std::max(worst, conjugation_identity_residual(t, lambda));
    }
    gap = std::max(gap, testgen::conjugation_gap(testgen::oracle_eigen(complexify(t).matrix())));
  }
  report(5, worst <= 1e-11 && gap <= 1e-9, fmt("max identity residual %.2e, conjugation gap %.2e", worst, gap));
}

void criterion6() {
  testgen::SeededStream rng(6);
  double euclid = 0.0, grid = 0.0, jinv = 0.0;
  for (int k = 0; k < 100; ++k) {
    const RealVector x = rng.vector(6), y = rng.vector(6);
    const ComplexVector z(x, y);
    const double ref = std::sqrt(x.squaredNorm() + y.squaredNorm());
    euclid = std::max(euclid, std::abs(complexification_norm(z, BaseNormKind::euclidean) - ref));
    for (const BaseNormKind kind : {BaseNormKind::euclidean, BaseNormKind::sup, BaseNormKind::one})
      jinv = std::max(jinv, std::abs(complexification_norm(z, kind) -
                                     complexification_norm(conjugate_vector(z), kind)));
    if (k < 20)
      for (const BaseNormKind kind : {BaseNormKind::sup, BaseNormKind::one})
        grid = std::max(grid, std::abs(complexification_norm(z, kind, 256) - test::dense_grid_norm(x, y, kind)));
  }
  report(6, euclid <= 1e-12 && grid <= 1e-4 && jinv <= 1e-12,
         fmt("euclidean %.2e, grid vs dense %.2e, J-invariance %.2e", euclid, grid, jinv));
}

void criterion7() {
  double k_rot = 0.0;
  bool converging = true;
  const std::vector<RealOperator> rotations = {
      testgen::rotation_block(0.4), testgen::rotation_block(pi / 3), testgen::rotation_block(2.9),
      testgen::direct_sum({testgen::rotation_block(pi / 3), testgen::rotation_block(2 * pi / 3)}),
      RealOperator(RealMatrix(testgen::random_orthogonal(6, 7) *
                              testgen::direct_sum({testgen::rotation_block(0.3), testgen::rotation_block(1.3),
                                                   testgen::rotation_block(2.3)})
                                  .matrix() *
                              testgen::random_orthogonal(6, 7).transpose()))};
  for (const RealOperator& t : rotations) {
    const GrowthProfile p = power_norms(t, 128);
    k_rot = std::max(k_rot, std::abs(growth_exponent(p).k_estimate));
    converging = converging && nonquasianalytic_sum(p).converging;
  }
  const double k_comp = growth_exponent(power_norms(testgen::jordan_companion(pi / 3, 2), 200)).k_estimate;
  const bool flagged =
      growth_exponent(power_norms(RealOperator(RealMatrix(2.0 * RealMatrix::Identity(3, 3))), 64)).non_polynomial;
  report(7, k_rot <= 0.05 && converging && std::abs(k_comp - 1.0) <= 0.2 && flagged,
         fmt("rotation max |k| %.3f, companion k %.3f, 2I non-polynomial %.0f", k_rot, k_comp, flagged ? 1.0 : 0.0));
}

void criterion8() {
  const RealOperator t =
      testgen::direct_sum({testgen::rotation_block(pi / 3), testgen::rotation_block(2 * pi / 3)});
  const ComplexOperator a = complexify(t);
  SpectralPartition part;
  const struct {
    const char* label;
    double theta;
  } cells[] = {{"+60", pi / 3}, {"-60", -pi / 3}, {"+120", 2 * pi / 3}, {"-120", -2 * pi / 3}};
  for (const auto& c : cells) part.cells.push_back({c.label, Contour::circle(std::polar(1.0, c.theta), 0.4)});
  validate_partition(part, testgen::oracle_eigen(t));
  const PartitionProjections pp = project_partition(a, part);
  ComplexMatrix sum = ComplexMatrix::Zero(4, 4);
  for (const ComplexMatrix& p : pp.projections) sum += p;
  const double identity = norm2(ComplexMatrix(sum - ComplexMatrix::Identity(4, 4)));

  testgen::SeededStream rng(8);
  int agree = 0;
  for (int k = 0; k < 20; ++k) {
    const ComplexColumn w = rng.vector(4).cast<Complex>() + Complex(0, 1) * rng.vector(4).cast<Complex>();
    ComplexColumn z = ComplexColumn::Zero(4);
    for (std::size_t i = 0; i < pp.projections.size(); ++i)
      if (rng.next() > -0.2) z += pp.projections[i] * w;
    if (z.norm() == 0.0) z = w;
    std::set<std::string> mirrored;
    for (const std::string& label : local_spectrum_support(pp, z)) {
      const auto i = std::find(pp.labels.begin(), pp.labels.end(), label) - pp.labels.begin();
      if (pp.mirror[i] >= 0) mirrored.insert(pp.labels[pp.mirror[i]]);
    }
    const auto conj_support = local_spectrum_support(pp, ComplexColumn(z.conjugate()));
    if (std::set<std::string>(conj_support.begin(), conj_support.end()) == mirrored) ++agree;
  }
  report(8, identity <= 1e-8 && agree == 20,
         fmt("|sum P_i - I| %.2e, mirrored supports %.0f/20", identity, double(agree)));
}

void criterion9(const std::vector<Case>& cases) {
  double worst_ratio = 1e300;
  double worst_128 = 0.0;
  for (const Case& c : cases) {
    const ComplexOperator a = complexify(c.t);
    const ComplexMatrix exact = exact_projector(c);
    const double e64 = max_abs(ComplexMatrix(riesz_projection(a, build_rule(c.circle, 64)) - exact));
    const double e128 = max_abs(ComplexMatrix(riesz_projection(a, build_rule(c.circle, 128)) - exact));
    worst_ratio = std::min(worst_ratio, e64 / e128);
    worst_128 = std::max(worst_128, e128);
  }
  report(9, worst_ratio >= 10.0, fmt("min error ratio 64->128 %.2e, max error at 128 %.2e", worst_ratio, worst_128));
}

struct CliRun {
  int code = 0;
  std::string out;
};

CliRun run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "symspace");
  std::vector<const char*> argv;
  for (const auto& s : args) argv.push_back(s.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void criterion10() {
  const auto dir = test::scratch_dir("acceptance_c10");
  const std::string rot = (dir / "rot.mtx").string();
  const std::string comp = (dir / "comp.mtx").string();
  const std::string sum = (dir / "sum.mtx").string();
  run_cli({"gen", "rotation", "--theta", std::to_string(pi / 3), "--output", rot});
  run_cli({"gen", "jordan-companion", "--theta", std::to_string(pi / 3), "--m", "2", "--output", comp});
  const std::string rot2 = (dir / "rot2.mtx").string();
  run_cli({"gen", "rotation", "--theta", std::to_string(2 * pi / 3), "--output", rot2});

  const std::vector<std::vector<std::string>> commands = {
      {"gen", "direct-sum", "--inputs", rot, rot2, "--output", sum, "--json"},
      {"analyze", "--input", sum, "--json"},
      {"split-arc", "--input", sum, "--arc", std::to_string(pi / 3 - 0.1), std::to_string(pi / 3 + 0.1), "--delta",
       "0.1", "--output-dir", (dir / "split").string(), "--json"},
      {"two-point", "--input", comp, "--output-dir", (dir / "two").string(), "--json"},
      {"growth", "--input", comp, "--horizon", "128", "--output-dir", (dir / "growth").string(), "--json"},
  };
  const std::vector<std::filesystem::path> artifacts = {
      sum,
      {},  // analyze writes nothing unless asked
      dir / "split" / "invariant_basis.mtx",
      dir / "two" / "invariant_basis.mtx",
      dir / "growth" / "growth.csv",
  };
  int identical = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    const CliRun first = run_cli(commands[i]);
    const bool has_file = !artifacts[i].empty();
    const std::string file1 = has_file ? slurp(artifacts[i]) : "";
    const CliRun second = run_cli(commands[i]);
    const std::string file2 = has_file ? slurp(artifacts[i]) : "";
    if (first.code != 0 || second.code != 0) continue;
    const bool same = cli::canonical_dump(nlohmann::json::parse(first.out)) ==
                          cli::canonical_dump(nlohmann::json::parse(second.out)) &&
                      (!has_file || !file1.empty()) && file1 == file2;
    if (same) ++identical;
  }
  report(10, identical == static_cast<int>(commands.size()),
         fmt("%.0f/%.0f commands reproduce identical reports and files", double(identical), double(commands.size())));
}

}  // namespace

int main() {
  const std::vector<Case> cases = corpus();
  const auto guarded = [](int id, auto&& body) {
    try {
      body();
    } catch (const std::exception& e) {
      report(id, false, std::string("threw: ") + e.what());
    }
  };
  guarded(1, [&] { criterion1(cases); });
  guarded(2, [&] { criterion2(cases); });
  guarded(3, criterion3);
  guarded(4, criterion4);
  guarded(5, criterion5);
  guarded(6, criterion6);
  guarded(7, criterion7);
  guarded(8, criterion8);
  guarded(9, [&] { criterion9(cases); });
  guarded(10, criterion10);
  std::printf("%s: %d failing\n", failures == 0 ? "ALL PASS" : "FAILURES", failures);
  return failures == 0 ? 0 : 1;
}
