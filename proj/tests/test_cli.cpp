#include <fstream>
#include <numbers>
#include <sstream>

#include <gtest/gtest.h>

#include "support.hpp"
#include "symspace/cli.hpp"
#include "symspace/matrix_market.hpp"
#include "symspace/testgen.hpp"

using namespace symspace;
using nlohmann::json;
using std::numbers::pi;

namespace {

struct CliRun {
  int code = 0;
  std::string out;
  std::string err;
  json report() const { return json::parse(out); }
};

CliRun run(std::vector<std::string> args) {
  args.insert(args.begin(), "symspace");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  CliRun r;
  r.code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

class CliTest : public testing::Test {
 protected:
  void SetUp() override {
    dir_ = test::scratch_dir(testing::UnitTest::GetInstance()->current_test_info()->name());
  }

  std::string write(const std::string& name, const RealOperator& t) {
    const std::string path = (dir_ / name).string();
    mm::write_real_file(path, t.matrix());
    return path;
  }

  std::string out_dir(const std::string& name) const { return (dir_ / name).string(); }

  std::filesystem::path dir_;
};

RealOperator two_rotations() {
  return testgen::direct_sum({testgen::rotation_block(pi / 3), testgen::rotation_block(2 * pi / 3)});
}

}  // namespace

TEST_F(CliTest, AnalyzeSuggestsContourSplit) {
  const CliRun r = run({"analyze", "--input", write("t.mtx", two_rotations()), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["schema"], cli::kSchemaVersion);
  EXPECT_EQ(j["verdict"], "analyzed");
  EXPECT_EQ(j["strategy"]["suggestion"], "contour_split");
  EXPECT_EQ(j["strategy"]["conjugate_groups"], 2);
  EXPECT_EQ(j["oracle"]["eigenvalues"].size(), 4u);
  EXPECT_LE(j["oracle"]["conjugation_gap"].get<double>(), 1e-9);
  EXPECT_EQ(j["input"]["dimension"], 4);
  EXPECT_EQ(j["hypothesis"]["dimension_gt_2"], true);
}

TEST_F(CliTest, AnalyzeSuggestsTwoPoint) {
  const CliRun r = run({"analyze", "--input", write("c.mtx", testgen::jordan_companion(pi / 3, 2)), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["strategy"]["suggestion"], "two_point");
  const Complex eta(j["strategy"]["eta"][0].get<double>(), j["strategy"]["eta"][1].get<double>());
  EXPECT_LE(std::abs(eta - std::polar(1.0, pi / 3)), 1e-8);
}

TEST_F(CliTest, AnalyzeOneByOneNotesHypothesis) {
  const CliRun r = run({"analyze", "--input", write("one.mtx", RealOperator(RealMatrix::Constant(1, 1, 0.5))),
                     "--json", "--horizon", "16"});
  ASSERT_EQ(r.code, 0) << r.err;
  const json j = r.report();
  EXPECT_EQ(j["hypothesis"]["dimension_gt_2"], false);
  EXPECT_NE(j["hypothesis"]["note"].get<std::string>().find("dim <= 2"), std::string::npos);
  EXPECT_EQ(j["strategy"]["suggestion"], "cyclic");
}

TEST_F(CliTest, AnalyzeRejectsBadInput) {
  const std::string path = out_dir("bad.mtx");
  std::ofstream(path) << "%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n";
  CliRun r = run({"analyze", "--input", path, "--json"});
  EXPECT_EQ(r.code, exit_code(ErrorCode::ParseError));
  EXPECT_EQ(r.report()["verdict"], "ParseError");
  EXPECT_EQ(r.report()["error"]["code"], "ParseError");

  mm::write_real_file(path, RealMatrix::Ones(2, 3));
  r = run({"analyze", "--input", path, "--json"});
  EXPECT_EQ(r.code, exit_code(ErrorCode::NotSquare));
}

TEST_F(CliTest, SplitArcFindsRealInvariantPlane) {
  const std::string out = out_dir("split");
  const CliRun r = run({"split-arc", "--input", write("t.mtx", two_rotations()), "--arc",
                     std::to_string(pi / 3 - 0.1), std::to_string(pi / 3 + 0.1), "--delta", "0.1",
                     "--output-dir", out, "--json"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  const json j = r.report();
  EXPECT_EQ(j["verdict"], "invariant_subspace_found");
  EXPECT_EQ(j["projection"]["rank"], 2);
  EXPECT_EQ(j["projection"]["oracle_enclosed"], 2);
  EXPECT_LE(j["invariant_subspace"]["invariance_residual"].get<double>(), 1e-9);
  EXPECT_EQ(j["contour"]["symmetry_check"], 0.0);

  const RealMatrix q = mm::read_real_file(j["invariant_subspace"]["file"].get<std::string>());
  ASSERT_EQ(q.cols(), 2);
  EXPECT_LE(q.bottomRows(2).cwiseAbs().maxCoeff(), 1e-8);
  const RealMatrix comp = mm::read_real_file(j["complement_subspace"]["file"].get<std::string>());
  EXPECT_EQ(comp.cols(), 2);
  EXPECT_TRUE(std::filesystem::exists(std::filesystem::path(out) / "report.json"));
}

TEST_F(CliTest, SplitArcTrivialSplits) {
  const std::string t = write("t.mtx", two_rotations());
  CliRun r = run({"split-arc", "--input", t, "--arc", "0.5", "2.5", "--output-dir", out_dir("a"), "--json"});
  EXPECT_EQ(r.code, exit_code(ErrorCode::TrivialSplit));
  EXPECT_EQ(r.report()["projection"]["rank"], 4);
  EXPECT_FALSE(std::filesystem::exists(std::filesystem::path(out_dir("a")) / "invariant_basis.mtx"));

  r = run({"split-arc", "--input", write("v.mtx", testgen::volterra_matrix(8)), "--arc", "0.5", "1.5",
           "--output-dir", out_dir("b"), "--json"});
  EXPECT_EQ(r.code, exit_code(ErrorCode::TrivialSplit));
  EXPECT_EQ(r.report()["projection"]["rank"], 0);
}

TEST_F(CliTest, SplitArcNodeOnSpectrum) {
  // Single loop around 1 whose real-axis node e^b lands on the eigenvalue.
  const double node = std::exp(std::sqrt(0.2 * (0.2 + 2.0 * 0.1)));
  const std::string t = write("t.mtx", RealOperator(RealMatrix(RealMatrix::Identity(3, 3) * node)));
  const CliRun r = run({"split-arc", "--input", t, "--arc", "-0.1", "0.1", "--delta", "0.2",
                     "--output-dir", out_dir("n"), "--json"});
  EXPECT_EQ(r.code, exit_code(ErrorCode::NodeOnSpectrum)) << r.out;
}

TEST_F(CliTest, TwoPointBranches) {
  CliRun r = run({"two-point", "--input", write("c.mtx", testgen::jordan_companion(pi / 3, 2)), "--output-dir",
               out_dir("c"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err << r.out;
  json j = r.report();
  EXPECT_EQ(j["two_point"]["branch"], "pencil_range");
  EXPECT_EQ(j["two_point"]["basis"]["rank"], 2);
  EXPECT_EQ(j["two_point"]["nilpotency_index"], 2);
  EXPECT_TRUE(std::filesystem::exists(j["two_point"]["basis"]["file"].get<std::string>()));

  r = run({"two-point", "--input",
           write("r.mtx", testgen::direct_sum({testgen::rotation_block(pi / 3), testgen::rotation_block(pi / 3)})),
           "--output-dir", out_dir("r"), "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = r.report();
  EXPECT_EQ(j["two_point"]["branch"], "cyclic_plane");
  EXPECT_EQ(j["two_point"]["basis"]["rank"], 2);

  RealMatrix d = RealMatrix::Zero(3, 3);
  d.diagonal() << 1, 2, 3;
  r = run({"two-point", "--input", write("d.mtx", RealOperator(d)), "--eta", "0.5",
           std::to_string(std::sqrt(3.0) / 2), "--output-dir", out_dir("d"), "--json"});
  EXPECT_EQ(r.code, exit_code(ErrorCode::PencilFullRank));
  EXPECT_EQ(r.report()["error"]["advice"], "use split-arc");
}

TEST_F(CliTest, TwoPointNeedsDimensionThree) {
  const CliRun r = run({"two-point", "--input", write("r.mtx", testgen::rotation_block(1.0)), "--json",
                     "--output-dir", out_dir("x")});
  EXPECT_EQ(r.code, exit_code(ErrorCode::InvalidArgument));
}

TEST_F(CliTest, GrowthRotationAndScalar) {
  const std::string out = out_dir("g");
  CliRun r = run({"growth", "--input", write("r.mtx", testgen::rotation_block(0.9)), "--horizon", "64",
               "--output-dir", out, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  json j = r.report();
  EXPECT_LE(std::abs(j["growth"]["k_estimate"].get<double>()), 0.05);
  EXPECT_EQ(j["growth"]["nonquasianalytic"]["converging"], true);
  const std::string csv = slurp(std::filesystem::path(out) / "growth.csv");
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,forward_norm,backward_norm");
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 65);

  r = run({"growth", "--input", write("s.mtx", RealOperator(RealMatrix(2.0 * RealMatrix::Identity(3, 3)))),
           "--json"});
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(r.report()["growth"]["non_polynomial"], true);

  r = run({"growth", "--input", write("v.mtx", testgen::volterra_matrix(4)), "--horizon", "16", "--base-norm",
           "sup", "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  j = r.report();
  EXPECT_TRUE(j["growth"]["backward_norms"].is_null());
  EXPECT_EQ(j["growth"]["base_norm"], "sup");
}

TEST_F(CliTest, GenRoundTripsBitExactly) {
  const std::string path = out_dir("jc.mtx");
  const CliRun r = run({"gen", "jordan-companion", "--theta", std::to_string(pi / 3), "--m", "2", "--output", path});
  ASSERT_EQ(r.code, 0) << r.err;
  const RealMatrix m = mm::read_real_file(path);
  EXPECT_EQ(m, testgen::jordan_companion(std::stod(std::to_string(pi / 3)), 2).matrix());
  EXPECT_EQ(m.rows(), 4);

  const std::string again = out_dir("jc2.mtx");
  mm::write_real_file(again, m);
  EXPECT_EQ(slurp(path), slurp(again));
}

TEST_F(CliTest, GenAllGenerators) {
  const std::string a = out_dir("a.mtx"), b = out_dir("b.mtx"), s = out_dir("s.mtx");
  ASSERT_EQ(run({"gen", "rotation", "--theta", "0.5", "--output", a}).code, 0);
  ASSERT_EQ(run({"gen", "volterra", "--n", "3", "--output", b}).code, 0);
  const CliRun r = run({"gen", "direct-sum", "--inputs", a, b, "--output", s, "--json"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(r.report()["output"]["dimension"], 5);
  EXPECT_EQ(mm::read_real_file(s).rows(), 5);
  EXPECT_EQ(run({"gen", "hilbert", "--output", s}).code, exit_code(ErrorCode::InvalidArgument));
}

TEST_F(CliTest, UsageErrorsExitOne) {
  EXPECT_EQ(run({}).code, 1);
  EXPECT_EQ(run({"analyze"}).code, 1);
  EXPECT_EQ(run({"growth", "--input", "x.mtx", "--base-norm", "two"}).code, 1);
  EXPECT_EQ(run({"--help"}).code, 0);
}

TEST_F(CliTest, ReportsAreDeterministic) {
  const std::string t = write("t.mtx", two_rotations());
  const std::vector<std::vector<std::string>> commands = {
      {"analyze", "--input", t, "--json"},
      {"split-arc", "--input", t, "--arc", "0.9", "1.2", "--output-dir", out_dir("s"), "--json"},
      {"growth", "--input", t, "--json"},
  };
  for (const auto& cmd : commands) {
    const CliRun a = run(cmd), b = run(cmd);
    EXPECT_EQ(a.code, b.code);
    EXPECT_EQ(cli::canonical_dump(a.report()), cli::canonical_dump(b.report()));
    EXPECT_TRUE(a.report().contains(cli::kTimestampKey));
  }
}

TEST_F(CliTest, ChecksumTracksContent) {
  const std::string a = write("a.mtx", testgen::rotation_block(0.1));
  const std::string b = write("b.mtx", testgen::rotation_block(0.2));
  EXPECT_EQ(cli::file_checksum(a), cli::file_checksum(a));
  EXPECT_NE(cli::file_checksum(a), cli::file_checksum(b));
  EXPECT_EQ(cli::file_checksum(a).rfind("fnv1a64:", 0), 0u);
}
