#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "bsgate/cli.hpp"

using namespace bsgate;

namespace {

std::string fixture(const std::string& name) { return std::string(BSGATE_FIXTURES) + "/" + name; }

struct Run {
  int rc;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream o, e;
  int rc = run_cli(args, o, e);
  return {rc, o.str(), e.str()};
}

std::string scratch(const std::string& name, const std::string& text) {
  auto p = std::filesystem::temp_directory_path() / ("bsgate_cli_" + name);
  std::ofstream(p) << text;
  return p.string();
}

bool has_line(const std::string& out, const std::string& line) {
  std::istringstream in(out);
  for (std::string l; std::getline(in, l);)
    if (l == line) return true;
  return false;
}

// Everything above the duration trailer.
std::string stable(const std::string& out) { return out.substr(0, out.rfind("--\nduration_ms:")); }

}  // namespace

TEST(Cli, ValidateTorus) {
  auto r = run({"validate", fixture("torus.bsf")});
  EXPECT_EQ(r.rc, 0);
  EXPECT_TRUE(has_line(r.out, "violations: 0"));
  EXPECT_TRUE(has_line(r.out, "subcommand: validate"));
}

TEST(Cli, ValidateReportsViolations) {
  auto f = scratch("bad.bsf",
                   "surface bad\nsector D genus 0 bwords 1\nsector T genus 1 bwords 1\n"
                   "bword D 0 : seg:c:one v:smooth\nbword T 0 : seg:c:up v:smooth\n"
                   "segment c circle one D up T lo T\n");
  auto r = run({"validate", f});
  EXPECT_EQ(r.rc, 2);
  EXPECT_TRUE(has_line(r.out, "violations: 1"));
}

TEST(Cli, DetectCriterionOnDoc) {
  auto r = run({"detect", "--kind", "criterion", "--oracle-bound", "4", fixture("doc.bsf")});
  EXPECT_EQ(r.rc, 0);
  EXPECT_TRUE(has_line(r.out, "criterion.passes: false"));
  EXPECT_TRUE(has_line(r.out, "criterion.isc.verdict: feasible"));
  EXPECT_TRUE(has_line(r.out, "criterion.neg-tisc.verdict: infeasible"));
  EXPECT_TRUE(has_line(r.out, "w D 1"));
}

TEST(Cli, DetectIsDeterministic) {
  auto a = run({"detect", "--kind", "criterion", fixture("split.bsf")});
  auto b = run({"detect", "--kind", "criterion", fixture("split.bsf")});
  EXPECT_EQ(stable(a.out), stable(b.out));
  EXPECT_NE(a.out.find("duration_ms: "), std::string::npos);
}

TEST(Cli, MissingFileIsUsageError) {
  auto r = run({"validate", "/nonexistent/file.bsf"});
  EXPECT_EQ(r.rc, 1);
  EXPECT_EQ(r.err, "error: io: cannot read /nonexistent/file.bsf\n");
}

TEST(Cli, SyntaxErrorExitsOne) {
  auto r = run({"validate", scratch("syntax.bsf", "surface x\nsector\n")});
  EXPECT_EQ(r.rc, 1);
  EXPECT_EQ(r.err.rfind("error: ", 0), 0u);
  EXPECT_EQ(std::count(r.err.begin(), r.err.end(), '\n'), 1);
}

TEST(Cli, BadArgumentsExitOne) {
  EXPECT_EQ(run({}).rc, 1);
  EXPECT_EQ(run({"frobnicate"}).rc, 1);
  EXPECT_EQ(run({"detect", "--kind", "nope", fixture("doc.bsf")}).rc, 1);
  EXPECT_EQ(run({"chart", "check-box"}).rc, 1);
  EXPECT_EQ(run({"chart", "check-box", "--field", "box-flat", "--grid", "3,x,3"}).rc, 1);
}

TEST(Cli, AssembleWithWeightsFile) {
  auto w = scratch("w.txt", "w D 2\nw T 0\n");
  auto r = run({"assemble", "--kind", "isc", fixture("doc.bsf"), w});
  EXPECT_EQ(r.rc, 0);
  EXPECT_TRUE(has_line(r.out, "components: 2"));
  EXPECT_TRUE(has_line(r.out, "roundtrip: ok"));
  EXPECT_TRUE(has_line(r.out, "component.0.classification: isc"));
}

TEST(Cli, AssembleRejectsNonSatisfyingWeights) {
  auto w = scratch("w_bad.txt", "w D 1\nw T 1\n");
  auto r = run({"assemble", "--kind", "isc", fixture("doc.bsf"), w});
  EXPECT_EQ(r.rc, 2);
}

TEST(Cli, SplitOutputParses) {
  auto r = run({"split", "--sector", "Z", "--entry", "0:0:one", "--exit", "1:0:one", "--choice", "safe",
                fixture("clean.bsf")});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "over.passes: true"));
  auto start = r.out.find("complex:\n");
  ASSERT_NE(start, std::string::npos);
  auto body = stable(r.out).substr(start + 9);
  auto c = parse_complex(body);
  EXPECT_TRUE(validate(c).empty());
}

TEST(Cli, SplitPreconditionExitsTwo) {
  auto r = run({"split", "--sector", "D", "--entry", "0:0:one", "--exit", "0:0:one", "--choice", "safe",
                fixture("doc.bsf")});
  EXPECT_EQ(r.rc, 2);
}

TEST(Cli, ScheduleRunsPlan) {
  auto plan = scratch("plan.txt", "# three steps\nZ 0:0:one 1:0:one\nZ 0:1:one 0:0:one\nA 2:0:one 1:0:one\n");
  auto r = run({"schedule", fixture("clean.bsf"), plan});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "steps: 3"));
}

TEST(Cli, ChartHolonomyDisplacesDown) {
  auto r = run({"chart", "holonomy", "--field", "annulus-quadratic", "--grid", "16,33", "--z0", "0"});
  ASSERT_EQ(r.rc, 0) << r.err;
  auto at = r.out.find("displacement=-");
  EXPECT_NE(at, std::string::npos);
}

TEST(Cli, ChartPurifyWritesGrid) {
  auto path = (std::filesystem::temp_directory_path() / "bsgate_cli_purified.grid").string();
  auto r = run({"chart", "purify-box", "--field", "box-cubic", "--grid", "9,17,9", "--y0", "0.5", "--y1", "0.75",
                "--delta", "0.2", "--out", path});
  ASSERT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "chart.is_confoliation: true"));
  auto g = load_grid(path);
  EXPECT_EQ(g.kind, ChartKind::Box);
  auto again = run({"chart", "check-box", path});
  EXPECT_EQ(again.rc, 0);
  EXPECT_TRUE(has_line(again.out, "chart.is_confoliation: true"));
}

TEST(Cli, ChartRejectsCorruptGrid) {
  auto f = scratch("corrupt.grid", "kind box\nbounds 0 1\n");
  EXPECT_EQ(run({"chart", "check-box", f}).rc, 1);
}

TEST(Cli, CheckCylinderOnBox) {
  auto r = run({"chart", "check-cyl", "--field", "box-flat", "--grid", "5,5,5"});
  EXPECT_EQ(r.rc, 2);
}

TEST(Cli, Selftest) {
  auto r = run({"selftest"});
  EXPECT_EQ(r.rc, 0) << r.err;
  EXPECT_TRUE(has_line(r.out, "result: pass"));
}

TEST(Cli, ExitCodeTable) {
  EXPECT_EQ(exit_code_for("usage"), 1);
  EXPECT_EQ(exit_code_for("dangling"), 1);
  EXPECT_EQ(exit_code_for("BadMove"), 2);
  EXPECT_EQ(exit_code_for("MalformedGrid"), 2);
  EXPECT_EQ(exit_code_for("InvariantViolation"), 3);
  EXPECT_EQ(exit_code_for("Overflow"), 3);
}
