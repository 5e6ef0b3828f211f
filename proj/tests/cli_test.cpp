#include <sys/wait.h>
#include <unistd.h>

#include <cstdio>
#include <filesystem>
#include <fstream>

#include <gtest/gtest.h>

#include "ivfo/interpret.hpp"
#include "ivfo/io.hpp"
#include "ivfo/logic/parser.hpp"

namespace ivfo {
namespace {

namespace fs = std::filesystem;

struct Outcome {
  int code;
  std::string out;
};

class Cli : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("ivfo_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string file(const std::string& name, const std::string& text = {}) {
    auto p = (dir_ / name).string();
    if (!text.empty()) std::ofstream(p) << text;
    return p;
  }
  static std::string read(const std::string& path) {
    std::ifstream in(path);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
  }
  // stdout only; stderr goes to a file
  Outcome run(const std::string& args) {
    std::string cmd = std::string(IVFO_CLI) + " " + args + " 2>" + file("stderr.txt");
    FILE* p = popen(cmd.c_str(), "r");
    std::string out;
    char buf[4096];
    while (std::size_t k = std::fread(buf, 1, sizeof buf, p)) out.append(buf, k);
    int status = pclose(p);
    return {WEXITSTATUS(status), out};
  }

  fs::path dir_;
};

const char* kClique =
    "lengths u=1\n"
    "vertex a len=u left=0\nvertex b len=u left=1/4\nvertex c len=u left=1/2\nvertex d len=u left=3/4\n";
const char* kTwoCliques =
    "lengths u=1\n"
    "vertex a len=u left=0\nvertex b len=u left=1/4\nvertex c len=u left=5\nvertex d len=u left=21/4\n";

TEST_F(Cli, GadgetFoOnTriangle) {
  auto g = file("k3.txt", "vertices a b c\nedge a b\nedge b c\nedge a c\n");
  auto prefix = file("k3");
  auto r = run("gadget fo " + g + " --out " + prefix);
  ASSERT_EQ(r.code, 0);
  auto rep = parse_rep(read(prefix + ".rep"));
  EXPECT_EQ(rep.size(), 17U);
  EXPECT_EQ(format_rep(rep), read(prefix + ".rep"));
  auto mu = logic::parse_formula(read(prefix + ".vertex"));
  auto nu = logic::parse_formula(read(prefix + ".edge"));
  Interpretation in{mu, nu, {}};
  EXPECT_EQ(apply_interpretation(build_graph(rep), in).size(), 3U);
  EXPECT_NE(read(prefix + ".map").find("canon a -> t_1_1"), std::string::npos);
}

TEST_F(Cli, GadgetMsoWritesDerivedRelation) {
  auto g = file("c4.txt", "vertices a b c d\nedge a b\nedge b c\nedge c d\nedge a d\n");
  auto prefix = file("c4");
  ASSERT_EQ(run("gadget mso " + g + " --out " + prefix).code, 0);
  auto derived = read(prefix + ".derived");
  EXPECT_EQ(derived.rfind("relation mates_star x y closure=transitive_symmetric\n", 0), 0U);
  EXPECT_NO_THROW(logic::parse_formula(derived.substr(derived.find('\n') + 1)));
  EXPECT_EQ(run("gadget mso " + file("k3.txt", "vertices a b c\n")).code, 1);
}

TEST_F(Cli, EfEquivalence) {
  auto k1 = file("k1.txt", "vertices a\n"), k2 = file("k2.txt", "vertices a b\nedge a b\n"),
       k3 = file("k3.txt", "vertices a b c\nedge a b\nedge b c\nedge a c\n");
  EXPECT_EQ(run("ef equiv " + k2 + " " + k3 + " --d 2").out, "equivalent\n");
  EXPECT_EQ(run("ef equiv " + k1 + " " + k2 + " --d 2").out, "not equivalent\n");
  EXPECT_EQ(run("ef tree " + k2 + " --d 1").out.rfind("depth 1", 0), 0U);
}

TEST_F(Cli, CliqueWidthRoundTrip) {
  auto rep = file("r.txt", "lengths h=1/2 u=1\nspan 3\nvertex a len=u left=0\nvertex b len=h left=3/4\n"
                           "vertex c len=u left=1\nvertex d len=h left=2\nvertex e len=u left=3/2\n");
  auto expr = file("e.txt");
  ASSERT_EQ(run("cw build " + rep + " --out " + expr).code, 0);
  auto r = run("cw eval " + expr);
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_graph(r.out).edge_set(), build_graph(parse_rep(read(rep))).edge_set());
}

TEST_F(Cli, ModelCheckAgreesWithoutKernel) {
  auto dom = file("dom.txt", "exists x. forall y. (x = y | edge(x, y))\n");
  auto one = file("one.txt", kClique), two = file("two.txt", kTwoCliques);
  for (const auto& [rep, want] : {std::pair{one, "true"}, std::pair{two, "false"}}) {
    auto a = run("modelcheck " + rep + " " + dom), b = run("modelcheck " + rep + " " + dom + " --no-kernel");
    EXPECT_EQ(a.out.substr(0, a.out.find('\n')), want);
    EXPECT_EQ(b.out.substr(0, b.out.find('\n')), want);
  }
  auto mso = file("mso.txt", "existsS X. forall y. y in X\n");
  EXPECT_EQ(run("modelcheck " + one + " " + mso).code, 1);
  EXPECT_NE(read(file("stderr.txt")).find("FO sentences"), std::string::npos);
}

TEST_F(Cli, KernelizeIsDeterministic) {
  std::string stacked = "lengths u=1\n";
  for (int i = 0; i < 40; ++i) stacked += "vertex v" + std::to_string(i) + " len=u left=" + std::to_string(i) + "/100\n";
  auto rep = file("r.txt", stacked);
  auto a = run("kernelize " + rep + " --d 1 --seed 7"), b = run("kernelize " + rep + " --d 1 --seed 7");
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_LT(parse_rep(a.out).size(), 40U);
  auto out = file("k.txt");
  auto c = run("kernelize " + rep + " --d 1 --out " + out);
  EXPECT_NE(c.out.find("removals"), std::string::npos);
  EXPECT_NE(c.out.find("config tol="), std::string::npos);
  EXPECT_EQ(read(out), a.out);
}

TEST_F(Cli, ErrorsExitOne) {
  auto bad = file("bad.txt", "lengths u=1\nvertex a len=u\n");
  EXPECT_EQ(run("validate " + bad).code, 1);
  EXPECT_NE(read(file("stderr.txt")).find("bad.txt:2:"), std::string::npos);
  EXPECT_EQ(run("validate " + file("missing.txt")).code, 1);
  EXPECT_EQ(run("frobnicate").code, 1);
  EXPECT_EQ(run("validate " + file("ok.txt", kClique)).out, "valid 4 vertices 6 edges\n");
}

TEST_F(Cli, HardFamily) {
  auto r = run("hardfamily --n 4");
  ASSERT_EQ(r.code, 0);
  EXPECT_EQ(parse_rep(r.out).size(), 16U);
}

}  // namespace
}  // namespace ivfo
