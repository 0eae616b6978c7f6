#include <gtest/gtest.h>

#include <fstream>
#include <sstream>

#include "kss/cli.hpp"
#include "malformed.hpp"

using namespace kss;

namespace {

struct Invocation {
  int code;
  std::string out, err;
};

Invocation run(std::vector<std::string> args) {
  args.insert(args.begin(), "kss");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli_dispatch(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

void write(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  f << text;
}

}  // namespace

TEST(Cli, VerifyValid) {
  write("cli_9_3.kss", good_9_3);
  const Invocation r = run({"verify", "cli_9_3.kss"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "ok KSS(9,3) s=4\n");
}

TEST(Cli, VerifyRejects) {
  write("cli_bad.kss", "KSS v=9 m=3 s=2\n0,3,6 1,4,7 2,5,8\n0,1,5 2,6,7 2,4,8\n");
  Invocation r = run({"verify", "cli_bad.kss"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("line 3"), std::string::npos) << r.err;

  write("cli_short.kss", "KSS v=9 m=3 s=3\n0,3,6 1,4,7 2,5,8\n0,1,5 2,6,7 3,4,8\n0,2,4 1,6,8 3,5,7\n");
  r = run({"verify", "cli_short.kss"});
  EXPECT_EQ(r.code, 1);
  EXPECT_NE(r.err.find("not a KSS"), std::string::npos);

  EXPECT_EQ(run({"verify", "missing.kss"}).code, 1);
}

TEST(Cli, ConstructBacktrack) {
  Invocation r = run({"construct", "--v", "9", "--m", "2", "--method", "backtrack"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("exhausted: nonexistent over STS(9)"), std::string::npos) << r.err;

  r = run({"construct", "--v", "9", "--m", "3", "--method", "backtrack", "--out", "cli_c93.kss"});
  EXPECT_EQ(r.code, 0) << r.err;
  EXPECT_EQ(run({"verify", "cli_c93.kss"}).code, 0);
}

TEST(Cli, ConstructMethods) {
  for (const char* method : {"auto", "greedy", "local", "order", "theorem", "hill"}) {
    const Invocation r = run({"construct", "--v", "15", "--m", "3", "--method", method, "--seed", "2"});
    ASSERT_EQ(r.code, 0) << method << ": " << r.err;
    EXPECT_TRUE(is_kss(read_design(r.out))) << method;
  }
  EXPECT_EQ(run({"construct", "--v", "15", "--m", "3", "--method", "orbit"}).code, 2);
  const Invocation r = run({"construct", "--v", "13", "--m", "4"});
  ASSERT_EQ(r.code, 0) << r.err;
  EXPECT_TRUE(is_kss(read_design(r.out)));
}

TEST(Cli, ConstructTheoremNeedsCertificate) {
  EXPECT_EQ(run({"construct", "--v", "13", "--m", "4", "--method", "theorem"}).code, 1);
  EXPECT_EQ(run({"construct", "--v", "9", "--m", "2", "--method", "theorem"}).code, 1);
}

TEST(Cli, ConstructInconclusive) {
  const Invocation r = run({"construct", "--v", "15", "--m", "5", "--method", "local", "--time-limit", "0.2"});
  EXPECT_EQ(r.code, 3);
  EXPECT_NE(r.err.find("inconclusive"), std::string::npos);
}

TEST(Cli, Classify) {
  Invocation r = run({"classify", "--v", "57", "--m", "14"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "57 14 D known\n57 14 D source=15\n");
  r = run({"classify", "--v", "9", "--m", "2"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "9 2 ! impossible\n9 2 ! search=backtrack nodes=5\n");
  r = run({"classify", "--v", "13", "--m", "4"});
  EXPECT_EQ(r.code, 1);
  EXPECT_EQ(r.out, "13 4 ? unknown\n");
  EXPECT_EQ(run({"classify", "--v", "2999", "--m", "2"}).code, 2);
}

TEST(Cli, ClassifyWithRegistry) {
  ASSERT_EQ(run({"construct", "--v", "13", "--m", "4", "--method", "orbit", "--out", "cli_13_4.kss"}).code, 0);
  write("cli_registry.txt", "# witnesses\n13 4 W file=cli_13_4.kss\n");
  const Invocation r = run({"classify", "--v", "13", "--m", "4", "--registry", "cli_registry.txt"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out.substr(0, 14), "13 4 W known\n1");
  const Invocation cat = run({"catalog", "--max-v", "13", "--registry", "cli_registry.txt"});
  EXPECT_EQ(cat.out, "7 1 E\n9 2 !\n9 3 G\n13 2 E\n13 3 ?\n13 4 W\n");
  write("cli_bad_registry.txt", "13 4 B\n");
  EXPECT_EQ(run({"classify", "--v", "13", "--m", "4", "--registry", "cli_bad_registry.txt"}).code, 2);
}

TEST(Cli, Catalog) {
  const Invocation a = run({"catalog", "--max-v", "99"});
  const Invocation b = run({"catalog", "--max-v", "99", "--threads", "3"});
  EXPECT_EQ(a.code, 0);
  EXPECT_EQ(a.out, b.out);
  EXPECT_EQ(a.out.substr(0, 18), "7 1 E\n9 2 !\n9 3 G\n");
  EXPECT_NE(a.out.find("\n57 14 D\n"), std::string::npos);

  EXPECT_EQ(run({"catalog", "--max-v", "99", "--format", "csv", "--out", "cli_cat.csv"}).code, 0);
  std::ifstream f("cli_cat.csv");
  std::string header;
  std::getline(f, header);
  EXPECT_EQ(header, "v,m,status,letter,omitted,certificate");

  EXPECT_EQ(run({"catalog", "--max-v", "33", "--format", "json"}).out.front(), '{');
  EXPECT_EQ(run({"catalog", "--max-v", "33", "--format", "xml"}).code, 2);
  EXPECT_EQ(run({"catalog", "--max-v", "33", "--mode", "fuzzy"}).code, 2);
  EXPECT_EQ(run({"catalog", "--max-v", "5"}).code, 2);
  EXPECT_NE(run({"catalog", "--max-v", "99", "--mode", "loose"}).out, a.out);
}

TEST(Cli, Bound) {
  Invocation r = run({"bound", "--u", "88", "--v", "70489"});
  EXPECT_EQ(r.code, 0);
  EXPECT_EQ(r.out, "M=17085\napplicable=false\n");
  r = run({"bound", "--u", "92", "--v", "77005"});
  EXPECT_EQ(r.out, "M=" + std::to_string(chw_M(92, 77005)) + "\napplicable=true\n");
  EXPECT_EQ(run({"bound", "--u", "8", "--v", "100"}).out, "M=2\napplicable=false\n");
  EXPECT_EQ(run({"bound", "--u", "0", "--v", "100"}).code, 2);
}

TEST(Cli, UsageErrors) {
  EXPECT_EQ(run({}).code, 2);
  EXPECT_EQ(run({"frobnicate"}).code, 2);
  EXPECT_EQ(run({"construct", "--v", "9"}).code, 2);
  EXPECT_EQ(run({"construct", "--v", "10", "--m", "2"}).code, 2);
  EXPECT_EQ(run({"construct", "--v", "9", "--m", "4"}).code, 2);
  EXPECT_EQ(run({"construct", "--v", "9", "--m", "3", "--method", "magic"}).code, 2);
  EXPECT_EQ(run({"construct", "--v", "9", "--m", "3", "--node-limit", "0"}).code, 2);
  EXPECT_EQ(run({"bound", "--u", "x", "--v", "1"}).code, 2);
  EXPECT_EQ(run({"--help"}).code, 0);
}
