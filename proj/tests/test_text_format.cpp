#include <gtest/gtest.h>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "helpers.hpp"

namespace ssg {
namespace {

using test::free_quotient;

int parse_error_line(const std::string& text) {
  try {
    parse_presentation(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

int tower_error_line(const std::string& text) {
  try {
    parse_tower(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return 0;
}

class TempDir {
 public:
  TempDir() {
    path_ = std::filesystem::temp_directory_path() /
            ("ssg-test-" + std::to_string(std::random_device{}()) + "-" + std::to_string(test::rng()()));
    std::filesystem::create_directories(path_);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
  }
  const std::filesystem::path& path() const { return path_; }

 private:
  std::filesystem::path path_;
};

TEST(TextFormat, RoundTripsFreeQuotientsAndDescendants) {
  std::vector<PcPresentation> groups{free_quotient(3, 2, 4), free_quotient(3, 3, 2), free_quotient(5, 2, 3),
                                     PcPresentation()};
  for (const auto& Q : immediate_descendants(test::elementary(3, 2), test::towers())) groups.push_back(Q);
  for (const auto& G : groups) {
    const std::string text = render(G);
    const PcPresentation back = parse_presentation(text);
    EXPECT_EQ(back, G);
    EXPECT_EQ(render(back), text);
  }
}

TEST(TextFormat, ParsesCommentsBlankLinesAndOmittedTrivialRelations) {
  const PcPresentation H = parse_presentation(
      "# Heisenberg group of order 27\n"
      "p 3\n"
      "\n"
      "n 3\n"
      "w 1 1 2\n"
      "  # indented comment\n"
      "comm 2 1 = 3^1\n"
      "def 3 comm 2 1\n");
  EXPECT_EQ(H.ngens(), 3);
  EXPECT_EQ(H.commutator(H.generator(1), H.generator(0)), H.generator(2));
  EXPECT_TRUE(H.power(H.generator(0), 3).is_identity());
}

TEST(TextFormat, ErrorsCarryLineNumbers) {
  const std::string head = "p 3\nn 2\nw 1 2\n";
  EXPECT_EQ(parse_error_line("p 4\n"), 1);
  EXPECT_EQ(parse_error_line("p 3\nn 2\nw 1\n"), 3);
  EXPECT_EQ(parse_error_line("n 2\n"), 1);
  EXPECT_EQ(parse_error_line(head + "pow 1 = 2^3\n"), 4);
  EXPECT_EQ(parse_error_line(head + "pow 1 = 3^1\n"), 4);
  EXPECT_EQ(parse_error_line(head + "pow 1 = 2^1\npow 1 = 2^1\n"), 5);
  EXPECT_EQ(parse_error_line(head + "comm 1 2 = 2^1\n"), 4);
  EXPECT_EQ(parse_error_line(head + "# fine\n\nfrob 1\n"), 6);
  EXPECT_EQ(parse_error_line(head + "def 2 pow 1\ndef 2 pow 1\n"), 5);
  EXPECT_EQ(parse_error_line(head + "pow 1 = 2^1 2^1\n"), 4);
  EXPECT_EQ(parse_error_line("p 3\np 3\n"), 2);
  EXPECT_EQ(parse_error_line(""), 1);
  EXPECT_THROW(parse_presentation(head + "pow 1 = x\n"), InputError);
}

TEST(TextFormat, TowerRoundTripAndBlockLineNumbers) {
  const FreeQuotientTower t = test::towers().tower(3, 2, 3);
  const std::string text = render_tower(t.levels());
  const auto back = parse_tower(text);
  ASSERT_EQ(back.size(), 3u);
  for (int k = 1; k <= 3; ++k) EXPECT_EQ(back[static_cast<std::size_t>(k - 1)], t.level(k));

  // an error in the second block is reported against the whole file
  const std::string first = render(t.level(1));
  const int first_lines = static_cast<int>(std::count(first.begin(), first.end(), '\n'));
  const std::string bad = first + "---\np 3\nn 1\nw 7 7\n";
  EXPECT_EQ(tower_error_line(bad), first_lines + 4);
}

TEST(TowerCache, MissThenHitThenRejectCorruptFile) {
  TempDir dir;
  {
    DiskTowerSource src(dir.path());
    const FreeQuotientTower t = src.tower(3, 2, 3);
    EXPECT_FALSE(src.last_hit());
    EXPECT_FALSE(src.last_rejected());
    EXPECT_TRUE(std::filesystem::exists(src.entry(3, 2, 3)));
    EXPECT_EQ(t.level(3), free_quotient(3, 2, 3));
  }
  {
    DiskTowerSource src(dir.path());
    const FreeQuotientTower t = src.tower(3, 2, 3);
    EXPECT_TRUE(src.last_hit());
    EXPECT_EQ(t.level(3), free_quotient(3, 2, 3));
  }
  for (const std::string& junk : {std::string("garbage\n"), render(free_quotient(3, 2, 2))}) {
    DiskTowerSource src(dir.path());
    std::ofstream(src.entry(3, 2, 3), std::ios::trunc) << junk;
    const FreeQuotientTower t = src.tower(3, 2, 3);
    EXPECT_FALSE(src.last_hit());
    EXPECT_TRUE(src.last_rejected());
    EXPECT_EQ(t.level(3), free_quotient(3, 2, 3));
    // the rebuilt tower replaced the bad file
    DiskTowerSource again(dir.path());
    again.tower(3, 2, 3);
    EXPECT_TRUE(again.last_hit());
  }
}

TEST(TowerCache, TamperedLevelIsRejected) {
  TempDir dir;
  DiskTowerSource src(dir.path());
  src.tower(3, 2, 2);
  std::vector<PcPresentation> levels = test::towers().tower(3, 2, 2).levels();
  PcRelations r = PcRelations::trivial(3, levels[1].weights());
  levels[1] = PcPresentation(r);
  std::ofstream(src.entry(3, 2, 2), std::ios::trunc) << render_tower(levels);
  DiskTowerSource fresh(dir.path());
  fresh.tower(3, 2, 2);
  EXPECT_TRUE(fresh.last_rejected());
}

TEST(TowerCache, EnvironmentSelectsTheDirectory) {
  const char* old = std::getenv(kCacheEnvVar);
  const std::string saved = old ? old : "";
  setenv(kCacheEnvVar, "/tmp/ssg-env-check", 1);
  EXPECT_EQ(default_cache_dir(), std::filesystem::path("/tmp/ssg-env-check"));
  EXPECT_EQ(DiskTowerSource().directory(), std::filesystem::path("/tmp/ssg-env-check"));
  if (old)
    setenv(kCacheEnvVar, saved.c_str(), 1);
  else
    unsetenv(kCacheEnvVar);
}

}  // namespace
}  // namespace ssg
